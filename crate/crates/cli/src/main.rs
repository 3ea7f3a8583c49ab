//! `modindex`: Modularity Index analysis of Java source trees.
//!
//! Exit codes: 0 success, 1 usage error, 2 analysis finished but reported
//! errors, 3 internal failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use modindex::report::{
    explain_class, render_evolution_csv, render_offenders_csv, render_report_csv, to_json,
    write_charts,
};
use modindex::{
    analyze_series, analyze_system, extract_project, load_manifest, worst_offenders, Diagnostic,
    Error, EvolutionDocument, ExtractionConfig, ReportDocument,
};

const THREADS_VAR: &str = "MODINDEX_THREADS";

#[derive(Parser)]
#[command(name = "modindex", version, about = "Modularity Index for Java source trees")]
struct Cli {
    /// key = value file overriding extraction settings
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one source tree
    Analyze {
        root: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of standard output
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Append the package dependency matrix to CSV output
        #[arg(long)]
        matrix: bool,
        /// Include the N lowest-quality classes
        #[arg(long, value_name = "N", allow_negative_numbers = true)]
        worst: Option<i64>,
    },
    /// Analyze every version listed in a manifest
    Evolve {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Directory for one SVG chart per tracked series
        #[arg(long, value_name = "DIR")]
        charts: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Show how one class's quality is derived
    Explain {
        root: PathBuf,
        #[arg(long = "class", value_name = "QUALIFIED_NAME")]
        class: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Outcome of a command that ran to completion.
enum Status {
    Clean,
    Errors,
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::Usage(_)
        | Error::NothingToAnalyze
        | Error::Manifest { .. }
        | Error::AllVersionsFailed(_)
        | Error::Io { .. } => 1,
        Error::EmptyPackage
        | Error::NoPackages
        | Error::InvalidModel(_)
        | Error::TooFewRows
        | Error::Internal(_) => 3,
    }
}

fn load_config(path: Option<&Path>) -> modindex::Result<ExtractionConfig> {
    let Some(path) = path else {
        return Ok(ExtractionConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config `{}`: {e}", path.display())))?;
    ExtractionConfig::from_key_values(&text)
        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn thread_count() -> modindex::Result<usize> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{THREADS_VAR} must be a non-negative integer, got `{v}`"))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> modindex::Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                })
        }
    }
}

fn report_diagnostics(diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("{d}");
    }
}

fn status_of(diagnostics: &[Diagnostic]) -> Status {
    if modindex::has_errors(diagnostics) {
        Status::Errors
    } else {
        Status::Clean
    }
}

fn analyze(
    root: &Path,
    config: &ExtractionConfig,
    format: Format,
    out: Option<&Path>,
    matrix: bool,
    worst: Option<i64>,
) -> modindex::Result<Status> {
    let project = extract_project(root, config)?;
    let analysis = analyze_system(&project, config)?;
    let offenders = worst.map(|n| worst_offenders(&analysis, n)).transpose()?;
    report_diagnostics(&analysis.diagnostics);
    let status = status_of(&analysis.diagnostics);
    let text = match format {
        Format::Json => {
            let mut doc = ReportDocument::from(analysis);
            doc.worst_offenders = offenders;
            to_json(&doc)?
        }
        Format::Csv => {
            let mut text = render_report_csv(&analysis, matrix);
            if let Some(offenders) = &offenders {
                text.push('\n');
                text.push_str(&render_offenders_csv(offenders));
            }
            text
        }
    };
    emit(&text, out)?;
    Ok(status)
}

fn evolve(
    manifest: &Path,
    config: &ExtractionConfig,
    format: Format,
    charts: Option<&Path>,
    out: Option<&Path>,
) -> modindex::Result<Status> {
    let series = load_manifest(manifest)?;
    let table = analyze_series(&series, config)?;
    for failure in &table.failures {
        eprintln!("error: version `{}` failed: {}", failure.label, failure.message);
    }
    report_diagnostics(&table.diagnostics);
    let status = if table.has_errors() {
        Status::Errors
    } else {
        Status::Clean
    };
    if let Some(dir) = charts {
        write_charts(dir, &table.rows)?;
    }
    let text = match format {
        Format::Json => to_json(&EvolutionDocument::from(table))?,
        Format::Csv => render_evolution_csv(&table.rows),
    };
    emit(&text, out)?;
    Ok(status)
}

fn explain(root: &Path, class: &str, config: &ExtractionConfig) -> modindex::Result<Status> {
    let project = extract_project(root, config)?;
    let analysis = analyze_system(&project, config)?;
    let text = explain_class(&project, &analysis, class, config)?;
    report_diagnostics(&analysis.diagnostics);
    emit(&text, None)?;
    Ok(status_of(&analysis.diagnostics))
}

fn run(cli: Cli) -> modindex::Result<Status> {
    let config = load_config(cli.config.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Analyze {
            root,
            format,
            out,
            matrix,
            worst,
        } => analyze(root, &config, *format, out.as_deref(), *matrix, *worst),
        Command::Evolve {
            manifest,
            format,
            charts,
            out,
        } => evolve(manifest, &config, *format, charts.as_deref(), out.as_deref()),
        Command::Explain { root, class } => explain(root, class, &config),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Errors) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::InvalidModel(problems) = &e {
                report_diagnostics(problems);
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}
