//! Serialized forms of analysis results: JSON documents, CSV tables, SVG
//! charts and plain-text class explanations.

mod chart;
mod csv;
mod json;
mod number;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{PackageResult, SystemAnalysis, SystemMetrics};
use crate::class_metrics::lcom4_components;
use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::evolution::{EvolutionRow, EvolutionTable, Growth, VersionFailure};
use crate::frontend::ExtractionConfig;
use crate::model::{DependencyMatrix, Project};

pub use self::chart::{render_chart, write_charts, CHART_SERIES};
pub use self::csv::{
    render_evolution_csv, render_offenders_csv, render_report_csv, CLASS_HEADER, EVOLUTION_HEADER,
};
pub use self::json::to_json;
pub use self::number::format_number;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub project: String,
    pub version_label: String,
    pub system: SystemMetrics,
    pub packages: Vec<PackageResult>,
    pub matrix: DependencyMatrix,
    pub diagnostics: Vec<Diagnostic>,
    /// Present when the lowest-quality classes were requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_offenders: Option<Vec<Offender>>,
}

impl From<SystemAnalysis> for ReportDocument {
    fn from(a: SystemAnalysis) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            project: a.project,
            version_label: a.version_label,
            system: a.system,
            packages: a.packages,
            matrix: a.matrix,
            diagnostics: a.diagnostics,
            worst_offenders: None,
        }
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid report JSON: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionDocument {
    pub schema_version: String,
    pub project: String,
    pub rows: Vec<EvolutionRow>,
    /// Absent when fewer than two versions were analyzed.
    pub growth: Option<Vec<Growth>>,
    pub failures: Vec<VersionFailure>,
    pub diagnostics: Vec<Diagnostic>,
}

impl From<EvolutionTable> for EvolutionDocument {
    fn from(t: EvolutionTable) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            project: t.project_name,
            growth: crate::evolution::growth_summary(&t.rows).ok(),
            rows: t.rows,
            failures: t.failures,
            diagnostics: t.diagnostics,
        }
    }
}

/// The quality term with the lowest score, i.e. the one to improve first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lever {
    LocQ,
    FQ,
    HQ,
}

impl Lever {
    pub fn as_str(self) -> &'static str {
        match self {
            Lever::LocQ => "loc_q",
            Lever::FQ => "f_q",
            Lever::HQ => "h_q",
        }
    }

    fn hint(self) -> &'static str {
        match self {
            Lever::LocQ => "size: move code out to bring NCLOC nearer 50",
            Lever::FQ => "function count: split or merge functions toward 5",
            Lever::HQ => "cohesion: split the class along its disconnected function groups",
        }
    }

    fn of(loc_q: f64, f_q: f64, h_q: f64) -> Self {
        // ties go to the earlier term
        let mut best = (Lever::LocQ, loc_q);
        for candidate in [(Lever::FQ, f_q), (Lever::HQ, h_q)] {
            if candidate.1 < best.1 {
                best = candidate;
            }
        }
        best.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub qualified_name: String,
    pub package: String,
    pub ncloc: u32,
    pub f: u32,
    pub lcom4: u32,
    pub loc_q: f64,
    pub f_q: f64,
    pub h_q: f64,
    pub c_q: f64,
    pub lever: Lever,
}

/// The `n` classes with the lowest class quality, ties broken by name.
pub fn worst_offenders(analysis: &SystemAnalysis, n: i64) -> Result<Vec<Offender>> {
    if n <= 0 {
        return Err(Error::Usage(format!("--worst must be positive, got {n}")));
    }
    let mut all: Vec<Offender> = analysis
        .packages
        .iter()
        .flat_map(|p| {
            p.classes.iter().map(move |c| Offender {
                qualified_name: c.qualified_name.clone(),
                package: p.name.clone(),
                ncloc: c.ncloc,
                f: c.f,
                lcom4: c.lcom4,
                loc_q: c.loc_q,
                f_q: c.f_q,
                h_q: c.h_q,
                c_q: c.c_q,
                lever: Lever::of(c.loc_q, c.f_q, c.h_q),
            })
        })
        .collect();
    all.sort_by(|a, b| {
        a.c_q
            .total_cmp(&b.c_q)
            .then_with(|| a.qualified_name.cmp(&b.qualified_name))
    });
    all.truncate(usize::try_from(n).unwrap_or(usize::MAX));
    Ok(all)
}

/// Human-readable breakdown of one class: measures, qualities, the
/// weakest term and the LCOM4 function groups.
pub fn explain_class(
    project: &Project,
    analysis: &SystemAnalysis,
    qualified_name: &str,
    config: &ExtractionConfig,
) -> Result<String> {
    let (Some((package, result)), Some((_, node))) = (
        analysis.find_class(qualified_name),
        project.find_class(qualified_name),
    ) else {
        return Err(Error::Usage(format!("class `{qualified_name}` not found")));
    };
    let lever = Lever::of(result.loc_q, result.f_q, result.h_q);
    let n = format_number;
    let mut s = String::new();
    let _ = writeln!(s, "{} {qualified_name}", format!("{:?}", node.kind).to_lowercase());
    let _ = writeln!(s, "  package      {} (p_q {})", package.name, n(package.p_q));
    let _ = writeln!(s, "  ncloc        {:<6} loc_q {}", result.ncloc, n(result.loc_q));
    let _ = writeln!(s, "  functions    {:<6} f_q   {}", result.f, n(result.f_q));
    let _ = writeln!(s, "  lcom4        {:<6} h_q   {}", result.lcom4, n(result.h_q));
    let _ = writeln!(s, "  class quality c_q = 0.25*loc_q + 0.25*f_q + 0.5*h_q = {}", n(result.c_q));
    let _ = writeln!(s, "  weakest term {} ({})", lever.as_str(), lever.hint());
    let _ = writeln!(s, "  function groups:");
    for (i, group) in lcom4_components(node, config).iter().enumerate() {
        let _ = writeln!(s, "    {}. {}", i + 1, group.join(", "));
    }
    let _ = writeln!(s, "  references:");
    if node.referenced_classes.is_empty() {
        let _ = writeln!(s, "    (none)");
    }
    for r in &node.referenced_classes {
        let _ = writeln!(s, "    {r}");
    }
    Ok(s)
}
