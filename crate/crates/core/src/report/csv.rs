use super::number::format_number;
use crate::analysis::SystemAnalysis;
use super::Offender;
use crate::evolution::EvolutionRow;

pub const EVOLUTION_HEADER: [&str; 12] = [
    "label",
    "date",
    "ncloc",
    "packages",
    "classes",
    "functions",
    "classes_per_package",
    "functions_per_class",
    "ncloc_per_class",
    "avg_p_q",
    "s_a",
    "m_i",
];

pub const CLASS_HEADER: [&str; 10] = [
    "package",
    "class",
    "ncloc",
    "f",
    "lcom4",
    "loc_q",
    "f_q",
    "h_q",
    "c_q",
    "p_q",
];

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("CSV input is UTF-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

/// One line per version under the fixed evolution header.
pub fn render_evolution_csv(rows: &[EvolutionRow]) -> String {
    let mut w = writer();
    w.write_record(EVOLUTION_HEADER).expect("in-memory write");
    for r in rows {
        let mut record = vec![r.label.clone(), r.date.format("%Y-%m-%d").to_string()];
        record.extend([r.ncloc.to_string(), r.packages.to_string(), r.classes.to_string(), r.functions.to_string()]);
        record.extend(
            [r.classes_per_package, r.functions_per_class, r.ncloc_per_class, r.avg_p_q, r.s_a, r.m_i]
                .map(format_number),
        );
        w.write_record(&record).expect("in-memory write");
    }
    finish(w)
}

/// One line per class; with `matrix`, the dependency matrix follows after
/// a blank line.
pub fn render_report_csv(analysis: &SystemAnalysis, matrix: bool) -> String {
    let mut w = writer();
    w.write_record(CLASS_HEADER).expect("in-memory write");
    for p in &analysis.packages {
        for c in &p.classes {
            let mut record = vec![p.name.clone(), c.qualified_name.clone()];
            record.extend([c.ncloc, c.f, c.lcom4].map(|n| n.to_string()));
            record.extend([c.loc_q, c.f_q, c.h_q, c.c_q, p.p_q].map(format_number));
            w.write_record(&record).expect("in-memory write");
        }
    }
    let mut out = finish(w);
    if matrix {
        let mut w = writer();
        let mut header = vec!["package".to_string()];
        header.extend(analysis.matrix.labels().iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (label, row) in analysis.matrix.labels().iter().zip(analysis.matrix.rows()) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(u64::to_string));
            w.write_record(&record).expect("in-memory write");
        }
        out.push('\n');
        out.push_str(&finish(w));
    }
    out
}

/// Ranked lowest-quality classes with the term to improve.
pub fn render_offenders_csv(offenders: &[Offender]) -> String {
    let mut w = writer();
    w.write_record(["rank", "class", "package", "ncloc", "f", "lcom4", "c_q", "lever"])
        .expect("in-memory write");
    for (i, o) in offenders.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            o.qualified_name.clone(),
            o.package.clone(),
            o.ncloc.to_string(),
            o.f.to_string(),
            o.lcom4.to_string(),
            format_number(o.c_q),
            o.lever.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}
