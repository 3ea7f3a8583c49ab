//! Whole-project analysis: class metrics, package and system qualities.

use serde::{Deserialize, Serialize};

use crate::class_metrics::{class_metrics, ClassMetrics};
use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::frontend::ExtractionConfig;
use crate::model::{build_dependency_matrix_with, validate_model, DependencyMatrix, Project};
use crate::modularity::{
    modularity_index, package_quality, system_architecture, ClassQuality, PackageQuality,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub ncloc: u64,
    pub packages: usize,
    pub classes: usize,
    pub functions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Averages {
    pub classes_per_package: f64,
    pub functions_per_class: f64,
    pub ncloc_per_class: f64,
}

impl Averages {
    pub fn from_totals(t: &Totals) -> Self {
        let ratio = |a: f64, b: usize| if b == 0 { 0.0 } else { a / b as f64 };
        Self {
            classes_per_package: ratio(t.classes as f64, t.packages),
            functions_per_class: ratio(t.functions as f64, t.classes),
            ncloc_per_class: ratio(t.ncloc as f64, t.classes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemMetrics {
    pub s_a: f64,
    pub avg_p_q: f64,
    pub m_i: f64,
    pub totals: Totals,
    pub averages: Averages,
}

/// Raw measures and qualities of one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassResult {
    pub qualified_name: String,
    pub ncloc: u32,
    pub f: u32,
    pub lcom4: u32,
    pub loc_q: f64,
    pub f_q: f64,
    pub h_q: f64,
    pub c_q: f64,
}

impl ClassResult {
    fn new(m: ClassMetrics, q: ClassQuality) -> Self {
        Self {
            qualified_name: m.qualified_name,
            ncloc: m.ncloc,
            f: m.f,
            lcom4: m.lcom4,
            loc_q: q.loc_q,
            f_q: q.f_q,
            h_q: q.h_q,
            c_q: q.c_q,
        }
    }

    pub fn metrics(&self) -> ClassMetrics {
        ClassMetrics {
            qualified_name: self.qualified_name.clone(),
            ncloc: self.ncloc,
            f: self.f,
            lcom4: self.lcom4,
        }
    }

    pub fn quality(&self) -> ClassQuality {
        ClassQuality {
            loc_q: self.loc_q,
            f_q: self.f_q,
            h_q: self.h_q,
            c_q: self.c_q,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackageResult {
    pub name: String,
    pub p_q: f64,
    pub classes: Vec<ClassResult>,
}

impl PackageResult {
    pub fn quality(&self) -> PackageQuality {
        PackageQuality {
            package_name: self.name.clone(),
            p_q: self.p_q,
            class_count: self.classes.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemAnalysis {
    pub project: String,
    pub version_label: String,
    pub system: SystemMetrics,
    pub packages: Vec<PackageResult>,
    pub matrix: DependencyMatrix,
    pub diagnostics: Vec<Diagnostic>,
}

impl SystemAnalysis {
    pub fn classes(&self) -> impl Iterator<Item = &ClassResult> {
        self.packages.iter().flat_map(|p| p.classes.iter())
    }

    pub fn find_class(&self, qualified_name: &str) -> Option<(&PackageResult, &ClassResult)> {
        self.packages.iter().find_map(|p| {
            p.classes
                .iter()
                .find(|c| c.qualified_name == qualified_name)
                .map(|c| (p, c))
        })
    }

    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

/// Runs the full class → package → system pipeline over a project.
///
/// The project must pass [`validate_model`]; empty packages are ignored.
/// Results are ordered by package and class name regardless of the order
/// in `project`.
pub fn analyze_system(project: &Project, config: &ExtractionConfig) -> Result<SystemAnalysis> {
    let problems = validate_model(project);
    if crate::diagnostic::has_errors(&problems) {
        return Err(Error::InvalidModel(
            problems.into_iter().filter(Diagnostic::is_error).collect(),
        ));
    }
    let mut diagnostics = project.diagnostics.clone();
    diagnostics.extend(problems);

    let mut ordered = Project::new(project.name.clone(), project.version_label.clone());
    ordered.packages = project
        .packages
        .iter()
        .filter(|p| !p.classes.is_empty())
        .cloned()
        .collect();
    ordered.packages.sort_by(|a, b| a.name.cmp(&b.name));
    for package in &mut ordered.packages {
        package
            .classes
            .sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
    }
    let matrix = build_dependency_matrix_with(&ordered, config.self_dependency_mode)?;

    let mut totals = Totals::default();
    let mut packages = Vec::with_capacity(ordered.packages.len());
    for package in &ordered.packages {
        let mut classes = Vec::with_capacity(package.classes.len());
        for class in &package.classes {
            let m = class_metrics(class, config);
            let q = ClassQuality::from_measures(m.ncloc, m.f, m.lcom4)?;
            totals.ncloc += u64::from(m.ncloc);
            totals.functions += u64::from(m.f);
            totals.classes += 1;
            classes.push(ClassResult::new(m, q));
        }
        let c_qs: Vec<f64> = classes.iter().map(|c| c.c_q).collect();
        packages.push(PackageResult {
            name: package.name.clone(),
            p_q: package_quality(&c_qs)?,
            classes,
        });
    }
    totals.packages = packages.len();

    let s_a = system_architecture(&matrix, &mut diagnostics)?;
    let p_qs: Vec<f64> = packages.iter().map(|p| p.p_q).collect();
    let m_i = modularity_index(s_a, &p_qs)?;
    let avg_p_q = package_quality(&p_qs).map_err(|_| Error::NoPackages)?;

    Ok(SystemAnalysis {
        project: project.name.clone(),
        version_label: project.version_label.clone(),
        system: SystemMetrics {
            s_a,
            avg_p_q,
            m_i,
            totals,
            averages: Averages::from_totals(&totals),
        },
        packages,
        matrix,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassKind, ClassNode, FunctionNode, PackageNode, SelfDependencyMode};
    use crate::synth::random_project;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, SeedableRng};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn optimal_class(name: &str, self_ref: bool) -> ClassNode {
        let mut c = ClassNode::new(name, ClassKind::Class);
        c.ncloc = 50;
        c.fields = vec!["x".into()];
        c.functions = (0..5)
            .map(|i| FunctionNode::new(format!("m{i}()")).accessing(["x"]))
            .collect();
        if self_ref {
            c.referenced_classes.insert(name.into());
        }
        c
    }

    fn single(class: ClassNode) -> Project {
        let mut p = Project::new("t", "v");
        p.packages.push(PackageNode {
            name: "p".into(),
            classes: vec![class],
        });
        p
    }

    #[test]
    fn demo_fixture_end_to_end() {
        let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo");
        let config = ExtractionConfig::default();
        let project = crate::extract_project(&root, &config).unwrap();
        let a = analyze_system(&project, &config).unwrap();
        assert_eq!(a.matrix.rows(), &[vec![5, 0, 1], vec![5, 3, 1], vec![0, 0, 0]]);
        assert!(close(a.system.s_a, 0.7465768876548, 1e-12));
        assert!(close(a.system.avg_p_q, 0.5563750608825644, 1e-12));
        assert!(close(a.system.m_i, 0.41537676132245477, 1e-9));
        let p_qs: Vec<f64> = a.packages.iter().map(|p| p.p_q).collect();
        for (got, want) in p_qs.iter().zip([0.7278562161807877, 0.38848464219572404, 0.5527843242711815]) {
            assert!(close(*got, want, 1e-12));
        }
        let exporter = a.find_class("org.demo.service.Exporter").unwrap().1;
        assert!(close(exporter.c_q, 0.2967696903061514, 1e-12));
        assert_eq!(
            a.system.totals,
            Totals { ncloc: 142, packages: 3, classes: 8, functions: 31 }
        );
        assert!(a.diagnostics.is_empty());
    }

    #[test]
    fn all_optima_align() {
        let a = analyze_system(&single(optimal_class("p.A", true)), &ExtractionConfig::default())
            .unwrap();
        assert_eq!((a.system.s_a, a.system.avg_p_q, a.system.m_i), (1.0, 1.0, 1.0));
    }

    #[test]
    fn no_references_is_degenerate() {
        let a = analyze_system(&single(optimal_class("p.A", false)), &ExtractionConfig::default())
            .unwrap();
        assert_eq!(a.system.s_a, 0.0);
        assert_eq!(a.system.m_i, 0.0);
        assert_eq!(a.diagnostics.len(), 1);
        assert_eq!(a.diagnostics[0].severity, crate::Severity::Warning);
    }

    #[test]
    fn always_mode_counts_every_class_on_the_diagonal() {
        let config = ExtractionConfig {
            self_dependency_mode: SelfDependencyMode::Always,
            ..Default::default()
        };
        let a = analyze_system(&single(optimal_class("p.A", false)), &config).unwrap();
        assert_eq!(a.system.s_a, 1.0);
    }

    #[test]
    fn zero_function_class() {
        let mut c = ClassNode::new("p.E", ClassKind::Class);
        c.ncloc = 1;
        let a = analyze_system(&single(c), &ExtractionConfig::default()).unwrap();
        let e = &a.packages[0].classes[0];
        assert_eq!((e.f, e.lcom4, e.h_q), (0, 1, 1.0));
    }

    #[test]
    fn empty_package_is_excluded() {
        let mut p = single(optimal_class("p.A", true));
        let with_empty = {
            let mut q = p.clone();
            q.packages.push(PackageNode::new("q"));
            q
        };
        let config = ExtractionConfig::default();
        let a = analyze_system(&with_empty, &config).unwrap();
        assert_eq!(a.system.totals.packages, 1);
        assert_eq!(a.matrix.dimension(), 1);
        assert_eq!(a.system.avg_p_q, 1.0);
        p.version_label = "v".into();
        assert_eq!(analyze_system(&p, &config).unwrap().system, a.system);
    }

    #[test]
    fn invalid_model_rejected() {
        let mut c = optimal_class("p.A", false);
        c.referenced_classes.insert("p.Missing".into());
        let err = analyze_system(&single(c), &ExtractionConfig::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(ref d) if d.len() == 1));
    }

    #[test]
    fn empty_project_is_nothing_to_analyze() {
        let p = Project::new("t", "");
        assert!(matches!(
            analyze_system(&p, &ExtractionConfig::default()),
            Err(Error::NothingToAnalyze)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn ranges_and_product_identity(seed in any::<u64>()) {
            let project = random_project(&mut StdRng::seed_from_u64(seed), 6, 8);
            let config = ExtractionConfig::default();
            let a = analyze_system(&project, &config).unwrap();
            let unit = |v: f64| (0.0..=1.0).contains(&v);
            for c in a.classes() {
                prop_assert!(unit(c.loc_q) && unit(c.f_q) && unit(c.h_q) && unit(c.c_q));
            }
            for p in &a.packages {
                prop_assert!(unit(p.p_q));
            }
            let s = &a.system;
            prop_assert!(unit(s.s_a) && unit(s.avg_p_q) && unit(s.m_i));
            prop_assert!(close(s.m_i, s.s_a * s.avg_p_q, 1e-12));
            let t = &s.totals;
            prop_assert!(close(s.averages.classes_per_package * t.packages as f64, t.classes as f64, 1e-9));
            prop_assert!(close(s.averages.ncloc_per_class * t.classes as f64, t.ncloc as f64, 1e-6));
            prop_assert_eq!(analyze_system(&project, &config).unwrap(), a);
        }

        #[test]
        fn package_order_is_irrelevant(seed in any::<u64>()) {
            let project = random_project(&mut StdRng::seed_from_u64(seed), 5, 5);
            let mut reversed = project.clone();
            reversed.packages.reverse();
            let config = ExtractionConfig::default();
            prop_assert_eq!(
                analyze_system(&project, &config).unwrap(),
                analyze_system(&reversed, &config).unwrap()
            );
        }
    }
}
