//! Language-neutral project model and the package dependency matrix.
//!
//! A [`Project`] holds packages, packages hold classes, classes hold
//! functions and fields. Class-to-class references are by qualified name
//! and only ever point at classes inside the same project.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub name: String,
    pub version_label: String,
    pub packages: Vec<PackageNode>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

impl Project {
    pub fn new(name: impl Into<String>, version_label: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            version_label: version_label.into(),
            packages: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassNode> {
        self.packages.iter().flat_map(|p| p.classes.iter())
    }

    pub fn class_count(&self) -> usize {
        self.packages.iter().map(|p| p.classes.len()).sum()
    }

    pub fn find_class(&self, qualified_name: &str) -> Option<(&PackageNode, &ClassNode)> {
        self.packages.iter().find_map(|p| {
            p.classes
                .iter()
                .find(|c| c.qualified_name == qualified_name)
                .map(|c| (p, c))
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageNode {
    /// Dotted package name; the unnamed package is `(default)`.
    pub name: String,
    pub classes: Vec<ClassNode>,
}

impl PackageNode {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            classes: Vec::new(),
        }
    }
}

/// Display name used for classes declared without a `package` clause.
pub const DEFAULT_PACKAGE: &str = "(default)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Class,
    Interface,
    Enum,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Class => "class",
            ClassKind::Interface => "interface",
            ClassKind::Enum => "enum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNode {
    pub qualified_name: String,
    pub kind: ClassKind,
    pub ncloc: u32,
    pub functions: Vec<FunctionNode>,
    pub fields: Vec<String>,
    /// Project-internal classes this class names as a type. May contain the
    /// class itself when it refers to its own type.
    pub referenced_classes: BTreeSet<String>,
}

impl ClassNode {
    pub fn new(qualified_name: impl Into<String>, kind: ClassKind) -> Self {
        Self {
            qualified_name: qualified_name.into(),
            kind,
            ncloc: 0,
            functions: Vec::new(),
            fields: Vec::new(),
            referenced_classes: BTreeSet::new(),
        }
    }

    pub fn simple_name(&self) -> &str {
        self.qualified_name
            .rsplit('.')
            .next()
            .unwrap_or(&self.qualified_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionNode {
    /// Name plus parameter types, e.g. `link(Node)`. Functions of folded
    /// nested types carry the nested path as a prefix (`Inner.run()`).
    pub key: String,
    #[serde(default)]
    pub is_constructor: bool,
    pub accessed_fields: BTreeSet<String>,
    pub called_functions: BTreeSet<String>,
}

impl FunctionNode {
    pub fn new(key: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            is_constructor: false,
            accessed_fields: BTreeSet::new(),
            called_functions: BTreeSet::new(),
        }
    }

    pub fn constructor(key: impl Into<String>) -> Self {
        Self {
            is_constructor: true,
            ..Self::new(key)
        }
    }

    pub fn accessing<I, S>(mut self, fields: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.accessed_fields.extend(fields.into_iter().map(Into::into));
        self
    }

    pub fn calling<I, S>(mut self, functions: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.called_functions
            .extend(functions.into_iter().map(Into::into));
        self
    }
}

/// How a class's dependency on itself enters the package cohesion count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfDependencyMode {
    /// Only classes that name their own type contribute a self pair.
    #[default]
    TextualSelfReference,
    /// Every class contributes exactly one self pair.
    Always,
}

impl std::str::FromStr for SelfDependencyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "textual-self-reference" | "textual" => Ok(Self::TextualSelfReference),
            "always" => Ok(Self::Always),
            other => Err(Error::Usage(format!(
                "unknown self dependency mode `{other}` (expected textual-self-reference or always)"
            ))),
        }
    }
}

/// Square matrix of class-pair dependency counts between packages.
/// Entry `(i, j)` counts ordered pairs (A, B) with A in package `i`
/// referencing B in package `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct DependencyMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    labels: Vec<String>,
    rows: Vec<Vec<u64>>,
}

impl TryFrom<RawMatrix> for DependencyMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        DependencyMatrix::new(raw.labels, raw.rows)
    }
}

impl From<DependencyMatrix> for RawMatrix {
    fn from(m: DependencyMatrix) -> Self {
        RawMatrix {
            labels: m.labels,
            rows: m.counts,
        }
    }
}

impl DependencyMatrix {
    pub fn new(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != labels.len() {
            return Err(Error::Internal(format!(
                "dependency matrix has {} rows for {} labels",
                counts.len(),
                labels.len()
            )));
        }
        if let Some(row) = counts.iter().find(|row| row.len() != labels.len()) {
            return Err(Error::Internal(format!(
                "dependency matrix is not square: row of length {} in a {}x{} matrix",
                row.len(),
                labels.len(),
                labels.len()
            )));
        }
        Ok(Self { labels, counts })
    }

    /// Unlabeled matrix, for tests and synthetic inputs.
    pub fn from_rows(counts: Vec<Vec<u64>>) -> Result<Self> {
        let labels = (0..counts.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, counts)
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn is_square(&self) -> bool {
        self.counts.iter().all(|row| row.len() == self.labels.len())
    }
}

/// Builds the package dependency matrix, counting a class's own type
/// reference as a self pair only when it appears in `referenced_classes`.
pub fn build_dependency_matrix(project: &Project) -> Result<DependencyMatrix> {
    build_dependency_matrix_with(project, SelfDependencyMode::default())
}

pub fn build_dependency_matrix_with(
    project: &Project,
    mode: SelfDependencyMode,
) -> Result<DependencyMatrix> {
    if project.class_count() == 0 {
        return Err(Error::NothingToAnalyze);
    }

    let packages: Vec<&PackageNode> = project
        .packages
        .iter()
        .filter(|p| !p.classes.is_empty())
        .collect();

    let mut package_of: HashMap<&str, usize> = HashMap::new();
    for (index, package) in packages.iter().enumerate() {
        for class in &package.classes {
            package_of.insert(class.qualified_name.as_str(), index);
        }
    }

    let d = packages.len();
    let mut counts = vec![vec![0u64; d]; d];
    for (i, package) in packages.iter().enumerate() {
        for class in &package.classes {
            for target in &class.referenced_classes {
                if *target == class.qualified_name && mode == SelfDependencyMode::Always {
                    continue; // counted below
                }
                if let Some(&j) = package_of.get(target.as_str()) {
                    counts[i][j] += 1;
                }
            }
            if mode == SelfDependencyMode::Always {
                counts[i][i] += 1;
            }
        }
    }

    let labels = packages.iter().map(|p| p.name.clone()).collect();
    DependencyMatrix::new(labels, counts)
}

/// Checks the structural invariants of a project. An empty result means the
/// model is safe to analyze.
pub fn validate_model(project: &Project) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut package_names = HashSet::new();
    for package in &project.packages {
        if !package_names.insert(package.name.as_str()) {
            out.push(Diagnostic::error(format!(
                "duplicate package `{}`",
                package.name
            )));
        }
    }

    let mut known = HashSet::new();
    for package in &project.packages {
        for class in &package.classes {
            if !known.insert(class.qualified_name.as_str()) {
                out.push(Diagnostic::error(format!(
                    "duplicate class `{}`",
                    class.qualified_name
                )));
            }
        }
    }

    for class in project.classes() {
        let name = &class.qualified_name;
        for target in &class.referenced_classes {
            if !known.contains(target.as_str()) {
                out.push(Diagnostic::error(format!(
                    "class `{name}` references unknown class `{target}`"
                )));
            }
        }

        let mut fields = HashSet::new();
        for field in &class.fields {
            if !fields.insert(field.as_str()) {
                out.push(Diagnostic::error(format!(
                    "class `{name}` declares field `{field}` twice"
                )));
            }
        }

        let mut keys = HashSet::new();
        for function in &class.functions {
            if !keys.insert(function.key.as_str()) {
                out.push(Diagnostic::error(format!(
                    "class `{name}` declares function `{}` twice",
                    function.key
                )));
            }
        }

        for function in &class.functions {
            for field in &function.accessed_fields {
                if !fields.contains(field.as_str()) {
                    out.push(Diagnostic::error(format!(
                        "function `{name}::{}` accesses unknown field `{field}`",
                        function.key
                    )));
                }
            }
            for callee in &function.called_functions {
                if !keys.contains(callee.as_str()) {
                    out.push(Diagnostic::error(format!(
                        "function `{name}::{}` calls unknown function `{callee}`",
                        function.key
                    )));
                }
            }
        }
    }

    out
}

/// Number of distinct ordered class pairs (A, B) with B in A's references.
pub fn dependent_pair_count(project: &Project) -> usize {
    project.classes().map(|c| c.referenced_classes.len()).sum()
}

/// Collects every qualified class name, useful when building references.
pub fn class_names(project: &Project) -> BTreeSet<String> {
    project.classes().map(|c| c.qualified_name.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class(name: &str, refs: &[&str]) -> ClassNode {
        let mut c = ClassNode::new(name, ClassKind::Class);
        c.referenced_classes = refs.iter().map(|s| s.to_string()).collect();
        c
    }

    fn project(packages: Vec<(&str, Vec<ClassNode>)>) -> Project {
        let mut p = Project::new("t", "1");
        for (name, classes) in packages {
            p.packages.push(PackageNode {
                name: name.into(),
                classes,
            });
        }
        p
    }

    #[test]
    fn no_references_gives_zero_matrix() {
        let p = project(vec![
            ("p1", vec![class("p1.A", &[])]),
            ("p2", vec![class("p2.B", &[])]),
        ]);
        let m = build_dependency_matrix(&p).unwrap();
        assert_eq!(m.rows(), &[vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn same_package_pair_plus_self_pair() {
        let p = project(vec![(
            "p1",
            vec![class("p1.A", &["p1.B"]), class("p1.B", &["p1.B"])],
        )]);
        let m = build_dependency_matrix(&p).unwrap();
        assert_eq!(m.rows(), &[vec![2]]);
    }

    #[test]
    fn cross_package_pairs() {
        let p = project(vec![
            ("p1", vec![class("p1.A", &["p2.X"])]),
            ("p2", vec![class("p2.X", &["p1.A"])]),
        ]);
        let m = build_dependency_matrix(&p).unwrap();
        assert_eq!(m.rows(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn always_mode_adds_one_self_pair_per_class() {
        let p = project(vec![(
            "p1",
            vec![class("p1.A", &["p1.B"]), class("p1.B", &["p1.B"])],
        )]);
        let m = build_dependency_matrix_with(&p, SelfDependencyMode::Always).unwrap();
        assert_eq!(m.rows(), &[vec![3]]);
    }

    #[test]
    fn empty_packages_are_dropped() {
        let p = project(vec![
            ("empty", vec![]),
            ("p1", vec![class("p1.A", &["p1.A"])]),
        ]);
        let m = build_dependency_matrix(&p).unwrap();
        assert_eq!(m.dimension(), 1);
        assert_eq!(m.labels(), &["p1".to_string()]);
    }

    #[test]
    fn empty_project_is_nothing_to_analyze() {
        let p = project(vec![("p1", vec![])]);
        assert!(matches!(
            build_dependency_matrix(&p),
            Err(Error::NothingToAnalyze)
        ));
    }

    #[test]
    fn non_square_matrix_rejected() {
        assert!(DependencyMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn valid_project_has_no_diagnostics() {
        let mut a = class("p.A", &["p.B"]);
        a.fields = vec!["x".into()];
        a.functions = vec![
            FunctionNode::new("f()").accessing(["x"]),
            FunctionNode::new("g()").calling(["f()"]),
        ];
        let p = project(vec![("p", vec![a, class("p.B", &[])])]);
        assert!(validate_model(&p).is_empty());
    }

    #[test]
    fn dangling_reference_reported() {
        let p = project(vec![("p", vec![class("p.A", &["p.Missing"])])]);
        let d = validate_model(&p);
        assert_eq!(d.len(), 1);
        assert!(d[0].is_error());
    }

    #[test]
    fn duplicate_class_across_packages_reported() {
        let p = project(vec![
            ("p", vec![class("p.A", &[])]),
            ("p.sub", vec![class("p.A", &[])]),
        ]);
        let d = validate_model(&p);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("duplicate class"));
    }

    #[test]
    fn unknown_field_access_reported() {
        let mut a = class("p.A", &[]);
        a.functions = vec![FunctionNode::new("f()").accessing(["ghost"])];
        let p = project(vec![("p", vec![a])]);
        let d = validate_model(&p);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("ghost"));
    }

    #[test]
    fn matrix_serde_round_trip() {
        let m = DependencyMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 2], vec![0, 3]],
        )
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"labels":["a","b"],"rows":[[1,2],[0,3]]}"#);
        assert_eq!(serde_json::from_str::<DependencyMatrix>(&json).unwrap(), m);
        assert!(serde_json::from_str::<DependencyMatrix>(r#"{"labels":["a"],"rows":[[1,2]]}"#).is_err());
    }

    /// Random project: up to 5 packages of up to 4 classes with random references.
    fn arb_project() -> impl Strategy<Value = Project> {
        prop::collection::vec(1usize..5, 1..6)
            .prop_flat_map(|sizes| {
                let names: Vec<(usize, String)> = sizes
                    .iter()
                    .enumerate()
                    .flat_map(|(p, &n)| (0..n).map(move |c| (p, format!("p{p}.C{c}"))))
                    .collect();
                let total = names.len();
                (
                    Just(sizes),
                    Just(names),
                    prop::collection::vec(prop::collection::vec(0..total, 0..5), total),
                )
            })
            .prop_map(|(sizes, names, refs)| {
                let mut p = Project::new("rand", "0");
                for (index, _) in sizes.iter().enumerate() {
                    p.packages.push(PackageNode::new(format!("p{index}")));
                }
                for (k, (pkg, name)) in names.iter().enumerate() {
                    let mut c = ClassNode::new(name.clone(), ClassKind::Class);
                    c.referenced_classes = refs[k].iter().map(|&t| names[t].1.clone()).collect();
                    p.packages[*pkg].classes.push(c);
                }
                p
            })
    }

    proptest! {
        #[test]
        fn matrix_is_permutation_equivariant(p in arb_project(), seed in any::<u64>()) {
            let m = build_dependency_matrix(&p).unwrap();
            let d = p.packages.len();
            let mut order: Vec<usize> = (0..d).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..d).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut q = p.clone();
            q.packages = order.iter().map(|&i| p.packages[i].clone()).collect();
            let mq = build_dependency_matrix(&q).unwrap();
            for (a, &i) in order.iter().enumerate() {
                for (b, &j) in order.iter().enumerate() {
                    prop_assert_eq!(mq.get(a, b), m.get(i, j));
                }
            }
        }

        #[test]
        fn matrix_total_counts_distinct_pairs(p in arb_project()) {
            let m = build_dependency_matrix(&p).unwrap();
            prop_assert_eq!(m.total() as usize, dependent_pair_count(&p));
            prop_assert!(validate_model(&p).is_empty());
        }

        #[test]
        fn adding_a_reference_never_decreases_entries(p in arb_project(), from in any::<prop::sample::Index>(), to in any::<prop::sample::Index>()) {
            let before = build_dependency_matrix(&p).unwrap();
            let names: Vec<String> = class_names(&p).into_iter().collect();
            let target = names[to.index(names.len())].clone();
            let mut q = p.clone();
            let source = from.index(names.len());
            let class = q.packages.iter_mut().flat_map(|pk| pk.classes.iter_mut()).nth(source).unwrap();
            class.referenced_classes.insert(target);
            let after = build_dependency_matrix(&q).unwrap();
            for i in 0..before.dimension() {
                for j in 0..before.dimension() {
                    prop_assert!(after.get(i, j) >= before.get(i, j));
                }
            }
        }
    }
}
