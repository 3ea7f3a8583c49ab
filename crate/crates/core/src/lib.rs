//! Static analysis of Java source trees for the Modularity Index.
//!
//! The pipeline runs front end → [`model::Project`] → per-class metrics →
//! package and system qualities. [`analyze_system`] runs the metric stages
//! over an extracted project; [`evolution`] repeats it across versions and
//! [`report`] serializes the results.

pub mod analysis;
pub mod class_metrics;
mod diagnostic;
mod error;
pub mod evolution;
pub mod frontend;
pub mod model;
pub mod modularity;
pub mod report;
pub mod synth;

pub use analysis::{
    analyze_system, Averages, ClassResult, PackageResult, SystemAnalysis, SystemMetrics, Totals,
};
pub use class_metrics::{
    class_metrics, compute_lcom4, count_functions, lcom4_components, ClassMetrics,
};
pub use diagnostic::{has_errors, Diagnostic, Location, Severity};
pub use error::{Error, Result};
pub use frontend::{extract_from_sources, extract_project, ExtractionConfig};
pub use model::{
    build_dependency_matrix, build_dependency_matrix_with, validate_model, ClassKind, ClassNode,
    DependencyMatrix, FunctionNode, PackageNode, Project, SelfDependencyMode,
};
pub use modularity::{
    class_quality, cohesion_quality, function_quality, loc_quality, modularity_index,
    package_quality, system_architecture, ClassQuality, PackageQuality,
};
pub use evolution::{
    analyze_series, growth_summary, load_manifest, EvolutionRow, EvolutionTable, Growth,
    VersionEntry, VersionSeries,
};
pub use report::{worst_offenders, EvolutionDocument, ReportDocument};
