//! Quality formulas from class level up to the system Modularity Index.
//!
//! The fitted constants are used exactly as published.

use serde::{Deserialize, Serialize};

use crate::diagnostic::Diagnostic;
use crate::error::{Error, Result};
use crate::model::DependencyMatrix;

/// Size at which `loc_quality` peaks.
pub const OPTIMAL_NCLOC: u32 = 50;
/// Function count at which `function_quality` peaks.
pub const OPTIMAL_FUNCTIONS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassQuality {
    pub loc_q: f64,
    pub f_q: f64,
    pub h_q: f64,
    pub c_q: f64,
}

impl ClassQuality {
    pub fn from_measures(ncloc: u32, f: u32, lcom4: u32) -> Result<Self> {
        let loc_q = loc_quality(ncloc);
        let f_q = function_quality(f);
        let h_q = cohesion_quality(lcom4)?;
        let c_q = class_quality(loc_q, f_q, h_q)?;
        Ok(Self { loc_q, f_q, h_q, c_q })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackageQuality {
    pub package_name: String,
    pub p_q: f64,
    pub class_count: usize,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

pub fn loc_quality(ncloc: u32) -> f64 {
    let x = f64::from(ncloc);
    let q = if ncloc <= OPTIMAL_NCLOC {
        0.0138 * x + 0.310
    } else {
        1.0 / (x - 50.0).powf(1.969)
    };
    clamp_unit(q)
}

pub fn function_quality(f: u32) -> f64 {
    let x = f64::from(f);
    let q = if f <= OPTIMAL_FUNCTIONS {
        0.1836 * x + 0.0820
    } else {
        1.0 / (x - 4.83).powf(2.691)
    };
    clamp_unit(q)
}

pub fn cohesion_quality(lcom4: u32) -> Result<f64> {
    if lcom4 < 1 {
        return Err(Error::Internal(format!("LCOM4 must be at least 1, got {lcom4}")));
    }
    Ok(clamp_unit(1.0 / f64::from(lcom4).powf(2.216)))
}

pub fn class_quality(loc_q: f64, f_q: f64, h_q: f64) -> Result<f64> {
    for (name, v) in [("loc_q", loc_q), ("f_q", f_q), ("h_q", h_q)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Internal(format!("{name} = {v} is outside [0, 1]")));
        }
    }
    Ok(0.25 * loc_q + 0.25 * f_q + 0.5 * h_q)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn package_quality(class_qualities: &[f64]) -> Result<f64> {
    if class_qualities.is_empty() {
        return Err(Error::EmptyPackage);
    }
    Ok(mean(class_qualities))
}

/// Diagonal norm over full norm of the dependency matrix.
///
/// A matrix without any dependency scores 0, and a warning is pushed to
/// `diagnostics`.
pub fn system_architecture(
    matrix: &DependencyMatrix,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<f64> {
    if !matrix.is_square() {
        return Err(Error::Internal("dependency matrix is not square".into()));
    }
    let mut diagonal: u128 = 0;
    let mut total: u128 = 0;
    for (i, row) in matrix.rows().iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let sq = u128::from(c) * u128::from(c);
            total += sq;
            if i == j {
                diagonal += sq;
            }
        }
    }
    if total == 0 {
        diagnostics.push(Diagnostic::warning(
            "no class dependencies found; system architecture score set to 0",
        ));
        return Ok(0.0);
    }
    // Integer sums keep the ratio exact under scaling of the matrix.
    Ok(clamp_unit((diagonal as f64 / total as f64).sqrt()))
}

pub fn modularity_index(s_a: f64, package_qualities: &[f64]) -> Result<f64> {
    if package_qualities.is_empty() {
        return Err(Error::NoPackages);
    }
    Ok(s_a * mean(package_qualities))
}
