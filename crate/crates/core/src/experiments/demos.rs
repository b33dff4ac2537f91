//! Small reproducible demonstrations: PGA's sensitivity to a tiny
//! perturbation, and the noise stability of a bounded linear method.

use serde::Serialize;

use crate::algorithms::{run_wga, GreedyConfig};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::vector::{check_dims, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstabilityReport {
    pub epsilon: f64,
    /// `‖(v₁)₁ - (v₂)₁‖` after one PGA step.
    pub d1: f64,
    /// `‖v₁ - v₂‖`.
    pub d2: f64,
    pub ratio: f64,
}

/// One PGA step on `v₁ = (1+ε, 1)` and `v₂ = (1, 1+ε)` over `{e₁, e₂}`:
/// inputs `ε√2` apart end up `√2` apart.
pub fn instability_demo(epsilon: f64) -> Result<InstabilityReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon", epsilon, "a finite value > 0"));
    }
    let dict = Dictionary::orthonormal(2);
    let v1 = Vector::new(vec![1.0 + epsilon, 1.0])?;
    let v2 = Vector::new(vec![1.0, 1.0 + epsilon])?;
    let config = GreedyConfig::pga(1);
    let r1 = run_wga(&v1, &dict, &config)?.residual;
    let r2 = run_wga(&v2, &dict, &config)?.residual;
    let d1 = r1.sub(&r2)?.norm();
    let d2 = v1.sub(&v2)?.norm();
    Ok(InstabilityReport {
        epsilon,
        d1,
        d2,
        ratio: d1 / d2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearBaselineReport {
    pub k: usize,
    /// Operator-norm bound `K` of `S_k`.
    pub operator_bound: f64,
    /// `‖S_k f - S_k f^ε‖`.
    pub projected_diff: f64,
    /// `‖f - f^ε‖`.
    pub diff: f64,
    /// `projected_diff <= K · diff`.
    pub contraction_holds: bool,
    /// `‖f - S_k f‖`.
    pub noisy_error: f64,
    /// `‖f^ε - S_k f^ε‖`.
    pub clean_error: f64,
    /// `noisy_error <= clean_error + (K+1) · diff`.
    pub error_transfer_holds: bool,
}

fn truncate(f: &Vector, k: usize) -> Vector {
    let mut out = f.clone();
    out.as_mut_slice()[k..].iter_mut().for_each(|x| *x = 0.0);
    out
}

/// Uses `S_k` = orthogonal projection onto the first `k` coordinates.
pub fn linear_baseline_demo(operator_bound: f64, k: usize, f: &Vector, f_eps: &Vector) -> Result<LinearBaselineReport> {
    if !(operator_bound >= 1.0 && operator_bound.is_finite()) {
        return Err(Error::invalid("K", operator_bound, "a finite value >= 1"));
    }
    check_dims(f.dim(), f_eps.dim())?;
    if k > f.dim() {
        return Err(Error::invalid("k", k, "at most the dimension"));
    }
    let sf = truncate(f, k);
    let sfe = truncate(f_eps, k);
    let projected_diff = sf.sub(&sfe)?.norm();
    let diff = f.sub(f_eps)?.norm();
    let noisy_error = f.sub(&sf)?.norm();
    let clean_error = f_eps.sub(&sfe)?.norm();
    // One ulp of headroom per side for the triangle inequality in floating point.
    let slack = 4.0 * f64::EPSILON * (f.norm() + f_eps.norm());
    Ok(LinearBaselineReport {
        k,
        operator_bound,
        projected_diff,
        diff,
        contraction_holds: projected_diff <= operator_bound * diff + slack,
        noisy_error,
        clean_error,
        error_transfer_holds: noisy_error <= clean_error + (operator_bound + 1.0) * diff + slack,
    })
}
