//! Noisy WGA run with its companion clean sequence.
//!
//! The atoms `φ_k` are chosen from the noisy residuals `f_{k-1}`. The clean
//! sequence reuses them with its own coefficients,
//! `f^ε_k = f^ε_{k-1} - b <f^ε_{k-1}, φ_k> φ_k`, so the difference
//! `δ_k = f_k - f^ε_k` obeys `δ_k = δ_{k-1} - b <δ_{k-1}, φ_k> φ_k` and
//!
//! * `‖δ_k‖² = ‖δ_{k-1}‖² - b(2-b) <δ_{k-1}, φ_k>²`,
//! * `‖δ_k‖ <= ‖δ_{k-1}‖`,
//! * `b(2-b) Σ_j <δ_{j-1}, φ_j>² <= ‖δ_0‖²`.
//!
//! These are exact identities; a violation is reported as an error.

use crate::algorithms::schedule::GreedyConfig;
use crate::algorithms::trace::Trace;
use crate::algorithms::wga::drive_wga;
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::vector::{dot, Vector};

/// Relative tolerance of the δ identities.
pub const IDENTITY_RTOL: f64 = 1e-10;

/// Absolute slack of the summed-energy inequality.
pub const ENERGY_SUM_ATOL: f64 = 1e-10;

// Per-iteration rounding allowance for quantities formed by differencing
// two O(‖f‖) vectors.
const ROUNDING_PER_STEP: f64 = 16.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct PairedTrace {
    /// WGA run on `f = f^ε + noise`.
    pub noisy: Trace,
    /// `‖f^ε_k‖` for `k = 0..=m`.
    pub clean_residual_norms: Vec<f64>,
    /// `<f^ε_{k-1}, φ_k>` for `k = 1..=m`.
    pub clean_coeffs: Vec<f64>,
    /// `‖δ_k‖` for `k = 0..=m`.
    pub delta_norms: Vec<f64>,
    /// `b(2-b) Σ_{j<=m} <δ_{j-1}, φ_j>²`.
    pub delta_inner_sq_sum: f64,
    /// Final clean residual `f^ε_m`.
    pub clean_residual: Vector,
}

pub fn run_paired(f_clean: &Vector, noise: &Vector, dict: &Dictionary, config: &GreedyConfig) -> Result<PairedTrace> {
    dict.check_signal(f_clean)?;
    dict.check_signal(noise)?;
    let delta0_norm = noise.norm();
    if delta0_norm > 1.0 + 1e-12 {
        return Err(Error::invalid("noise norm", delta0_norm, "at most 1"));
    }

    let f = f_clean.add(noise)?;
    let b = config.b;
    let energy = b * (2.0 - b);
    let scale = f.norm() + f_clean.norm();

    let mut clean = f_clean.clone();
    let mut delta = f.sub(f_clean)?;
    let mut clean_residual_norms = vec![clean.norm()];
    let mut clean_coeffs = Vec::new();
    let mut delta_norms = vec![delta.norm()];
    let mut delta_inner_sq_sum = 0.0;

    let noisy = drive_wga(&f, dict, config, |k, step| {
        let sign = step.selection.sign_f64();
        let atom = dict.atom(step.selection.index);

        let clean_coeff = sign * dot(clean.as_slice(), atom);
        clean.axpy(-b * clean_coeff * sign, atom);

        let delta_prev_sq = delta.norm_sq();
        let delta_prev_norm = delta_prev_sq.sqrt();
        let proj = sign * dot(delta.as_slice(), atom);
        delta = step.residual.sub(&clean)?;
        let delta_sq = delta.norm_sq();
        let delta_norm = delta_sq.sqrt();

        let rounding = ROUNDING_PER_STEP * k as f64 * scale;
        let expected = delta_prev_sq - energy * proj * proj;
        let tol = IDENTITY_RTOL * delta0_norm * delta0_norm + rounding * delta0_norm;
        if (delta_sq - expected).abs() > tol {
            return Err(Error::InvariantViolation {
                iteration: k,
                identity: "energy recursion of delta",
                lhs: delta_sq,
                rhs: expected,
            });
        }
        if delta_norm > delta_prev_norm + IDENTITY_RTOL * delta0_norm + rounding {
            return Err(Error::InvariantViolation {
                iteration: k,
                identity: "monotone delta norm",
                lhs: delta_norm,
                rhs: delta_prev_norm,
            });
        }
        delta_inner_sq_sum += energy * proj * proj;
        if delta_inner_sq_sum > delta0_norm * delta0_norm + ENERGY_SUM_ATOL {
            return Err(Error::InvariantViolation {
                iteration: k,
                identity: "summed delta energy",
                lhs: delta_inner_sq_sum,
                rhs: delta0_norm * delta0_norm,
            });
        }

        clean_coeffs.push(clean_coeff);
        clean_residual_norms.push(clean.norm());
        delta_norms.push(delta_norm);
        Ok(())
    })?;

    Ok(PairedTrace {
        noisy,
        clean_residual_norms,
        clean_coeffs,
        delta_norms,
        delta_inner_sq_sum,
        clean_residual: clean,
    })
}
