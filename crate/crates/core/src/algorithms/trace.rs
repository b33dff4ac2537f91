use std::fmt::Write as _;

use serde::Serialize;

use crate::dictionary::Dictionary;
use crate::vector::Vector;

/// Header of the trace CSV format.
pub const TRACE_CSV_HEADER: &str = "iter,atom_index,sign,y,coeff,residual_norm";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxIter,
    ResidualBelowAtol,
    /// Every atom is orthogonal to the residual.
    OrthogonalResidual,
    /// The selected atom lies numerically inside the current span (OGA only).
    DependentAtom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    /// 1-based iteration index.
    #[serde(rename = "iter")]
    pub m: usize,
    pub atom_index: usize,
    pub sign: i8,
    /// `<f_{m-1}, φ_m>` for the signed atom `φ_m`; never negative.
    #[serde(rename = "y")]
    pub y_m: f64,
    /// Coefficient applied this step: `b * y_m` for WGA, `<f_{m-1}, u_m>` along
    /// the new orthonormal direction for OGA.
    pub coeff: f64,
    pub residual_norm: f64,
}

/// Result of running a greedy algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub initial_norm: f64,
    pub termination: Termination,
    pub records: Vec<IterationRecord>,
    /// Final residual `f_m`.
    #[serde(skip)]
    pub residual: Vector,
    /// Final coefficient of `sign_j * g_{index_j}` in the approximant, one per record.
    #[serde(skip)]
    pub expansion: Vec<f64>,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// `‖f_m‖` for `m = 0..=iterations()`.
    pub fn residual_norms(&self) -> Vec<f64> {
        std::iter::once(self.initial_norm)
            .chain(self.records.iter().map(|r| r.residual_norm))
            .collect()
    }

    /// `‖f_m‖`, holding the final value once the run has stopped.
    pub fn residual_norm_at(&self, m: usize) -> f64 {
        match m {
            0 => self.initial_norm,
            _ => self
                .records
                .get(m - 1)
                .or(self.records.last())
                .map_or(self.initial_norm, |r| r.residual_norm),
        }
    }

    /// `Σ_j expansion_j · sign_j · g_{index_j}`.
    pub fn approximant(&self, dict: &Dictionary) -> Vector {
        let mut g = Vector::zeros(dict.dim());
        for (record, coeff) in self.records.iter().zip(&self.expansion) {
            g.axpy(coeff * f64::from(record.sign), dict.atom(record.atom_index));
        }
        g
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{:.16e},{:.16e},{:.16e}",
                r.m, r.atom_index, r.sign, r.y_m, r.coeff, r.residual_norm
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}
