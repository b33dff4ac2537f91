//! Greedy and weak-greedy atom selection over the symmetrized dictionary.

use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::vector::{dot, Vector};

/// Slack allowed when comparing a selected value against `t * sup`.
pub const SELECTION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionPolicy {
    /// Always take the maximizer.
    #[default]
    Max,
    /// Take the lowest-indexed signed atom that clears `t * sup`.
    ThresholdFirst,
}

/// A signed atom `sign * g_index` and the inner product it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSelection {
    pub index: usize,
    pub sign: i8,
    /// `<f, sign * g_index>`, never negative.
    pub value: f64,
    /// `max_g |<f, g>|` over the dictionary.
    pub sup_value: f64,
}

impl AtomSelection {
    pub fn sign_f64(&self) -> f64 {
        f64::from(self.sign)
    }
}

fn signed(index: usize, c: f64, sup_value: f64) -> AtomSelection {
    // Zero inner products resolve to the positive sign.
    let sign = if c < 0.0 { -1 } else { 1 };
    AtomSelection {
        index,
        sign,
        value: c.abs(),
        sup_value,
    }
}

/// Exact maximizer of `<f, ±g>`; ties go to the lowest index, then sign +1.
///
/// # Panics
/// If `f` and the dictionary have different dimensions.
pub fn best_atom(f: &Vector, dict: &Dictionary) -> AtomSelection {
    assert_eq!(f.dim(), dict.dim(), "signal/dictionary dimension mismatch");
    let x = f.as_slice();
    let mut best_index = 0;
    let mut best_c = dot(x, dict.atom(0));
    for (i, atom) in dict.atoms().enumerate().skip(1) {
        let c = dot(x, atom);
        if c.abs() > best_c.abs() {
            best_index = i;
            best_c = c;
        }
    }
    signed(best_index, best_c, best_c.abs())
}

/// Weak selection: any signed atom with `<f, φ> >= t * sup` is admissible;
/// `policy` decides which one is returned.
pub fn weak_atom(f: &Vector, dict: &Dictionary, t: f64, policy: SelectionPolicy) -> Result<AtomSelection> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::invalid("t", t, "a weakness parameter in (0, 1]"));
    }
    dict.check_signal(f)?;
    match policy {
        SelectionPolicy::Max => Ok(best_atom(f, dict)),
        SelectionPolicy::ThresholdFirst => {
            let x = f.as_slice();
            let products: Vec<f64> = dict.atoms().map(|g| dot(x, g)).collect();
            let sup_value = products.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
            let threshold = t * sup_value;
            let index = products
                .iter()
                .position(|c| c.abs() >= threshold)
                .expect("the maximizer always clears the threshold");
            Ok(signed(index, products[index], sup_value))
        }
    }
}
