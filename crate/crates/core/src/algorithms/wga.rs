//! Weak Greedy Algorithm with relaxation, WGA(τ, b). The Pure Greedy
//! Algorithm is the instance `t ≡ 1`, `b = 1` with exact maximization.

use crate::algorithms::schedule::{check_relaxation, GreedyConfig};
use crate::algorithms::trace::{IterationRecord, Termination, Trace};
use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::selection::{weak_atom, AtomSelection, SelectionPolicy};
use crate::vector::Vector;

/// One WGA iteration: `f_m = f_{m-1} - b <f_{m-1}, φ_m> φ_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WgaStep {
    pub residual: Vector,
    pub selection: AtomSelection,
    /// `y_m = <f_{m-1}, φ_m>`.
    pub y: f64,
    /// `b * y_m`.
    pub coeff: f64,
    pub residual_norm: f64,
}

impl WgaStep {
    /// Every atom is orthogonal to `f_{m-1}`; the residual was left unchanged.
    pub fn is_stalled(&self) -> bool {
        self.y == 0.0
    }

    pub(crate) fn record(&self, m: usize) -> IterationRecord {
        IterationRecord {
            m,
            atom_index: self.selection.index,
            sign: self.selection.sign,
            y_m: self.y,
            coeff: self.coeff,
            residual_norm: self.residual_norm,
        }
    }
}

pub fn wga_step(f_prev: &Vector, dict: &Dictionary, t_m: f64, b: f64, policy: SelectionPolicy) -> Result<WgaStep> {
    check_relaxation(b)?;
    let selection = weak_atom(f_prev, dict, t_m, policy)?;
    let y = selection.value;
    if y == 0.0 {
        return Ok(WgaStep {
            residual: f_prev.clone(),
            selection,
            y,
            coeff: 0.0,
            residual_norm: f_prev.norm(),
        });
    }
    let coeff = b * y;
    let mut residual = f_prev.clone();
    residual.axpy(-coeff * selection.sign_f64(), dict.atom(selection.index));
    let residual_norm = residual.norm();
    Ok(WgaStep {
        residual,
        selection,
        y,
        coeff,
        residual_norm,
    })
}

pub fn run_wga(f: &Vector, dict: &Dictionary, config: &GreedyConfig) -> Result<Trace> {
    drive_wga(f, dict, config, |_, _| Ok(()))
}

/// Runs WGA and hands every applied step to `observe` before continuing.
pub(crate) fn drive_wga<F>(f: &Vector, dict: &Dictionary, config: &GreedyConfig, mut observe: F) -> Result<Trace>
where
    F: FnMut(usize, &WgaStep) -> Result<()>,
{
    config.validate()?;
    dict.check_signal(f)?;

    let initial_norm = f.norm();
    let mut residual = f.clone();
    let mut records = Vec::new();
    let mut termination = Termination::MaxIter;

    if initial_norm <= config.residual_atol {
        termination = Termination::ResidualBelowAtol;
    } else {
        for m in 1..=config.max_iter {
            let step = wga_step(&residual, dict, config.schedule.t(m), config.b, config.policy)?;
            if step.is_stalled() {
                termination = Termination::OrthogonalResidual;
                break;
            }
            observe(m, &step)?;
            records.push(step.record(m));
            residual = step.residual;
            if step.residual_norm <= config.residual_atol {
                termination = Termination::ResidualBelowAtol;
                break;
            }
        }
    }

    let expansion = records.iter().map(|r| r.coeff).collect();
    Ok(Trace {
        initial_norm,
        termination,
        records,
        residual,
        expansion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn step_examples() {
        let d = Dictionary::orthonormal(2);
        let f = v(&[0.6, 0.8]);

        let s = wga_step(&f, &d, 1.0, 1.0, SelectionPolicy::Max).unwrap();
        assert_eq!(s.residual.as_slice(), &[0.6, 0.0]);
        assert_eq!(s.y, 0.8);

        let s = wga_step(&f, &d, 1.0, 0.5, SelectionPolicy::Max).unwrap();
        assert_eq!(s.residual.as_slice(), &[0.6, 0.4]);
        assert_eq!(s.y, 0.8);
        assert!((s.residual.norm_sq() - 0.52).abs() < 1e-15);

        let z = v(&[0.0, 0.0]);
        let s = wga_step(&z, &d, 1.0, 1.0, SelectionPolicy::Max).unwrap();
        assert!(s.is_stalled());
        assert_eq!(s.residual, z);
    }

    #[test]
    fn step_rejects_bad_relaxation() {
        let d = Dictionary::orthonormal(2);
        let err = wga_step(&v(&[1.0, 0.0]), &d, 1.0, 1.5, SelectionPolicy::Max).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "b", .. }));
    }

    #[test]
    fn run_examples() {
        let d = Dictionary::orthonormal(2);
        let f = v(&[0.6, 0.8]);

        let tr = run_wga(&f, &d, &GreedyConfig::pga(2)).unwrap();
        let norms: Vec<f64> = tr.records.iter().map(|r| r.residual_norm).collect();
        assert_eq!(norms, vec![0.6, 0.0]);
        assert_eq!(tr.termination, Termination::ResidualBelowAtol);

        let tr = run_wga(&f, &d, &GreedyConfig::wga(1.0, 0.5, 1)).unwrap();
        assert_eq!(tr.iterations(), 1);
        assert!((tr.records[0].residual_norm - 0.52_f64.sqrt()).abs() < 1e-15);
        assert!((tr.records[0].residual_norm - 0.7211).abs() < 1e-4);
        assert_eq!(tr.termination, Termination::MaxIter);
    }

    #[test]
    fn atom_signal_recovered_in_one_step() {
        let d = Dictionary::from_rows(&[[1.0, 2.0, 2.0], [0.0, 1.0, 0.0], [1.0, 0.0, -1.0]], "x").unwrap();
        for i in 0..d.len() {
            let tr = run_wga(&d.atom_vector(i), &d, &GreedyConfig::pga(10)).unwrap();
            assert_eq!(tr.iterations(), 1);
            assert_eq!(tr.records[0].atom_index, i);
            assert!(tr.records[0].residual_norm <= 1e-15);
        }
    }

    #[test]
    fn zero_signal_does_not_iterate() {
        let d = Dictionary::orthonormal(3);
        let tr = run_wga(&Vector::zeros(3), &d, &GreedyConfig::pga(5)).unwrap();
        assert!(tr.records.is_empty());
        assert_eq!(tr.termination, Termination::ResidualBelowAtol);
    }

    #[test]
    fn orthogonal_residual_terminates() {
        // Dictionary does not span R^2.
        let d = Dictionary::from_rows(&[[1.0, 0.0]], "e1").unwrap();
        let tr = run_wga(&v(&[0.5, 1.0]), &d, &GreedyConfig::pga(5)).unwrap();
        assert_eq!(tr.iterations(), 1);
        assert_eq!(tr.termination, Termination::OrthogonalResidual);
        assert_eq!(tr.residual.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn invalid_config_fails_before_iterating() {
        let d = Dictionary::orthonormal(2);
        assert!(run_wga(&v(&[1.0, 0.0]), &d, &GreedyConfig::wga(1.0, 2.0, 3)).is_err());
        assert!(matches!(
            run_wga(&v(&[1.0, 0.0, 0.0]), &d, &GreedyConfig::pga(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
