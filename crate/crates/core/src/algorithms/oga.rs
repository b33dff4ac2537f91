//! Weak Orthogonal Greedy Algorithm. Selected atoms are orthonormalized
//! incrementally (modified Gram–Schmidt, two passes) and the residual is the
//! projection of the original signal onto the complement of their span.

use crate::algorithms::schedule::GreedyConfig;
use crate::algorithms::trace::{IterationRecord, Termination, Trace};
use crate::dictionary::Dictionary;
use crate::error::Result;
use crate::selection::weak_atom;
use crate::vector::{axpy, dot, norm, Vector};

/// An orthogonalized direction shorter than this marks the atom as dependent.
pub const DEPENDENT_ATOM_TOL: f64 = 1e-10;

/// `f0 - Σ <·, u_j> u_j` applied sequentially over an orthonormal basis.
///
/// # Panics
/// If a basis vector's dimension differs from `f0`'s.
pub fn project_residual(f0: &Vector, basis: &[Vector]) -> Vector {
    let mut r = f0.clone();
    for u in basis {
        assert_eq!(u.dim(), f0.dim(), "basis/signal dimension mismatch");
        let c = dot(r.as_slice(), u.as_slice());
        r.axpy(-c, u.as_slice());
    }
    r
}

fn project_out(f0: &Vector, basis: &[Vec<f64>]) -> Vector {
    let mut r = f0.clone();
    for u in basis {
        let c = dot(r.as_slice(), u);
        r.axpy(-c, u);
    }
    r
}

pub fn run_oga(f: &Vector, dict: &Dictionary, config: &GreedyConfig) -> Result<Trace> {
    config.validate()?;
    dict.check_signal(f)?;

    let initial_norm = f.norm();
    let mut residual = f.clone();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    // Column j holds the coordinates of φ_j in the orthonormal basis.
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut records = Vec::new();
    let mut termination = Termination::MaxIter;

    if initial_norm <= config.residual_atol {
        termination = Termination::ResidualBelowAtol;
    } else {
        for m in 1..=config.max_iter {
            let selection = weak_atom(&residual, dict, config.schedule.t(m), config.policy)?;
            let y = selection.value;
            if y == 0.0 {
                termination = Termination::OrthogonalResidual;
                break;
            }

            let mut direction: Vec<f64> = dict
                .atom(selection.index)
                .iter()
                .map(|x| selection.sign_f64() * x)
                .collect();
            let mut r_col = vec![0.0; basis.len()];
            for _ in 0..2 {
                for (u, r) in basis.iter().zip(r_col.iter_mut()) {
                    let c = dot(&direction, u);
                    axpy(&mut direction, -c, u);
                    *r += c;
                }
            }
            let len = norm(&direction);
            if len < DEPENDENT_ATOM_TOL {
                termination = Termination::DependentAtom;
                break;
            }
            direction.iter_mut().for_each(|x| *x /= len);
            r_col.push(len);

            let coeff = dot(residual.as_slice(), &direction);
            basis.push(direction);
            r_cols.push(r_col);
            residual = project_out(f, &basis);
            let residual_norm = residual.norm();
            records.push(IterationRecord {
                m,
                atom_index: selection.index,
                sign: selection.sign,
                y_m: y,
                coeff,
                residual_norm,
            });
            if residual_norm <= config.residual_atol {
                termination = Termination::ResidualBelowAtol;
                break;
            }
        }
    }

    let expansion = atom_coefficients(f, &basis, &r_cols);
    Ok(Trace {
        initial_norm,
        termination,
        records,
        residual,
        expansion,
    })
}

/// Solves `R a = Uᵀ f` by back substitution, giving the projection of `f`
/// in terms of the selected signed atoms.
fn atom_coefficients(f: &Vector, basis: &[Vec<f64>], r_cols: &[Vec<f64>]) -> Vec<f64> {
    let n = basis.len();
    let mut a: Vec<f64> = basis.iter().map(|u| dot(f.as_slice(), u)).collect();
    for j in (0..n).rev() {
        a[j] /= r_cols[j][j];
        let aj = a[j];
        for (i, ai) in a.iter_mut().enumerate().take(j) {
            *ai -= r_cols[j][i] * aj;
        }
    }
    a
}
