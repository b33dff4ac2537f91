//! Seeded generators for dictionaries, certified `A₁(D)` signals and noise.
//!
//! Every generator draws from its own ChaCha8 stream, so one seed can be
//! shared by all of them without correlating their outputs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::vector::{norm, Vector};

const SIGNAL_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;
const DICTIONARY_STREAM: u64 = 3;

/// Mixing weight used by [`coherent_dictionary`]; pairs end up with
/// `|<g, g'>| ≈ 1/sqrt(1 + 0.3²) ≈ 0.96`.
const COHERENT_MIX: f64 = 0.3;

pub(crate) fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit_gaussian(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn check_shape(dim: usize, count: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("dim", dim, "a positive dimension"));
    }
    if count == 0 {
        return Err(Error::invalid("count", count, "a positive atom count"));
    }
    Ok(())
}

/// `count` atoms drawn uniformly from the unit sphere of `R^dim`.
pub fn random_unit_dictionary(dim: usize, count: usize, seed: u64) -> Result<Dictionary> {
    check_shape(dim, count)?;
    let mut rng = seeded(seed, DICTIONARY_STREAM);
    let rows: Vec<Vec<f64>> = (0..count).map(|_| unit_gaussian(&mut rng, dim)).collect();
    Dictionary::from_rows(&rows, format!("random:{count}:{dim}"))
}

/// Random unit atoms where every odd atom is mixed into its even neighbour,
/// producing near-duplicate pairs (mutual coherence above 0.9).
pub fn coherent_dictionary(dim: usize, count: usize, seed: u64) -> Result<Dictionary> {
    check_shape(dim, count)?;
    let mut rng = seeded(seed, DICTIONARY_STREAM);
    let mut rows: Vec<Vec<f64>> = (0..count).map(|_| unit_gaussian(&mut rng, dim)).collect();
    for i in (1..count).step_by(2) {
        let mixed: Vec<f64> = rows[i - 1]
            .iter()
            .zip(&rows[i])
            .map(|(a, b)| a + COHERENT_MIX * b)
            .collect();
        rows[i] = mixed;
    }
    Dictionary::from_rows(&rows, format!("coherent:{count}:{dim}"))
}

/// Certificate that `scale · Σ weights_i signs_i g_{indices_i}` lies in `scale · A₁(D)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A1Certificate {
    pub indices: Vec<usize>,
    pub signs: Vec<i8>,
    pub weights: Vec<f64>,
    pub scale: f64,
}

impl A1Certificate {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Whether the weights certify membership: all non-negative, summing to at most `1 + 1e-12`.
    pub fn is_valid(&self) -> bool {
        self.weights.iter().all(|w| *w >= 0.0) && self.total_weight() <= 1.0 + 1e-12
    }

    pub fn signal(&self, dict: &Dictionary) -> Vector {
        let mut f = Vector::zeros(dict.dim());
        for ((&i, &s), &w) in self.indices.iter().zip(&self.signs).zip(&self.weights) {
            f.axpy(self.scale * w * f64::from(s), dict.atom(i));
        }
        f
    }
}

/// Draws `f^ε = B Σ w_i s_i g_i` over `sparsity` distinct atoms with random
/// signs and weights uniform on the simplex.
pub fn gen_a1_signal(dict: &Dictionary, scale: f64, sparsity: usize, seed: u64) -> Result<(Vector, A1Certificate)> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid("B", scale, "a finite value > 0"));
    }
    if sparsity == 0 || sparsity > dict.len() {
        return Err(Error::invalid(
            "sparsity",
            sparsity,
            "between 1 and the number of atoms",
        ));
    }
    let mut rng = seeded(seed, SIGNAL_STREAM);
    let indices = sample(&mut rng, dict.len(), sparsity).into_vec();
    let signs: Vec<i8> = indices
        .iter()
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    let raw: Vec<f64> = indices.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let sum: f64 = weights.iter().sum();
    if sum > 1.0 {
        weights.iter_mut().for_each(|w| *w /= sum);
    }
    let cert = A1Certificate {
        indices,
        signs,
        weights,
        scale,
    };
    Ok((cert.signal(dict), cert))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// `‖e‖ = ε`, direction uniform on the sphere.
    Exact,
    /// `‖e‖` uniform in `[0, ε]`, direction uniform on the sphere.
    AtMost,
    /// `e = ε · d / ‖d‖` for a fixed direction `d`.
    Directed(Vector),
}

/// Returns `f_clean + e` with `e` drawn according to `mode`.
pub fn add_noise(f_clean: &Vector, epsilon: f64, mode: &NoiseMode, seed: u64) -> Result<Vector> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid("epsilon", epsilon, "a noise level in (0, 1]"));
    }
    let mut rng = seeded(seed, NOISE_STREAM);
    let (direction, radius) = match mode {
        NoiseMode::Exact => (unit_gaussian(&mut rng, f_clean.dim()), epsilon),
        NoiseMode::AtMost => {
            let d = unit_gaussian(&mut rng, f_clean.dim());
            (d, epsilon * rng.random::<f64>())
        }
        NoiseMode::Directed(d) => {
            if d.dim() != f_clean.dim() {
                return Err(Error::DimensionMismatch {
                    expected: f_clean.dim(),
                    found: d.dim(),
                });
            }
            let n = d.norm();
            if n < 1e-12 {
                return Err(Error::invalid("noise direction", n, "a nonzero vector"));
            }
            (d.as_slice().iter().map(|x| x / n).collect(), epsilon)
        }
    };
    let mut f = f_clean.clone();
    f.axpy(radius, &direction);
    Ok(f)
}
