//! Fixtures shared by the benchmarks.

use greedy_core::experiments::{gen_a1_signal, random_unit_dictionary};
use greedy_core::{Dictionary, Vector};

/// A random unit dictionary with `4 * dim` atoms and a certified signal over it.
pub fn random_problem(dim: usize, seed: u64) -> (Dictionary, Vector) {
    let dict = random_unit_dictionary(dim, 4 * dim, seed).expect("valid shape");
    let (f, _) = gen_a1_signal(&dict, 1.0, 8.min(dict.len()), seed).expect("valid sparsity");
    (dict, f)
}
