//! Greedy approximation over finite dictionaries in `R^n`.
//!
//! * [`selection`]: exact and weak atom selection over `{±g : g ∈ D}`.
//! * [`algorithms`]: WGA(τ, b) (with PGA as `t ≡ 1, b = 1`), weak orthogonal
//!   greedy (OGA), and the paired clean/noisy run.
//! * [`bounds`]: closed-form convergence and noise-stability bounds.
//! * [`experiments`]: certified `A₁(D)` signals, noise, the stability
//!   experiment and small demonstrations.

pub mod algorithms;
pub mod bounds;
pub mod dictionary;
pub mod error;
pub mod experiments;
pub mod selection;
pub mod vector;

pub use algorithms::{
    project_residual, run_oga, run_paired, run_wga, wga_step, GreedyConfig, IterationRecord, PairedTrace, Termination,
    Trace, WeakSchedule,
};
pub use dictionary::{Dictionary, DictionaryFormat};
pub use error::{Error, Result};
pub use selection::{best_atom, weak_atom, AtomSelection, SelectionPolicy};
pub use vector::{inner, Vector};
