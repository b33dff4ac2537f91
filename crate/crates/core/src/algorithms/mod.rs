//! Greedy algorithm runners.

mod oga;
mod paired;
mod schedule;
mod trace;
mod wga;

pub use oga::{project_residual, run_oga, DEPENDENT_ATOM_TOL};
pub use paired::{run_paired, PairedTrace, ENERGY_SUM_ATOL, IDENTITY_RTOL};
pub(crate) use schedule::check_relaxation;
pub use schedule::{GreedyConfig, WeakSchedule, DEFAULT_RESIDUAL_ATOL};
pub use trace::{IterationRecord, Termination, Trace, TRACE_CSV_HEADER};
pub use wga::{run_wga, wga_step, WgaStep};
