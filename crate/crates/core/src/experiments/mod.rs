//! Certified signal synthesis, the stability experiment and demonstrations.

mod demos;
mod generate;
mod stability;

pub use demos::{instability_demo, linear_baseline_demo, InstabilityReport, LinearBaselineReport};
pub use generate::{add_noise, coherent_dictionary, gen_a1_signal, random_unit_dictionary, A1Certificate, NoiseMode};
pub use stability::{
    oga_stability_experiment, stability_experiment, ConfigEcho, OgaStabilityReport, OgaStabilityRow, StabilityReport,
    StabilityRow, StabilitySetup, StabilitySummary, BOUND_SLACK, STABILITY_CSV_HEADER,
};
