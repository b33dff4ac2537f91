//! The noisy-signal stability experiment: run WGA on `f = f^ε + e` and check
//! the noisy bound at every iteration `m <= ⌊ε⁻²⌋`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algorithms::{run_oga, run_paired, run_wga, GreedyConfig, Termination, WeakSchedule};
use crate::bounds::{
    e_m_clean_series, noisy_bound_series, noisy_rate_exponent, noisy_regime_max, oga_iterations_for_accuracy,
    oga_noisy_bound, pga_iterations_for_accuracy, snap, NoisyBoundParams,
};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::experiments::generate::{add_noise, gen_a1_signal, A1Certificate, NoiseMode};

/// Slack when comparing a residual norm against its bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Header of the stability CSV format.
pub const STABILITY_CSV_HEADER: &str = "m,residual,bound,B_m,delta_norm,ok";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySetup {
    /// `B` with `f^ε / B ∈ A₁(D)`.
    #[serde(rename = "B")]
    pub scale: f64,
    pub sparsity: usize,
    pub epsilon: f64,
    pub h: f64,
    pub noise: NoiseMode,
    pub seed: u64,
}

impl StabilitySetup {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h < 1.0) {
            return Err(Error::invalid("h", self.h, "a value in (0, 1)"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid("epsilon", self.epsilon, "a noise level in (0, 1]"));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::invalid("B", self.scale, "a finite value > 0"));
        }
        if self.sparsity == 0 {
            return Err(Error::invalid("sparsity", 0, "at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub dictionary: String,
    pub dim: usize,
    pub atoms: usize,
    pub setup: StabilitySetup,
    /// Configuration as run, with `max_iter` capped at `⌊ε⁻²⌋`.
    pub config: GreedyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub m: usize,
    /// `‖f_m‖` of the noisy run.
    pub residual: f64,
    /// Noisy bound at `m`.
    pub bound: f64,
    /// `B_0 = B + 1`, `B_m = B_{m-1} + b y_m`.
    #[serde(rename = "B_m")]
    pub b_m: f64,
    /// `‖δ_m‖ = ‖f_m - f^ε_m‖`.
    pub delta_norm: f64,
    /// `B + b Σ |<f^ε_{k-1}, φ_k>|`, an upper bound on `‖f^ε_m‖_{A₁(D)}`.
    pub a1_upper: f64,
    /// `‖f^ε_m‖` of the clean sequence driven by the noisy atoms.
    pub paired_clean_residual: f64,
    /// `‖(f^ε)_m‖` of WGA run directly on `f^ε`.
    pub clean_residual: f64,
    /// `B · e_m(τ, b)`.
    pub clean_bound: f64,
    pub ok: bool,
    pub clean_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilitySummary {
    pub noisy_norm: f64,
    pub clean_norm: f64,
    pub noise_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
    pub regime_max: usize,
    /// Largest `residual - bound`; negative when every row has margin.
    pub max_violation: Option<f64>,
    pub all_satisfied: bool,
    pub clean_all_satisfied: bool,
    /// `a1_upper <= B_m` at every row.
    pub a1_tracking_ok: bool,
    pub delta_inner_sq_sum: f64,
    /// `[⌈(2ε)⁻²⌉, ⌊ε⁻²⌋]`.
    pub window: (usize, usize),
    pub window_max_residual: f64,
    /// `β/(1+β)` with `β = (1 - b/2) h t_m` at the window end.
    pub noisy_exponent: f64,
    /// `window_max_residual / ε^{noisy_exponent}`.
    pub noisy_constant: f64,
    pub window_max_clean_residual: f64,
    /// `β/(1+β)` at `h = 1`.
    pub clean_exponent: f64,
    pub clean_constant: f64,
    /// Iterations for the clean PGA rate to reach `ε`.
    pub pga_iterations_for_eps: f64,
    /// Iterations for the OGA rate to reach `ε`.
    pub oga_iterations_for_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub config: ConfigEcho,
    pub certificate: A1Certificate,
    pub rows: Vec<StabilityRow>,
    pub summary: StabilitySummary,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.summary.all_satisfied && self.summary.a1_tracking_ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(STABILITY_CSV_HEADER);
        out.push('\n');
        self.write_csv_rows(&mut out, None);
        out
    }

    /// Appends rows, optionally prefixed by a trial column.
    pub fn write_csv_rows(&self, out: &mut String, trial: Option<usize>) {
        for r in &self.rows {
            if let Some(t) = trial {
                write!(out, "{t},").unwrap();
            }
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.m, r.residual, r.bound, r.b_m, r.delta_norm, r.ok
            )
            .unwrap();
        }
    }
}

fn window(epsilon: f64) -> (usize, usize) {
    let hi = noisy_regime_max(epsilon);
    let lo = snap(0.25 / (epsilon * epsilon)).ceil() as usize;
    (lo.clamp(1, hi.max(1)), hi)
}

pub fn stability_experiment(
    dict: &Dictionary,
    setup: &StabilitySetup,
    config: &GreedyConfig,
) -> Result<StabilityReport> {
    setup.validate()?;
    config.validate()?;
    let regime_max = noisy_regime_max(setup.epsilon);
    let config = config.clone().with_max_iter(config.max_iter.min(regime_max));

    let (f_clean, certificate) = gen_a1_signal(dict, setup.scale, setup.sparsity, setup.seed)?;
    let f = add_noise(&f_clean, setup.epsilon, &setup.noise, setup.seed)?;
    let noise = f.sub(&f_clean)?;

    let paired = run_paired(&f_clean, &noise, dict, &config)?;
    let clean_run = run_wga(&f_clean, dict, &config)?;
    let noisy = &paired.noisy;
    let iterations = noisy.iterations();

    let bounds = if iterations > 0 {
        let params = NoisyBoundParams {
            epsilon: setup.epsilon,
            scale: setup.scale,
            h: setup.h,
            f_norm: noisy.initial_norm,
            b: config.b,
            schedule: config.schedule.clone(),
        };
        noisy_bound_series(&params, iterations)?
    } else {
        Vec::new()
    };
    let clean_rates = e_m_clean_series(&config.schedule, config.b, iterations)?;

    let mut rows = Vec::with_capacity(iterations);
    let mut b_m = setup.scale + 1.0;
    let mut a1_upper = setup.scale;
    for (i, record) in noisy.records.iter().enumerate() {
        let m = i + 1;
        b_m += config.b * record.y_m;
        a1_upper += config.b * paired.clean_coeffs[i].abs();
        let bound = bounds[i];
        let clean_residual = clean_run.residual_norm_at(m);
        let clean_bound = setup.scale * clean_rates[m];
        rows.push(StabilityRow {
            m,
            residual: record.residual_norm,
            bound,
            b_m,
            delta_norm: paired.delta_norms[m],
            a1_upper,
            paired_clean_residual: paired.clean_residual_norms[m],
            clean_residual,
            clean_bound,
            ok: record.residual_norm <= bound + BOUND_SLACK,
            clean_ok: clean_residual <= clean_bound + BOUND_SLACK,
        });
    }

    let (lo, hi) = window(setup.epsilon);
    let window_max = |norm_at: &dyn Fn(usize) -> f64| (lo..=hi).map(norm_at).fold(0.0_f64, f64::max);
    let window_max_residual = window_max(&|m| noisy.residual_norm_at(m));
    let window_max_clean_residual = window_max(&|m| clean_run.residual_norm_at(m));
    let t_end = config.schedule.t(hi.max(1));
    let noisy_exponent = noisy_rate_exponent(t_end, config.b, setup.h);
    let clean_exponent = noisy_rate_exponent(t_end, config.b, 1.0);

    let summary = StabilitySummary {
        noisy_norm: noisy.initial_norm,
        clean_norm: f_clean.norm(),
        noise_norm: noise.norm(),
        iterations,
        termination: noisy.termination,
        regime_max,
        max_violation: rows.iter().map(|r| r.residual - r.bound).reduce(f64::max),
        all_satisfied: rows.iter().all(|r| r.ok),
        clean_all_satisfied: rows.iter().all(|r| r.clean_ok),
        a1_tracking_ok: rows.iter().all(|r| r.a1_upper <= r.b_m + BOUND_SLACK),
        delta_inner_sq_sum: paired.delta_inner_sq_sum,
        window: (lo, hi),
        window_max_residual,
        noisy_exponent,
        noisy_constant: window_max_residual / setup.epsilon.powf(noisy_exponent),
        window_max_clean_residual,
        clean_exponent,
        clean_constant: window_max_clean_residual / setup.epsilon.powf(clean_exponent),
        pga_iterations_for_eps: pga_iterations_for_accuracy(setup.epsilon),
        oga_iterations_for_eps: oga_iterations_for_accuracy(setup.epsilon),
    };

    Ok(StabilityReport {
        config: ConfigEcho {
            dictionary: dict.label().to_string(),
            dim: dict.dim(),
            atoms: dict.len(),
            setup: setup.clone(),
            config,
        },
        certificate,
        rows,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OgaStabilityRow {
    pub m: usize,
    pub residual: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OgaStabilityReport {
    pub termination: Termination,
    pub rows: Vec<OgaStabilityRow>,
    pub all_satisfied: bool,
}

/// OGA counterpart of [`stability_experiment`]: checks
/// `‖f_m‖ <= max(2ε, 4(B+ε)(1+m)^{-1/2})` at every iteration. The bound has
/// no iteration cap, so `config.max_iter` is used as given. The schedule is
/// forced to `t ≡ 1`.
pub fn oga_stability_experiment(
    dict: &Dictionary,
    setup: &StabilitySetup,
    config: &GreedyConfig,
) -> Result<OgaStabilityReport> {
    setup.validate()?;
    let config = config.clone().with_schedule(WeakSchedule::Constant { t: 1.0 });
    let (f_clean, _) = gen_a1_signal(dict, setup.scale, setup.sparsity, setup.seed)?;
    let f = add_noise(&f_clean, setup.epsilon, &setup.noise, setup.seed)?;
    let trace = run_oga(&f, dict, &config)?;
    let rows = trace
        .records
        .iter()
        .map(|r| {
            let bound = oga_noisy_bound(setup.epsilon, setup.scale, r.m)?;
            Ok(OgaStabilityRow {
                m: r.m,
                residual: r.residual_norm,
                bound,
                ok: r.residual_norm <= bound + BOUND_SLACK,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OgaStabilityReport {
        termination: trace.termination,
        all_satisfied: rows.iter().all(|r| r.ok),
        rows,
    })
}
