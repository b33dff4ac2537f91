//! Closed-form convergence and stability bounds for the greedy algorithms,
//! and the extremal sequence of `x_m <= x_{m-1}(1 - x_{m-1} v_m)`.

use serde::{Deserialize, Serialize};

use crate::algorithms::{check_relaxation, WeakSchedule};
use crate::error::{Error, Result};

/// `⌊ε⁻²⌋`, the last iteration covered by the noisy bounds.
///
/// Rounds `ε⁻²` to the nearest integer first when it is within `1e-9`
/// relative of one, so `ε = 0.1` yields 100 rather than 99.
pub fn noisy_regime_max(epsilon: f64) -> usize {
    snap(1.0 / (epsilon * epsilon)).floor() as usize
}

pub(crate) fn snap(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.abs() {
        nearest
    } else {
        x
    }
}

/// Clean-signal rate of WGA(τ, b) on `A₁(D)`:
/// `(1 + b(2-b) Σ_{k<=m} t_k²)^{-(2-b) t_m / (2(2 + (2-b) t_m))}`, and 1 at `m = 0`.
pub fn e_m_clean(schedule: &WeakSchedule, b: f64, m: usize) -> Result<f64> {
    check_relaxation(b)?;
    schedule.validate()?;
    if m == 0 {
        return Ok(1.0);
    }
    let sum_sq: f64 = schedule.iter().take(m).map(|t| t * t).sum();
    Ok(clean_rate(b, sum_sq, schedule.t(m)))
}

/// [`e_m_clean`] for `m = 0..=m_max`, accumulated in one pass.
pub fn e_m_clean_series(schedule: &WeakSchedule, b: f64, m_max: usize) -> Result<Vec<f64>> {
    check_relaxation(b)?;
    schedule.validate()?;
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(1.0);
    let mut sum_sq = 0.0;
    for (m, t) in (1..=m_max).zip(schedule.iter()) {
        sum_sq += t * t;
        out.push(clean_rate(b, sum_sq, schedule.t(m)));
    }
    Ok(out)
}

fn clean_rate(b: f64, sum_sq: f64, t_m: f64) -> f64 {
    let c = 2.0 - b;
    let exponent = -(c * t_m) / (2.0 * (2.0 + c * t_m));
    (1.0 + b * c * sum_sq).powf(exponent)
}

/// `β_k = (1 - b/2) h t_k`.
pub fn beta_k(b: f64, h: f64, t_k: f64) -> Result<f64> {
    check_relaxation(b)?;
    check_h(h)?;
    if !(t_k > 0.0 && t_k <= 1.0) {
        return Err(Error::invalid("t", t_k, "a weakness parameter in (0, 1]"));
    }
    Ok(beta_unchecked(b, h, t_k))
}

fn beta_unchecked(b: f64, h: f64, t: f64) -> f64 {
    (1.0 - b / 2.0) * h * t
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("h", h, "a value in (0, 1)"))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", epsilon, "a noise level in (0, 1]"))
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale > 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("B", scale, "a finite value > 0"))
    }
}

/// Inputs of the noisy-signal bound for WGA(τ, b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyBoundParams {
    /// Noise level `ε ∈ (0, 1]`.
    pub epsilon: f64,
    /// `B` with `f^ε / B ∈ A₁(D)`.
    pub scale: f64,
    /// `h ∈ (0, 1)`.
    pub h: f64,
    /// `‖f‖` of the noisy input.
    pub f_norm: f64,
    pub b: f64,
    pub schedule: WeakSchedule,
}

impl NoisyBoundParams {
    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_scale(self.scale)?;
        check_h(self.h)?;
        check_relaxation(self.b)?;
        self.schedule.validate()?;
        if !(self.f_norm > 0.0 && self.f_norm.is_finite()) {
            return Err(Error::invalid("f_norm", self.f_norm, "a finite value > 0"));
        }
        Ok(())
    }

    fn check_m(&self, m: usize) -> Result<()> {
        let max = noisy_regime_max(self.epsilon);
        if m == 0 {
            return Err(Error::invalid("m", 0, "an iteration count >= 1"));
        }
        if m > max {
            return Err(Error::BoundOutOfRegime { m, max });
        }
        Ok(())
    }

    fn bound_from_sum(&self, m: usize, sum_sq: f64) -> f64 {
        let (b, h) = (self.b, self.h);
        let b0 = self.scale + 1.0;
        let beta_1 = beta_unchecked(b, h, self.schedule.t(1));
        let beta_m = beta_unchecked(b, h, self.schedule.t(m));
        let base = (h * self.f_norm / b0).powi(-2) + b * (2.0 - b) * sum_sq;
        let rate = base.powf(-beta_m / (2.0 * (1.0 + beta_m)));
        let second = self.f_norm.powf(1.0 / (1.0 + beta_m)) * b0.powf(beta_1 / (1.0 + beta_m)) * rate;
        (self.epsilon / (1.0 - h)).max(second)
    }
}

/// `max(ε/(1-h), ‖f‖^{1/(1+β_m)} (B+1)^{β_1/(1+β_m)} e_m(τ,b,h))` with
/// `e_m(τ,b,h) = ((h‖f‖/(B+1))⁻² + b(2-b) Σ t_k²)^{-β_m/(2(1+β_m))}`.
///
/// Valid for `1 <= m <= ⌊ε⁻²⌋`.
pub fn noisy_bound(params: &NoisyBoundParams, m: usize) -> Result<f64> {
    params.validate()?;
    params.check_m(m)?;
    let sum_sq: f64 = params.schedule.iter().take(m).map(|t| t * t).sum();
    Ok(params.bound_from_sum(m, sum_sq))
}

/// [`noisy_bound`] for `m = 1..=m_max`; element `i` holds `m = i + 1`.
pub fn noisy_bound_series(params: &NoisyBoundParams, m_max: usize) -> Result<Vec<f64>> {
    params.validate()?;
    if m_max > 0 {
        params.check_m(m_max)?;
    }
    let mut sum_sq = 0.0;
    Ok((1..=m_max)
        .map(|m| {
            let t = params.schedule.t(m);
            sum_sq += t * t;
            params.bound_from_sum(m, sum_sq)
        })
        .collect())
}

/// Constant-schedule form:
/// `max(ε/(1-h), (B+1)(b(2-b) m h² t²)^{-β/(2(1+β))})`, `β = (1 - b/2) h t`.
pub fn noisy_bound_const(t: f64, b: f64, h: f64, epsilon: f64, scale: f64, m: usize) -> Result<f64> {
    let beta = beta_k(b, h, t)?;
    check_epsilon(epsilon)?;
    check_scale(scale)?;
    if m == 0 {
        return Err(Error::invalid("m", 0, "an iteration count >= 1"));
    }
    let max = noisy_regime_max(epsilon);
    if m > max {
        return Err(Error::BoundOutOfRegime { m, max });
    }
    let base = b * (2.0 - b) * m as f64 * h * h * t * t;
    let second = (scale + 1.0) * base.powf(-beta / (2.0 * (1.0 + beta)));
    Ok((epsilon / (1.0 - h)).max(second))
}

/// Exponent `β/(1+β)` of `ε` in the noisy error after `m ≍ ε⁻²` iterations
/// of the constant-schedule algorithm. At `h = 1` it is the clean-signal exponent.
pub fn noisy_rate_exponent(t: f64, b: f64, h: f64) -> f64 {
    let beta = beta_unchecked(b, h, t);
    beta / (1.0 + beta)
}

/// OGA on a noisy signal: `max(2ε, 4(B+ε)(1+m)^{-1/2})`.
pub fn oga_noisy_bound(epsilon: f64, scale: f64, m: usize) -> Result<f64> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon", epsilon, "a finite value >= 0"));
    }
    check_scale(scale)?;
    Ok((2.0 * epsilon).max(4.0 * (scale + epsilon) / (1.0 + m as f64).sqrt()))
}

/// OGA on `A₁(D)`: `m^{-1/2}`.
pub fn oga_clean_bound(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("m", 0, "an iteration count >= 1"));
    }
    Ok(1.0 / (m as f64).sqrt())
}

/// `(C⁻¹ + Σ_{k<=m} v_k)⁻¹`.
pub fn hl1_bound(c: f64, v: &[f64], m: usize) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("C", c, "a finite value > 0"));
    }
    if m > v.len() {
        return Err(Error::invalid("m", m, "at most the length of v"));
    }
    if let Some(bad) = v.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(Error::invalid("v", bad, "finite non-negative entries"));
    }
    let sum: f64 = v[..m].iter().sum();
    Ok(1.0 / (1.0 / c + sum))
}

/// The extremal sequence `x_0 = C`, `x_m = max(0, x_{m-1}(1 - x_{m-1} v_m))`.
pub fn hl1_worst_sequence(c: f64, v: &[f64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(v.len() + 1);
    x.push(c);
    let mut prev = c;
    for vk in v {
        prev = (prev * (1.0 - prev * vk)).max(0.0);
        x.push(prev);
    }
    x
}

/// Iterations after which the clean PGA rate `(1+m)^{-1/6}` drops to `ε`: `⌈ε⁻⁶⌉ - 1`.
pub fn pga_iterations_for_accuracy(epsilon: f64) -> f64 {
    (snap(epsilon.powi(-6)).ceil() - 1.0).max(0.0)
}

/// Iterations after which the OGA rate `m^{-1/2}` drops to `ε`: `⌈ε⁻²⌉`.
pub fn oga_iterations_for_accuracy(epsilon: f64) -> f64 {
    snap(epsilon.powi(-2)).ceil()
}
