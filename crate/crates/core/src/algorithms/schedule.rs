use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::selection::SelectionPolicy;

pub const DEFAULT_RESIDUAL_ATOL: f64 = 1e-12;

/// The weakness sequence `t_1 >= t_2 >= ...` with entries in `(0, 1]`.
///
/// Explicit schedules are extended past their end by repeating the last value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeakSchedule {
    Constant { t: f64 },
    Explicit { values: Vec<f64> },
}

impl WeakSchedule {
    pub fn constant(t: f64) -> Result<Self> {
        check_weakness(t)?;
        Ok(WeakSchedule::Constant { t })
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("schedule", "[]", "at least one value"));
        }
        for &t in &values {
            check_weakness(t)?;
        }
        if let Some(w) = values.windows(2).find(|w| w[1] > w[0]) {
            return Err(Error::invalid(
                "schedule",
                format!("{} followed by {}", w[0], w[1]),
                "a nonincreasing sequence",
            ));
        }
        Ok(WeakSchedule::Explicit { values })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeakSchedule::Constant { t } => check_weakness(*t),
            WeakSchedule::Explicit { values } => Self::explicit(values.clone()).map(|_| ()),
        }
    }

    /// `t_k` for the 1-based iteration index `k`.
    pub fn t(&self, k: usize) -> f64 {
        assert!(k >= 1, "schedule is indexed from 1");
        match self {
            WeakSchedule::Constant { t } => *t,
            WeakSchedule::Explicit { values } => values[(k - 1).min(values.len() - 1)],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (1..).map(move |k| self.t(k))
    }
}

fn check_weakness(t: f64) -> Result<()> {
    if t > 0.0 && t <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("t", t, "a weakness parameter in (0, 1]"))
    }
}

pub(crate) fn check_relaxation(b: f64) -> Result<()> {
    if b > 0.0 && b <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("b", b, "a relaxation parameter in (0, 1]"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreedyConfig {
    pub b: f64,
    pub schedule: WeakSchedule,
    pub policy: SelectionPolicy,
    pub max_iter: usize,
    pub residual_atol: f64,
}

impl GreedyConfig {
    /// Pure Greedy Algorithm: `t = 1`, `b = 1`, exact maximization.
    pub fn pga(max_iter: usize) -> Self {
        Self::wga(1.0, 1.0, max_iter)
    }

    /// Constant-schedule WGA(t, b) with the `max` policy.
    pub fn wga(t: f64, b: f64, max_iter: usize) -> Self {
        GreedyConfig {
            b,
            schedule: WeakSchedule::Constant { t },
            policy: SelectionPolicy::Max,
            max_iter,
            residual_atol: DEFAULT_RESIDUAL_ATOL,
        }
    }

    pub fn with_policy(mut self, policy: SelectionPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_schedule(mut self, schedule: WeakSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_relaxation(self.b)?;
        self.schedule.validate()?;
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", 0, "a positive iteration count"));
        }
        if !(self.residual_atol >= 0.0 && self.residual_atol.is_finite()) {
            return Err(Error::invalid(
                "residual_atol",
                self.residual_atol,
                "a finite value >= 0",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_schedule_extends_last_value() {
        let s = WeakSchedule::explicit(vec![1.0, 0.8, 0.5]).unwrap();
        let head: Vec<f64> = s.iter().take(5).collect();
        assert_eq!(head, vec![1.0, 0.8, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn schedule_validation() {
        assert!(WeakSchedule::explicit(vec![0.5, 0.8]).is_err());
        assert!(WeakSchedule::explicit(vec![]).is_err());
        assert!(WeakSchedule::explicit(vec![1.0, 0.0]).is_err());
        assert!(WeakSchedule::constant(1.2).is_err());
        assert!(WeakSchedule::constant(1.0).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(GreedyConfig::pga(10).validate().is_ok());
        let err = GreedyConfig::wga(1.0, 1.5, 10).validate().unwrap_err();
        assert!(err.to_string().contains("(0, 1]"), "{err}");
        assert!(GreedyConfig::wga(1.0, 0.0, 10).validate().is_err());
        assert!(GreedyConfig::pga(0).validate().is_err());
        let mut c = GreedyConfig::pga(1);
        c.residual_atol = -1.0;
        assert!(c.validate().is_err());
    }
}
