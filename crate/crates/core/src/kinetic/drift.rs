use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `x^e` with the exponents that dominate in practice short-circuited.
#[inline]
pub(crate) fn pow_fast(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        x
    } else if e == 0.5 {
        x.sqrt()
    } else {
        x.powf(e)
    }
}

/// Asymptotic power-law profile `f(t, y) ~ ρ t^γ y^α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLaw {
    pub rho: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl PowerLaw {
    pub fn new(rho: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::param(format!("ρ must be > 0, got {rho}")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("α must be >= 0, got {alpha}")));
        }
        if !(gamma.is_finite() && alpha + gamma > 0.0) {
            return Err(Error::param(format!("need α + γ > 0, got α={alpha}, γ={gamma}")));
        }
        Ok(Self { rho, gamma, alpha })
    }

    pub fn beta(&self) -> f64 {
        self.alpha + self.gamma
    }
}

pub type DriftFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// The drift function `f(t, y) >= 0` feeding `2f + 1` into the `S` equation.
#[derive(Clone)]
pub enum DriftField {
    /// `ρ t^γ y^α`. Requires γ >= 0 so the value at `t = 0` is finite.
    ExactPowerLaw(PowerLaw),
    /// `ρ (1+t)^γ (1+y)^α`.
    SmoothedPowerLaw(PowerLaw),
    /// Caller-supplied `f`, optionally declaring the power law it is meant to
    /// approach so [`check_af`] can test it.
    Custom {
        f: Arc<DriftFn>,
        declared: Option<PowerLaw>,
    },
}

impl fmt::Debug for DriftField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriftField::ExactPowerLaw(p) => f.debug_tuple("ExactPowerLaw").field(p).finish(),
            DriftField::SmoothedPowerLaw(p) => f.debug_tuple("SmoothedPowerLaw").field(p).finish(),
            DriftField::Custom { declared, .. } => {
                f.debug_struct("Custom").field("declared", declared).finish_non_exhaustive()
            }
        }
    }
}

impl DriftField {
    pub fn exact(rho: f64, gamma: f64, alpha: f64) -> Result<Self> {
        let p = PowerLaw::new(rho, gamma, alpha)?;
        if gamma < 0.0 {
            return Err(Error::param(format!(
                "exact power law is infinite at t = 0 for γ = {gamma} < 0; use the smoothed form"
            )));
        }
        Ok(DriftField::ExactPowerLaw(p))
    }

    pub fn smoothed(rho: f64, gamma: f64, alpha: f64) -> Result<Self> {
        Ok(DriftField::SmoothedPowerLaw(PowerLaw::new(rho, gamma, alpha)?))
    }

    pub fn custom(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, declared: Option<PowerLaw>) -> Self {
        DriftField::Custom {
            f: Arc::new(f),
            declared,
        }
    }

    /// `f ≡ 0`; only meaningful for scheme tests.
    pub fn zero() -> Self {
        Self::custom(|_, _| 0.0, None)
    }

    pub fn power_law(&self) -> Option<PowerLaw> {
        match self {
            DriftField::ExactPowerLaw(p) | DriftField::SmoothedPowerLaw(p) => Some(*p),
            DriftField::Custom { declared, .. } => *declared,
        }
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, t: f64, y: f64) -> f64 {
        match self {
            DriftField::ExactPowerLaw(p) => p.rho * pow_fast(t, p.gamma) * pow_fast(y, p.alpha),
            DriftField::SmoothedPowerLaw(p) => {
                p.rho * pow_fast(1.0 + t, p.gamma) * pow_fast(1.0 + y, p.alpha)
            }
            DriftField::Custom { f, .. } => f(t, y),
        }
    }

    pub(crate) fn is_custom(&self) -> bool {
        matches!(self, DriftField::Custom { .. })
    }
}

pub fn evaluate_drift(drift: &DriftField, t: f64, y: f64) -> Result<f64> {
    if !(t >= 0.0 && y >= 0.0) {
        return Err(Error::param(format!("drift arguments must be >= 0, got t={t}, y={y}")));
    }
    let value = drift.eval_unchecked(t, y);
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::DriftContract { t, y, value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AfCheck {
    pub worst_deviation: f64,
    pub worst_at: (f64, f64),
    pub pass: bool,
}

/// Probe points for the asymptotic-ratio check: both coordinates on a
/// quarter-decade log grid from `radius / 2` over six decades, so every point
/// has `t + y >= radius`.
pub fn af_probe_points(radius: f64) -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (0..=24).map(|k| 0.5 * radius * 10f64.powf(k as f64 / 4.0)).collect();
    axis.iter()
        .flat_map(|&t| axis.iter().map(move |&y| (t, y)))
        .collect()
}

/// Max of `|f(t,y)(1+t)^{-γ}(1+y)^{-α} - ρ|` over [`af_probe_points`].
pub fn check_af(drift: &DriftField, epsilon: f64, probe_radius: f64) -> AfCheck {
    let Some(p) = drift.power_law() else {
        return AfCheck {
            worst_deviation: f64::INFINITY,
            worst_at: (f64::NAN, f64::NAN),
            pass: false,
        };
    };
    let mut worst = AfCheck {
        worst_deviation: 0.0,
        worst_at: (probe_radius, 0.0),
        pass: true,
    };
    for (t, y) in af_probe_points(probe_radius) {
        let ratio = drift.eval_unchecked(t, y) * (1.0 + t).powf(-p.gamma) * (1.0 + y).powf(-p.alpha);
        let dev = (ratio - p.rho).abs();
        if !(dev <= worst.worst_deviation) {
            worst.worst_deviation = dev;
            worst.worst_at = (t, y);
        }
    }
    worst.pass = worst.worst_deviation <= epsilon;
    worst
}
