use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetic::{DriftField, ModelParams, TimeGrid, POINTS_PER_DECADE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    ScalingExponent,
    LimitLaw,
    AssumptionAy,
    Excursions,
    HittingTail,
    MartingaleBounds,
    Comparison,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Simulate,
        ExperimentKind::ScalingExponent,
        ExperimentKind::LimitLaw,
        ExperimentKind::AssumptionAy,
        ExperimentKind::Excursions,
        ExperimentKind::HittingTail,
        ExperimentKind::MartingaleBounds,
        ExperimentKind::Comparison,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::ScalingExponent => "scaling-exponent",
            ExperimentKind::LimitLaw => "limit-law",
            ExperimentKind::AssumptionAy => "assumption-ay",
            ExperimentKind::Excursions => "excursions",
            ExperimentKind::HittingTail => "hitting-tail",
            ExperimentKind::MartingaleBounds => "martingale-bounds",
            ExperimentKind::Comparison => "comparison",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub rho: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub s0: f64,
    pub y0: f64,
    pub correlation: f64,
}

impl From<ParamsSpec> for ModelParams {
    fn from(p: ParamsSpec) -> Self {
        ModelParams {
            rho: p.rho,
            alpha: p.alpha,
            gamma: p.gamma,
            delta: p.delta,
            s0: p.s0,
            y0: p.y0,
            correlation: p.correlation,
        }
    }
}

/// Drift family; the power-law constants come from `params`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, tag = "kind")]
pub enum DriftSpec {
    Exact,
    Smoothed,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_end: f64,
    pub step: f64,
    #[serde(default = "default_per_decade")]
    pub points_per_decade: usize,
    /// Explicit checkpoints; replaces the geometric default when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_times: Option<Vec<f64>>,
}

fn default_per_decade() -> usize {
    POINTS_PER_DECADE
}

/// Pass/fail thresholds and recipe sizes. Every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Regression window for exponent fits; default: top two decades.
    pub exponent_window: Option<[f64; 2]>,
    /// Allowed gap between the median slope and `(1 + γ + α) / 2`.
    pub exponent_tolerance: f64,
    /// KS threshold for the limit law; default: the 1% critical value.
    pub ks_threshold: Option<f64>,
    pub limit_steps: usize,
    pub alpha0_mean_tolerance: f64,
    pub alpha0_sd_max: f64,

    pub ay_quadrature_draws: u64,
    pub ay_ks_horizon: f64,
    pub ay_ks_paths: u64,
    pub ay_epsilon: f64,
    pub ay_late_time: f64,
    pub ay_path_fraction: f64,
    pub ay_ratio_times: Vec<f64>,
    pub ay_ratio_spread: f64,

    pub nu_draws: u64,
    pub nu_window: [f64; 2],
    pub nu_slope_tolerance: f64,
    pub excursion_count: usize,
    pub excursion_step: f64,
    pub excursion_chunks: u64,
    pub integral_window: [f64; 2],
    pub integral_slope_slack: f64,

    pub hitting_draws: u64,
    pub hitting_deltas: Vec<f64>,
    pub hitting_times: Vec<f64>,
    pub se_factor: f64,
    pub erf_tolerance: f64,
    pub ode_tolerance: f64,
    pub tail_bound_times: Vec<f64>,

    pub martingale_times: Vec<f64>,
    pub martingale_slope_slack: f64,
    pub negligibility_times: Vec<f64>,
    pub negligibility_excess: f64,
    pub negligibility_fraction: f64,

    pub comparison_tolerance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exponent_window: None,
            exponent_tolerance: 0.05,
            ks_threshold: None,
            limit_steps: crate::functionals::DEFAULT_LIMIT_STEPS,
            alpha0_mean_tolerance: 0.05,
            alpha0_sd_max: 0.05,
            ay_quadrature_draws: 100_000,
            ay_ks_horizon: 1e3,
            ay_ks_paths: 2000,
            ay_epsilon: 0.15,
            ay_late_time: 1e4,
            ay_path_fraction: 0.95,
            ay_ratio_times: vec![10.0, 1e2, 1e3, 1e4],
            ay_ratio_spread: 2.0,
            nu_draws: 100_000,
            nu_window: [10.0, 100.0],
            nu_slope_tolerance: 0.05,
            excursion_count: 100_000,
            excursion_step: 1e-3,
            excursion_chunks: 64,
            integral_window: [10.0, 100.0],
            integral_slope_slack: 0.1,
            hitting_draws: 1_000_000,
            hitting_deltas: vec![0.5, 1.0, 1.5],
            hitting_times: vec![0.5, 1.0, 5.0],
            se_factor: 3.0,
            erf_tolerance: 0.002,
            ode_tolerance: 1e-4,
            tail_bound_times: vec![1.0, 10.0, 100.0, 1000.0],
            martingale_times: vec![1e2, 1e3, 1e4],
            martingale_slope_slack: 0.15,
            negligibility_times: vec![1e3, 1e4, 1e5],
            negligibility_excess: 0.1,
            negligibility_fraction: 0.9,
            comparison_tolerance: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: ParamsSpec,
    pub drift: DriftSpec,
    pub grid: GridSpec,
    pub n_paths: u64,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn model_params(&self) -> ModelParams {
        self.params.into()
    }

    pub fn drift_field(&self) -> Result<DriftField> {
        let p = &self.params;
        match self.drift {
            DriftSpec::Exact => DriftField::exact(p.rho, p.gamma, p.alpha),
            DriftSpec::Smoothed => DriftField::smoothed(p.rho, p.gamma, p.alpha),
            DriftSpec::Zero => Ok(DriftField::zero()),
        }
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        let g = &self.grid;
        match &g.record_times {
            Some(times) => TimeGrid::new(g.t_end, g.step, times.clone()),
            None => {
                if g.points_per_decade == 0 {
                    return Err(Error::Config("points_per_decade must be >= 1".into()));
                }
                TimeGrid::geometric(g.t_end, g.step, g.points_per_decade)
            }
        }
    }

    /// Regression window: configured, or the top two decades of the run.
    pub fn exponent_window(&self) -> (f64, f64) {
        match self.tolerances.exponent_window {
            Some([lo, hi]) => (lo, hi),
            None => (self.grid.t_end / 100.0, self.grid.t_end),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let wrap = |e: Error| match e {
            Error::Parameter(msg) => Error::Config(msg),
            other => other,
        };
        self.model_params().validate().map_err(wrap)?;
        self.drift_field().map_err(wrap)?;
        self.time_grid().map_err(wrap)?;
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be >= 1".into()));
        }
        let t = &self.tolerances;
        if let Some([lo, hi]) = t.exponent_window {
            if !(lo > 0.0 && lo < hi) {
                return Err(Error::Config(format!("bad exponent window [{lo}, {hi}]")));
            }
        }
        for (name, [lo, hi]) in [("nu_window", t.nu_window), ("integral_window", t.integral_window)] {
            if !(lo > 0.0 && lo < hi) {
                return Err(Error::Config(format!("bad {name} [{lo}, {hi}]")));
            }
        }
        if t.limit_steps < 2 || t.excursion_chunks == 0 || !(t.excursion_step > 0.0) {
            return Err(Error::Config("limit_steps >= 2, excursion_chunks >= 1 and excursion_step > 0 required".into()));
        }
        Ok(())
    }
}
