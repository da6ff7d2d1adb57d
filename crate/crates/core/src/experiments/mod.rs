//! Named, reproducible experiment recipes and their file artifacts.
//!
//! Each recipe is a pure function of its [`ExperimentConfig`]: paths draw from
//! streams keyed by `(master_seed, lane, index)` and are collected in index
//! order, so the emitted files do not depend on the worker count.

mod besq;
mod config;
mod ensembles;
mod report;

use std::fs;
use std::path::PathBuf;

pub use besq::{verify_assumption_ay, AyReport, ClauseA, ClauseB, ClauseC, ClauseD};
pub use config::{DriftSpec, ExperimentConfig, ExperimentKind, GridSpec, ParamsSpec, Tolerances};
pub use report::{fmt_float, write_samples, write_trajectory, BlowupInfo, Bound, Check, Failure, Report};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    CheckFailed,
    Usage,
    Blowup,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::CheckFailed => 1,
            ExitStatus::Usage => 2,
            ExitStatus::Blowup => 3,
        }
    }

    /// Exit status for an error that aborted a run before a report existed.
    pub fn for_error(err: &Error) -> Self {
        match err {
            Error::NumericalBlowup { .. } => ExitStatus::Blowup,
            _ => ExitStatus::Usage,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub status: ExitStatus,
    pub output_dir: PathBuf,
}

/// Runs the configured recipe, writes its artifacts and `report.json` into
/// `output_dir`. A numerical blowup still writes a report (with a `blowup`
/// entry) and yields [`ExitStatus::Blowup`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut report = Report::new(cfg.experiment.name(), cfg.master_seed, cfg.n_paths);
    let result = match cfg.experiment {
        ExperimentKind::Simulate => ensembles::simulate(cfg, &mut report),
        ExperimentKind::ScalingExponent => ensembles::scaling_exponent(cfg, &mut report),
        ExperimentKind::LimitLaw => ensembles::limit_law(cfg, &mut report),
        ExperimentKind::MartingaleBounds => ensembles::martingale_bounds(cfg, &mut report),
        ExperimentKind::Comparison => ensembles::comparison(cfg, &mut report),
        ExperimentKind::AssumptionAy => besq::assumption_ay(cfg, &mut report),
        ExperimentKind::Excursions => besq::excursions(cfg, &mut report),
        ExperimentKind::HittingTail => besq::hitting_tail(cfg, &mut report),
    };
    match result {
        Ok(()) => {}
        Err(err @ Error::NumericalBlowup { quantity, time }) => {
            report.blowup = Some(BlowupInfo {
                quantity: quantity.to_owned(),
                time,
                message: err.to_string(),
            });
        }
        Err(e) => return Err(e),
    }
    report.write(&dir)?;
    let status = if report.blowup.is_some() {
        ExitStatus::Blowup
    } else if report.passed() {
        ExitStatus::Pass
    } else {
        ExitStatus::CheckFailed
    };
    Ok(RunOutcome {
        report,
        status,
        output_dir: dir,
    })
}
