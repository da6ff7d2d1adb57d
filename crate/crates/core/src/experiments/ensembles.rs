//! Recipes over ensembles of kinetic paths.

use super::config::ExperimentConfig;
use super::report::{write_samples, write_trajectory, Bound, Report};
use crate::ensemble::try_map_paths;
use crate::error::{Error, Result};
use crate::functionals::{sample_scaled_x_limit, LimitLawSpec};
use crate::kinetic::{lower_bound_comparison, simulate_kinetic, PathBundle, TimeGrid};
use crate::rng::{lanes, RngStream};
use crate::stats::{estimate_exponent, ks_two_sample, mean_and_se, median, ols, quantile};

fn simulate_paths(cfg: &ExperimentConfig, grid: &TimeGrid) -> Result<Vec<PathBundle>> {
    let params = cfg.model_params();
    let drift = cfg.drift_field()?;
    try_map_paths(cfg.n_paths, |i| {
        let mut stream = RngStream::for_lane(cfg.master_seed, lanes::PATHS, i);
        simulate_kinetic(&mut stream, &params, &drift, grid)
    })
}

fn extended_grid(cfg: &ExperimentConfig, extra: &[f64]) -> Result<TimeGrid> {
    let grid = cfg.time_grid()?;
    let t_end = grid.t_end();
    grid.with_extra_records(extra.iter().copied().filter(|&t| t <= t_end))
}

pub(super) fn simulate(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let grid = cfg.time_grid()?;
    let paths = simulate_paths(cfg, &grid)?;
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut worst_identity: f64 = 0.0;
    for (i, b) in paths.iter().enumerate() {
        write_trajectory(&cfg.output_dir, i as u64, b)?;
        for k in 0..b.len() {
            min_x = min_x.min(b.x[k]);
            min_y = min_y.min(b.y[k]);
            let resid = b.s[k] - b.s0 - b.u[k] - b.t[k] - b.m[k];
            worst_identity = worst_identity.max(resid.abs() / b.s[k].abs().max(1.0));
        }
    }
    report.check("min_X", min_x, Bound::at_least(0.0));
    report.check("min_Y", min_y, Bound::at_least(0.0));
    report.check("decomposition_residual", worst_identity, Bound::at_most(1e-9));
    Ok(())
}

pub(super) fn scaling_exponent(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let grid = cfg.time_grid()?;
    let params = cfg.model_params();
    let target = params.x_exponent();
    let window = cfg.exponent_window();
    let paths = simulate_paths(cfg, &grid)?;
    let slopes = paths
        .iter()
        .map(|b| estimate_exponent(&b.t, &b.x, window, target).map(|r| r.slope))
        .collect::<Result<Vec<f64>>>()?;
    write_trajectory(&cfg.output_dir, 0, &paths[0])?;
    write_samples(&cfg.output_dir, "slopes", &slopes)?;
    let med = median(&slopes);
    let tol = cfg.tolerances.exponent_tolerance;
    report.detail("target", target);
    report.detail("window", window);
    report.detail("slope_quartiles", [quantile(&slopes, 0.25), quantile(&slopes, 0.75)]);
    report.check("median_slope", med, Bound::around(target, tol));
    Ok(())
}

pub(super) fn limit_law(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let grid = cfg.time_grid()?;
    let params = cfg.model_params();
    let horizon = grid.t_end();
    let scale = horizon.powf(-params.x_exponent());
    let paths = simulate_paths(cfg, &grid)?;
    let scaled: Vec<f64> = paths.iter().map(|b| b.last_x() * scale).collect();
    write_samples(&cfg.output_dir, "scaled_x", &scaled)?;
    report.detail("horizon", horizon);

    let t = &cfg.tolerances;
    if params.alpha == 0.0 {
        // the limit is the constant √(2ρ/(1+γ)); KS against a point mass is
        // meaningless, so mean and spread are checked instead
        let limit = (2.0 * params.rho / (1.0 + params.gamma)).sqrt();
        let (mean, se) = mean_and_se(&scaled);
        let sd = se * (scaled.len() as f64).sqrt();
        report.detail("limit", limit);
        report.check("mean_scaled_x", mean, Bound::around(limit, t.alpha0_mean_tolerance));
        report.check("sd_scaled_x", sd, Bound::at_most(t.alpha0_sd_max));
        return Ok(());
    }

    let spec = LimitLawSpec {
        n_steps: t.limit_steps,
        ..LimitLawSpec::new(params.delta, params.alpha, params.gamma)
    };
    let reference = try_map_paths(cfg.n_paths, |i| {
        let mut stream = RngStream::for_lane(cfg.master_seed, lanes::LIMIT_LAW, i);
        sample_scaled_x_limit(&mut stream, params.rho, &spec)
    })?;
    write_samples(&cfg.output_dir, "limit", &reference)?;
    let ks = ks_two_sample(&scaled, &reference)?;
    let threshold = t.ks_threshold.unwrap_or(ks.critical_value_1pct);
    report.detail("ks_critical_value_1pct", ks.critical_value_1pct);
    report.detail("ks_pass_at_1pct", ks.pass);
    report.check("ks_statistic", ks.statistic, Bound::at_most(threshold));
    Ok(())
}

pub(super) fn martingale_bounds(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let t = &cfg.tolerances;
    let mut extra = t.martingale_times.clone();
    extra.extend(&t.negligibility_times);
    let grid = extended_grid(cfg, &extra)?;
    let t_end = grid.t_end();
    if t.martingale_times.iter().chain(&t.negligibility_times).any(|&s| s > t_end) {
        return Err(Error::Config(format!("martingale checkpoints exceed t_end = {t_end}")));
    }
    if t.martingale_times.len() < 2 || t.negligibility_times.len() < 2 {
        return Err(Error::Config("martingale checks need at least two times each".into()));
    }
    let params = cfg.model_params();
    let beta = params.beta();
    let paths = simulate_paths(cfg, &grid)?;

    let second_moments: Vec<f64> = t
        .martingale_times
        .iter()
        .map(|&s| {
            let sum: f64 = paths.iter().map(|b| b.m[b.index_near(s)].powi(2)).sum();
            sum / paths.len() as f64
        })
        .collect();
    let lt: Vec<f64> = t.martingale_times.iter().map(|s| s.ln()).collect();
    let lm: Vec<f64> = second_moments.iter().map(|m| m.ln()).collect();
    let slope = ols(&lt, &lm).slope;
    report.detail("second_moments", &second_moments);
    report.check("second_moment_slope", slope, Bound::at_most(2.0 + beta + t.martingale_slope_slack));

    let power = 1.0 + 0.5 * beta + t.negligibility_excess;
    let decreasing = paths
        .iter()
        .filter(|b| {
            let r: Vec<f64> = t
                .negligibility_times
                .iter()
                .map(|&s| b.m_sup[b.index_near(s)] / s.powf(power))
                .collect();
            r.windows(2).all(|w| w[1] < w[0])
        })
        .count();
    let fraction = decreasing as f64 / paths.len() as f64;
    report.check("negligibility_fraction", fraction, Bound::at_least(t.negligibility_fraction));
    Ok(())
}

pub(super) fn comparison(cfg: &ExperimentConfig, report: &mut Report) -> Result<()> {
    let grid = cfg.time_grid()?;
    let params = cfg.model_params();
    let drift = cfg.drift_field()?;
    let results = try_map_paths(cfg.n_paths, |i| {
        let mut stream = RngStream::for_lane(cfg.master_seed, lanes::PATHS, i);
        let (b, z) = lower_bound_comparison(&mut stream, &params, &drift, &grid)?;
        let worst = b
            .s
            .iter()
            .zip(&z)
            .map(|(&s, &z)| (z - s) / s.max(1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok((worst, (i == 0).then_some((b, z))))
    })?;
    if let Some((b, z)) = &results[0].1 {
        write_trajectory(&cfg.output_dir, 0, b)?;
        write_samples(&cfg.output_dir, "comparison_z", z)?;
    }
    let overall = results.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    report.check("max_relative_excess_of_z", overall, Bound::at_most(cfg.tolerances.comparison_tolerance));
    Ok(())
}
