use akin::bessel::BesqParams;
use akin::ensemble::map_paths;
use akin::functionals::{besq_additive_functional, discrepancy_d, sample_limit_a, LimitLawSpec};
use akin::kinetic::{dyadic_times, simulate_kinetic, DriftField, ModelParams, TimeGrid};
use akin::rng::{lanes, RngStream};
use akin::stats::{ks_two_sample, quantile};

const SEED: u64 = 9_000;
const ALPHA: f64 = 0.5;
const GAMMA: f64 = 0.0;
const BETA: f64 = ALPHA + GAMMA;

fn figure1() -> ModelParams {
    ModelParams {
        rho: 1.0,
        alpha: ALPHA,
        gamma: GAMMA,
        delta: 1.0,
        s0: 1.0,
        y0: 0.0,
        correlation: 1.0,
    }
}

fn besq_functional_paths(n: u64, step: f64, checkpoints: &[f64]) -> Vec<Vec<f64>> {
    let p = BesqParams::new(1.0, 0.0).unwrap();
    map_paths(n, |i| {
        let mut s = RngStream::for_lane(SEED, lanes::FUNCTIONALS, i);
        besq_additive_functional(&mut s, p, GAMMA, ALPHA, step, checkpoints).unwrap()
    })
}

#[test]
fn discrepancy_becomes_negligible_under_smoothed_drift() {
    let p = figure1();
    let drift = DriftField::smoothed(p.rho, p.gamma, p.alpha).unwrap();
    let times = [1e2, 1e3, 1e4];
    let grid = TimeGrid::new(1e4, 0.1, vec![0.0, 1.0, 1e2, 1e3, 1e4]).unwrap();
    let scaled = map_paths(500, |i| {
        let b = simulate_kinetic(&mut RngStream::for_lane(SEED, lanes::PATHS, i), &p, &drift, &grid).unwrap();
        let d = discrepancy_d(&b, p.rho);
        times.map(|t| {
            let (_, v) = d.iter().copied().find(|&(s, _)| s == t).unwrap();
            v.abs() / t.powf(1.0 + BETA)
        })
    });
    let p90: Vec<f64> = (0..3)
        .map(|k| quantile(&scaled.iter().map(|r| r[k]).collect::<Vec<_>>(), 0.9))
        .collect();
    assert!(p90[0] > p90[1] && p90[1] > p90[2], "{p90:?}");
}

#[test]
fn rescaled_functional_matches_limit_law() {
    let horizon = 1e3;
    let scaled: Vec<f64> = besq_functional_paths(2000, 0.25, &[horizon])
        .into_iter()
        .map(|a| a[0] / horizon.powf(1.0 + BETA))
        .collect();
    let spec = LimitLawSpec::new(1.0, ALPHA, GAMMA);
    let limit = map_paths(2000, |i| sample_limit_a(&mut RngStream::for_lane(SEED, lanes::LIMIT_LAW, i), &spec).unwrap());
    let ks = ks_two_sample(&scaled, &limit).unwrap();
    assert!(ks.pass, "{ks:?}");
}

#[test]
fn mean_of_rescaled_functional_stays_bounded() {
    let times = [1e1, 1e2, 1e3, 1e4];
    let paths = besq_functional_paths(2000, 0.5, &times);
    let means: Vec<f64> = (0..times.len())
        .map(|k| paths.iter().map(|a| a[k]).sum::<f64>() / paths.len() as f64 / times[k].powf(1.0 + BETA))
        .collect();
    assert!(means.iter().all(|m| m.is_finite() && *m > 0.0));
    let hi = means.iter().copied().fold(f64::MIN, f64::max);
    let lo = means.iter().copied().fold(f64::MAX, f64::min);
    assert!(hi / lo < 2.0, "{means:?}");
}

// With T = 1e6 the band requires Ã in [0.25, 3.98] on every path, while the
// limit law puts about 15% of its mass below 0.25, so all 50 paths satisfy it
// with probability near 3e-4.
#[test]
#[ignore = "unattainable at this horizon: the limit law has ~15% mass outside the band"]
fn log_of_functional_grows_at_the_predicted_rate() {
    let horizon = 1e6;
    let paths = besq_functional_paths(50, 1.0, &[horizon]);
    for a in paths {
        let r = a[0].ln() / horizon.ln();
        assert!((r - (1.0 + BETA)).abs() <= 0.1, "{r}");
    }
}

// Passing needs P(Ã < t^{-0.15}) <= 5% at every dyadic t >= 1e4, but the
// limit law gives about 12% at t = 16384.
#[test]
#[ignore = "unattainable at this horizon: the limit law has ~12% mass below the bound at t = 16384"]
fn functional_stays_above_lower_power() {
    let checkpoints = dyadic_times(1e4, 1e5);
    let paths = besq_functional_paths(100, 0.5, &checkpoints);
    let ok = paths
        .iter()
        .filter(|a| checkpoints.iter().zip(a.iter()).all(|(&t, &v)| v > t.powf(1.0 + BETA - 0.15)))
        .count();
    assert!(ok as f64 >= 0.95 * paths.len() as f64, "{ok} of {}", paths.len());
}
