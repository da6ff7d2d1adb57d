//! One test per acceptance criterion. Each prints a single verdict line and
//! then asserts it.

use std::time::{Duration, Instant};

use akin::bessel::besq_transition;
use akin::ensemble::{map_paths, with_threads};
use akin::experiments::{DriftSpec, ExperimentKind, Report};
use akin::rng::{lanes, RngStream};
use akin::stats::{mean_and_se, variance_and_se};
use akin_acceptance::{figure1, run_in_tempdir, snapshot, verdict, with_experiment};

fn value(report: &Report, name: &str) -> f64 {
    report.check_named(name).unwrap_or_else(|| panic!("check {name} missing")).value
}

fn failures(report: &Report) -> String {
    if report.failures.is_empty() {
        "none".into()
    } else {
        report
            .failures
            .iter()
            .map(|f| format!("{}={}", f.name, f.value))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[test]
fn criterion_01_figure1_exponent() {
    let cfg = with_experiment(figure1(), ExperimentKind::ScalingExponent, 200);
    assert_eq!(cfg.exponent_window(), (1e3, 1e5));
    let start = Instant::now();
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let elapsed = start.elapsed();
    let slope = value(&report, "median_slope");
    let pass = (0.70..=0.80).contains(&slope) && elapsed <= Duration::from_secs(600);
    verdict(1, "Figure-1 exponent", pass, format!("median slope {slope:.4} in [0.70, 0.80], {:.1}s", elapsed.as_secs_f64()));
    assert!(pass);
}

#[test]
fn criterion_02_exponent_sweep() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (alpha, gamma, delta) in [(1.0, 0.0, 1.0), (0.5, 0.5, 2.0), (1.0, -0.5, 1.0)] {
        let mut cfg = with_experiment(figure1(), ExperimentKind::ScalingExponent, 100);
        cfg.params.alpha = alpha;
        cfg.params.gamma = gamma;
        cfg.params.delta = delta;
        if gamma < 0.0 {
            cfg.drift = DriftSpec::Smoothed;
        }
        cfg.tolerances.exponent_tolerance = 0.07;
        let target = (1.0 + gamma + alpha) / 2.0;
        let (report, _dir) = run_in_tempdir(cfg).unwrap();
        let slope = value(&report, "median_slope");
        pass &= (slope - target).abs() <= 0.07 && report.passed();
        lines.push(format!("(α,γ,δ)=({alpha},{gamma},{delta}) slope {slope:.4} vs {target}"));
    }
    verdict(2, "exponent sweep", pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_03_weak_limit() {
    let mut cfg = with_experiment(figure1(), ExperimentKind::LimitLaw, 2000);
    cfg.params.s0 = 0.0;
    cfg.params.y0 = 0.0;
    cfg.grid.t_end = 1e4;
    cfg.tolerances.ks_threshold = Some(0.06);
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let ks = value(&report, "ks_statistic");
    let crit = report.details["ks_critical_value_1pct"].as_f64().unwrap();
    let pass = ks < 0.06;
    verdict(3, "weak limit", pass, format!("KS {ks:.4} vs threshold 0.06 (1% critical value {crit:.4})"));
    assert!(pass);
}

#[test]
fn criterion_04_deterministic_limit_alpha_zero() {
    let mut cfg = with_experiment(figure1(), ExperimentKind::LimitLaw, 1000);
    cfg.params.alpha = 0.0;
    cfg.params.gamma = 1.0;
    cfg.params.rho = 1.0;
    cfg.grid.t_end = 1e4;
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let mean = value(&report, "mean_scaled_x");
    let sd = value(&report, "sd_scaled_x");
    let pass = (mean - 1.0).abs() <= 0.05 && sd <= 0.05;
    verdict(4, "deterministic limit at α=0", pass, format!("mean {mean:.5} (1 ± 0.05), sd {sd:.5} (≤ 0.05)"));
    assert!(pass);
}

#[test]
fn criterion_05_besq_exact_moments() {
    const N: u64 = 1_000_000;
    let mut lines = Vec::new();
    let mut pass = true;
    for (k, (y, delta, t)) in [(4.0, 3.0, 2.0), (0.0, 1.0, 1.0), (1.0, 0.5, 10.0)].into_iter().enumerate() {
        let xs = map_paths(N, |i| {
            let mut s = RngStream::for_lane(5, lanes::REFERENCE, ((k as u64) << 32) + i);
            besq_transition(&mut s, delta, y, t).unwrap()
        });
        let (m, m_se) = mean_and_se(&xs);
        let (v, v_se) = variance_and_se(&xs);
        let (want_m, want_v) = (y + delta * t, 2.0 * delta * t * t + 4.0 * y * t);
        let ok = (m - want_m).abs() <= 3.0 * m_se && (v - want_v).abs() <= 3.0 * v_se;
        pass &= ok;
        lines.push(format!("({y},{delta},{t}) mean {m:.4}/{want_m} var {v:.3}/{want_v}"));
    }
    verdict(5, "BESQ exact-sampler moments", pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_06_hitting_law() {
    let cfg = with_experiment(figure1(), ExperimentKind::HittingTail, 1);
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let erf = value(&report, "survival_delta1_t1_erf");
    let ode = ["0.5", "1", "1.5"]
        .iter()
        .map(|d| value(&report, &format!("gbar_ode_residual_delta{d}")))
        .fold(0.0, f64::max);
    let pass = report.passed();
    verdict(
        6,
        "hitting law",
        pass,
        format!("{} checks, P_1(τ₀>1) = {erf:.5}, max ODE residual {ode:.2e}, failures: {}", report.checks.len(), failures(&report)),
    );
    assert!(pass);
}

#[test]
fn criterion_07_excursion_tails() {
    let cfg = with_experiment(figure1(), ExperimentKind::Excursions, 1);
    assert_eq!((cfg.params.delta, cfg.params.alpha), (1.0, 0.5));
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let nu = value(&report, "nu_tail_slope");
    let integral = value(&report, "integral_tail_slope");
    let pass = (nu + 0.5).abs() <= 0.05 && integral >= -1.0 / 3.0 - 0.1;
    verdict(7, "excursion tails", pass, format!("ν slope {nu:.4} (-0.5 ± 0.05), I slope {integral:.4} (≥ -0.4333)"));
    assert!(pass);
}

#[test]
fn criterion_08_assumption_ay() {
    let cfg = with_experiment(figure1(), ExperimentKind::AssumptionAy, 100);
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let pass = report.passed();
    verdict(
        8,
        "assumption (A_Y)",
        pass,
        format!(
            "(a) {:.4}, (b) KS {:.4}, (c) fraction {:.2} (≥ 0.95), (d) spread {:.3} (< 2)",
            value(&report, "clause_a_integral"),
            value(&report, "clause_b_ks_statistic"),
            value(&report, "clause_c_fraction"),
            value(&report, "clause_d_spread"),
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_martingale_bounds() {
    let cfg = with_experiment(figure1(), ExperimentKind::MartingaleBounds, 500);
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let slope = value(&report, "second_moment_slope");
    let fraction = value(&report, "negligibility_fraction");
    let pass = slope <= 2.0 + 0.5 + 0.15 && fraction >= 0.9;
    verdict(9, "martingale bounds", pass, format!("E M² slope {slope:.4} (≤ 2.65), decreasing fraction {fraction:.3} (≥ 0.9)"));
    assert!(pass);
}

#[test]
fn criterion_10_comparison() {
    let mut cfg = with_experiment(figure1(), ExperimentKind::Comparison, 1000);
    cfg.grid.t_end = 1e3;
    let (report, _dir) = run_in_tempdir(cfg).unwrap();
    let excess = value(&report, "max_relative_excess_of_z");
    let pass = excess <= 1e-6;
    verdict(10, "comparison S ≥ Z", pass, format!("max (Z - S)/max(1, S) = {excess:.3e} (≤ 1e-6)"));
    assert!(pass);
}

#[test]
fn criterion_11_reproducibility() {
    let mut configs = Vec::new();
    let mut small = with_experiment(figure1(), ExperimentKind::Simulate, 4);
    small.grid.t_end = 1e3;
    small.tolerances.exponent_window = None;
    configs.push(small.clone());
    let mut limit = with_experiment(small.clone(), ExperimentKind::LimitLaw, 200);
    limit.tolerances.limit_steps = 256;
    configs.push(limit);
    configs.push(with_experiment(small, ExperimentKind::ScalingExponent, 16));

    let mut pass = true;
    let mut files = 0;
    for cfg in configs {
        let runs: Vec<_> = [1, 1, 8]
            .into_iter()
            .map(|threads| {
                let (_, dir) = with_threads(Some(threads), || run_in_tempdir(cfg.clone())).unwrap();
                snapshot(dir.path())
            })
            .collect();
        files += runs[0].len();
        pass &= runs[0] == runs[1] && runs[0] == runs[2];
    }
    verdict(11, "reproducibility", pass, format!("{files} files byte-identical across reruns and 1 vs 8 threads"));
    assert!(pass);
}
