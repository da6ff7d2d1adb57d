use akin::ensemble::{map_paths, try_map_paths};
use akin::kinetic::{
    dyadic_times, simulate_kinetic, simulate_with_noise, DriftField, ModelParams, NoiseSource, SimOptions, TimeGrid,
};
use akin::rng::{lanes, RngStream};
use akin::stats::mean_and_se;
use proptest::prelude::*;

const SEED: u64 = 8_000;

fn figure1() -> ModelParams {
    ModelParams {
        rho: 1.0,
        alpha: 0.5,
        gamma: 0.0,
        delta: 1.0,
        s0: 1.0,
        y0: 0.0,
        correlation: 1.0,
    }
}

/// Feeds a coarse-step simulation the normalized sum of two consecutive fine
/// increments, so coarse and fine paths share their Brownian motion.
struct Coarsened(RngStream);

impl NoiseSource for Coarsened {
    fn increments(&mut self, need_perp: bool) -> (f64, f64) {
        let (a1, b1) = self.0.increments(need_perp);
        let (a2, b2) = self.0.increments(need_perp);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        ((a1 + a2) * r, (b1 + b2) * r)
    }
}

#[test]
fn halving_the_step_moves_terminal_s_within_monte_carlo_error() {
    let p = ModelParams { correlation: 0.5, ..figure1() };
    let drift = DriftField::exact(p.rho, p.gamma, p.alpha).unwrap();
    let t_end = 100.0;
    let fine = TimeGrid::new(t_end, 0.05, vec![1.0, t_end]).unwrap();
    let coarse = TimeGrid::new(t_end, 0.1, vec![1.0, t_end]).unwrap();
    let n = 2000;
    let pairs = try_map_paths(n, |i| {
        let stream = || RngStream::for_lane(SEED, lanes::PATHS, i);
        let f = simulate_kinetic(&mut stream(), &p, &drift, &fine)?;
        let c = simulate_with_noise(&mut Coarsened(stream()), &p, &drift, &coarse, &SimOptions::default())?;
        Ok((*f.s.last().unwrap(), *c.s.last().unwrap()))
    })
    .unwrap();
    let s_fine: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let s_coarse: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (m_fine, se) = mean_and_se(&s_fine);
    let (m_coarse, _) = mean_and_se(&s_coarse);
    assert!((m_fine - m_coarse).abs() < se, "{m_fine} vs {m_coarse}, se {se}");
}

#[test]
fn u_stays_in_its_growth_window() {
    let p = figure1();
    let drift = DriftField::exact(p.rho, p.gamma, p.alpha).unwrap();
    let checkpoints = dyadic_times(1e3, 1e5);
    let grid = TimeGrid::new(1e5, 0.1, [0.0, 1.0].into_iter().chain(checkpoints.iter().copied()).collect()).unwrap();
    let eps = 0.2;
    let inside = map_paths(200, |i| {
        let b = simulate_kinetic(&mut RngStream::for_lane(SEED, lanes::PATHS, i), &p, &drift, &grid).unwrap();
        checkpoints.iter().all(|&t| {
            let r = b.u[b.index_near(t)] / t.powf(1.0 + p.beta());
            t.powf(-eps) < r && r < t.powf(eps)
        })
    });
    let fraction = inside.iter().filter(|&&b| b).count() as f64 / inside.len() as f64;
    assert!(fraction >= 0.95, "{fraction}");
}

#[test]
fn second_moment_of_m_grows_at_most_polynomially() {
    let p = figure1();
    let drift = DriftField::exact(p.rho, p.gamma, p.alpha).unwrap();
    let times = [1e2, 1e3, 1e4];
    let grid = TimeGrid::new(1e4, 0.1, vec![0.0, 1.0, 1e2, 1e3, 1e4]).unwrap();
    let m = map_paths(500, |i| {
        let b = simulate_kinetic(&mut RngStream::for_lane(SEED, lanes::PATHS, i), &p, &drift, &grid).unwrap();
        times.map(|t| b.m[b.index_near(t)].powi(2))
    });
    let means: Vec<f64> = (0..3).map(|k| m.iter().map(|r| r[k]).sum::<f64>() / m.len() as f64).collect();
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = means.iter().map(|v| v.ln()).collect();
    let slope = akin::stats::ols(&lx, &ly).slope;
    assert!(slope <= 2.0 + p.beta() + 0.15, "{slope}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recorded_paths_are_nonnegative_and_decompose(
        alpha in 0.0f64..1.5,
        gamma in 0.0f64..1.0,
        delta in 0.2f64..3.0,
        s0 in 0.0f64..5.0,
        y0 in 0.0f64..5.0,
        correlation in -1.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        prop_assume!(alpha + gamma > 0.05);
        let p = ModelParams { rho: 1.0, alpha, gamma, delta, s0, y0, correlation };
        let drift = DriftField::smoothed(p.rho, gamma, alpha).unwrap();
        let grid = TimeGrid::with_default_records(50.0, 0.05).unwrap();
        let b = simulate_kinetic(&mut RngStream::new(seed, 0), &p, &drift, &grid).unwrap();
        for i in 0..b.len() {
            prop_assert!(b.s[i] >= 0.0 && b.y[i] >= 0.0);
            prop_assert_eq!(b.x[i], b.s[i].sqrt());
            let want = b.s[i] - b.s0 - b.u[i] - b.t[i];
            prop_assert!((b.m[i] - want).abs() <= 1e-9 * b.s[i].abs().max(1.0));
        }
    }
}
