use super::regression::ols;
use crate::error::{Error, Result};

/// Empirical `P(X >= t)` at each of `eval_points`.
pub fn survival_curve(samples: &[f64], eval_points: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    eval_points
        .iter()
        .map(|&t| {
            let below = sorted.partition_point(|&x| x < t);
            (t, (sorted.len() - below) as f64 / n)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    pub slope: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Log-log least-squares slope of a survival curve inside `window`.
pub fn tail_slope(survival: &[(f64, f64)], window: (f64, f64)) -> Result<TailFit> {
    let inside: Vec<(f64, f64)> = survival
        .iter()
        .copied()
        .filter(|&(z, _)| z >= window.0 && z <= window.1)
        .collect();
    if let Some(&(z, p)) = inside.iter().find(|&&(z, p)| !(p > 0.0) || z <= 0.0) {
        return Err(Error::NonPositive { time: z, value: p });
    }
    if inside.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: inside.len(),
        });
    }
    let lz: Vec<f64> = inside.iter().map(|(z, _)| z.ln()).collect();
    let lp: Vec<f64> = inside.iter().map(|(_, p)| p.ln()).collect();
    let fit = ols(&lz, &lp);
    Ok(TailFit {
        slope: fit.slope,
        stderr: fit.slope_stderr,
        points: inside.len(),
    })
}

/// `count` log-spaced points covering `[lo, hi]`.
pub fn log_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting() {
        let s = survival_curve(&[1.0, 2.0, 3.0], &[0.5, 2.0, 3.0, 3.5]);
        assert_eq!(s, vec![(0.5, 1.0), (2.0, 2.0 / 3.0), (3.0, 1.0 / 3.0), (3.5, 0.0)]);
    }

    #[test]
    fn exact_power_tail() {
        let pts = log_points(1.0, 100.0, 20);
        let surv: Vec<(f64, f64)> = pts.iter().map(|&z| (z, z.powf(-0.4))).collect();
        let fit = tail_slope(&surv, (1.0, 100.0)).unwrap();
        assert!((fit.slope + 0.4).abs() < 1e-12);
    }

    #[test]
    fn zero_survival_needs_smaller_window() {
        let surv = vec![(1.0, 0.5), (2.0, 0.2), (3.0, 0.1), (4.0, 0.0)];
        assert!(matches!(tail_slope(&surv, (1.0, 4.0)), Err(Error::NonPositive { .. })));
    }
}
