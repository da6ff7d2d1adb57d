use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares of `y` on `x`, equal weights.
pub fn ols(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let slope_stderr = if x.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        slope_stderr,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub checkpoints_used: Vec<f64>,
    pub target: f64,
}

impl ScalingReport {
    pub fn deviation(&self) -> f64 {
        self.slope - self.target
    }
}

/// Log-log least-squares slope of `values` against `times` over the
/// checkpoints inside `window` (inclusive).
pub fn estimate_exponent(
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    target: f64,
) -> Result<ScalingReport> {
    let (lo, hi) = window;
    let mut lt = Vec::new();
    let mut lv = Vec::new();
    let mut used = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < lo || t > hi || t <= 0.0 {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::NonPositive { time: t, value: v });
        }
        lt.push(t.ln());
        lv.push(v.ln());
        used.push(t);
    }
    if used.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: used.len(),
        });
    }
    let fit = ols(&lt, &lv);
    Ok(ScalingReport {
        slope: fit.slope,
        intercept: fit.intercept,
        stderr: fit.slope_stderr,
        checkpoints_used: used,
        target,
    })
}
