//! Additive functionals of BESQ: the limit law `Ã = ∫₀¹ s^γ Ỹ_s^α ds` with
//! `Ỹ ~ BESQ(δ, 0)`, the standalone functional `A_t`, and the discrepancy
//! `D_t = U_t / 2 - ρ A_t`.

use crate::bessel::{besq_transition, BesqParams};
use crate::error::{Error, Result};
use crate::kinetic::{pow_fast, FromOneTrapezoid, PathBundle};
use crate::rng::RngStream;

pub const DEFAULT_LIMIT_STEPS: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitLawSpec {
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub n_steps: usize,
}

impl LimitLawSpec {
    pub fn new(delta: f64, alpha: f64, gamma: f64) -> Self {
        Self {
            delta,
            alpha,
            gamma,
            n_steps: DEFAULT_LIMIT_STEPS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::param(format!("δ must be > 0, got {}", self.delta)));
        }
        if !(self.alpha >= 0.0 && self.alpha + self.gamma > 0.0) {
            return Err(Error::param(format!(
                "need α >= 0 and α + γ > 0, got α={}, γ={}",
                self.alpha, self.gamma
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::param("limit-law quadrature needs at least 2 points"));
        }
        Ok(())
    }

    /// Quadrature nodes on `[0, 1]`: uniform for γ >= 0, geometric on
    /// `[1/n², 1]` for γ < 0 where the integrand is singular at zero.
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.n_steps;
        if self.gamma >= 0.0 {
            (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
        } else {
            let s_min = 1.0 / (n as f64 * n as f64);
            (0..n)
                .map(|k| s_min * (1.0 / s_min).powf(k as f64 / (n - 1) as f64))
                .collect()
        }
    }
}

/// One draw of `Ã`. Exact BESQ transitions between the quadrature nodes,
/// trapezoid rule on top. For α = 0 the integrand is deterministic and the
/// closed form `1 / (1 + γ)` is returned without consuming randomness.
pub fn sample_limit_a(stream: &mut RngStream, spec: &LimitLawSpec) -> Result<f64> {
    spec.validate()?;
    if spec.alpha == 0.0 {
        return Ok(1.0 / (1.0 + spec.gamma));
    }
    let nodes = spec.nodes();
    let integrand = |s: f64, y: f64| pow_fast(s, spec.gamma) * pow_fast(y, spec.alpha);
    let mut s_prev = 0.0;
    let mut y = 0.0;
    let mut g_prev = f64::NAN;
    let mut total = 0.0;
    for &s in &nodes {
        if s > s_prev {
            y = besq_transition(stream, spec.delta, y, s - s_prev)?;
        }
        let g = integrand(s, y);
        if !g_prev.is_nan() {
            total += 0.5 * (s - s_prev) * (g_prev + g);
        }
        g_prev = g;
        s_prev = s;
    }
    Ok(total)
}

/// `√(2ρÃ)`, the weak limit of `t^{-(1+γ+α)/2} X_t`.
pub fn sample_scaled_x_limit(stream: &mut RngStream, rho: f64, spec: &LimitLawSpec) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::param(format!("ρ must be > 0, got {rho}")));
    }
    Ok((2.0 * rho * sample_limit_a(stream, spec)?).sqrt())
}

/// `D_t = U_t / 2 - ρ A_t` at every recorded `t >= 1`.
pub fn discrepancy_d(path: &PathBundle, rho: f64) -> Vec<(f64, f64)> {
    path.t
        .iter()
        .zip(path.u.iter().zip(&path.a))
        .filter(|(&t, _)| t >= 1.0)
        .map(|(&t, (&u, &a))| (t, 0.5 * u - rho * a))
        .collect()
}

/// `A_t = ∫₁ᵗ s^γ Y_s^α ds` for a standalone BESQ path, sampled exactly on a
/// uniform grid of the given step; values at `checkpoints` (snapped to the
/// grid, increasing).
pub fn besq_additive_functional(
    stream: &mut RngStream,
    p: BesqParams,
    gamma: f64,
    alpha: f64,
    step: f64,
    checkpoints: &[f64],
) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::param(format!("step must be > 0, got {step}")));
    }
    let Some(&t_end) = checkpoints.last() else {
        return Ok(Vec::new());
    };
    let n_steps = (t_end / step).round() as usize;
    let mut targets = checkpoints.iter().map(|&t| (t / step).round() as usize).peekable();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = FromOneTrapezoid::new(gamma, alpha);
    let mut y = p.y0();
    while targets.peek() == Some(&0) {
        out.push(0.0);
        targets.next();
    }
    for n in 0..n_steps {
        let t = n as f64 * step;
        let t_next = (n + 1) as f64 * step;
        let y_next = besq_transition(stream, p.delta(), y, step)?;
        acc.advance(t, t_next, y, y_next);
        y = y_next;
        while targets.peek() == Some(&(n + 1)) {
            out.push(acc.value);
            targets.next();
        }
    }
    Ok(out)
}
