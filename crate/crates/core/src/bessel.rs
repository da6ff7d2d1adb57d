//! Squared-Bessel (BESQ) machinery: exact transitions, the first-passage time
//! to zero, its survival function and the Brownian scaling helpers.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{gamma, gamma_p};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesqParams {
    delta: f64,
    y0: f64,
}

impl BesqParams {
    pub fn new(delta: f64, y0: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::param(format!("BESQ dimension must be > 0, got {delta}")));
        }
        if !(y0 >= 0.0 && y0.is_finite()) {
            return Err(Error::param(format!("BESQ start must be >= 0, got {y0}")));
        }
        Ok(Self { delta, y0 })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// Zero is hit in finite time only for δ < 2.
    pub fn is_recurrent(&self) -> bool {
        self.delta < 2.0
    }
}

/// Exact draw of `Y_{t+dt}` given `Y_t = from_value`:
/// `dt * χ'²(δ, from_value / dt)`.
pub fn besq_transition(stream: &mut RngStream, delta: f64, from_value: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param(format!("transition step must be > 0, got {dt}")));
    }
    if !(from_value >= 0.0) {
        return Err(Error::param(format!("BESQ state must be >= 0, got {from_value}")));
    }
    Ok(dt * stream.sample_noncentral_chisq(delta, from_value / dt)?)
}

/// Samples a BESQ path exactly at the given increasing times (all > 0).
pub fn besq_path_exact(stream: &mut RngStream, p: BesqParams, times: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut t_prev = 0.0;
    let mut y = p.y0;
    for &t in times {
        let dt = t - t_prev;
        if dt > 0.0 {
            y = besq_transition(stream, p.delta, y, dt)?;
        } else if dt < 0.0 {
            return Err(Error::param("BESQ sampling times must be nondecreasing"));
        }
        out.push(y);
        t_prev = t;
    }
    Ok(out)
}

/// One full-truncation Euler step of `dY = δ dt + 2 √Y dW` with `dW = √h z`.
#[inline]
pub fn besq_euler_step(y: f64, delta: f64, h: f64, z: f64) -> f64 {
    y + delta * h + 2.0 * (y.max(0.0) * h).sqrt() * z
}

/// Exact draw of the first hitting time of zero, `τ₀ = y / (2G)` with
/// `G ~ Gamma(1 - δ/2, 1)`.
pub fn sample_tau0(stream: &mut RngStream, p: BesqParams) -> Result<f64> {
    if !p.is_recurrent() {
        return Err(Error::UnsupportedRegime(format!(
            "τ₀ is infinite almost surely for δ = {} >= 2",
            p.delta
        )));
    }
    if p.y0 == 0.0 {
        return Ok(0.0);
    }
    let g = stream.sample_gamma(1.0 - 0.5 * p.delta, 1.0)?;
    Ok(p.y0 / (2.0 * g))
}

fn check_recurrent_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 2.0 {
        Ok(())
    } else {
        Err(Error::param(format!("δ must lie in (0, 2), got {delta}")))
    }
}

/// Survival function of `τ₀` in the scaling variable `x = y / t`:
/// `P_y(τ₀ > t) = Ḡ(y / t)`, the regularized lower incomplete gamma with
/// shape `1 - δ/2` at `x / 2`.
pub fn gbar(x: f64, delta: f64) -> Result<f64> {
    check_recurrent_delta(delta)?;
    if !(x >= 0.0) {
        return Err(Error::param(format!("gbar argument must be >= 0, got {x}")));
    }
    Ok(gamma_p(1.0 - 0.5 * delta, 0.5 * x))
}

/// Constant `c_δ` of the power-law bound `P₁(τ₀ > t) <= c_δ t^{δ/2 - 1}`.
pub fn tail_constant(delta: f64) -> Result<f64> {
    check_recurrent_delta(delta)?;
    let a = 1.0 - 0.5 * delta;
    Ok(2f64.powf(-a) / (a * gamma(a)))
}

/// Max absolute residual of `2G'' + (1 + δ/x) G' = 0` over `grid`, with
/// derivatives by central differences of the given spacing.
pub fn ode_residual(g: impl Fn(f64) -> f64, delta: f64, grid: &[f64], spacing: f64) -> f64 {
    grid.iter()
        .map(|&x| {
            let (lo, mid, hi) = (g(x - spacing), g(x), g(x + spacing));
            let d1 = (hi - lo) / (2.0 * spacing);
            let d2 = (hi - 2.0 * mid + lo) / (spacing * spacing);
            (2.0 * d2 + (1.0 + delta / x) * d1).abs()
        })
        .fold(0.0, f64::max)
}

pub fn check_gbar_ode(delta: f64, grid: &[f64], spacing: f64) -> Result<f64> {
    check_recurrent_delta(delta)?;
    if grid.iter().any(|&x| x - spacing <= 0.0) {
        return Err(Error::param("ODE grid must stay strictly positive after the stencil shift"));
    }
    let a = 1.0 - 0.5 * delta;
    Ok(ode_residual(|x| gamma_p(a, 0.5 * x), delta, grid, spacing))
}

/// Brownian rescaling `s ↦ Y_{T s} / T` of a path recorded at `times`.
pub fn besq_rescale(times: &[f64], values: &[f64], horizon: f64) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(times.len(), values.len());
    let s = times.iter().map(|t| t / horizon).collect();
    let y = values.iter().map(|v| v / horizon).collect();
    (s, y)
}

/// Runs an Euler path from `y0` with step `step` for `horizon` time units and
/// reports whether it stayed strictly above `level` throughout, i.e. whether
/// `τ_level >= horizon` on the grid.
pub fn stays_above(
    stream: &mut RngStream,
    delta: f64,
    y0: f64,
    level: f64,
    horizon: f64,
    step: f64,
) -> bool {
    let n = (horizon / step).round() as usize;
    let mut y = y0;
    for _ in 0..n {
        y = besq_euler_step(y, delta, step, stream.sample_normal());
        if y <= level {
            return false;
        }
    }
    true
}
