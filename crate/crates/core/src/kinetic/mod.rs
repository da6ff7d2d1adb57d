//! Joint simulation of the kinetic system
//!
//! ```text
//! dY = δ dt + 2 √Y dW
//! dS = (2 f(t, Y) + 1) dt + 2 √S dB,     X = √S
//! ```
//!
//! with `B = ρ_WB W + √(1 - ρ_WB²) W⊥`, together with the pieces of the
//! decomposition `S_t - S_0 = U_t + t + M_t`, where `U_t = 2∫₀ᵗ f(s, Y_s) ds`,
//! and the additive functional `A_t = ∫₁ᵗ s^γ Y_s^α ds`.
//!
//! Integration is full-truncation Euler: the internal state may dip below
//! zero, the diffusion coefficients use positive parts, and recorded values
//! are positive parts.

mod drift;
mod grid;

pub use drift::{af_probe_points, check_af, evaluate_drift, AfCheck, DriftField, DriftFn, PowerLaw};
pub use grid::{dyadic_times, TimeGrid, POINTS_PER_DECADE};

pub(crate) use drift::pow_fast;

use crate::bessel::{besq_euler_step, besq_transition};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Paths whose state exceeds this are aborted as numerical blowups.
pub const BLOWUP_LEVEL: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub rho: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub s0: f64,
    pub y0: f64,
    pub correlation: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        PowerLaw::new(self.rho, self.gamma, self.alpha)?;
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::param(format!("δ must be > 0, got {}", self.delta)));
        }
        if !(self.s0 >= 0.0 && self.s0.is_finite() && self.y0 >= 0.0 && self.y0.is_finite()) {
            return Err(Error::param("initial states must be finite and >= 0"));
        }
        if !(-1.0..=1.0).contains(&self.correlation) {
            return Err(Error::param(format!(
                "correlation must lie in [-1, 1], got {}",
                self.correlation
            )));
        }
        Ok(())
    }

    /// `β = α + γ`.
    pub fn beta(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// Growth exponent `(1 + γ + α) / 2` of `X`.
    pub fn x_exponent(&self) -> f64 {
        0.5 * (1.0 + self.beta())
    }

    pub fn power_law(&self) -> PowerLaw {
        PowerLaw {
            rho: self.rho,
            gamma: self.gamma,
            alpha: self.alpha,
        }
    }
}

/// How `Y` is advanced alongside `S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum YScheme {
    #[default]
    Euler,
    /// Exact BESQ transitions. Only valid with zero correlation, since the
    /// transition sampler does not expose the driving increment of `W`.
    Exact,
}

/// Source of the standard normal pair `(z_W, z_⊥)` for one fine step.
pub trait NoiseSource {
    /// `z_⊥` is only drawn when `need_perp` is set; otherwise it is 0.
    fn increments(&mut self, need_perp: bool) -> (f64, f64);

    /// Exact BESQ transition, for sources backed by a real stream.
    fn besq_transition(&mut self, _delta: f64, _from: f64, _dt: f64) -> Option<Result<f64>> {
        None
    }
}

impl NoiseSource for RngStream {
    #[inline]
    fn increments(&mut self, need_perp: bool) -> (f64, f64) {
        let zw = self.sample_normal();
        let zp = if need_perp { self.sample_normal() } else { 0.0 };
        (zw, zp)
    }

    fn besq_transition(&mut self, delta: f64, from: f64, dt: f64) -> Option<Result<f64>> {
        Some(besq_transition(self, delta, from, dt))
    }
}

/// Recorded trajectory, aligned over the checkpoints of a [`TimeGrid`]
/// (snapped to the fine grid).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathBundle {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    /// Residual `S - S₀ - U - t`.
    pub m: Vec<f64>,
    /// `∫₁ᵗ s^γ Y_s^α ds`, zero before `t = 1`.
    pub a: Vec<f64>,
    /// Accumulated `Σ 2 √S⁺ ΔB`, the Itô-sum cross-check of `m`.
    pub m_ito: Vec<f64>,
    /// Running `sup_{s <= t} |M_s|` over the fine grid.
    pub m_sup: Vec<f64>,
    pub s0: f64,
}

impl PathBundle {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Index of the recorded time closest to `t`.
    pub fn index_near(&self, t: f64) -> usize {
        let i = self.t.partition_point(|&x| x < t);
        if i == 0 {
            return 0;
        }
        if i == self.t.len() {
            return i - 1;
        }
        if (self.t[i] - t).abs() < (t - self.t[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }

    pub fn last_x(&self) -> f64 {
        *self.x.last().expect("empty path")
    }
}

/// Trapezoid accumulator for `∫₁ᵗ s^γ Y_s^α ds` over a fine grid. A step
/// straddling `t = 1` is cut there, with `Y_1` interpolated linearly.
#[derive(Clone, Debug)]
pub(crate) struct FromOneTrapezoid {
    gamma: f64,
    alpha: f64,
    pub value: f64,
    g_left: f64,
}

impl FromOneTrapezoid {
    pub fn new(gamma: f64, alpha: f64) -> Self {
        Self {
            gamma,
            alpha,
            value: 0.0,
            g_left: f64::NAN,
        }
    }

    /// Adds the step `[t, t_next]` given nonnegative `Y` at both ends.
    #[inline]
    pub fn advance(&mut self, t: f64, t_next: f64, y_left: f64, y_right: f64) {
        if t_next <= 1.0 {
            return;
        }
        let g_right = pow_fast(t_next, self.gamma) * pow_fast(y_right, self.alpha);
        if t >= 1.0 {
            if self.g_left.is_nan() {
                self.g_left = pow_fast(t, self.gamma) * pow_fast(y_left, self.alpha);
            }
            self.value += 0.5 * (t_next - t) * (self.g_left + g_right);
        } else {
            let theta = (1.0 - t) / (t_next - t);
            let y_one = y_left + theta * (y_right - y_left);
            self.value += 0.5 * (t_next - 1.0) * (pow_fast(y_one, self.alpha) + g_right);
        }
        self.g_left = g_right;
    }
}

#[derive(Clone, Debug, Default)]
pub struct SimOptions {
    pub y_scheme: YScheme,
}

struct Recorder {
    indices: Vec<usize>,
    next: usize,
    bundle: PathBundle,
    z: Option<Vec<f64>>,
}

impl Recorder {
    fn push(&mut self, t: f64, s: f64, y: f64, u: f64, a: f64, m_ito: f64, m_sup: f64, z: f64) {
        let b = &mut self.bundle;
        let s_pos = s.max(0.0);
        b.t.push(t);
        b.s.push(s_pos);
        b.x.push(s_pos.sqrt());
        b.y.push(y.max(0.0));
        b.u.push(u);
        b.m.push(s_pos - b.s0 - u - t);
        b.a.push(a);
        b.m_ito.push(m_ito);
        b.m_sup.push(m_sup);
        if let Some(zs) = self.z.as_mut() {
            zs.push(z.max(0.0));
        }
        self.next += 1;
    }
}

/// Simulates one path of the coupled system.
pub fn simulate_kinetic(
    stream: &mut RngStream,
    params: &ModelParams,
    drift: &DriftField,
    grid: &TimeGrid,
) -> Result<PathBundle> {
    simulate_with_noise(stream, params, drift, grid, &SimOptions::default())
}

/// [`simulate_kinetic`] over an arbitrary noise source and options.
pub fn simulate_with_noise<N: NoiseSource>(
    noise: &mut N,
    params: &ModelParams,
    drift: &DriftField,
    grid: &TimeGrid,
    opts: &SimOptions,
) -> Result<PathBundle> {
    integrate(noise, params, drift, grid, opts, false).map(|(b, _)| b)
}

/// Co-simulates `Z`, a BESQ(1) from 0 driven by the same `ΔB` increments as
/// `S`. Since `2f + 1 >= 1`, `S >= Z` pathwise.
pub fn lower_bound_comparison(
    stream: &mut RngStream,
    params: &ModelParams,
    drift: &DriftField,
    grid: &TimeGrid,
) -> Result<(PathBundle, Vec<f64>)> {
    integrate(stream, params, drift, grid, &SimOptions::default(), true)
        .map(|(b, z)| (b, z.expect("comparison path requested")))
}

fn integrate<N: NoiseSource>(
    noise: &mut N,
    params: &ModelParams,
    drift: &DriftField,
    grid: &TimeGrid,
    opts: &SimOptions,
    with_comparison: bool,
) -> Result<(PathBundle, Option<Vec<f64>>)> {
    params.validate()?;
    let exact_y = opts.y_scheme == YScheme::Exact;
    if exact_y && params.correlation != 0.0 {
        return Err(Error::param("exact Y transitions require zero correlation"));
    }

    let h = grid.step();
    let sqrt_h = h.sqrt();
    let n_steps = grid.n_steps();
    let corr = params.correlation;
    let corr_perp = (1.0 - corr * corr).max(0.0).sqrt();
    let need_perp = corr.abs() < 1.0;
    let (gamma, alpha, delta, s0) = (params.gamma, params.alpha, params.delta, params.s0);
    let check_drift = drift.is_custom();

    let indices = grid.record_indices();
    let cap = indices.len();
    let mut rec = Recorder {
        indices,
        next: 0,
        bundle: PathBundle {
            t: Vec::with_capacity(cap),
            s: Vec::with_capacity(cap),
            x: Vec::with_capacity(cap),
            y: Vec::with_capacity(cap),
            u: Vec::with_capacity(cap),
            m: Vec::with_capacity(cap),
            a: Vec::with_capacity(cap),
            m_ito: Vec::with_capacity(cap),
            m_sup: Vec::with_capacity(cap),
            s0,
        },
        z: with_comparison.then(|| Vec::with_capacity(cap)),
    };

    let mut s = s0;
    let mut y = params.y0;
    let mut z = 0.0;
    let mut u = 0.0;
    let mut a_acc = FromOneTrapezoid::new(gamma, alpha);
    let mut m_ito = 0.0;
    let mut m_sup: f64 = 0.0;

    if rec.indices.first() == Some(&0) {
        rec.push(0.0, s, y, u, 0.0, m_ito, m_sup, z);
    }

    for n in 0..n_steps {
        let t = n as f64 * h;
        let t_next = (n + 1) as f64 * h;
        let y_pos = y.max(0.0);
        let s_pos = s.max(0.0);

        let f = drift.eval_unchecked(t, y_pos);
        if check_drift && !(f >= 0.0 && f.is_finite()) {
            return Err(Error::DriftContract { t, y: y_pos, value: f });
        }
        u += 2.0 * f * h;

        let (zw, zp) = noise.increments(need_perp || exact_y);
        let y_next = if exact_y {
            noise
                .besq_transition(delta, y_pos, h)
                .ok_or_else(|| Error::param("noise source cannot draw exact transitions"))??
        } else {
            besq_euler_step(y, delta, h, zw)
        };
        let db = if exact_y { zp } else { corr * zw + corr_perp * zp } * sqrt_h;

        let diffusion = 2.0 * s_pos.sqrt() * db;
        s += (2.0 * f + 1.0) * h + diffusion;
        m_ito += diffusion;
        y = y_next;
        if with_comparison {
            z += h + 2.0 * z.max(0.0).sqrt() * db;
        }

        if !(s.abs() <= BLOWUP_LEVEL) {
            return Err(Error::NumericalBlowup { quantity: "S", time: t_next });
        }
        if !(y.abs() <= BLOWUP_LEVEL) {
            return Err(Error::NumericalBlowup { quantity: "Y", time: t_next });
        }

        a_acc.advance(t, t_next, y_pos, y.max(0.0));
        let a = a_acc.value;

        let m_now = s.max(0.0) - s0 - u - t_next;
        m_sup = m_sup.max(m_now.abs());

        if rec.next < rec.indices.len() && rec.indices[rec.next] == n + 1 {
            rec.push(t_next, s, y, u, a, m_ito, m_sup, z);
        }
    }

    Ok((rec.bundle, rec.z))
}
