//! Excursions of a BESQ path above level 1 and back to 0.
//!
//! With `ϑ_0` the start, `φ_n = inf{t > ϑ_{n-1} : Y_t >= 1}` and
//! `ϑ_n = inf{t > φ_n : Y_t = 0}`, each completed cycle yields
//! `υ_n = φ_n - ϑ_{n-1}`, `ν_n = ϑ_n - φ_n` and `I_n = ∫_{φ_n}^{ϑ_n} Y^α`.

use crate::bessel::besq_euler_step;
use crate::error::{Error, Result};
use crate::kinetic::pow_fast;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcursionRecord {
    pub upsilon: f64,
    pub nu: f64,
    pub integral: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Phase {
    BelowOne { since: f64 },
    Excursion { upsilon: f64, start: f64, t_prev: f64, g_prev: f64, integral: f64 },
}

/// Incremental excursion detector fed one `(t, y)` sample at a time.
#[derive(Clone, Debug)]
pub struct ExcursionScanner {
    alpha: f64,
    phase: Phase,
}

impl ExcursionScanner {
    pub fn new(alpha: f64, t0: f64) -> Self {
        Self {
            alpha,
            phase: Phase::BelowOne { since: t0 },
        }
    }

    /// Feeds the next sample; returns the record of an excursion completed
    /// at this sample.
    pub fn push(&mut self, t: f64, y: f64) -> Option<ExcursionRecord> {
        match &mut self.phase {
            Phase::BelowOne { since } => {
                if y >= 1.0 {
                    self.phase = Phase::Excursion {
                        upsilon: t - *since,
                        start: t,
                        t_prev: t,
                        g_prev: pow_fast(y, self.alpha),
                        integral: 0.0,
                    };
                }
                None
            }
            Phase::Excursion { upsilon, start, t_prev, g_prev, integral } => {
                let y = y.max(0.0);
                let g = if y == 0.0 && self.alpha > 0.0 { 0.0 } else { pow_fast(y, self.alpha) };
                *integral += 0.5 * (t - *t_prev) * (*g_prev + g);
                *t_prev = t;
                *g_prev = g;
                if y <= 0.0 {
                    let rec = ExcursionRecord {
                        upsilon: *upsilon,
                        nu: t - *start,
                        integral: *integral,
                    };
                    self.phase = Phase::BelowOne { since: t };
                    Some(rec)
                } else {
                    None
                }
            }
        }
    }

    /// The in-progress excursion as a partial record, if one is open.
    pub fn open(&self) -> Option<ExcursionRecord> {
        match self.phase {
            Phase::Excursion { upsilon, start, t_prev, integral, .. } => Some(ExcursionRecord {
                upsilon,
                nu: t_prev - start,
                integral,
            }),
            Phase::BelowOne { .. } => None,
        }
    }

    /// Drops any open excursion and restarts the cycle at `t`.
    pub fn restart(&mut self, t: f64) {
        self.phase = Phase::BelowOne { since: t };
    }
}

/// All completed excursions of a path sampled on a uniform grid.
pub fn extract_excursions(times: &[f64], y: &[f64], alpha: f64) -> Result<Vec<ExcursionRecord>> {
    if times.len() != y.len() {
        return Err(Error::param("times and values differ in length"));
    }
    if times.len() >= 2 {
        let h = times[1] - times[0];
        let uniform = h > 0.0
            && times
                .windows(2)
                .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.max(w[1].abs() * 1e-6));
        if !uniform {
            return Err(Error::param("excursion extraction needs a uniform time grid"));
        }
    }
    let Some(&t0) = times.first() else {
        return Ok(Vec::new());
    };
    let mut scanner = ExcursionScanner::new(alpha, t0);
    Ok(times
        .iter()
        .zip(y)
        .filter_map(|(&t, &v)| scanner.push(t, v))
        .collect())
}

/// Right-censoring rule for [`sample_excursion_cycles`]. An excursion still
/// open when the cap is reached is recorded as censored, with the capped
/// quantity equal to the cap, and the path restarts from 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExcursionCap {
    Integral(f64),
    Duration(f64),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExcursionSample {
    pub complete: Vec<ExcursionRecord>,
    pub censored: Vec<ExcursionRecord>,
}

impl ExcursionSample {
    /// Integrals of complete and censored cycles together; the empirical
    /// survival of this sample is exact at levels up to an integral cap.
    pub fn integrals(&self) -> Vec<f64> {
        self.complete.iter().chain(&self.censored).map(|r| r.integral).collect()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.complete.iter().chain(&self.censored).map(|r| r.nu).collect()
    }

    pub fn len(&self) -> usize {
        self.complete.len() + self.censored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Runs a BESQ(δ) path from 0 under the full-truncation Euler scheme with
/// step `h` until `n_cycles` excursions have been completed or censored.
/// Restarting from 0 after a censored cycle keeps cycles independent by the
/// strong Markov property at the return time.
pub fn sample_excursion_cycles(
    stream: &mut RngStream,
    delta: f64,
    alpha: f64,
    step: f64,
    n_cycles: usize,
    cap: ExcursionCap,
) -> Result<ExcursionSample> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::UnsupportedRegime(format!(
            "excursions from 0 need 0 < δ < 2, got {delta}"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::param(format!("step must be > 0, got {step}")));
    }
    let mut out = ExcursionSample::default();
    let mut scanner = ExcursionScanner::new(alpha, 0.0);
    let mut y = 0.0;
    let mut n: u64 = 0;
    while out.len() < n_cycles {
        n += 1;
        let t = n as f64 * step;
        y = besq_euler_step(y, delta, step, stream.sample_normal());
        if let Some(rec) = scanner.push(t, y.max(0.0)) {
            y = 0.0;
            out.complete.push(rec);
            continue;
        }
        if let Some(open) = scanner.open() {
            let hit = match cap {
                ExcursionCap::Integral(z) => open.integral >= z,
                ExcursionCap::Duration(d) => open.nu >= d,
            };
            if hit {
                out.censored.push(open);
                scanner.restart(t);
                y = 0.0;
            }
        }
    }
    Ok(out)
}
