use crate::error::{Error, Result};

/// Fine integration step plus the checkpoints at which a path is recorded.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    step: f64,
    record_times: Vec<f64>,
}

/// Default checkpoint density for [`TimeGrid::geometric`].
pub const POINTS_PER_DECADE: usize = 32;

impl TimeGrid {
    pub fn new(t_end: f64, step: f64, mut record_times: Vec<f64>) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::param(format!("t_end must be > 0, got {t_end}")));
        }
        if !(step > 0.0 && step <= t_end) {
            return Err(Error::param(format!("step must be in (0, t_end], got {step}")));
        }
        if record_times.iter().any(|&t| !(0.0..=t_end).contains(&t)) {
            return Err(Error::param("record times must lie in [0, t_end]"));
        }
        record_times.sort_by(f64::total_cmp);
        record_times.dedup();
        if t_end >= 1.0 && !record_times.contains(&1.0) {
            return Err(Error::param("record times must include t = 1 when t_end >= 1"));
        }
        Ok(Self {
            t_end,
            step,
            record_times,
        })
    }

    /// `t = 0`, `t = 1`, `t_end` and `per_decade` log-spaced points per decade
    /// between `step` and `t_end`.
    pub fn geometric(t_end: f64, step: f64, per_decade: usize) -> Result<Self> {
        // validate before sizing the checkpoint list from `step`
        Self::new(t_end, step, (t_end >= 1.0).then_some(1.0).into_iter().collect())?;
        let mut times = vec![0.0, t_end];
        if t_end >= 1.0 {
            times.push(1.0);
        }
        let lo = step.log10();
        let hi = t_end.log10();
        let n = ((hi - lo) * per_decade as f64).ceil() as usize;
        for k in 0..=n {
            let t = 10f64.powf(lo + k as f64 / per_decade as f64);
            if t < t_end {
                times.push(t);
            }
        }
        Self::new(t_end, step, times)
    }

    pub fn with_default_records(t_end: f64, step: f64) -> Result<Self> {
        Self::geometric(t_end, step, POINTS_PER_DECADE)
    }

    /// Adds checkpoints, e.g. dyadic times a check needs.
    pub fn with_extra_records(mut self, extra: impl IntoIterator<Item = f64>) -> Result<Self> {
        self.record_times.extend(extra);
        Self::new(self.t_end, self.step, self.record_times)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn record_times(&self) -> &[f64] {
        &self.record_times
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.step - 1e-9).ceil() as usize
    }

    /// Step indices the recorded checkpoints snap to (nearest fine-grid
    /// point), deduplicated and increasing.
    pub(crate) fn record_indices(&self) -> Vec<usize> {
        let n = self.n_steps();
        let mut idx: Vec<usize> = self
            .record_times
            .iter()
            .map(|&t| ((t / self.step).round() as usize).min(n))
            .collect();
        idx.dedup();
        idx
    }
}

/// Powers of two in `[lo, hi]`.
pub fn dyadic_times(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 2f64.powi(lo.log2().ceil() as i32);
    while t <= hi {
        out.push(t);
        t *= 2.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_contains_anchors() {
        let g = TimeGrid::geometric(1e5, 0.1, 32).unwrap();
        let r = g.record_times();
        assert_eq!(r[0], 0.0);
        assert!(r.contains(&1.0));
        assert_eq!(*r.last().unwrap(), 1e5);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        // 6 decades from 0.1 to 1e5
        assert!(r.len() >= 6 * 32);
    }

    #[test]
    fn rejects_invalid_grids() {
        assert!(TimeGrid::new(0.0, 0.1, vec![0.0]).is_err());
        assert!(TimeGrid::new(10.0, 0.0, vec![0.0, 1.0]).is_err());
        assert!(TimeGrid::new(10.0, 0.1, vec![0.0, 11.0]).is_err());
        assert!(TimeGrid::new(10.0, 0.1, vec![0.0, 2.0]).is_err());
        assert!(TimeGrid::new(0.5, 0.1, vec![0.0, 0.5]).is_ok());
        assert!(TimeGrid::geometric(1e5, 0.0, 32).is_err());
        assert!(TimeGrid::geometric(1e5, f64::NAN, 32).is_err());
    }

    #[test]
    fn record_indices_snap_to_steps() {
        let g = TimeGrid::new(2.0, 0.1, vec![0.0, 0.26, 1.0, 2.0]).unwrap();
        assert_eq!(g.n_steps(), 20);
        assert_eq!(g.record_indices(), vec![0, 3, 10, 20]);
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_times(1e3, 1e4), vec![1024.0, 2048.0, 4096.0, 8192.0]);
        assert_eq!(dyadic_times(4.0, 4.0), vec![4.0]);
    }
}
