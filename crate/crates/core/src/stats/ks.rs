use serde::Serialize;

use crate::error::{Error, Result};

/// Asymptotic distribution-free two-sample constant at the 1% level.
pub const KS_COEFF_1PCT: f64 = 1.628;

pub fn ks_critical_value_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_COEFF_1PCT * ((n + m) / (n * m)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub n: usize,
    pub m: usize,
    pub critical_value_1pct: f64,
    pub pass: bool,
}

/// Two-sample Kolmogorov-Smirnov statistic by a sorted merge sweep over both
/// samples; ties are consumed together so the statistic is exact.
pub fn ks_two_sample(sample_a: &[f64], sample_b: &[f64]) -> Result<KsReport> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::param("KS test needs two nonempty samples"));
    }
    if sample_a.iter().chain(sample_b).any(|v| v.is_nan()) {
        return Err(Error::param("KS samples contain NaN"));
    }
    let mut a = sample_a.to_vec();
    let mut b = sample_b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] == v {
            i += 1;
        }
        while j < m && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let critical_value_1pct = ks_critical_value_1pct(n, m);
    Ok(KsReport {
        statistic: d,
        n,
        m,
        critical_value_1pct,
        pass: d < critical_value_1pct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_computed_cases() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap().statistic, 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[10.0, 20.0]).unwrap().statistic, 1.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.5, 2.5]).unwrap().statistic, 0.5);
        assert!(ks_two_sample(&[], &[1.0]).is_err());
    }

    #[test]
    fn ties_are_handled() {
        let r = ks_two_sample(&[1.0, 1.0, 1.0, 2.0], &[1.0, 2.0, 2.0, 2.0]).unwrap();
        assert_eq!(r.statistic, 0.5);
    }

    #[test]
    fn critical_value() {
        let r = ks_two_sample(&[0.0; 2000], &[0.0; 2000]).unwrap();
        assert!((r.critical_value_1pct - 1.628 * (2.0f64 / 2000.0).sqrt()).abs() < 1e-15);
        assert!(r.pass);
    }

    proptest! {
        #[test]
        fn symmetric_and_transform_invariant(
            a in proptest::collection::vec(-100.0f64..100.0, 1..60),
            b in proptest::collection::vec(-100.0f64..100.0, 1..60),
        ) {
            let ab = ks_two_sample(&a, &b).unwrap();
            let ba = ks_two_sample(&b, &a).unwrap();
            prop_assert_eq!(ab.statistic, ba.statistic);
            prop_assert!((0.0..=1.0).contains(&ab.statistic));
            let f = |x: f64| x.powi(3) + 2.0 * x;
            let ta: Vec<f64> = a.iter().map(|&x| f(x)).collect();
            let tb: Vec<f64> = b.iter().map(|&x| f(x)).collect();
            prop_assert_eq!(ks_two_sample(&ta, &tb).unwrap().statistic, ab.statistic);
        }
    }
}
