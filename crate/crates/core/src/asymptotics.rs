//! Numeric checks of the growth law `a_n ~ K 2^n / √n`.
//!
//! Every reported quantity is formed from exact coefficients and converted
//! to `f64` once, at the final division.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::series::sav132;

/// Published value of `K` and the agreement required of [`constant_k`].
pub const K_REFERENCE: f64 = 2.77826;
pub const K_TOLERANCE: f64 = 5e-6;

/// Largest allowed `|a_n √n / 2^n - K| / K` over [`RATIO_WINDOW`].
pub const RATIO_TOLERANCE: f64 = 0.10;
pub const RATIO_WINDOW: RangeInclusive<usize> = 12..=64;
/// The deviation from `K` at the second point must be below the first.
pub const TREND_POINTS: (usize, usize) = (16, 64);

/// Open interval that `a_{n+1} / a_n` must fall in over [`GROWTH_WINDOW`].
pub const GROWTH_BOUNDS: (f64, f64) = (1.9, 2.0);
pub const GROWTH_WINDOW: RangeInclusive<usize> = 20..=63;

/// Distances below `1/2` at which the singular behaviour is sampled, and the
/// relative tolerance on the normalized value.
pub const SINGULAR_EPSILONS: [f64; 2] = [1e-4, 1e-6];
pub const SINGULAR_TOLERANCE: f64 = 0.01;

/// `c(x) = (1 - √(1 - 4x)) / (2x)`.
fn catalan_closed(x: f64) -> f64 {
    (1.0 - (1.0 - 4.0 * x).sqrt()) / (2.0 * x)
}

/// `K = c(y) / (√(2π) (2 - 3c(y)/2))` with `y = c(1/8)/8`.
pub fn constant_k() -> f64 {
    let y = catalan_closed(0.125) / 8.0;
    let cy = catalan_closed(y);
    cy / (2.0 - 1.5 * cy) / (2.0 * std::f64::consts::PI).sqrt()
}

/// The same constant through `c(1/8) = 4 - 2√2`, `y = (2 - √2)/4` and the
/// rationalized `c(y) = 2 / (1 + √(1 - 4y))`.
pub fn constant_k_reassociated() -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    let y = (2.0 - s2) / 4.0;
    let cy = 2.0 / (1.0 + (1.0 - 4.0 * y).sqrt());
    let root_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    2.0 * cy / ((4.0 - 3.0 * cy) * root_two_pi)
}

/// `f(x) √(2(1 - 2x))` at `x = 1/2 - ε`, where
/// `f(x) = (1 - x) / (1 - x - x² c(x²))`. Tends to 1 as `ε → 0`.
pub fn singular_expansion_ratio(eps: f64) -> f64 {
    let x = 0.5 - eps;
    // 1 - 4x² without cancellation
    let disc = (1.0 - 2.0 * x) * (1.0 + 2.0 * x);
    let x2c = (1.0 - disc.sqrt()) / 2.0;
    let f = (1.0 - x) / (1.0 - x - x2c);
    f * (2.0 * (1.0 - 2.0 * x)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n_max: usize,
    pub k_closed_form: f64,
    /// `(n, a_n √n / 2^n)` for `1 <= n <= n_max`.
    pub ratios: Vec<(usize, f64)>,
    /// `(n, a_{n+1} / a_n)` for `1 <= n < n_max`.
    pub growth: Vec<(usize, f64)>,
    /// Every `n <= n_max` with `a_n >= 2^n`.
    pub exceed_2n: Vec<usize>,
}

fn quotient(num: &BigInt, den: &BigInt) -> f64 {
    num.to_f64().expect("finite") / den.to_f64().expect("finite")
}

pub fn asymptotic_report(n_max: usize, order: usize) -> Result<AsymptoticReport> {
    if n_max == 0 || n_max > order {
        return Err(invalid(format!(
            "asymptotic report needs 1 <= n_max <= order, got n_max = {n_max}, order = {order}"
        )));
    }
    let a = sav132(order);
    let coeff = |n: usize| a.coeff(n).expect("n <= order");
    let mut ratios = Vec::with_capacity(n_max);
    let mut exceed_2n = Vec::new();
    for n in 1..=n_max {
        let pow = BigInt::one() << n;
        if coeff(n) >= &pow {
            exceed_2n.push(n);
        }
        ratios.push((n, quotient(coeff(n), &pow) * (n as f64).sqrt()));
    }
    let growth = (1..n_max)
        .map(|n| (n, quotient(coeff(n + 1), coeff(n))))
        .collect();
    Ok(AsymptoticReport {
        n_max,
        k_closed_form: constant_k(),
        ratios,
        growth,
        exceed_2n,
    })
}

impl AsymptoticReport {
    pub fn ratio(&self, n: usize) -> Option<f64> {
        self.ratios.iter().find(|r| r.0 == n).map(|r| r.1)
    }

    pub fn growth_at(&self, n: usize) -> Option<f64> {
        self.growth.iter().find(|g| g.0 == n).map(|g| g.1)
    }

    /// `(a_n √n / 2^n - K) / K`.
    pub fn relative_deviation(&self, n: usize) -> Option<f64> {
        self.ratio(n)
            .map(|r| (r - self.k_closed_form) / self.k_closed_form)
    }

    /// Points of [`RATIO_WINDOW`] (within range) whose deviation is too large.
    pub fn ratio_window_violations(&self) -> Vec<(usize, f64)> {
        RATIO_WINDOW
            .filter_map(|n| self.relative_deviation(n).map(|d| (n, d)))
            .filter(|(_, d)| d.abs() >= RATIO_TOLERANCE)
            .collect()
    }

    /// Whether the deviation shrinks between the two [`TREND_POINTS`];
    /// `None` if either is out of range.
    pub fn trend_holds(&self) -> Option<bool> {
        let (early, late) = TREND_POINTS;
        let d0 = self.relative_deviation(early)?.abs();
        let d1 = self.relative_deviation(late)?.abs();
        Some(d1 < d0)
    }

    /// Points of [`GROWTH_WINDOW`] (within range) outside [`GROWTH_BOUNDS`].
    pub fn growth_window_violations(&self) -> Vec<(usize, f64)> {
        let (lo, hi) = GROWTH_BOUNDS;
        GROWTH_WINDOW
            .filter_map(|n| self.growth_at(n).map(|g| (n, g)))
            .filter(|&(_, g)| !(lo < g && g < hi))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "K = {:.10}", self.k_closed_form);
        let _ = writeln!(out, "n\ta_n*sqrt(n)/2^n\trel_dev\ta_(n+1)/a_n");
        for &(n, r) in &self.ratios {
            let dev = (r - self.k_closed_form) / self.k_closed_form;
            let g = self
                .growth_at(n)
                .map_or_else(|| "-".to_string(), |g| format!("{g:.6}"));
            let _ = writeln!(out, "{n}\t{r:.6}\t{dev:+.4}\t{g}");
        }
        if self.exceed_2n.is_empty() {
            let _ = writeln!(out, "a_n < 2^n for 1 <= n <= {}", self.n_max);
        } else {
            let _ = writeln!(out, "a_n >= 2^n at n = {:?}", self.exceed_2n);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_matches_reference() {
        let k = constant_k();
        assert!(k.is_finite() && k > 0.0);
        assert!((k - K_REFERENCE).abs() < K_TOLERANCE, "{k}");
        assert!((k - constant_k_reassociated()).abs() < 1e-10);
    }

    #[test]
    fn closed_form_intermediates() {
        let c8 = catalan_closed(0.125);
        assert!((c8 - (4.0 - 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-12);
        assert!((c8 / 8.0 - (2.0 - std::f64::consts::SQRT_2) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn report_values() {
        let r = asymptotic_report(64, 64).unwrap();
        assert!(r.exceed_2n.is_empty());
        assert!((r.ratio(15).unwrap() - 2.863).abs() < 1e-3);
        assert!((r.growth_at(14).unwrap() - 24223.0 / 12306.0).abs() < 1e-12);
        assert!(r.growth_window_violations().is_empty());
        assert!(asymptotic_report(65, 64).is_err());
        assert!(asymptotic_report(0, 64).is_err());
    }

    #[test]
    fn singular_behaviour() {
        for eps in SINGULAR_EPSILONS {
            let r = singular_expansion_ratio(eps);
            assert!((r - 1.0).abs() < SINGULAR_TOLERANCE, "eps = {eps}: {r}");
        }
    }

    #[test]
    fn json_shape() {
        let v = asymptotic_report(3, 8).unwrap().to_json();
        assert_eq!(v["n_max"], 3);
        assert_eq!(v["ratios"].as_array().unwrap().len(), 3);
        assert_eq!(v["growth"][0][0], 1);
    }
}
