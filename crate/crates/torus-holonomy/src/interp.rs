//! Monotone cubic Hermite interpolation (Fritsch–Carlson).
//!
//! Used to invert cumulative arc-length tables; the monotonicity limiter
//! guarantees the interpolant never overshoots between knots, so the
//! inverse map stays single-valued.

extern crate alloc;
use alloc::vec::Vec;

use crate::math;

#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Build the interpolant for knots `(xs[i], ys[i])`.
    ///
    /// `xs` must be strictly increasing and hold at least two knots.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        let n = xs.len();
        let mut secants = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let dx = xs[i + 1] - xs[i];
            assert!(dx > 0.0, "knots must be strictly increasing");
            secants.push((ys[i + 1] - ys[i]) / dx);
        }

        let mut slopes = Vec::with_capacity(n);
        slopes.push(secants[0]);
        for i in 1..n - 1 {
            let (a, b) = (secants[i - 1], secants[i]);
            if a * b <= 0.0 {
                slopes.push(0.0);
            } else {
                slopes.push(0.5 * (a + b));
            }
        }
        slopes.push(secants[n - 2]);

        // Fritsch-Carlson limiter
        for i in 0..n - 1 {
            let d = secants[i];
            if d == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let alpha = slopes[i] / d;
            let beta = slopes[i + 1] / d;
            let r2 = alpha * alpha + beta * beta;
            if r2 > 9.0 {
                let tau = 3.0 / math::sqrt(r2);
                slopes[i] = tau * alpha * d;
                slopes[i + 1] = tau * beta * d;
            }
        }

        MonotoneCubic { xs, ys, slopes }
    }

    /// Evaluate at `x`; clamps outside the knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        // binary search for the cell with xs[i] <= x < xs[i+1]
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.xs[lo + 1] - self.xs[lo];
        let t = (x - self.xs[lo]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[lo]
            + h10 * h * self.slopes[lo]
            + h01 * self.ys[lo + 1]
            + h11 * h * self.slopes[lo + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn reproduces_knots() {
        let xs = vec![0.0, 1.0, 2.5, 4.0];
        let ys = vec![1.0, 2.0, 2.2, 5.0];
        let m = MonotoneCubic::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(ys.iter()) {
            assert!((m.eval(*x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn stays_monotone_between_knots() {
        let xs: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x + libm::sin(*x)).collect();
        let m = MonotoneCubic::new(xs, ys);
        let mut prev = m.eval(0.0);
        for k in 1..2000 {
            let v = m.eval(k as f64 * 0.005);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn accurate_on_smooth_data() {
        let xs: Vec<f64> = (0..=256).map(|i| i as f64 / 256.0 * 6.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + libm::cos(*x)).collect();
        let m = MonotoneCubic::new(xs, ys);
        // slope estimates are second order, so the interpolant is ~h^3
        for k in 0..600 {
            let x = k as f64 * 0.01;
            let exact = 2.0 * x + libm::cos(x);
            assert!((m.eval(x) - exact).abs() < 1e-4);
        }
    }
}
