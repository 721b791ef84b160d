//! Composite Simpson quadrature.
//!
//! All loop integrals in this crate are smooth and periodic, for which the
//! composite rule on a uniform grid converges at fourth order (and in
//! practice to round-off once the grid resolves the integrand).

extern crate alloc;
use alloc::vec::Vec;

/// Integrate `f` over `[x0, x1]` with the composite Simpson rule on
/// `panels` uniform subintervals.
///
/// `panels` must be even and at least 2.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, x0: f64, x1: f64, panels: usize) -> f64 {
    assert!(
        panels >= 2 && panels.is_multiple_of(2),
        "panels must be even and >= 2"
    );
    let h = (x1 - x0) / panels as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..panels {
        let v = f(x0 + k as f64 * h);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (h / 3.0) * (f(x0) + f(x1) + 4.0 * odd + 2.0 * even)
}

/// Cumulative integral of `f` from `x0`, returned at the `cells + 1`
/// uniform grid points of `[x0, x1]`.
///
/// Each cell is integrated by a single Simpson step through its midpoint,
/// so the prefix values carry the same fourth-order accuracy as
/// [`simpson`].
pub fn cumulative_simpson<F: FnMut(f64) -> f64>(
    mut f: F,
    x0: f64,
    x1: f64,
    cells: usize,
) -> Vec<f64> {
    assert!(cells >= 1);
    let h = (x1 - x0) / cells as f64;
    let mut out = Vec::with_capacity(cells + 1);
    out.push(0.0);
    let mut acc = 0.0;
    let mut left = f(x0);
    for k in 0..cells {
        let xl = x0 + k as f64 * h;
        let mid = f(xl + 0.5 * h);
        let right = f(xl + h);
        acc += (h / 6.0) * (left + 4.0 * mid + right);
        out.push(acc);
        left = right;
    }
    out
}
