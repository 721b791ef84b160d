//! Classical fixed-step fourth-order Runge–Kutta.
//!
//! A fixed step count keeps every run bit-reproducible, which the
//! transport oracle and the deterministic CLI output depend on.

/// Advance `y` by one RK4 step of size `h` at time `t`.
pub fn rk4_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + h * k3[i];
    }
    let k4 = f(t + h, &y2);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` in `steps` equal steps,
/// calling `observe(step_index, t, y)` after every step (and once for the
/// initial state with index 0).
pub fn rk4_integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    steps: usize,
    mut observe: O,
) -> [f64; N]
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(usize, f64, &[f64; N]),
{
    assert!(steps >= 1);
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    observe(0, t0, &y);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        y = rk4_step(&mut f, t, &y, h);
        observe(k + 1, t + h, &y);
    }
    y
}
