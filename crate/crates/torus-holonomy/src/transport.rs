//! Parallel transport of tangent vectors along torus loops, in closed
//! form and by numerical integration, plus the anholonomy measure Σ.
//!
//! The transport law is `dP^j/dlambda = -Gamma^j_{ik} (dx^i/dlambda) P^k`.
//! Σ is the ratio of the transported vector's projection onto the loop's
//! *initial* unit tangent, final over initial; for open (slanted)
//! windings the same convention is kept even though the endpoints differ.

extern crate alloc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::{LoopSpec, SurfacePoint, TangentVector, Torus, DEGENERACY_EPS};
use crate::math;
use crate::ode;

use core::f64::consts::{PI, TAU};

/// Default step count for the fixed-step transport integrator.
pub const DEFAULT_STEPS: usize = 1 << 16;

/// Outcome of transporting a vector once around a loop.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransportResult {
    /// Transported vector at `lambda = 2pi`.
    pub p_final: TangentVector,
    /// Projection ratio Σ; `None` when the initial projection vanishes
    /// and the ratio is undefined.
    pub sigma: Option<f64>,
    /// Maximum relative deviation of `g_ij P^i P^j` observed along the
    /// path. Identically zero for the closed-form route, which conserves
    /// the norm by construction.
    pub norm_drift: f64,
    /// Optional `(lambda, P)` samples along the path.
    pub samples: Option<Vec<(f64, TangentVector)>>,
}

/// One row of a Σ(θ₀) sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub theta0: f64,
    pub n: f64,
    /// `None` marks a divergent row (a pole of Σ inside the grid cell).
    pub sigma: Option<f64>,
}

impl SweepRow {
    pub fn is_divergent(&self) -> bool {
        self.sigma.is_none()
    }
}

/// Transport equation right-hand side `dP/dlambda` at parameter `lambda`.
pub fn pt_rhs(
    torus: &Torus,
    path: &LoopSpec,
    lambda: f64,
    p: TangentVector,
) -> Result<TangentVector, Error> {
    let (dphi, dtheta) = path.velocity();
    let gamma = torus.christoffel_at(path.point(lambda).theta)?;
    Ok(TangentVector::new(
        -gamma.gamma_phi_phitheta * (dphi * p.p_theta + dtheta * p.p_phi),
        -gamma.gamma_theta_phiphi * dphi * p.p_phi,
    ))
}

/// Metric inner product of two tangent vectors at a surface point.
pub fn projection(torus: &Torus, at: SurfacePoint, u: TangentVector, p: TangentVector) -> f64 {
    let m = torus.metric_at(at.theta);
    m.g_phiphi * u.p_phi * p.p_phi + m.g_thetatheta * u.p_theta * p.p_theta
}

/// Default starting vector for anholonomy diagnostics: components
/// `(1/((n+1) sqrt 2), 1/sqrt 2)`, which has squared metric length `a^2`
/// at the outer equator (unit length for `a = 1`) for every aspect ratio.
pub fn reference_p0(torus: &Torus) -> TangentVector {
    let n = torus.aspect_ratio();
    let inv_sqrt2 = 1.0 / math::sqrt(2.0);
    TangentVector::new(inv_sqrt2 / (n + 1.0), inv_sqrt2)
}

/// Σ for a transported vector: projection onto the loop's initial unit
/// tangent (metric at the start point), final over initial. `None` when
/// the initial projection vanishes and the ratio is undefined.
pub fn projection_ratio(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
    p_final: TangentVector,
) -> Option<f64> {
    let at = path.point(0.0);
    let u0 = torus.unit_tangent_chart(path, 0.0).ok()?;
    let proj0 = projection(torus, at, u0, p0);
    if proj0 == 0.0 {
        return None;
    }
    let ratio = projection(torus, at, u0, p_final) / proj0;
    ratio.is_finite().then_some(ratio)
}

/// Transport `p0` once around the loop with fixed-step RK4 over
/// `lambda in [0, 2pi]`, recording the worst norm drift along the way.
///
/// Deterministic for fixed inputs. `steps` must be at least 16.
pub fn transport_numeric(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
    steps: usize,
) -> Result<TransportResult, Error> {
    transport_numeric_impl(torus, path, p0, steps, None)
}

/// Same as [`transport_numeric`], additionally recording `(lambda, P)`
/// every `sample_every` steps (the initial and final states always
/// included).
pub fn transport_numeric_sampled(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
    steps: usize,
    sample_every: usize,
) -> Result<TransportResult, Error> {
    transport_numeric_impl(torus, path, p0, steps, Some(sample_every.max(1)))
}

fn transport_numeric_impl(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
    steps: usize,
    sample_every: Option<usize>,
) -> Result<TransportResult, Error> {
    assert!(steps >= 16, "transport needs at least 16 steps");
    let (dphi, dtheta) = path.velocity();
    if dphi == 0.0 && dtheta == 0.0 {
        return Err(Error::ZeroTangent);
    }

    let norm0 = p0.metric_norm_sq(&torus.metric_at(path.point(0.0).theta));
    let mut failure: Option<Error> = None;
    let mut drift: f64 = 0.0;
    let mut samples: Vec<(f64, TangentVector)> = Vec::new();

    let rhs = |lambda: f64, y: &[f64; 2]| -> [f64; 2] {
        match pt_rhs(torus, path, lambda, TangentVector::new(y[0], y[1])) {
            Ok(d) => [d.p_phi, d.p_theta],
            Err(e) => {
                failure.get_or_insert(e);
                [0.0, 0.0]
            }
        }
    };

    let observe = |k: usize, lambda: f64, y: &[f64; 2]| {
        let p = TangentVector::new(y[0], y[1]);
        if norm0 > 0.0 {
            let norm = p.metric_norm_sq(&torus.metric_at(path.point(lambda).theta));
            drift = drift.max(math::abs(norm - norm0) / norm0);
        }
        if let Some(every) = sample_every {
            if k.is_multiple_of(every) || k == steps {
                samples.push((lambda, p));
            }
        }
    };

    let y = ode::rk4_integrate(rhs, 0.0, TAU, [p0.p_phi, p0.p_theta], steps, observe);
    if let Some(e) = failure {
        return Err(e);
    }
    let p_final = TangentVector::new(y[0], y[1]);
    Ok(TransportResult {
        p_final,
        sigma: projection_ratio(torus, path, p0, p_final),
        norm_drift: drift,
        samples: sample_every.map(|_| samples),
    })
}

/// Closed-form parallel transport evaluated at parameter `lambda`.
///
/// * Toroidal, with `alpha = sin theta0` and `z0 = c + a cos theta0`:
///   `P^phi = P0^phi cos(alpha l) + (a P0^theta / z0) sin(alpha l)`,
///   `P^theta = P0^theta cos(alpha l) - (z0 P0^phi / a) sin(alpha l)`.
/// * Poloidal: `P^phi = (c + a) P0^phi / (c + a cos l)`, `P^theta = P0^theta`.
/// * Winding with `q > 0`: with `z = c + a cos(q l)` and `w = q/p`, the
///   transported vector depends on `lambda` only through `z`:
///   `P^theta = A cos(z/(a w)) + B sin(z/(a w))`,
///   `P^phi = (a/z)(-A sin(z/(a w)) + B cos(z/(a w)))`,
///   with `A`, `B` fixed by the data at `lambda = 0` (where `z = c + a`).
///   The `p = 0` case reduces to the poloidal form. Since `z` returns to
///   `c + a` whenever `q` is an integer, every such loop transports `p0`
///   back to itself exactly.
pub fn transport_closed_form(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
    lambda: f64,
) -> Result<TangentVector, Error> {
    let (a, c) = (torus.a(), torus.c());
    let n = torus.aspect_ratio();
    match *path {
        LoopSpec::Toroidal { theta0 } => {
            let (sin_t, cos_t) = math::sin_cos(theta0);
            if math::abs(n + cos_t) < DEGENERACY_EPS {
                return Err(Error::DegenerateChart { theta: theta0 });
            }
            let z0 = c + a * cos_t;
            let (s, co) = math::sin_cos(sin_t * lambda);
            Ok(TangentVector::new(
                p0.p_phi * co + a * p0.p_theta / z0 * s,
                p0.p_theta * co - z0 * p0.p_phi / a * s,
            ))
        }
        LoopSpec::Poloidal { .. } => poloidal_closed_form(torus, p0, lambda),
        LoopSpec::Winding { p, q } => {
            if q <= 0.0 {
                return Err(Error::UnsupportedLoop);
            }
            if p == 0.0 {
                return poloidal_closed_form(torus, p0, q * lambda);
            }
            let theta = q * lambda;
            let cos_t = math::cos(theta);
            if math::abs(n + cos_t) < DEGENERACY_EPS {
                return Err(Error::DegenerateChart { theta });
            }
            let omega = q / p;
            let z = c + a * cos_t;
            let (sin_u, cos_u) = math::sin_cos(z / (a * omega));
            let (sin_u0, cos_u0) = math::sin_cos((c + a) / (a * omega));
            let b = (n + 1.0) * p0.p_phi * cos_u0 + p0.p_theta * sin_u0;
            let a_coeff = p0.p_theta * cos_u0 - (n + 1.0) * p0.p_phi * sin_u0;
            Ok(TangentVector::new(
                (a / z) * (-a_coeff * sin_u + b * cos_u),
                a_coeff * cos_u + b * sin_u,
            ))
        }
    }
}

fn poloidal_closed_form(
    torus: &Torus,
    p0: TangentVector,
    theta: f64,
) -> Result<TangentVector, Error> {
    let (a, c) = (torus.a(), torus.c());
    let cos_t = math::cos(theta);
    if math::abs(torus.aspect_ratio() + cos_t) < DEGENERACY_EPS {
        return Err(Error::DegenerateChart { theta });
    }
    Ok(TangentVector::new(
        (c + a) * p0.p_phi / (c + a * cos_t),
        p0.p_theta,
    ))
}

/// Full-loop closed-form transport packaged like the numeric route.
///
/// `norm_drift` is reported as exactly zero: the closed forms conserve
/// `g_ij P^i P^j` identically.
pub fn transport_closed(
    torus: &Torus,
    path: &LoopSpec,
    p0: TangentVector,
) -> Result<TransportResult, Error> {
    let p_final = transport_closed_form(torus, path, p0, TAU)?;
    Ok(TransportResult {
        p_final,
        sigma: projection_ratio(torus, path, p0, p_final),
        norm_drift: 0.0,
        samples: None,
    })
}

/// Anholonomy ratio for a toroidal loop at `theta0`, with the starting
/// vector fixed to [`reference_p0`] so sweeps are reproducible:
///
/// `Sigma(n, theta0) = cos(2 pi alpha) + (n+1) sin(2 pi alpha) / (n + cos theta0)`
///
/// with `alpha = sin theta0` and `n = c/a` (the tube radius cancels).
pub fn sigma_closed_form(torus: &Torus, theta0: f64) -> Result<f64, Error> {
    let n = torus.aspect_ratio();
    let (sin_t, cos_t) = math::sin_cos(theta0);
    let denom = n + cos_t;
    if math::abs(denom) < DEGENERACY_EPS {
        return Err(Error::DivergentAnholonomy { theta0 });
    }
    let (s, c) = math::sin_cos(TAU * sin_t);
    Ok(c + (n + 1.0) * s / denom)
}

/// Distance from `theta` to the nearest pole of Σ (root of `n + cos`),
/// or `None` when the aspect ratio admits no pole (`n > 1`).
fn nearest_pole_distance(n: f64, theta: f64) -> Option<f64> {
    if n > 1.0 {
        return None;
    }
    let pole = math::acos(-n); // in [0, pi]; poles sit at ±pole (mod 2pi)
    let d1 = math::abs(wrap_to_pi(theta - pole));
    let d2 = math::abs(wrap_to_pi(theta + pole));
    Some(d1.min(d2))
}

fn wrap_to_pi(x: f64) -> f64 {
    math::rem_euclid(x + PI, TAU) - PI
}

/// Evaluate Σ on a grid of toroidal-loop angles for a torus with aspect
/// ratio `n` and tube radius `a`.
///
/// Rows are emitted in grid order. A row is marked divergent (not
/// omitted) when a pole of Σ falls within half a grid cell of it, so a
/// plot of the sweep breaks cleanly across poles even when no grid point
/// hits one exactly.
pub fn sigma_sweep(n: f64, a: f64, theta0_grid: &[f64]) -> Vec<SweepRow> {
    let torus = match Torus::new(a, n * a) {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let m = theta0_grid.len();
    let mut rows = Vec::with_capacity(m);
    for (i, &theta0) in theta0_grid.iter().enumerate() {
        let spacing_left = if i > 0 {
            theta0 - theta0_grid[i - 1]
        } else if m > 1 {
            theta0_grid[1] - theta0
        } else {
            0.0
        };
        let spacing_right = if i + 1 < m {
            theta0_grid[i + 1] - theta0
        } else {
            spacing_left
        };
        let half_cell = 0.5 * spacing_left.max(spacing_right);
        // the slack keeps rows exactly halfway to a pole from flipping on
        // the last ulp
        let near_pole =
            nearest_pole_distance(n, theta0).is_some_and(|d| d <= half_cell * (1.0 + 1e-12));
        let sigma = if near_pole {
            None
        } else {
            sigma_closed_form(&torus, theta0).ok()
        };
        rows.push(SweepRow { theta0, n, sigma });
    }
    rows
}
