//! Hannay angle for a particle riding a torus loop while the torus
//! itself revolves, computed by two independent frameworks.
//!
//! * **Line integral**: the shift comes from the Ω-gradient of
//!   `W(Ω) = ∮ (Ω × r) · dr`, evaluated by quadrature. With winding
//!   counts `n_i` and loop length `L`,
//!   `Δs = -(1/L) Σ_i (∂W/∂Ω_i) 2π n_i` and `ΔΘ = (2π/L) Δs`.
//! * **Rotating-frame dynamics**: the tangential pseudo-force
//!   `s̈ = t̂ · (Ω²r - (Ω·r)Ω - Ω̇ × r)` is either averaged over the loop
//!   and integrated twice in time ([`berry_averaged_shift`]) or
//!   integrated as a full second-order ODE for a particle that laps the
//!   loop many times per revolution ([`berry_simulate`]).
//!
//! The simulated shift converges to the averaged one as the number of
//! particle circuits per revolution grows. The Coriolis term plays no
//! role: the particle is confined to the loop and that force is normal
//! to it.

extern crate alloc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::{ArcLengthTable, LoopSpec, Torus, ARC_TABLE_CELLS};
use crate::math;
use crate::ode;
use crate::quadrature;
use crate::vec3::Vec3;

use core::f64::consts::TAU;

/// Default Simpson panels for loop averages inside the Berry framework.
pub const DEFAULT_LOOP_AVG_PANELS: usize = 2048;
/// Default Simpson panels for the outer time integral. The integrand is
/// a cubic in time for the linear ramp, which Simpson integrates
/// exactly, so this only needs to be even and modest.
pub const DEFAULT_TIME_PANELS: usize = 256;
/// Default particle circuits per torus revolution in the simulation.
pub const DEFAULT_CIRCUITS: usize = 1000;
/// Default RK4 steps per particle circuit.
pub const DEFAULT_STEPS_PER_CIRCUIT: usize = 256;

/// Torus revolution profile: `n_i` full turns about axis `i` over the
/// process time `T`, with the linear-from-zero ramp
/// `Ω_i(t) = (4π n_i / T)(t / T)`.
///
/// The ramp satisfies both normalizations the angle computation rests
/// on: `∫_0^T Ω_i dt = 2π n_i`, and (because `Ω_i(0) = 0`, by parts)
/// `∫_0^T (T - t) Ω̇_i dt = ∫_0^T Ω_i dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OmegaProfile {
    n1: i32,
    n2: i32,
    n3: i32,
    t_total: f64,
}

impl OmegaProfile {
    pub fn new(n1: i32, n2: i32, n3: i32, t_total: f64) -> Result<Self, Error> {
        if t_total > 0.0 && t_total.is_finite() {
            Ok(OmegaProfile {
                n1,
                n2,
                n3,
                t_total,
            })
        } else {
            Err(Error::InvalidProfile { t_total })
        }
    }

    pub fn winding_counts(&self) -> (i32, i32, i32) {
        (self.n1, self.n2, self.n3)
    }

    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    /// Angular velocity at time `t`.
    pub fn omega(&self, t: f64) -> Vec3 {
        let f = 4.0 * core::f64::consts::PI * t / (self.t_total * self.t_total);
        Vec3::new(self.n1 as f64 * f, self.n2 as f64 * f, self.n3 as f64 * f)
    }

    /// Angular acceleration (constant for the linear ramp).
    pub fn omega_dot(&self, _t: f64) -> Vec3 {
        let f = 4.0 * core::f64::consts::PI / (self.t_total * self.t_total);
        Vec3::new(self.n1 as f64 * f, self.n2 as f64 * f, self.n3 as f64 * f)
    }
}

/// Which route produced a [`HannayReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Framework {
    LineIntegral,
    BerryAveraged,
    BerrySimulated,
}

/// Angle-shift report; `delta_theta = (2π / loop_length) * delta_s` for
/// every framework.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HannayReport {
    /// `(∂W/∂Ω_1, ∂W/∂Ω_2, ∂W/∂Ω_3)` with `W = ∮ (Ω × r) · dr`.
    pub line_integral_coeffs: [f64; 3],
    pub loop_length: f64,
    /// Arc-length shift accumulated over the process.
    pub delta_s: f64,
    /// Hannay angle in radians, reported unwrapped (e.g. `-2π`, not 0).
    pub delta_theta: f64,
    pub framework: Framework,
}

/// Particle state on the loop: arc length (unwrapped) and speed.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParticleState {
    pub s: f64,
    pub s_dot: f64,
}

/// One decimated sample of the simulated trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectorySample {
    pub t: f64,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub state: ParticleState,
}

/// [`berry_simulate`] output: the report plus a per-circuit trajectory.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationResult {
    pub report: HannayReport,
    pub trajectory: Vec<TrajectorySample>,
}

/// Knobs for the simulated framework inside [`compare_frameworks`].
#[derive(Clone, Copy, Debug)]
pub struct SimulateOptions {
    pub circuits: usize,
    pub steps_per_circuit: usize,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            circuits: DEFAULT_CIRCUITS,
            steps_per_circuit: DEFAULT_STEPS_PER_CIRCUIT,
        }
    }
}

/// Side-by-side result of all frameworks on one configuration.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameworkComparison {
    pub line_integral: HannayReport,
    pub berry_averaged: HannayReport,
    pub berry_simulated: Option<HannayReport>,
    /// `|ΔΘ_line - ΔΘ_averaged|`.
    pub delta_line_vs_averaged: f64,
    pub delta_line_vs_simulated: Option<f64>,
    pub delta_averaged_vs_simulated: Option<f64>,
    /// Present for closed windings; see [`WindingRuleComparison`].
    pub winding_rule: Option<WindingRuleComparison>,
}

/// For winding loops two closed forms for the angle are in play: the
/// generic rule `ΔΘ = -(4π²/L²) Σ n_i ∂W/∂Ω_i`, and a variant with half
/// that prefactor, `-(2π²/L²) p (2c² + a²) π n_3`. They disagree by a
/// factor of two; the comparison carries both and their ratio so the
/// discrepancy stays visible instead of being silently resolved.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindingRuleComparison {
    pub delta_theta_generic: f64,
    pub delta_theta_half_rule: f64,
    /// `generic / half_rule`; `None` when the half rule gives zero.
    pub ratio: Option<f64>,
}

fn ensure_closed(path: &LoopSpec) -> Result<(), Error> {
    match *path {
        LoopSpec::Winding { p, q } => {
            if p == 0.0 && q == 0.0 {
                Err(Error::ZeroTangent)
            } else if !path.is_closed() {
                Err(Error::OpenLoop { p, q })
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// `W = ∮ (Ω × r) · dr` over the closed loop, by Simpson quadrature of
/// the triple product `Ω · (r × dr/dλ)`. Linear in `omega`.
pub fn omega_cross_r_integral(
    torus: &Torus,
    path: &LoopSpec,
    omega: Vec3,
    panels: usize,
) -> Result<f64, Error> {
    ensure_closed(path)?;
    Ok(quadrature::simpson(
        |lambda| {
            let r = torus.embed(path.point(lambda));
            let dr = torus.embedded_velocity(path, lambda);
            omega.dot(r.cross(dr))
        },
        0.0,
        TAU,
        panels,
    ))
}

/// The Ω-gradient of `W`, one quadrature per axis.
pub fn line_integral_coeffs(
    torus: &Torus,
    path: &LoopSpec,
    panels: usize,
) -> Result<[f64; 3], Error> {
    Ok([
        omega_cross_r_integral(torus, path, Vec3::new(1.0, 0.0, 0.0), panels)?,
        omega_cross_r_integral(torus, path, Vec3::new(0.0, 1.0, 0.0), panels)?,
        omega_cross_r_integral(torus, path, Vec3::new(0.0, 0.0, 1.0), panels)?,
    ])
}

/// Hannay angle from the adiabatic-action line integral.
pub fn hannay_angle_line_integral(
    torus: &Torus,
    path: &LoopSpec,
    profile: &OmegaProfile,
    panels: usize,
) -> Result<HannayReport, Error> {
    let coeffs = line_integral_coeffs(torus, path, panels)?;
    let length = torus.loop_length(path, panels);
    let (n1, n2, n3) = profile.winding_counts();
    let weighted = coeffs[0] * n1 as f64 + coeffs[1] * n2 as f64 + coeffs[2] * n3 as f64;
    let delta_s = -TAU * weighted / length;
    Ok(HannayReport {
        line_integral_coeffs: coeffs,
        loop_length: length,
        delta_s,
        delta_theta: TAU / length * delta_s,
        framework: Framework::LineIntegral,
    })
}

/// Tangential pseudo-force on the constrained particle at loop parameter
/// `lambda`: `s̈ = t̂ · (Ω² r - (Ω·r) Ω - Ω̇ × r)`.
pub fn berry_acceleration(
    torus: &Torus,
    path: &LoopSpec,
    lambda: f64,
    omega: Vec3,
    omega_dot: Vec3,
) -> Result<f64, Error> {
    let r = torus.embed(path.point(lambda));
    let v = torus.embedded_velocity(path, lambda);
    let speed = v.norm();
    if speed == 0.0 {
        return Err(Error::ZeroTangent);
    }
    let t_hat = v * (1.0 / speed);
    Ok(omega.norm_sq() * t_hat.dot(r)
        - omega.dot(r) * t_hat.dot(omega)
        - t_hat.dot(omega_dot.cross(r)))
}

/// Geometry cached at the Simpson nodes of one loop: position, unit
/// tangent, and the combined `simpson coefficient × speed` weight, so a
/// loop average `(1/L) ∮ f ds` is a single weighted sum.
struct LoopNodes {
    r: Vec<Vec3>,
    t_hat: Vec<Vec3>,
    weight: Vec<f64>,
    length: f64,
}

impl LoopNodes {
    fn build(torus: &Torus, path: &LoopSpec, panels: usize) -> Result<Self, Error> {
        assert!(
            panels >= 2 && panels.is_multiple_of(2),
            "panels must be even and >= 2"
        );
        let h = TAU / panels as f64;
        let mut r = Vec::with_capacity(panels + 1);
        let mut t_hat = Vec::with_capacity(panels + 1);
        let mut weight = Vec::with_capacity(panels + 1);
        let mut length = 0.0;
        for k in 0..=panels {
            let lambda = k as f64 * h;
            let rk = torus.embed(path.point(lambda));
            let vk = torus.embedded_velocity(path, lambda);
            let speed = vk.norm();
            if speed == 0.0 {
                return Err(Error::ZeroTangent);
            }
            let coeff = if k == 0 || k == panels {
                1.0
            } else if !k.is_multiple_of(2) {
                4.0
            } else {
                2.0
            };
            let w = coeff * h / 3.0 * speed;
            r.push(rk);
            t_hat.push(vk * (1.0 / speed));
            weight.push(w);
            length += w;
        }
        Ok(LoopNodes {
            r,
            t_hat,
            weight,
            length,
        })
    }

    /// `(1/L) ∮ s̈ ds` for the given angular velocity and acceleration.
    fn average_force(&self, omega: Vec3, omega_dot: Vec3) -> f64 {
        let om2 = omega.norm_sq();
        let mut acc = 0.0;
        for i in 0..self.r.len() {
            let r = self.r[i];
            let t = self.t_hat[i];
            let f = om2 * t.dot(r) - omega.dot(r) * t.dot(omega) - t.dot(omega_dot.cross(r));
            acc += self.weight[i] * f;
        }
        acc / self.length
    }
}

/// Hannay shift from the loop-averaged pseudo-force:
/// `Δs = ∫_0^T (T - t) [(1/L) ∮ s̈(t, s) ds] dt`, inner average by
/// Simpson in `lambda` with arc-length weight, outer integral by Simpson
/// in time.
pub fn berry_averaged_shift(
    torus: &Torus,
    path: &LoopSpec,
    profile: &OmegaProfile,
    loop_panels: usize,
    time_panels: usize,
) -> Result<HannayReport, Error> {
    ensure_closed(path)?;
    let nodes = LoopNodes::build(torus, path, loop_panels)?;
    let t_total = profile.t_total();
    let delta_s = quadrature::simpson(
        |t| (t_total - t) * nodes.average_force(profile.omega(t), profile.omega_dot(t)),
        0.0,
        t_total,
        time_panels,
    );
    Ok(HannayReport {
        line_integral_coeffs: line_integral_coeffs(torus, path, loop_panels)?,
        loop_length: nodes.length,
        delta_s,
        delta_theta: TAU / nodes.length * delta_s,
        framework: Framework::BerryAveraged,
    })
}

/// Full (non-averaged) dynamics: integrate `s̈ = F(t, s)` with RK4 for a
/// particle launched at speed `circuits · L / T`, so it laps the loop
/// `circuits` times while the torus revolves once.
///
/// The arc-length position is mapped back to the loop parameter through
/// a cumulative-Simpson table with monotone cubic interpolation. The
/// trajectory is decimated to one sample per circuit. Converges to
/// [`berry_averaged_shift`] as `circuits → ∞`.
pub fn berry_simulate(
    torus: &Torus,
    path: &LoopSpec,
    profile: &OmegaProfile,
    circuits: usize,
    steps_per_circuit: usize,
) -> Result<SimulationResult, Error> {
    assert!(circuits >= 1 && steps_per_circuit >= 1);
    ensure_closed(path)?;
    let table = ArcLengthTable::new(torus, path, ARC_TABLE_CELLS)?;
    let length = table.total_length();
    let t_total = profile.t_total();
    let launch_speed = circuits as f64 * length / t_total;
    let steps = circuits * steps_per_circuit;

    let mut failure: Option<Error> = None;
    let rhs = |t: f64, y: &[f64; 2]| -> [f64; 2] {
        let lambda = table.lambda_at(y[0]);
        match berry_acceleration(torus, path, lambda, profile.omega(t), profile.omega_dot(t)) {
            Ok(f) => [y[1], f],
            Err(e) => {
                failure.get_or_insert(e);
                [0.0, 0.0]
            }
        }
    };

    let mut trajectory = Vec::with_capacity(circuits + 1);
    let observe = |k: usize, t: f64, y: &[f64; 2]| {
        if k.is_multiple_of(steps_per_circuit) || k == steps {
            trajectory.push(TrajectorySample {
                t,
                state: ParticleState { s: y[0], s_dot: y[1] },
            });
        }
    };

    let y = ode::rk4_integrate(rhs, 0.0, t_total, [0.0, launch_speed], steps, observe);
    if let Some(e) = failure {
        return Err(e);
    }

    let delta_s = y[0] - launch_speed * t_total;
    let report = HannayReport {
        line_integral_coeffs: line_integral_coeffs(torus, path, DEFAULT_LOOP_AVG_PANELS)?,
        loop_length: length,
        delta_s,
        delta_theta: TAU / length * delta_s,
        framework: Framework::BerrySimulated,
    };
    Ok(SimulationResult { report, trajectory })
}

/// Run the line-integral and averaged frameworks (and optionally the
/// simulation) on one configuration and report pairwise differences.
pub fn compare_frameworks(
    torus: &Torus,
    path: &LoopSpec,
    profile: &OmegaProfile,
    panels: usize,
    simulate: Option<SimulateOptions>,
) -> Result<FrameworkComparison, Error> {
    let line = hannay_angle_line_integral(torus, path, profile, panels)?;
    let averaged = berry_averaged_shift(
        torus,
        path,
        profile,
        DEFAULT_LOOP_AVG_PANELS,
        DEFAULT_TIME_PANELS,
    )?;
    let simulated = match simulate {
        Some(opts) => Some(
            berry_simulate(torus, path, profile, opts.circuits, opts.steps_per_circuit)?.report,
        ),
        None => None,
    };

    let winding_rule = match *path {
        LoopSpec::Winding { p, .. } => {
            let (a, c) = (torus.a(), torus.c());
            let (_, _, n3) = profile.winding_counts();
            let l = line.loop_length;
            let half = -(2.0 * core::f64::consts::PI * core::f64::consts::PI) / (l * l)
                * p
                * (2.0 * c * c + a * a)
                * core::f64::consts::PI
                * n3 as f64;
            let ratio = (half != 0.0).then(|| line.delta_theta / half);
            Some(WindingRuleComparison {
                delta_theta_generic: line.delta_theta,
                delta_theta_half_rule: half,
                ratio,
            })
        }
        _ => None,
    };

    Ok(FrameworkComparison {
        delta_line_vs_averaged: math::abs(line.delta_theta - averaged.delta_theta),
        delta_line_vs_simulated: simulated
            .as_ref()
            .map(|s| math::abs(line.delta_theta - s.delta_theta)),
        delta_averaged_vs_simulated: simulated
            .as_ref()
            .map(|s| math::abs(averaged.delta_theta - s.delta_theta)),
        line_integral: line,
        berry_averaged: averaged,
        berry_simulated: simulated,
        winding_rule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use core::f64::consts::PI;

    fn t12() -> Torus {
        Torus::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn profile_ramp_normalizations() {
        let p = OmegaProfile::new(2, -1, 3, 4.0).unwrap();
        // trapezoid checks of the two integral identities
        let nodes = 1 << 16;
        let h = p.t_total() / nodes as f64;
        let mut turn = Vec3::ZERO;
        let mut by_parts = Vec3::ZERO;
        for k in 0..=nodes {
            let t = k as f64 * h;
            let w = if k == 0 || k == nodes { 0.5 } else { 1.0 };
            turn = turn + p.omega(t) * (w * h);
            by_parts = by_parts + p.omega_dot(t) * ((p.t_total() - t) * w * h);
        }
        assert_abs_diff_eq!(turn.x, TAU * 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(turn.y, -TAU, epsilon = 1e-12);
        assert_abs_diff_eq!(turn.z, TAU * 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(by_parts.x, turn.x, epsilon = 1e-10);
        assert_abs_diff_eq!(by_parts.y, turn.y, epsilon = 1e-10);
        assert_abs_diff_eq!(by_parts.z, turn.z, epsilon = 1e-10);
    }

    #[test]
    fn profile_rejects_bad_time() {
        assert!(OmegaProfile::new(1, 0, 0, 0.0).is_err());
        assert!(OmegaProfile::new(1, 0, 0, -1.0).is_err());
    }

    #[test]
    fn w_toroidal_closed_form() {
        let t = t12();
        let theta0 = 0.7;
        let path = LoopSpec::Toroidal { theta0 };
        let w = omega_cross_r_integral(&t, &path, Vec3::new(0.0, 0.0, 1.0), 1024).unwrap();
        let rho = 2.0 + libm::cos(theta0);
        assert_relative_eq!(w, TAU * rho * rho, max_relative = 1e-12);
    }

    #[test]
    fn w_poloidal_closed_form() {
        let t = t12();
        let phi0 = 0.9;
        let path = LoopSpec::Poloidal { phi0 };
        let w1 = omega_cross_r_integral(&t, &path, Vec3::new(1.0, 0.0, 0.0), 1024).unwrap();
        let w2 = omega_cross_r_integral(&t, &path, Vec3::new(0.0, 1.0, 0.0), 1024).unwrap();
        let w3 = omega_cross_r_integral(&t, &path, Vec3::new(0.0, 0.0, 1.0), 1024).unwrap();
        assert_relative_eq!(w1, TAU * libm::sin(phi0), max_relative = 1e-12);
        assert_relative_eq!(w2, -TAU * libm::cos(phi0), max_relative = 1e-12);
        assert_abs_diff_eq!(w3, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn w_trefoil_reference_value() {
        let t = t12();
        let path = LoopSpec::Winding { p: 2.0, q: 3.0 };
        let w = omega_cross_r_integral(&t, &path, Vec3::new(0.0, 0.0, 1.0), 2048).unwrap();
        assert_relative_eq!(w, 18.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn w_rejects_open_winding() {
        let t = t12();
        let path = LoopSpec::Winding { p: 0.5, q: 2.0 };
        let r = omega_cross_r_integral(&t, &path, Vec3::new(0.0, 0.0, 1.0), 64);
        assert_eq!(r, Err(Error::OpenLoop { p: 0.5, q: 2.0 }));
    }

    #[test]
    fn acceleration_toroidal_ramp_term() {
        // with Omega = 0 only the -t̂·(Ω̇ × r) term acts: -(c + a cos θ0) w
        let t = t12();
        let theta0 = 1.1;
        let path = LoopSpec::Toroidal { theta0 };
        let w = 0.37;
        for lambda in [0.0, 1.0, 2.0, 5.0] {
            let f =
                berry_acceleration(&t, &path, lambda, Vec3::ZERO, Vec3::new(0.0, 0.0, w)).unwrap();
            assert_abs_diff_eq!(f, -(2.0 + libm::cos(theta0)) * w, epsilon = 1e-13);
        }
    }

    #[test]
    fn acceleration_poloidal_ramp_term() {
        // -(w1 sin φ0 - w2 cos φ0)(a + c cos θ)
        let t = t12();
        let phi0 = 0.6;
        let path = LoopSpec::Poloidal { phi0 };
        let (w1, w2) = (0.4, -0.9);
        for theta in [0.0, 0.8, 2.0, 4.5] {
            let f =
                berry_acceleration(&t, &path, theta, Vec3::ZERO, Vec3::new(w1, w2, 0.0)).unwrap();
            let expect =
                -(w1 * libm::sin(phi0) - w2 * libm::cos(phi0)) * (1.0 + 2.0 * libm::cos(theta));
            assert_abs_diff_eq!(f, expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn acceleration_toroidal_full_expansion() {
        // full trig expansion, signs re-derived from the vector form
        // (the quadratic terms all average to zero over the loop):
        //   (R/2)(O1^2 - O2^2) sin 2phi - R O1 O2 cos 2phi
        //   + a O3 sin(th0) (O1 sin phi - O2 cos phi)
        //   + a sin(th0) (w1 cos phi + w2 sin phi) - R w3
        let t = t12();
        let theta0 = 0.8;
        let path = LoopSpec::Toroidal { theta0 };
        let omega = Vec3::new(0.7, -0.3, 1.1);
        let omega_dot = Vec3::new(0.2, 0.5, -0.9);
        let rho = 2.0 + libm::cos(theta0);
        let st = libm::sin(theta0);
        for phi in [0.0, 0.7, 2.2, 3.9, 5.6] {
            let f = berry_acceleration(&t, &path, phi, omega, omega_dot).unwrap();
            let expect = 0.5 * rho * (omega.x * omega.x - omega.y * omega.y) * libm::sin(2.0 * phi)
                - rho * omega.x * omega.y * libm::cos(2.0 * phi)
                + omega.z * st * (omega.x * libm::sin(phi) - omega.y * libm::cos(phi))
                + st * (omega_dot.x * libm::cos(phi) + omega_dot.y * libm::sin(phi))
                - rho * omega_dot.z;
            assert_abs_diff_eq!(f, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn acceleration_poloidal_full_expansion() {
        // with A = O1 cos(phi0) + O2 sin(phi0) and rho = c + a cos(th):
        //   rho A^2 sin th - A O3 (c cos th + a cos 2th)
        //   - a O3^2 sin th cos th - c |O|^2 sin th
        //   - (w1 sin phi0 - w2 cos phi0)(a + c cos th)
        let t = t12();
        let phi0 = 1.3;
        let path = LoopSpec::Poloidal { phi0 };
        let omega = Vec3::new(0.4, 0.9, -0.6);
        let omega_dot = Vec3::new(-0.8, 0.3, 0.5);
        let big_a = omega.x * libm::cos(phi0) + omega.y * libm::sin(phi0);
        for theta in [0.0, 0.6, 1.9, 3.3, 5.1] {
            let f = berry_acceleration(&t, &path, theta, omega, omega_dot).unwrap();
            let rho = 2.0 + libm::cos(theta);
            let expect = rho * big_a * big_a * libm::sin(theta)
                - big_a * omega.z * (2.0 * libm::cos(theta) + libm::cos(2.0 * theta))
                - omega.z * omega.z * libm::sin(theta) * libm::cos(theta)
                - 2.0 * omega.norm_sq() * libm::sin(theta)
                - (omega_dot.x * libm::sin(phi0) - omega_dot.y * libm::cos(phi0))
                    * (1.0 + 2.0 * libm::cos(theta));
            assert_abs_diff_eq!(f, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn acceleration_winding_axial_rotation() {
        // Omega along z: s̈ = -p z² Ω̇₃ / sqrt(q²a² + p²z²)
        //                     - z a q sin(qλ) Ω₃² / sqrt(q²a² + p²z²)
        let t = t12();
        let (p, q) = (2.0, 3.0);
        let path = LoopSpec::Winding { p, q };
        let (om3, w3) = (0.8, 0.25);
        for lambda in [0.3, 1.2, 2.9, 5.5] {
            let f = berry_acceleration(
                &t,
                &path,
                lambda,
                Vec3::new(0.0, 0.0, om3),
                Vec3::new(0.0, 0.0, w3),
            )
            .unwrap();
            let z = 2.0 + libm::cos(q * lambda);
            let root = libm::sqrt(q * q + p * p * z * z);
            let expect = -p * z * z * w3 / root - z * q * libm::sin(q * lambda) * om3 * om3 / root;
            assert_abs_diff_eq!(f, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn line_integral_toroidal_is_minus_two_pi_per_turn() {
        let t = t12();
        let profile = OmegaProfile::new(0, 0, 1, 1.0).unwrap();
        for theta0 in [0.0, PI / 3.0, PI / 2.0, PI] {
            let rep =
                hannay_angle_line_integral(&t, &LoopSpec::Toroidal { theta0 }, &profile, 1024)
                    .unwrap();
            assert_abs_diff_eq!(rep.delta_theta, -TAU, epsilon = 1e-10);
            // delta_s is -2π times the loop radius
            assert_abs_diff_eq!(
                rep.delta_s,
                -TAU * (2.0 + libm::cos(theta0)),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn line_integral_poloidal_angle_dependence() {
        let t = t12();
        let profile = OmegaProfile::new(1, 0, 0, 1.0).unwrap();
        for phi0 in [0.0, 0.5, PI / 2.0, 2.5] {
            let rep = hannay_angle_line_integral(&t, &LoopSpec::Poloidal { phi0 }, &profile, 1024)
                .unwrap();
            assert_abs_diff_eq!(rep.delta_theta, -TAU * libm::sin(phi0), epsilon = 1e-10);
        }
        // n1 sin φ0 = n2 cos φ0 kills the shift
        let profile = OmegaProfile::new(1, 1, 0, 1.0).unwrap();
        let rep =
            hannay_angle_line_integral(&t, &LoopSpec::Poloidal { phi0: PI / 4.0 }, &profile, 1024)
                .unwrap();
        assert_abs_diff_eq!(rep.delta_theta, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn averaged_matches_line_integral_on_circles() {
        let t = t12();
        let profile = OmegaProfile::new(0, 0, 1, 1.0).unwrap();
        let path = LoopSpec::Toroidal { theta0: 0.9 };
        let avg = berry_averaged_shift(&t, &path, &profile, 512, 64).unwrap();
        assert_abs_diff_eq!(avg.delta_theta, -TAU, epsilon = 1e-10);
        assert_abs_diff_eq!(avg.delta_s, -TAU * (2.0 + libm::cos(0.9)), epsilon = 1e-9);

        let profile = OmegaProfile::new(1, 0, 0, 1.0).unwrap();
        let path = LoopSpec::Poloidal { phi0: 0.7 };
        let line = hannay_angle_line_integral(&t, &path, &profile, 1024).unwrap();
        let avg = berry_averaged_shift(&t, &path, &profile, 512, 64).unwrap();
        assert_abs_diff_eq!(avg.delta_theta, line.delta_theta, epsilon = 1e-10);
    }

    #[test]
    fn averaged_node_cache_agrees_with_pointwise_acceleration() {
        // the cached-node loop average must equal a direct Simpson sum of
        // berry_acceleration against the arc-length weight
        let t = t12();
        let path = LoopSpec::Winding { p: 2.0, q: 3.0 };
        let nodes = LoopNodes::build(&t, &path, 256).unwrap();
        let omega = Vec3::new(0.3, -0.2, 0.9);
        let omega_dot = Vec3::new(-0.1, 0.4, 0.7);
        let direct = quadrature::simpson(
            |l| berry_acceleration(&t, &path, l, omega, omega_dot).unwrap() * t.speed(&path, l),
            0.0,
            TAU,
            256,
        ) / t.loop_length(&path, 256);
        assert_relative_eq!(
            nodes.average_force(omega, omega_dot),
            direct,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_windings_produce_zero_shift() {
        let t = t12();
        let profile = OmegaProfile::new(0, 0, 0, 1.0).unwrap();
        let path = LoopSpec::Toroidal { theta0: 0.4 };
        let avg = berry_averaged_shift(&t, &path, &profile, 256, 32).unwrap();
        assert_abs_diff_eq!(avg.delta_s, 0.0, epsilon = 1e-12);
        let sim = berry_simulate(&t, &path, &profile, 4, 64).unwrap();
        assert_abs_diff_eq!(sim.report.delta_s, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn simulation_trajectory_shape() {
        let t = t12();
        let profile = OmegaProfile::new(0, 0, 1, 1.0).unwrap();
        let sim = berry_simulate(&t, &LoopSpec::Toroidal { theta0: 0.0 }, &profile, 8, 32).unwrap();
        // one sample per circuit plus the initial state
        assert_eq!(sim.trajectory.len(), 9);
        assert_eq!(sim.trajectory[0].t, 0.0);
        assert_abs_diff_eq!(sim.trajectory[8].t, 1.0, epsilon = 1e-12);
        // pure axial ramp on the outer equator: force is s-independent,
        // so even a coarse run lands on the averaged value
        assert_abs_diff_eq!(sim.report.delta_theta, -TAU, epsilon = 1e-9);
    }

    #[test]
    fn comparison_carries_winding_rule_factor_two() {
        let t = t12();
        let profile = OmegaProfile::new(0, 0, 1, 1.0).unwrap();
        let path = LoopSpec::Winding { p: 2.0, q: 3.0 };
        let cmp = compare_frameworks(&t, &path, &profile, 2048, None).unwrap();
        assert!(cmp.delta_line_vs_averaged < 1e-9);
        let rule = cmp.winding_rule.unwrap();
        assert_relative_eq!(rule.ratio.unwrap(), 2.0, max_relative = 1e-9);
        assert_relative_eq!(
            rule.delta_theta_generic,
            2.0 * rule.delta_theta_half_rule,
            max_relative = 1e-9
        );
        // circles carry no winding-rule record
        let cmp = compare_frameworks(&t, &LoopSpec::Toroidal { theta0: 0.3 }, &profile, 512, None)
            .unwrap();
        assert!(cmp.winding_rule.is_none());
    }
}
