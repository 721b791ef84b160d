//! Torus surface geometry: embedding, metric, connection, loop
//! parameterizations, and arc length.
//!
//! Chart coordinates are the toroidal angle `phi` (around the central
//! axis) and the poloidal angle `theta` (around the tube). The embedding
//! into Euclidean 3-space is
//!
//! ```text
//! x1 = (c + a cos theta) cos phi
//! x2 = (c + a cos theta) sin phi
//! x3 = a sin theta
//! ```
//!
//! with tube radius `a` and central radius `c`. The induced metric is
//! diagonal, `g_phiphi = (c + a cos theta)^2`, `g_thetatheta = a^2`, and
//! the nonzero Levi-Civita connection components are
//!
//! ```text
//! Gamma^phi_{phi theta} = -a sin theta / (c + a cos theta)
//! Gamma^theta_{phi phi} = +sin theta (c + a cos theta) / a
//! ```
//!
//! both obtained from the metric. Angles are kept unwrapped everywhere;
//! chart evaluation is 2π-periodic in both.

extern crate alloc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::interp::MonotoneCubic;
use crate::math;
use crate::quadrature;
use crate::vec3::Vec3;

use core::f64::consts::TAU;

/// `|n + cos theta|` below this counts as sitting on the pinch circle of a
/// horn or spindle torus, where the chart degenerates.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Default Simpson panel count for arc-length and loop integrals.
pub const DEFAULT_PANELS: usize = 8192;

/// Default cell count for cumulative arc-length tables.
pub const ARC_TABLE_CELLS: usize = 4096;

/// Torus of revolution with tube radius `a` and central radius `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Torus {
    a: f64,
    c: f64,
}

/// Shape classification by aspect ratio `n = c/a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusClass {
    /// `n > 1`: the familiar ring shape.
    Ring,
    /// `n = 1`: inner radius shrunk to a point.
    Horn,
    /// `n < 1`: self-intersecting.
    Spindle,
}

impl Torus {
    pub fn new(a: f64, c: f64) -> Result<Self, Error> {
        if a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite() {
            Ok(Torus { a, c })
        } else {
            Err(Error::InvalidTorus { a, c })
        }
    }

    /// Unit tube radius with aspect ratio `n`, i.e. `a = 1`, `c = n`.
    pub fn from_aspect_ratio(n: f64) -> Result<Self, Error> {
        Torus::new(1.0, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Aspect ratio `n = c/a`.
    pub fn aspect_ratio(&self) -> f64 {
        self.c / self.a
    }

    pub fn classify(&self) -> TorusClass {
        let n = self.aspect_ratio();
        if n > 1.0 {
            TorusClass::Ring
        } else if n == 1.0 {
            TorusClass::Horn
        } else {
            TorusClass::Spindle
        }
    }

    /// Distance from the symmetry axis, `c + a cos theta`.
    fn ring_radius(&self, theta: f64) -> f64 {
        self.c + self.a * math::cos(theta)
    }

    /// Embed a chart point into Euclidean 3-space.
    pub fn embed(&self, pt: SurfacePoint) -> Vec3 {
        let (sin_phi, cos_phi) = math::sin_cos(pt.phi);
        let (sin_theta, cos_theta) = math::sin_cos(pt.theta);
        let rho = self.c + self.a * cos_theta;
        Vec3::new(rho * cos_phi, rho * sin_phi, self.a * sin_theta)
    }

    /// Diagonal metric components at poloidal angle `theta`.
    ///
    /// A vanishing `g_phiphi` (spindle/horn pinch) is representable;
    /// consumers that must divide by it go through [`Torus::christoffel_at`].
    pub fn metric_at(&self, theta: f64) -> MetricAtTheta {
        let rho = self.ring_radius(theta);
        MetricAtTheta {
            g_phiphi: rho * rho,
            g_thetatheta: self.a * self.a,
        }
    }

    /// Nonzero connection components at poloidal angle `theta`.
    pub fn christoffel_at(&self, theta: f64) -> Result<ChristoffelAtTheta, Error> {
        let (sin_theta, cos_theta) = math::sin_cos(theta);
        if math::abs(self.aspect_ratio() + cos_theta) < DEGENERACY_EPS {
            return Err(Error::DegenerateChart { theta });
        }
        let rho = self.c + self.a * cos_theta;
        Ok(ChristoffelAtTheta {
            gamma_phi_phitheta: -self.a * sin_theta / rho,
            gamma_theta_phiphi: sin_theta * rho / self.a,
        })
    }

    /// Velocity of the embedded loop point, `d embed / d lambda`.
    pub fn embedded_velocity(&self, path: &LoopSpec, lambda: f64) -> Vec3 {
        let pt = path.point(lambda);
        let (dphi, dtheta) = path.velocity();
        let (sin_phi, cos_phi) = math::sin_cos(pt.phi);
        let (sin_theta, cos_theta) = math::sin_cos(pt.theta);
        let rho = self.c + self.a * cos_theta;
        // dphi * d(embed)/dphi + dtheta * d(embed)/dtheta
        Vec3::new(
            -dphi * rho * sin_phi - dtheta * self.a * sin_theta * cos_phi,
            dphi * rho * cos_phi - dtheta * self.a * sin_theta * sin_phi,
            dtheta * self.a * cos_theta,
        )
    }

    /// Loop speed `|d embed / d lambda|`, evaluated through the metric.
    pub fn speed(&self, path: &LoopSpec, lambda: f64) -> f64 {
        let (dphi, dtheta) = path.velocity();
        let m = self.metric_at(path.point(lambda).theta);
        math::sqrt(m.g_phiphi * dphi * dphi + m.g_thetatheta * dtheta * dtheta)
    }

    /// Unit tangent of the loop in chart components.
    pub fn unit_tangent_chart(&self, path: &LoopSpec, lambda: f64) -> Result<TangentVector, Error> {
        let (dphi, dtheta) = path.velocity();
        if dphi == 0.0 && dtheta == 0.0 {
            return Err(Error::ZeroTangent);
        }
        let theta = path.point(lambda).theta;
        if math::abs(self.aspect_ratio() + math::cos(theta)) < DEGENERACY_EPS {
            return Err(Error::DegenerateChart { theta });
        }
        let inv = 1.0 / self.speed(path, lambda);
        Ok(TangentVector {
            p_phi: dphi * inv,
            p_theta: dtheta * inv,
        })
    }

    /// Unit tangent of the loop as a Euclidean 3-vector: the pushforward
    /// of [`Torus::unit_tangent_chart`] under the embedding.
    pub fn unit_tangent_embedded(&self, path: &LoopSpec, lambda: f64) -> Result<Vec3, Error> {
        // same degeneracy gates as the chart tangent
        self.unit_tangent_chart(path, lambda)?;
        let v = self.embedded_velocity(path, lambda);
        Ok(v * (1.0 / v.norm()))
    }

    /// Loop length by composite Simpson quadrature of the speed over
    /// `lambda in [0, 2pi]`. `panels` must be even and at least 2.
    pub fn loop_length(&self, path: &LoopSpec, panels: usize) -> f64 {
        quadrature::simpson(|lambda| self.speed(path, lambda), 0.0, TAU, panels)
    }

    /// Closed-form estimate of a `(p, q)` winding length: `pi a` times the
    /// sum of the speed's extreme values,
    /// `sqrt(q^2 + p^2 (n+1)^2) + sqrt(q^2 + p^2 (n-1)^2)`.
    pub fn approx_knot_length(&self, p: f64, q: f64) -> f64 {
        let n = self.aspect_ratio();
        let hi = q * q + p * p * (n + 1.0) * (n + 1.0);
        let lo = q * q + p * p * (n - 1.0) * (n - 1.0);
        core::f64::consts::PI * self.a * (math::sqrt(hi) + math::sqrt(lo))
    }
}

/// Chart point; angles in radians, stored unwrapped.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfacePoint {
    pub phi: f64,
    pub theta: f64,
}

impl SurfacePoint {
    pub const fn new(phi: f64, theta: f64) -> Self {
        SurfacePoint { phi, theta }
    }
}

/// Contravariant tangent-vector components `(P^phi, P^theta)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangentVector {
    pub p_phi: f64,
    pub p_theta: f64,
}

impl TangentVector {
    pub const fn new(p_phi: f64, p_theta: f64) -> Self {
        TangentVector { p_phi, p_theta }
    }

    /// Squared metric length `g_phiphi (P^phi)^2 + g_thetatheta (P^theta)^2`.
    pub fn metric_norm_sq(&self, metric: &MetricAtTheta) -> f64 {
        metric.g_phiphi * self.p_phi * self.p_phi
            + metric.g_thetatheta * self.p_theta * self.p_theta
    }
}

/// Diagonal metric components at fixed `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricAtTheta {
    pub g_phiphi: f64,
    pub g_thetatheta: f64,
}

/// Nonzero Levi-Civita connection components at fixed `theta`.
///
/// `gamma_phi_phitheta` is `Gamma^phi_{phi theta} = Gamma^phi_{theta phi}`;
/// `gamma_theta_phiphi` is `Gamma^theta_{phi phi}`. All other components
/// vanish on the torus of revolution.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChristoffelAtTheta {
    pub gamma_phi_phitheta: f64,
    pub gamma_theta_phiphi: f64,
}

/// A winding path on the torus, parameterized by `lambda in [0, 2pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LoopSpec {
    /// Circle at fixed poloidal angle: `(phi, theta) = (lambda, theta0)`.
    Toroidal { theta0: f64 },
    /// Circle at fixed toroidal angle: `(phi, theta) = (phi0, lambda)`.
    Poloidal { phi0: f64 },
    /// `(phi, theta) = (p lambda, q lambda)` with `p, q >= 0`; closed iff
    /// both are integers.
    Winding { p: f64, q: f64 },
}

/// Topological classification of a [`LoopSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveClass {
    /// Closed winding whose reduced `(p, q)` are coprime with both >= 2.
    Knot,
    /// Closed curve deformable to a circle (includes multiply covered
    /// circles and windings with reduced `p` or `q` below 2).
    Unknot,
    /// Non-integer winding: an open, slanted path.
    Open,
    /// The `(0, 0)` winding, which never leaves its start point.
    Degenerate,
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x == math::floor(x) && x.is_finite()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl LoopSpec {
    /// Chart point at parameter `lambda`.
    pub fn point(&self, lambda: f64) -> SurfacePoint {
        match *self {
            LoopSpec::Toroidal { theta0 } => SurfacePoint::new(lambda, theta0),
            LoopSpec::Poloidal { phi0 } => SurfacePoint::new(phi0, lambda),
            LoopSpec::Winding { p, q } => SurfacePoint::new(p * lambda, q * lambda),
        }
    }

    /// Constant chart velocity `(dphi/dlambda, dtheta/dlambda)`.
    pub fn velocity(&self) -> (f64, f64) {
        match *self {
            LoopSpec::Toroidal { .. } => (1.0, 0.0),
            LoopSpec::Poloidal { .. } => (0.0, 1.0),
            LoopSpec::Winding { p, q } => (p, q),
        }
    }

    /// Whether `lambda = 2pi` returns to the starting surface point.
    pub fn is_closed(&self) -> bool {
        match *self {
            LoopSpec::Toroidal { .. } | LoopSpec::Poloidal { .. } => true,
            LoopSpec::Winding { p, q } => is_nonneg_integer(p) && is_nonneg_integer(q),
        }
    }

    pub fn classify(&self) -> CurveClass {
        match *self {
            LoopSpec::Toroidal { .. } | LoopSpec::Poloidal { .. } => CurveClass::Unknot,
            LoopSpec::Winding { p, q } => {
                if p == 0.0 && q == 0.0 {
                    CurveClass::Degenerate
                } else if !is_nonneg_integer(p) || !is_nonneg_integer(q) {
                    CurveClass::Open
                } else {
                    // classify the image curve: a common factor only
                    // multiplies the cover
                    let (pi, qi) = (p as u64, q as u64);
                    let g = gcd(pi, qi).max(1);
                    if pi / g >= 2 && qi / g >= 2 {
                        CurveClass::Knot
                    } else {
                        CurveClass::Unknot
                    }
                }
            }
        }
    }
}

/// Cumulative arc length along a loop and its inverse `lambda(s)`.
///
/// Needed where motion is parameterized by arc length but geometry by
/// `lambda` — the speed is non-constant only for windings, but the table
/// is built uniformly for every loop kind.
#[derive(Clone, Debug)]
pub struct ArcLengthTable {
    inverse: MonotoneCubic,
    total: f64,
}

impl ArcLengthTable {
    pub fn new(torus: &Torus, path: &LoopSpec, cells: usize) -> Result<Self, Error> {
        let (dphi, dtheta) = path.velocity();
        if dphi == 0.0 && dtheta == 0.0 {
            return Err(Error::ZeroTangent);
        }
        if let LoopSpec::Toroidal { theta0 } = path {
            if math::abs(torus.aspect_ratio() + math::cos(*theta0)) < DEGENERACY_EPS {
                return Err(Error::DegenerateChart { theta: *theta0 });
            }
        }
        let lambdas: Vec<f64> = (0..=cells).map(|k| TAU * k as f64 / cells as f64).collect();
        let s = quadrature::cumulative_simpson(|l| torus.speed(path, l), 0.0, TAU, cells);
        let total = s[cells];
        Ok(ArcLengthTable {
            inverse: MonotoneCubic::new(s, lambdas),
            total,
        })
    }

    /// Total loop length accumulated by the table.
    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Loop parameter for (unwrapped) arc length `s`; `s` is reduced
    /// modulo the total length first.
    pub fn lambda_at(&self, s: f64) -> f64 {
        self.inverse.eval(math::rem_euclid(s, self.total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn t12() -> Torus {
        Torus::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn rejects_nonpositive_radii() {
        assert!(Torus::new(0.0, 1.0).is_err());
        assert!(Torus::new(1.0, -2.0).is_err());
    }

    #[test]
    fn classification_by_aspect_ratio() {
        assert_eq!(Torus::new(1.0, 2.0).unwrap().classify(), TorusClass::Ring);
        assert_eq!(Torus::new(2.0, 2.0).unwrap().classify(), TorusClass::Horn);
        assert_eq!(
            Torus::new(2.0, 1.0).unwrap().classify(),
            TorusClass::Spindle
        );
    }

    #[test]
    fn embed_reference_points() {
        let t = t12();
        let p = t.embed(SurfacePoint::new(0.0, 0.0));
        assert_abs_diff_eq!(p.x, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-15);

        let p = t.embed(SurfacePoint::new(0.0, PI));
        assert_abs_diff_eq!(p.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-15);

        let p = t.embed(SurfacePoint::new(PI / 2.0, PI / 2.0));
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn metric_reference_values() {
        let m = t12().metric_at(0.0);
        assert_abs_diff_eq!(m.g_phiphi, 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.g_thetatheta, 1.0, epsilon = 1e-15);

        // spindle degeneracy: cos(2pi/3) = -1/2 cancels c = a/2
        let m = Torus::new(1.0, 0.5).unwrap().metric_at(2.0 * PI / 3.0);
        assert_abs_diff_eq!(m.g_phiphi, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.g_thetatheta, 1.0, epsilon = 1e-15);

        let m = Torus::new(2.0, 6.0).unwrap().metric_at(PI / 2.0);
        assert_abs_diff_eq!(m.g_phiphi, 36.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m.g_thetatheta, 4.0, epsilon = 1e-15);
    }

    #[test]
    fn christoffel_reference_values() {
        let g = t12().christoffel_at(0.0).unwrap();
        assert_abs_diff_eq!(g.gamma_phi_phitheta, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.gamma_theta_phiphi, 0.0, epsilon = 1e-15);

        let g = t12().christoffel_at(PI / 2.0).unwrap();
        assert_abs_diff_eq!(g.gamma_phi_phitheta, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.gamma_theta_phiphi, 2.0, epsilon = 1e-15);

        // horn torus pinch point
        let horn = Torus::new(1.0, 1.0).unwrap();
        assert_eq!(
            horn.christoffel_at(PI),
            Err(Error::DegenerateChart { theta: PI })
        );
    }

    #[test]
    fn christoffel_matches_finite_differenced_metric() {
        // Levi-Civita from central differences of g_phiphi:
        //   Gamma^phi_{phi theta} = d_theta(g_phiphi) / (2 g_phiphi)
        //   Gamma^theta_{phi phi} = -d_theta(g_phiphi) / (2 g_thetatheta)
        let t = t12();
        let h = 1e-5;
        for k in 0..64 {
            let theta = TAU * k as f64 / 64.0;
            let dg =
                (t.metric_at(theta + h).g_phiphi - t.metric_at(theta - h).g_phiphi) / (2.0 * h);
            let m = t.metric_at(theta);
            let g = t.christoffel_at(theta).unwrap();
            assert_abs_diff_eq!(
                g.gamma_phi_phitheta,
                dg / (2.0 * m.g_phiphi),
                epsilon = 1e-8
            );
            assert_abs_diff_eq!(
                g.gamma_theta_phiphi,
                -dg / (2.0 * m.g_thetatheta),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn loop_points() {
        let w = LoopSpec::Winding { p: 2.0, q: 3.0 };
        let pt = w.point(TAU);
        assert_abs_diff_eq!(pt.phi, 4.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(pt.theta, 6.0 * PI, epsilon = 1e-14);

        let tor = LoopSpec::Toroidal { theta0: PI / 2.0 };
        assert_eq!(tor.point(PI), SurfacePoint::new(PI, PI / 2.0));

        let pol = LoopSpec::Poloidal { phi0: 0.0 };
        assert_eq!(pol.point(PI / 3.0), SurfacePoint::new(0.0, PI / 3.0));
    }

    #[test]
    fn curve_classification() {
        assert_eq!(
            LoopSpec::Winding { p: 2.0, q: 3.0 }.classify(),
            CurveClass::Knot
        );
        assert_eq!(
            LoopSpec::Winding { p: 1.0, q: 5.0 }.classify(),
            CurveClass::Unknot
        );
        assert_eq!(
            LoopSpec::Winding { p: 0.0, q: 2.0 }.classify(),
            CurveClass::Unknot
        );
        // common factor only multiplies the cover of a simple curve
        assert_eq!(
            LoopSpec::Winding { p: 2.0, q: 4.0 }.classify(),
            CurveClass::Unknot
        );
        assert_eq!(
            LoopSpec::Winding { p: 4.0, q: 6.0 }.classify(),
            CurveClass::Knot
        );
        assert_eq!(
            LoopSpec::Winding { p: 0.5, q: 2.0 }.classify(),
            CurveClass::Open
        );
        assert_eq!(
            LoopSpec::Winding { p: 0.0, q: 0.0 }.classify(),
            CurveClass::Degenerate
        );
        assert!(!LoopSpec::Winding { p: 0.5, q: 2.0 }.is_closed());
        assert!(LoopSpec::Toroidal { theta0: 1.0 }.is_closed());
    }

    #[test]
    fn unit_tangents() {
        let t = t12();
        let pol = LoopSpec::Poloidal { phi0: 0.7 };
        let u = t.unit_tangent_chart(&pol, 1.3).unwrap();
        assert_abs_diff_eq!(u.p_phi, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.p_theta, 1.0, epsilon = 1e-15);

        let tor = LoopSpec::Toroidal { theta0: 0.0 };
        let u = t.unit_tangent_chart(&tor, 0.0).unwrap();
        assert_abs_diff_eq!(u.p_phi, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.p_theta, 0.0, epsilon = 1e-15);

        let w = LoopSpec::Winding { p: 1.0, q: 1.0 };
        let u = t.unit_tangent_chart(&w, 0.0).unwrap();
        let s = 1.0 / libm::sqrt(10.0);
        assert_abs_diff_eq!(u.p_phi, s, epsilon = 1e-15);
        assert_abs_diff_eq!(u.p_theta, s, epsilon = 1e-15);
        // unit metric norm
        let m = t.metric_at(0.0);
        assert_abs_diff_eq!(u.metric_norm_sq(&m), 1.0, epsilon = 1e-12);

        assert_eq!(
            t.unit_tangent_chart(&LoopSpec::Winding { p: 0.0, q: 0.0 }, 0.0),
            Err(Error::ZeroTangent)
        );
    }

    #[test]
    fn embedded_tangent_is_unit_and_tangent_to_circles() {
        let t = t12();
        let tor = LoopSpec::Toroidal { theta0: 0.4 };
        for k in 0..8 {
            let lambda = TAU * k as f64 / 8.0;
            let u = t.unit_tangent_embedded(&tor, lambda).unwrap();
            assert_abs_diff_eq!(u.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(u.x, -libm::sin(lambda), epsilon = 1e-12);
            assert_abs_diff_eq!(u.y, libm::cos(lambda), epsilon = 1e-12);
            assert_abs_diff_eq!(u.z, 0.0, epsilon = 1e-15);
        }
        // poloidal tangent: (-cos(phi0) sin(theta), -sin(phi0) sin(theta), cos(theta))
        let phi0 = 0.9;
        let pol = LoopSpec::Poloidal { phi0 };
        for k in 0..8 {
            let theta = TAU * k as f64 / 8.0;
            let u = t.unit_tangent_embedded(&pol, theta).unwrap();
            assert_abs_diff_eq!(u.x, -libm::cos(phi0) * libm::sin(theta), epsilon = 1e-12);
            assert_abs_diff_eq!(u.y, -libm::sin(phi0) * libm::sin(theta), epsilon = 1e-12);
            assert_abs_diff_eq!(u.z, libm::cos(theta), epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_lengths() {
        let t = t12();
        let theta0 = 0.8;
        let l = t.loop_length(&LoopSpec::Toroidal { theta0 }, 64);
        assert_abs_diff_eq!(l, TAU * (2.0 + libm::cos(theta0)), epsilon = 1e-10);
        let l = t.loop_length(&LoopSpec::Poloidal { phi0: 1.1 }, 64);
        assert_abs_diff_eq!(l, TAU, epsilon = 1e-10);
    }

    #[test]
    fn approx_length_reference_values() {
        let t = t12();
        // pure toroidal: averages outer and inner circumference
        assert_abs_diff_eq!(t.approx_knot_length(1.0, 0.0), 4.0 * PI, epsilon = 1e-12);
        // pure poloidal: exact
        assert_abs_diff_eq!(t.approx_knot_length(0.0, 1.0), TAU, epsilon = 1e-12);
        // trefoil
        let expect = PI * (libm::sqrt(45.0) + libm::sqrt(13.0));
        assert_abs_diff_eq!(t.approx_knot_length(2.0, 3.0), expect, epsilon = 1e-12);
    }

    #[test]
    fn arc_length_table_inverts_uniform_and_nonuniform_loops() {
        let t = t12();
        // uniform speed: lambda(s) = s / R
        let tor = LoopSpec::Toroidal { theta0: 0.0 };
        let table = ArcLengthTable::new(&t, &tor, 512).unwrap();
        assert_abs_diff_eq!(table.total_length(), 6.0 * PI, epsilon = 1e-10);
        assert_abs_diff_eq!(table.lambda_at(3.0), 1.0, epsilon = 1e-9);
        // wraps around
        assert_abs_diff_eq!(table.lambda_at(6.0 * PI + 3.0), 1.0, epsilon = 1e-9);

        // non-uniform: check against direct cumulative integration
        let w = LoopSpec::Winding { p: 2.0, q: 3.0 };
        let table = ArcLengthTable::new(&t, &w, ARC_TABLE_CELLS).unwrap();
        for lam_target in [0.3, 1.7, 4.4, 6.0] {
            let s = quadrature::simpson(|l| t.speed(&w, l), 0.0, lam_target, 2048);
            assert_abs_diff_eq!(table.lambda_at(s), lam_target, epsilon = 1e-8);
        }
    }
}
