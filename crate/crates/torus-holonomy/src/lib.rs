//! Parallel transport, anholonomy, and Hannay angles for noncontractible
//! loops on a torus.
//!
//! The torus is the simplest surface carrying closed curves that bound no
//! area: toroidal circles, poloidal circles, and (p, q) winding curves
//! (torus knots and unknots). This crate evaluates
//!
//! * the surface geometry — embedding, metric, connection, loop
//!   parameterizations, and arc length ([`geometry`]);
//! * parallel transport of tangent vectors along those loops, both in
//!   closed form and by Runge–Kutta integration, together with the
//!   projection-ratio anholonomy measure Σ ([`transport`]);
//! * the Hannay angle picked up by a particle riding such a loop while the
//!   torus itself revolves, computed from the adiabatic-action line
//!   integral and from rotating-frame pseudo-force dynamics ([`hannay`]).
//!
//! The crate is `no_std` (with `alloc`); all float math goes through
//! [`libm`] so results are reproducible across targets and feature sets.
//! Everything is a pure function of its inputs and safe to call from any
//! number of threads.

#![no_std]

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod hannay;
pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod transport;
pub mod vec3;

mod math;

pub use error::Error;
pub use geometry::{
    ArcLengthTable, ChristoffelAtTheta, CurveClass, LoopSpec, MetricAtTheta, SurfacePoint,
    TangentVector, Torus, TorusClass,
};
pub use hannay::{Framework, HannayReport, OmegaProfile, ParticleState, SimulationResult};
pub use transport::{SweepRow, TransportResult};
pub use vec3::Vec3;
