//! Error type shared by all modules.

use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Error {
    /// Torus radii must both be strictly positive.
    InvalidTorus { a: f64, c: f64 },
    /// The chart is singular where `c + a cos(theta)` vanishes (the pinch
    /// circle of a horn or spindle torus); the connection component
    /// `Γ^φ_{φθ}` is undefined there.
    DegenerateChart { theta: f64 },
    /// A unit tangent was requested for a winding with `(p, q) = (0, 0)`.
    ZeroTangent,
    /// No closed-form transport solution exists for this loop kind.
    UnsupportedLoop,
    /// The anholonomy ratio Σ diverges where `n + cos(theta0)` vanishes.
    DivergentAnholonomy { theta0: f64 },
    /// A loop integral was requested for a winding that does not close
    /// (non-integer `p` or `q`).
    OpenLoop { p: f64, q: f64 },
    /// The revolution profile needs a strictly positive process time.
    InvalidProfile { t_total: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidTorus { a, c } => {
                write!(f, "torus radii must be positive, got a = {a}, c = {c}")
            }
            Error::DegenerateChart { theta } => {
                write!(
                    f,
                    "degenerate chart at theta = {theta}: c + a cos(theta) = 0"
                )
            }
            Error::ZeroTangent => write!(f, "winding (0, 0) has no tangent direction"),
            Error::UnsupportedLoop => {
                write!(f, "no closed-form transport for a winding with q = 0")
            }
            Error::DivergentAnholonomy { theta0 } => {
                write!(f, "anholonomy ratio diverges at theta0 = {theta0}")
            }
            Error::OpenLoop { p, q } => {
                write!(f, "winding ({p}, {q}) is not a closed loop")
            }
            Error::InvalidProfile { t_total } => {
                write!(f, "process time must be positive, got {t_total}")
            }
        }
    }
}

impl core::error::Error for Error {}
