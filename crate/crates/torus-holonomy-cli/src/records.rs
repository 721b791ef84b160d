//! JSON output records. Every record re-parses into its emitting type
//! with equality, which the test suite relies on.

use serde::{Deserialize, Serialize};
use torus_holonomy::TangentVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRecord {
    /// `"closed"` or `"numeric"`.
    pub method: String,
    /// Integrator steps; absent for the closed form.
    pub steps: Option<usize>,
    /// Loop parameter the vector was evaluated at.
    pub lambda: f64,
    pub p_final: TangentVector,
    pub sigma: Option<f64>,
    pub norm_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportBothRecord {
    pub closed: TransportRecord,
    pub numeric: TransportRecord,
    /// Componentwise `numeric - closed` of the final vectors.
    pub difference: TangentVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotLengthRecord {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub c: f64,
    pub panels: Option<usize>,
    pub length_quadrature: Option<f64>,
    /// Two-extremes closed-form estimate.
    pub length_estimate: Option<f64>,
    /// `|estimate - quadrature| / quadrature` when both were computed.
    pub relative_difference: Option<f64>,
}
