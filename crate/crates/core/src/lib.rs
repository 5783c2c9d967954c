//! Numerical parallel transport, holonomy, and curvature on trivialized
//! bundles over flat charts.
//!
//! The crate models connections as matrix-valued one-forms on a ball or
//! box chart, transports frames along paths with a structure-preserving
//! exponential midpoint scheme, and measures holonomy through a
//! bi-invariant amplitude. On top of those primitives it packages
//! quantitative checks: the disk bound comparing boundary amplitude
//! against curvature mass, its planar isoperimetric corollary, a radius
//! derivative identity for circle families with its scalar estimate, and
//! axial gauge construction on boxes. Supported structure groups are
//! U(1), SU(2), and SO(n).

pub mod amplitude;
pub mod axial;
pub mod chart;
pub mod connection;
pub mod error;
pub mod gauge;
pub mod lie;
pub mod path;
pub mod report;
pub mod scenarios;
pub mod surface;
pub mod transport;
pub mod verify;

pub use amplitude::{
    abelian_amplitude_integral, amplitude, check_conjugation_invariance, check_gauge_invariance,
    check_subadditivity, AmplitudeMethod, AmplitudeValue,
};
pub use axial::{axial_component_sup, axial_gauge, axial_gauge_field, AxialGaugeResult};
pub use chart::Chart;
pub use connection::{Connection, ConnectionFamily, CurvatureValue, MonomialTerm};
pub use error::{Error, Result};
pub use gauge::{AlgebraPolyTerm, GaugeField, GaugeGrid, ScalarPolyTerm};
pub use lie::{
    algebra_norm, exp_map, geodesic_distance, log_map, project_to_group, AlgebraElement,
    GroupElement, GroupKind,
};
pub use path::{concatenate, Path};
pub use report::VerificationReport;
pub use scenarios::{fuzz_case, FuzzSuite};
pub use surface::{Surface, SurfaceTerm};
pub use transport::{circle_transport, holonomy, parallel_transport, parallel_transport_rk4,
    TransportResult};
pub use verify::{
    check_corollary_planar, check_derivative_lemma, check_radial_estimate, check_theorem,
    curvature_mass, pullback_curvature, sweep_radius, tol_radial, tol_theorem, LemmaCheck,
};
