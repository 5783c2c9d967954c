//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by geometry, transport, and verification routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A point left the chart on which the connection is defined.
    #[error("point {point:?} lies outside the chart")]
    OutOfChart { point: Vec<f64> },

    /// Logarithm requested at (or too close to) the cut locus. `candidate`
    /// is the geodesic length of the ambiguous log branches.
    #[error("input at the cut locus; candidate amplitude {candidate}")]
    CutLocus { candidate: f64 },

    /// A loop operation received a path with distinct endpoints.
    #[error("path is not closed")]
    PathNotClosed,

    /// Concatenation endpoints do not match.
    #[error("endpoint mismatch: {left:?} vs {right:?}")]
    EndpointMismatch { left: Vec<f64>, right: Vec<f64> },

    /// Integrator step count below the supported minimum.
    #[error("step count {0} too small (minimum 8)")]
    StepCountTooSmall(usize),

    /// Circle radius outside the chart.
    #[error("radius {radius} outside (0, {max})")]
    RadiusOutOfRange { radius: f64, max: f64 },

    /// Operation restricted to U(1) connections.
    #[error("operation requires a U(1) connection")]
    WrongGroup,

    /// Rank-deficient matrix where an invertible one is required.
    #[error("singular input matrix")]
    SingularInput,

    /// Axial gauge construction needs a box chart.
    #[error("axial gauge requires a box chart")]
    ChartNotBox,

    /// Axial direction must be a signed unit coordinate vector.
    #[error("direction must be a unit coordinate-axis vector")]
    DirectionNotUnit,

    /// Planar corollary check called without an explicit filling surface.
    #[error("an explicit filling surface is required")]
    FillingMissing,

    /// The provided filling's boundary does not trace the given loop.
    #[error("filling boundary does not match the loop (gap {gap})")]
    FillingMismatch { gap: f64 },

    /// Disk-parametrized evaluation outside the open unit disk.
    #[error("point ({0}, {1}) lies outside the open unit disk")]
    OutOfDisk(f64, f64),

    /// Quadrature grid below the supported minimum resolution.
    #[error("grid {n_r}x{n_theta} too coarse (minimum 16x32)")]
    GridTooCoarse { n_r: usize, n_theta: usize },

    /// Chart dimension does not fit the requested operation.
    #[error("operation needs a {expected}-dimensional chart, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two group-valued quantities of different kinds were combined.
    #[error("group kind mismatch: {left} vs {right}")]
    KindMismatch { left: String, right: String },

    /// Input matrix fails the structural invariants of its claimed kind.
    #[error("invalid {kind} element: {reason}")]
    InvalidElement { kind: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
