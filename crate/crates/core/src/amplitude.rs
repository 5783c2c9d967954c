//! Holonomy amplitude: geodesic distance from the identity to the holonomy
//! for simply connected groups, winding lift through the universal cover
//! for U(1), and the associated invariance checks.

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::lie::{geodesic_distance, GroupElement, GroupKind};
use crate::path::{concatenate, Path};
use crate::report::VerificationReport;
use crate::transport::{holonomy, parallel_transport};

/// Tolerance for abelian identities (quadrature-limited).
pub const ABELIAN_TOL: f64 = 1e-7;
/// Tolerance for nonabelian fuzz checks (integrator-limited).
pub const NONABELIAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeMethod {
    /// Geodesic distance from the identity to the holonomy.
    GeodesicLog,
    /// Accumulated principal phase of the transport path (U(1) cover).
    WindingLift,
}

impl AmplitudeMethod {
    pub fn label(self) -> &'static str {
        match self {
            AmplitudeMethod::GeodesicLog => "geodesic-log",
            AmplitudeMethod::WindingLift => "winding-lift",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeValue {
    pub value: f64,
    pub method: AmplitudeMethod,
}

/// Amplitude of a closed loop. U(1) uses the winding lift: the transport
/// path lifts to the universal cover R, and the amplitude is the absolute
/// accumulated phase, which can exceed pi. SU(2) and SO(n) use the
/// geodesic log of the holonomy (for SO(n) this ignores the double cover;
/// the value is tagged so callers can tell the methods apart).
pub fn amplitude(conn: &Connection, path: &Path, n: usize) -> Result<AmplitudeValue> {
    if !path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    match conn.kind() {
        GroupKind::U1 => {
            let transport = parallel_transport(conn, path, n)?;
            let mut theta = 0.0f64;
            for pair in transport.samples.windows(2) {
                let ratio = pair[1].u1_value() * pair[0].u1_value().conj();
                // Each step rotates by less than pi, so the principal
                // argument is the true increment.
                theta += ratio.im.atan2(ratio.re);
            }
            Ok(AmplitudeValue {
                value: theta.abs(),
                method: AmplitudeMethod::WindingLift,
            })
        }
        _ => {
            let hol = holonomy(conn, path, n)?;
            let id = GroupElement::identity(conn.kind());
            let value = geodesic_distance(&id, &hol)?;
            Ok(AmplitudeValue {
                value,
                method: AmplitudeMethod::GeodesicLog,
            })
        }
    }
}

/// |integral of the pullback gamma* omega| by midpoint quadrature; the
/// abelian closed form of the amplitude.
pub fn abelian_amplitude_integral(conn: &Connection, path: &Path, n: usize) -> Result<f64> {
    if conn.kind() != GroupKind::U1 {
        return Err(Error::WrongGroup);
    }
    if !path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    let dt = 1.0 / n as f64;
    let mut total = 0.0f64;
    for k in 0..n {
        let t = (k as f64 + 0.5) * dt;
        let val = conn.eval_form(&path.point(t), &path.velocity(t))?;
        total += val.u1_angle() * dt;
    }
    Ok(total.abs())
}

/// ampl(gamma . eta) <= ampl(gamma) + ampl(eta) for loops sharing a
/// basepoint.
pub fn check_subadditivity(
    id: &str,
    conn: &Connection,
    gamma: &Path,
    eta: &Path,
    n: usize,
) -> Result<VerificationReport> {
    if !gamma.is_closed() || !eta.is_closed() {
        return Err(Error::PathNotClosed);
    }
    let joined = concatenate(gamma.clone(), eta.clone())?;
    let lhs = amplitude(conn, &joined, n)?.value;
    let rhs = amplitude(conn, gamma, n)?.value + amplitude(conn, eta, n)?.value;
    Ok(VerificationReport::inequality(id, lhs, rhs, ABELIAN_TOL).with_steps(n))
}

/// ampl(reverse(eta) . gamma . eta) = ampl(gamma) for a connecting path
/// eta with eta(0) at the basepoint of gamma.
pub fn check_conjugation_invariance(
    id: &str,
    conn: &Connection,
    gamma: &Path,
    eta: &Path,
    n: usize,
) -> Result<VerificationReport> {
    if !gamma.is_closed() {
        return Err(Error::PathNotClosed);
    }
    let conjugated = concatenate(
        concatenate(eta.clone().reverse(), gamma.clone())?,
        eta.clone(),
    )?;
    let lhs = amplitude(conn, &conjugated, n)?.value;
    let rhs = amplitude(conn, gamma, n)?.value;
    Ok(VerificationReport::equality(id, lhs, rhs, NONABELIAN_TOL).with_steps(n))
}

/// Amplitude is unchanged when the connection is rewritten in another
/// gauge.
pub fn check_gauge_invariance(
    id: &str,
    conn: &Connection,
    gauge: &GaugeField,
    gamma: &Path,
    n: usize,
) -> Result<VerificationReport> {
    let transformed = conn.gauge_transform(gauge.clone())?;
    let lhs = amplitude(&transformed, gamma, n)?.value;
    let rhs = amplitude(conn, gamma, n)?.value;
    Ok(VerificationReport::equality(id, lhs, rhs, NONABELIAN_TOL).with_steps(n))
}
