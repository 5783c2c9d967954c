//! Numerical parallel transport: group-preserving exponential-midpoint
//! integration of Pt' + omega[gamma'] Pt = 0, plus a classical dense
//! integrator kept as an independent oracle.

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::lie::{exp_map, project_to_group, GroupElement, C64};
use crate::path::Path;

pub const MIN_STEPS: usize = 8;

/// Discretized transport curve t_k |-> Pt(t_k), k = 0..N.
#[derive(Debug, Clone)]
pub struct TransportResult {
    pub times: Vec<f64>,
    pub samples: Vec<GroupElement>,
    /// Worst pre-projection Frobenius deviation from the group.
    pub drift: f64,
    pub steps: usize,
}

impl TransportResult {
    pub fn last(&self) -> &GroupElement {
        self.samples.last().expect("transport has samples")
    }
}

/// Exponential-midpoint scheme: Pt(t_{k+1}) = exp(-dt * omega_mid) Pt(t_k).
/// Every iterate is projected back to the group; the reported drift is the
/// deviation before projection and stays at roundoff level.
pub fn parallel_transport(conn: &Connection, path: &Path, n: usize) -> Result<TransportResult> {
    if n < MIN_STEPS {
        return Err(Error::StepCountTooSmall(n));
    }
    let kind = conn.kind();
    let dt = 1.0 / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    let mut times = Vec::with_capacity(n + 1);
    samples.push(GroupElement::identity(kind));
    times.push(0.0);
    let mut drift = 0.0f64;
    for k in 0..n {
        let t_mid = (k as f64 + 0.5) * dt;
        let p = path.point(t_mid);
        let v = path.velocity(t_mid);
        let a = conn.eval_form(&p, &v)?;
        let step = exp_map(&a.scale(-dt));
        let raw = step.mul(samples.last().expect("nonempty"));
        drift = drift.max(raw.unitarity_defect());
        samples.push(project_to_group(kind, raw.mat())?);
        times.push((k + 1) as f64 * dt);
    }
    Ok(TransportResult {
        times,
        samples,
        drift,
        steps: n,
    })
}

/// Holonomy Pt(1) of a closed loop.
pub fn holonomy(conn: &Connection, path: &Path, n: usize) -> Result<GroupElement> {
    if !path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    Ok(parallel_transport(conn, path, n)?.last().clone())
}

/// Transport around the circle of radius r centered at the chart center.
pub fn circle_transport(conn: &Connection, r: f64, n: usize) -> Result<TransportResult> {
    let max = conn.chart().inscribed_radius();
    if !(r > 0.0 && r < max) {
        return Err(Error::RadiusOutOfRange { radius: r, max });
    }
    let path = Path::circle(conn.chart().center(), r);
    parallel_transport(conn, &path, n)
}

/// Classical fourth-order integrator on the matrix ODE with per-step
/// projection; independent oracle for the midpoint scheme.
pub fn parallel_transport_rk4(conn: &Connection, path: &Path, n: usize) -> Result<TransportResult> {
    if n < MIN_STEPS {
        return Err(Error::StepCountTooSmall(n));
    }
    let kind = conn.kind();
    let dt = 1.0 / n as f64;
    let rhs = |t: f64| -> Result<nalgebra::DMatrix<C64>> {
        let p = path.point(t);
        let v = path.velocity(t);
        Ok(conn.eval_form(&p, &v)?.mat() * C64::new(-1.0, 0.0))
    };
    let mut samples = Vec::with_capacity(n + 1);
    let mut times = Vec::with_capacity(n + 1);
    samples.push(GroupElement::identity(kind));
    times.push(0.0);
    let mut drift = 0.0f64;
    for k in 0..n {
        let t = k as f64 * dt;
        let f0 = rhs(t)?;
        let f_half = rhs(t + 0.5 * dt)?;
        let f1 = rhs(t + dt)?;
        let y = samples.last().expect("nonempty").mat().clone();
        let k1 = &f0 * &y;
        let k2 = &f_half * (&y + &k1 * C64::new(0.5 * dt, 0.0));
        let k3 = &f_half * (&y + &k2 * C64::new(0.5 * dt, 0.0));
        let k4 = &f1 * (&y + &k3 * C64::new(dt, 0.0));
        let raw = &y
            + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
                * C64::new(dt / 6.0, 0.0);
        let projected = project_to_group(kind, &raw)?;
        drift = drift.max((&raw - projected.mat()).norm());
        samples.push(projected);
        times.push(t + dt);
    }
    Ok(TransportResult {
        times,
        samples,
        drift,
        steps: n,
    })
}
