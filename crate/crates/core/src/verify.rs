//! Quantitative checks tying holonomy amplitudes to curvature.
//!
//! The central estimate says the amplitude of the holonomy around the
//! boundary of an immersed disk is at most the curvature mass of that
//! disk. The helpers here evaluate both sides on concrete scenarios and
//! return [`VerificationReport`] rows with explicit tolerances, together
//! with two sharper statements for circle families: a derivative identity
//! for the transport matrix in the radius, and the scalar radial estimate
//! it implies.

use nalgebra::DVector;

use crate::amplitude::amplitude;
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, CMat, C64};
use crate::path::Path;
use crate::report::VerificationReport;
use crate::surface::Surface;
use crate::transport::circle_transport;

/// Tolerance used for mass comparisons: an absolute floor plus a relative
/// part covering quadrature truncation on the right-hand side.
pub fn tol_theorem(rhs: f64) -> f64 {
    1e-5 + 1e-3 * rhs.abs()
}

/// Tolerance for the radial derivative estimate at difference step `h_r`
/// and transport resolution `n`.
pub fn tol_radial(h_r: f64, n: usize) -> f64 {
    1e-4 + 10.0 * h_r * h_r + 100.0 / (n as f64 * n as f64)
}

const LEMMA_C: f64 = 10.0;

fn planar(conn: &Connection) -> Result<()> {
    if conn.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: conn.dim(),
        });
    }
    Ok(())
}

/// Curvature of `conn` pulled back through `sigma` at disk coordinates q,
/// evaluated on the coordinate frame of the disk. Requires |q| < 1.
pub fn pullback_curvature(
    conn: &Connection,
    sigma: &Surface,
    q: [f64; 2],
) -> Result<AlgebraElement> {
    if q[0] * q[0] + q[1] * q[1] >= 1.0 {
        return Err(Error::OutOfDisk(q[0], q[1]));
    }
    let p = sigma.point(q);
    let (du, dv) = sigma.jacobian(q);
    Ok(conn.curvature(&p, &du, &dv)?.value)
}

/// Integral of the pullback curvature density over the unit disk, using
/// midpoint quadrature on a polar (n_r x n_theta) grid. The polar weights
/// integrate radially-constant densities exactly.
pub fn curvature_mass(conn: &Connection, sigma: &Surface, grid: (usize, usize)) -> Result<f64> {
    let (n_r, n_theta) = grid;
    if n_r < 16 || n_theta < 32 {
        return Err(Error::GridTooCoarse { n_r, n_theta });
    }
    let dr = 1.0 / n_r as f64;
    let dth = std::f64::consts::TAU / n_theta as f64;
    let mut mass = 0.0;
    for i in 0..n_r {
        let r = (i as f64 + 0.5) * dr;
        for j in 0..n_theta {
            let th = (j as f64 + 0.5) * dth;
            let q = [r * th.cos(), r * th.sin()];
            let f = pullback_curvature(conn, sigma, q)?;
            mass += f.norm() * r * dr * dth;
        }
    }
    Ok(mass)
}

/// Checks amplitude(boundary of sigma) <= curvature mass of sigma.
pub fn check_theorem(
    id: impl Into<String>,
    conn: &Connection,
    sigma: &Surface,
    grid: (usize, usize),
    n: usize,
) -> Result<VerificationReport> {
    let boundary = Path::boundary_of(sigma.clone());
    let lhs = amplitude(conn, &boundary, n)?.value;
    let rhs = curvature_mass(conn, sigma, grid)?;
    Ok(
        VerificationReport::inequality(id, lhs, rhs, tol_theorem(rhs))
            .with_steps(n)
            .with_grid(format!("{}x{}", grid.0, grid.1)),
    )
}

fn boundary_gap(gamma: &Path, sigma: &Surface, samples: usize) -> f64 {
    let mut gap: f64 = 0.0;
    for k in 0..samples {
        let t = k as f64 / samples as f64;
        let th = std::f64::consts::TAU * t;
        let on_surface = sigma.point([th.cos(), th.sin()]);
        gap = gap.max((gamma.point(t) - on_surface).norm());
    }
    gap
}

/// Planar isoperimetric form of the bound: for a loop in a flat planar
/// chart with a given filling, amplitude <= length^2 * sup |curvature
/// density| / (4 pi). The sup is probed over the filling image on a polar
/// lattice, and the filling boundary must trace the loop.
pub fn check_corollary_planar(
    id: impl Into<String>,
    conn: &Connection,
    gamma: &Path,
    filling: Option<&Surface>,
    grid: (usize, usize),
    n: usize,
) -> Result<VerificationReport> {
    planar(conn)?;
    if !gamma.is_closed() {
        return Err(Error::PathNotClosed);
    }
    let sigma = filling.ok_or(Error::FillingMissing)?;
    let gap = boundary_gap(gamma, sigma, 16);
    if gap > 1e-9 {
        return Err(Error::FillingMismatch { gap });
    }
    let (n_r, n_theta) = grid;
    if n_r < 16 || n_theta < 32 {
        return Err(Error::GridTooCoarse { n_r, n_theta });
    }

    let lhs = amplitude(conn, gamma, n)?.value;
    let length = gamma.length(n);
    let mut sup = conn.curvature_density_2d(&sigma.point([0.0, 0.0]))?;
    let dr = 1.0 / n_r as f64;
    let dth = std::f64::consts::TAU / n_theta as f64;
    for i in 0..n_r {
        let r = (i as f64 + 0.5) * dr;
        for j in 0..n_theta {
            let th = (j as f64 + 0.5) * dth;
            let p = sigma.point([r * th.cos(), r * th.sin()]);
            sup = sup.max(conn.curvature_density_2d(&p)?);
        }
    }
    let rhs = length * length * sup / (4.0 * std::f64::consts::PI);
    Ok(
        VerificationReport::inequality(id, lhs, rhs, tol_theorem(rhs))
            .with_steps(n)
            .with_grid(format!("{n_r}x{n_theta}")),
    )
}

/// Outcome of the transport derivative identity on a circle family.
///
/// With g(r) the transport once around the centered circle of radius r
/// and A the radial component of the connection at the circle's
/// basepoint, dg/dr + A g - g A equals a signed multiple of the
/// curvature integral along the circle conjugated back to the basepoint.
/// Both signs are scored; `report.lhs` carries the minus-branch residual,
/// `report.rhs` the plus branch, and the check passes when the better
/// branch is within tolerance. The centered difference in r and the
/// transport resolution both enter the tolerance.
#[derive(Debug, Clone)]
pub struct LemmaCheck {
    pub report: VerificationReport,
    pub residual_minus: f64,
    pub residual_plus: f64,
}

impl LemmaCheck {
    pub fn matched_sign(&self) -> &'static str {
        if self.residual_minus <= self.residual_plus {
            "minus"
        } else {
            "plus"
        }
    }
}

/// Scores the radius-derivative identity at radius r with centered
/// difference step h_r and n transport steps per circle.
pub fn check_derivative_lemma(
    id: impl Into<String>,
    conn: &Connection,
    r: f64,
    n: usize,
    h_r: f64,
) -> Result<LemmaCheck> {
    planar(conn)?;
    let inscribed = conn.chart().inscribed_radius();
    if !h_r.is_finite() || h_r <= 0.0 || h_r > r / 10.0 {
        return Err(Error::RadiusOutOfRange {
            radius: h_r,
            max: r / 10.0,
        });
    }
    if r + h_r >= inscribed {
        return Err(Error::RadiusOutOfRange {
            radius: r + h_r,
            max: inscribed,
        });
    }

    let center = conn.chart().center();
    let g_plus = circle_transport(conn, r + h_r, n)?;
    let g_minus = circle_transport(conn, r - h_r, n)?;
    let base = circle_transport(conn, r, 2 * n)?;
    let g = base.last().mat().clone();

    let scale = C64::new(1.0 / (2.0 * h_r), 0.0);
    let dgdr = (g_plus.last().mat() - g_minus.last().mat()) * scale;

    let mut basepoint = center.clone();
    basepoint[0] += r;
    let mut e1 = DVector::zeros(2);
    e1[0] = 1.0;
    let a = conn.eval_form(&basepoint, &e1)?;
    let lhs = dgdr + a.mat() * &g - &g * a.mat();

    let dim = conn.kind().matrix_dim();
    let mut acc = CMat::zeros(dim, dim);
    for k in 0..n {
        let t = (k as f64 + 0.5) / n as f64;
        let th = std::f64::consts::TAU * t;
        let (sin, cos) = th.sin_cos();
        let mut p = center.clone();
        p[0] += r * cos;
        p[1] += r * sin;
        let u = DVector::from_vec(vec![cos, sin]);
        let w = DVector::from_vec(vec![-sin, cos]);
        let f = conn.curvature(&p, &u, &w)?.value;
        let gt = base.samples[2 * k + 1].mat();
        acc += &g * gt.adjoint() * f.mat() * gt;
    }
    let integral = acc * C64::new(std::f64::consts::TAU * r / n as f64, 0.0);

    let residual_plus = (&lhs - &integral).norm();
    let residual_minus = (&lhs + &integral).norm();
    let tolerance = LEMMA_C * (h_r * h_r + 1.0 / (n as f64 * n as f64));
    let pass = residual_minus.min(residual_plus) <= tolerance;
    let report = VerificationReport {
        scenario_id: id.into(),
        lhs: residual_minus,
        rhs: residual_plus,
        tolerance,
        pass,
        steps: n,
        grid: "-".to_string(),
        seed: 0,
    };
    Ok(LemmaCheck {
        report,
        residual_minus,
        residual_plus,
    })
}

/// Scalar consequence of the derivative identity: the amplitude of the
/// centered circle family grows at most like the curvature flux through
/// the corresponding annulus, |d ampl / dr| <= r * integral of the
/// curvature density over the circle.
pub fn check_radial_estimate(
    id: impl Into<String>,
    conn: &Connection,
    r: f64,
    h_r: f64,
    n: usize,
    n_theta: usize,
) -> Result<VerificationReport> {
    planar(conn)?;
    let inscribed = conn.chart().inscribed_radius();
    if !h_r.is_finite() || h_r <= 0.0 || h_r > r / 10.0 {
        return Err(Error::RadiusOutOfRange {
            radius: h_r,
            max: r / 10.0,
        });
    }
    if r + h_r >= inscribed {
        return Err(Error::RadiusOutOfRange {
            radius: r + h_r,
            max: inscribed,
        });
    }
    let center = conn.chart().center();
    let outer = amplitude(conn, &Path::circle(center.clone(), r + h_r), n)?.value;
    let inner = amplitude(conn, &Path::circle(center.clone(), r - h_r), n)?.value;
    let lhs = (outer - inner).abs() / (2.0 * h_r);

    let dth = std::f64::consts::TAU / n_theta as f64;
    let mut flux = 0.0;
    for j in 0..n_theta {
        let th = (j as f64 + 0.5) * dth;
        let (sin, cos) = th.sin_cos();
        let mut p = center.clone();
        p[0] += r * cos;
        p[1] += r * sin;
        let u = DVector::from_vec(vec![cos, sin]);
        let w = DVector::from_vec(vec![-sin, cos]);
        flux += conn.curvature(&p, &u, &w)?.value.norm() * dth;
    }
    let rhs = r * flux;
    Ok(
        VerificationReport::inequality(id, lhs, rhs, tol_radial(h_r, n))
            .with_steps(n)
            .with_grid(format!("1x{n_theta}")),
    )
}

/// Evaluates the main bound on a family of centered circles, one report
/// row per radius, each against the mass of the flat disk it bounds.
pub fn sweep_radius(
    prefix: &str,
    conn: &Connection,
    radii: &[f64],
    n: usize,
    grid: (usize, usize),
) -> Result<Vec<VerificationReport>> {
    planar(conn)?;
    let inscribed = conn.chart().inscribed_radius();
    let center = conn.chart().center();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !r.is_finite() || r <= 0.0 || r >= inscribed {
            return Err(Error::RadiusOutOfRange {
                radius: r,
                max: inscribed,
            });
        }
        let sigma = Surface::disk(center.clone(), r);
        let report = check_theorem(format!("{prefix}:r={r:.4}"), conn, &sigma, grid, n)?;
        rows.push(report);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::connection::{ConnectionFamily, MonomialTerm};
    use crate::lie::GroupKind;

    fn constant_field(b: f64, chart_radius: f64) -> Connection {
        Connection::new(
            GroupKind::U1,
            Chart::ball(DVector::zeros(2), chart_radius),
            ConnectionFamily::ConstantField { b },
        )
        .unwrap()
    }

    fn su2_example(chart_radius: f64) -> Connection {
        Connection::new(
            GroupKind::Su2,
            Chart::ball(DVector::zeros(2), chart_radius),
            ConnectionFamily::Polynomial {
                terms: vec![
                    MonomialTerm {
                        axis: 0,
                        powers: vec![0, 0],
                        coeff: AlgebraElement::su2(0.1, -0.06, 0.09),
                    },
                    MonomialTerm {
                        axis: 0,
                        powers: vec![0, 1],
                        coeff: AlgebraElement::su2(0.07, 0.05, -0.04),
                    },
                    MonomialTerm {
                        axis: 1,
                        powers: vec![0, 0],
                        coeff: AlgebraElement::su2(0.08, 0.1, 0.06),
                    },
                    MonomialTerm {
                        axis: 1,
                        powers: vec![2, 0],
                        coeff: AlgebraElement::su2(-0.05, 0.04, 0.08),
                    },
                ],
            },
        )
        .unwrap()
    }

    #[test]
    fn pullback_through_identity_disk() {
        let conn = constant_field(0.7, 1.5);
        let sigma = Surface::unit_disk();
        let f = pullback_curvature(&conn, &sigma, [0.3, -0.4]).unwrap();
        assert!(f.sub(&AlgebraElement::u1(0.7)).norm() < 1e-12);
        assert!(matches!(
            pullback_curvature(&conn, &sigma, [0.8, 0.6]),
            Err(Error::OutOfDisk(_, _))
        ));
    }

    #[test]
    fn mass_of_constant_field_is_exact() {
        let conn = constant_field(0.9, 1.5);
        let mass = curvature_mass(&conn, &Surface::unit_disk(), (16, 32)).unwrap();
        assert!((mass - 0.9 * std::f64::consts::PI).abs() < 1e-12);
        let scaled = curvature_mass(&conn, &Surface::disk(DVector::zeros(2), 0.6), (16, 32))
            .unwrap();
        assert!((scaled - 0.9 * std::f64::consts::PI * 0.36).abs() < 1e-12);
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let conn = constant_field(1.0, 1.5);
        assert!(matches!(
            curvature_mass(&conn, &Surface::unit_disk(), (8, 32)),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(matches!(
            curvature_mass(&conn, &Surface::unit_disk(), (16, 16)),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn theorem_is_equality_for_constant_fields() {
        for b in [0.5, 1.0, 3.0] {
            let conn = constant_field(b, 1.1);
            let report = check_theorem(
                format!("thm-b{b}"),
                &conn,
                &Surface::unit_disk(),
                (256, 256),
                4096,
            )
            .unwrap();
            assert!(report.pass);
            assert!(
                (report.lhs - report.rhs).abs() <= 1e-5,
                "b = {b}: lhs {} rhs {}",
                report.lhs,
                report.rhs
            );
        }
    }

    #[test]
    fn theorem_tracks_high_winding() {
        let conn = constant_field(6.0, 1.1);
        let report =
            check_theorem("thm-b6", &conn, &Surface::unit_disk(), (64, 64), 4096).unwrap();
        assert!(report.pass);
        let expect = 6.0 * std::f64::consts::PI;
        assert!((report.lhs - expect).abs() < 1e-6);
        assert!((report.rhs - expect).abs() < 1e-6);
    }

    #[test]
    fn theorem_holds_with_slack_for_a_nonabelian_example() {
        let conn = su2_example(1.4);
        let report =
            check_theorem("thm-su2", &conn, &Surface::unit_disk(), (64, 128), 4096).unwrap();
        assert!(report.pass);
        assert!(report.slack() > 0.0, "slack {}", report.slack());
    }

    #[test]
    fn theorem_is_trivial_for_flat_connections() {
        let conn = Connection::new(
            GroupKind::Su2,
            Chart::ball(DVector::zeros(2), 1.4),
            ConnectionFamily::Zero,
        )
        .unwrap();
        let report =
            check_theorem("thm-flat", &conn, &Surface::unit_disk(), (16, 32), 512).unwrap();
        assert!(report.pass);
        assert!(report.lhs.abs() < 1e-12);
        assert!(report.rhs.abs() < 1e-12);
    }

    #[test]
    fn corollary_is_tight_on_circles() {
        let conn = constant_field(1.0, 1.5);
        let gamma = Path::circle(DVector::zeros(2), 0.8);
        let filling = Surface::disk(DVector::zeros(2), 0.8);
        let report = check_corollary_planar(
            "cor-circle",
            &conn,
            &gamma,
            Some(&filling),
            (32, 64),
            4096,
        )
        .unwrap();
        assert!(report.pass);
        assert!(
            (report.lhs - report.rhs).abs() <= 1e-5,
            "lhs {} rhs {}",
            report.lhs,
            report.rhs
        );
    }

    #[test]
    fn corollary_has_real_slack_on_ellipses() {
        let conn = constant_field(0.8, 2.0);
        let gamma = Path::ellipse(DVector::zeros(2), 1.0, 0.5);
        let filling = Surface::linear(
            DVector::zeros(2),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.5]),
        );
        let report = check_corollary_planar(
            "cor-ellipse",
            &conn,
            &gamma,
            Some(&filling),
            (32, 64),
            4096,
        )
        .unwrap();
        assert!(report.pass);
        assert!(
            report.slack() >= 0.1 * report.rhs,
            "slack {} rhs {}",
            report.slack(),
            report.rhs
        );
    }

    #[test]
    fn corollary_requires_a_matching_filling() {
        let conn = constant_field(1.0, 1.5);
        let gamma = Path::unit_circle();
        assert!(matches!(
            check_corollary_planar("cor-none", &conn, &gamma, None, (16, 32), 256),
            Err(Error::FillingMissing)
        ));
        let wrong = Surface::disk(DVector::zeros(2), 0.5);
        assert!(matches!(
            check_corollary_planar("cor-wrong", &conn, &gamma, Some(&wrong), (16, 32), 256),
            Err(Error::FillingMismatch { .. })
        ));
    }

    #[test]
    fn derivative_identity_matches_minus_branch_abelian() {
        let conn = constant_field(0.2, 1.1);
        let check = check_derivative_lemma("lemma-u1", &conn, 0.5, 8192, 1e-4).unwrap();
        assert!(check.report.pass);
        assert_eq!(check.matched_sign(), "minus");
        assert!(
            check.residual_minus <= 1e-8,
            "residual {:.3e}",
            check.residual_minus
        );
        assert!(check.residual_plus > 1e-3);
    }

    #[test]
    fn derivative_identity_matches_minus_branch_su2() {
        let conn = su2_example(1.1);
        let check = check_derivative_lemma("lemma-su2", &conn, 0.5, 8192, 1e-3).unwrap();
        assert!(check.report.pass, "residual {:.3e}", check.residual_minus);
        assert_eq!(check.matched_sign(), "minus");
        assert!(
            check.residual_minus <= 1e-5,
            "residual {:.3e}",
            check.residual_minus
        );
    }

    #[test]
    fn derivative_identity_validates_the_radius_window() {
        let conn = constant_field(0.5, 1.1);
        assert!(matches!(
            check_derivative_lemma("lemma-bad-h", &conn, 0.5, 512, 0.2),
            Err(Error::RadiusOutOfRange { .. })
        ));
        assert!(matches!(
            check_derivative_lemma("lemma-bad-r", &conn, 1.15, 512, 1e-3),
            Err(Error::RadiusOutOfRange { .. })
        ));
    }

    #[test]
    fn radial_estimate_is_tight_for_constant_fields() {
        let conn = constant_field(1.0, 1.1);
        let report = check_radial_estimate("radial-u1", &conn, 0.6, 1e-4, 4096, 512).unwrap();
        assert!(report.pass);
        let expect = std::f64::consts::TAU * 0.6;
        assert!((report.lhs - expect).abs() < 1e-5, "lhs {}", report.lhs);
        assert!((report.rhs - expect).abs() < 1e-10, "rhs {}", report.rhs);
    }

    #[test]
    fn radial_estimate_holds_for_a_nonabelian_example() {
        let conn = su2_example(1.2);
        let report = check_radial_estimate("radial-su2", &conn, 0.5, 1e-3, 4096, 512).unwrap();
        assert!(
            report.pass,
            "lhs {} rhs {} tol {}",
            report.lhs,
            report.rhs,
            report.tolerance
        );
    }

    #[test]
    fn radial_flux_quadrature_is_converged() {
        let conn = su2_example(1.2);
        let a = check_radial_estimate("radial-a", &conn, 0.5, 1e-3, 512, 256).unwrap();
        let b = check_radial_estimate("radial-b", &conn, 0.5, 1e-3, 512, 512).unwrap();
        assert!((a.rhs - b.rhs).abs() < 1e-8);
    }

    #[test]
    fn radius_sweep_reports_every_radius() {
        let conn = constant_field(1.5, 1.1);
        let rows = sweep_radius("sweep", &conn, &[0.2, 0.4, 0.6, 0.8], 2048, (64, 64)).unwrap();
        assert_eq!(rows.len(), 4);
        for pair in rows.windows(2) {
            assert!(pair[1].lhs > pair[0].lhs);
        }
        for row in &rows {
            assert!(row.pass, "{}", row.scenario_id);
            assert!((row.lhs - row.rhs).abs() < 1e-6);
        }
        assert!(matches!(
            sweep_radius("sweep", &conn, &[0.5, 1.2], 256, (16, 32)),
            Err(Error::RadiusOutOfRange { .. })
        ));
    }
}
