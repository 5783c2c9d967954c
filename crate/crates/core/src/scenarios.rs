//! Seeded scenario generators for the randomized suites.
//!
//! Every case is a pure function of (seed, index): the generator derives a
//! dedicated stream per index, so suites can be evaluated in any order or
//! in parallel and still reproduce row for row.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{check_conjugation_invariance, check_gauge_invariance, check_subadditivity};
use crate::chart::Chart;
use crate::connection::{Connection, ConnectionFamily, MonomialTerm};
use crate::error::Result;
use crate::gauge::{AlgebraPolyTerm, GaugeField, ScalarPolyTerm};
use crate::lie::{AlgebraElement, GroupKind};
use crate::path::Path;
use crate::report::VerificationReport;
use crate::surface::Surface;
use crate::verify::{check_radial_estimate, check_theorem};

/// Exponent pairs of total degree at most two in two variables.
pub const DEGREE_TWO_POWERS: [[u32; 2]; 6] =
    [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];

/// RNG bound to one scenario: the seed picks the suite run, the stream
/// isolates the index.
pub fn fuzz_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_su2(rng: &mut ChaCha8Rng, scale: f64) -> AlgebraElement {
    AlgebraElement::su2(
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
    )
}

fn random_point_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> DVector<f64> {
    loop {
        let x = rng.random_range(-radius..=radius);
        let y = rng.random_range(-radius..=radius);
        if x * x + y * y <= radius * radius {
            return DVector::from_vec(vec![x, y]);
        }
    }
}

/// Polynomial su(2) connection of degree at most two on the given planar
/// chart, coefficient entries uniform in [-scale, scale].
pub fn random_su2_connection(rng: &mut ChaCha8Rng, chart: Chart, scale: f64) -> Connection {
    let mut terms = Vec::with_capacity(12);
    for axis in 0..2 {
        for powers in DEGREE_TWO_POWERS {
            terms.push(MonomialTerm {
                axis,
                powers: powers.to_vec(),
                coeff: random_su2(rng, scale),
            });
        }
    }
    Connection::new(GroupKind::Su2, chart, ConnectionFamily::Polynomial { terms })
        .expect("generated terms are valid")
}

/// Abelian counterpart of [`random_su2_connection`].
pub fn random_u1_connection(rng: &mut ChaCha8Rng, chart: Chart, scale: f64) -> Connection {
    let mut terms = Vec::with_capacity(12);
    for axis in 0..2 {
        for powers in DEGREE_TWO_POWERS {
            terms.push(MonomialTerm {
                axis,
                powers: powers.to_vec(),
                coeff: AlgebraElement::u1(rng.random_range(-scale..=scale)),
            });
        }
    }
    Connection::new(GroupKind::U1, chart, ConnectionFamily::Polynomial { terms })
        .expect("generated terms are valid")
}

/// Random group-valued polynomial-exponent gauge on su(2).
pub fn random_su2_gauge(rng: &mut ChaCha8Rng, scale: f64) -> GaugeField {
    let terms = DEGREE_TWO_POWERS
        .iter()
        .map(|powers| AlgebraPolyTerm {
            coeff: random_su2(rng, scale),
            powers: powers.to_vec(),
        })
        .collect();
    GaugeField::ExpPolynomial {
        kind: GroupKind::Su2,
        terms,
    }
}

/// Random phase gauge for abelian scenarios.
pub fn random_u1_gauge(rng: &mut ChaCha8Rng, scale: f64) -> GaugeField {
    let terms = DEGREE_TWO_POWERS
        .iter()
        .map(|powers| ScalarPolyTerm {
            coeff: rng.random_range(-scale..=scale),
            powers: powers.to_vec(),
        })
        .collect();
    GaugeField::U1Phase { terms }
}

/// Two circles through a common basepoint, both inside the ball of
/// radius 1.2 around the origin.
pub fn random_loop_pair(rng: &mut ChaCha8Rng) -> (Path, Path) {
    let base = random_point_in_disk(rng, 0.2);
    let r1 = rng.random_range(0.2..=0.4);
    let r2 = rng.random_range(0.2..=0.4);
    let c1 = DVector::from_vec(vec![base[0] - r1, base[1]]);
    let c2 = DVector::from_vec(vec![base[0] - r2, base[1]]);
    (Path::circle(c1, r1), Path::circle(c2, r2))
}

/// A circle plus a segment leaving its basepoint, for rebasing the loop.
pub fn random_loop_and_connector(rng: &mut ChaCha8Rng) -> (Path, Path) {
    let base = random_point_in_disk(rng, 0.2);
    let r = rng.random_range(0.2..=0.4);
    let center = DVector::from_vec(vec![base[0] - r, base[1]]);
    let target = random_point_in_disk(rng, 0.3);
    (Path::circle(center, r), Path::segment(base, target))
}

/// Connection for one main-bound fuzz case: full-strength coefficients on
/// the ball of radius 1.1, so the unit disk sits inside the chart.
pub fn theorem_fuzz_connection(seed: u64, index: u64) -> Connection {
    let mut rng = fuzz_rng(seed, index);
    random_su2_connection(&mut rng, Chart::ball(DVector::zeros(2), 1.1), 1.0)
}

/// The randomized suites exposed by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzSuite {
    Theorem,
    Subadditivity,
    Conjugation,
    GaugeInvariance,
    Radial,
}

impl FuzzSuite {
    pub fn parse(name: &str) -> Option<FuzzSuite> {
        match name {
            "theorem" => Some(FuzzSuite::Theorem),
            "subadditivity" => Some(FuzzSuite::Subadditivity),
            "conjugation" => Some(FuzzSuite::Conjugation),
            "gauge-invariance" => Some(FuzzSuite::GaugeInvariance),
            "radial" => Some(FuzzSuite::Radial),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FuzzSuite::Theorem => "theorem",
            FuzzSuite::Subadditivity => "subadditivity",
            FuzzSuite::Conjugation => "conjugation",
            FuzzSuite::GaugeInvariance => "gauge-invariance",
            FuzzSuite::Radial => "radial",
        }
    }

    /// Step count at which the suite's tolerances were calibrated.
    pub fn default_steps(self) -> usize {
        match self {
            FuzzSuite::Theorem => 4096,
            FuzzSuite::Subadditivity | FuzzSuite::Conjugation => 32768,
            FuzzSuite::GaugeInvariance => 4096,
            FuzzSuite::Radial => 4096,
        }
    }

    pub fn default_count(self) -> u64 {
        match self {
            FuzzSuite::Theorem => 200,
            FuzzSuite::Subadditivity | FuzzSuite::Conjugation => 100,
            FuzzSuite::GaugeInvariance => 50,
            FuzzSuite::Radial => 100,
        }
    }
}

/// Runs a single fuzz case. Identical (suite, seed, index, n) always
/// yields an identical report row.
pub fn fuzz_case(suite: FuzzSuite, seed: u64, index: u64, n: usize) -> Result<VerificationReport> {
    let id = format!("fuzz-{}-{index:04}", suite.label());
    let mut rng = fuzz_rng(seed, index);
    let chart = Chart::ball(DVector::zeros(2), 1.2);
    let report = match suite {
        FuzzSuite::Theorem => {
            let conn = theorem_fuzz_connection(seed, index);
            check_theorem(id, &conn, &Surface::unit_disk(), (64, 128), n)?
        }
        FuzzSuite::Subadditivity => {
            let conn = if index.is_multiple_of(2) {
                random_su2_connection(&mut rng, chart, 0.25)
            } else {
                random_u1_connection(&mut rng, chart, 0.25)
            };
            let (gamma, eta) = random_loop_pair(&mut rng);
            check_subadditivity(&id, &conn, &gamma, &eta, n)?
        }
        FuzzSuite::Conjugation => {
            let conn = if index.is_multiple_of(2) {
                random_su2_connection(&mut rng, chart, 0.25)
            } else {
                random_u1_connection(&mut rng, chart, 0.25)
            };
            let (gamma, eta) = random_loop_and_connector(&mut rng);
            check_conjugation_invariance(&id, &conn, &gamma, &eta, n)?
        }
        FuzzSuite::GaugeInvariance => {
            let conn = if index.is_multiple_of(2) {
                random_su2_connection(&mut rng, chart, 0.5)
            } else {
                random_u1_connection(&mut rng, chart, 0.5)
            };
            let gauge = if index.is_multiple_of(2) {
                random_su2_gauge(&mut rng, 0.3)
            } else {
                random_u1_gauge(&mut rng, 0.3)
            };
            let center = random_point_in_disk(&mut rng, 0.2);
            let radius = rng.random_range(0.3..=0.6);
            let loop_path = Path::circle(center, radius);
            check_gauge_invariance(&id, &conn, &gauge, &loop_path, n)?
        }
        FuzzSuite::Radial => {
            let conn = random_su2_connection(&mut rng, chart, 0.5);
            let r = rng.random_range(0.3..=0.8);
            check_radial_estimate(id, &conn, r, 1e-3, n, 512)?
        }
    };
    Ok(report.with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_are_reproducible() {
        let a = theorem_fuzz_connection(42, 7);
        let b = theorem_fuzz_connection(42, 7);
        let p = DVector::from_vec(vec![0.31, -0.44]);
        let ca = a.components(&p).unwrap();
        let cb = b.components(&p).unwrap();
        for (x, y) in ca.iter().zip(cb.iter()) {
            assert_eq!(x.mat(), y.mat());
        }
    }

    #[test]
    fn streams_are_independent() {
        let a = theorem_fuzz_connection(42, 0);
        let b = theorem_fuzz_connection(42, 1);
        let p = DVector::from_vec(vec![0.31, -0.44]);
        let da = a.components(&p).unwrap()[0].norm();
        let db = b.components(&p).unwrap()[0].norm();
        assert!((da - db).abs() > 1e-12);
    }

    #[test]
    fn loop_pairs_share_a_basepoint_inside_the_chart() {
        let mut rng = fuzz_rng(9, 3);
        for _ in 0..20 {
            let (gamma, eta) = random_loop_pair(&mut rng);
            assert!((gamma.start() - eta.start()).norm() < 1e-12);
            for k in 0..16 {
                let t = k as f64 / 16.0;
                assert!(gamma.point(t).norm() < 1.2);
                assert!(eta.point(t).norm() < 1.2);
            }
        }
    }

    #[test]
    fn connectors_leave_the_loop_basepoint() {
        let mut rng = fuzz_rng(11, 0);
        for _ in 0..20 {
            let (gamma, eta) = random_loop_and_connector(&mut rng);
            assert!((gamma.start() - eta.start()).norm() < 1e-12);
            assert!(gamma.is_closed());
        }
    }

    #[test]
    fn suite_labels_round_trip() {
        for suite in [
            FuzzSuite::Theorem,
            FuzzSuite::Subadditivity,
            FuzzSuite::Conjugation,
            FuzzSuite::GaugeInvariance,
            FuzzSuite::Radial,
        ] {
            assert_eq!(FuzzSuite::parse(suite.label()), Some(suite));
        }
        assert_eq!(FuzzSuite::parse("bogus"), None);
    }

    #[test]
    fn one_case_from_each_suite_passes() {
        for suite in [
            FuzzSuite::Theorem,
            FuzzSuite::Subadditivity,
            FuzzSuite::Conjugation,
            FuzzSuite::GaugeInvariance,
            FuzzSuite::Radial,
        ] {
            let report = fuzz_case(suite, 42, 0, suite.default_steps()).unwrap();
            assert!(report.pass, "{}: {:?}", suite.label(), report);
            assert_eq!(report.seed, 42);
        }
    }
}
