//! Charts: open subsets of R^m (balls and axis-aligned boxes) on which
//! connections are defined.

use nalgebra::DVector;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    Ball { center: DVector<f64>, radius: f64 },
    Box { min: DVector<f64>, max: DVector<f64> },
}

impl Chart {
    pub fn ball(center: DVector<f64>, radius: f64) -> Self {
        assert!(radius > 0.0, "ball radius must be positive");
        Chart::Ball { center, radius }
    }

    pub fn unit_ball(dim: usize) -> Self {
        Chart::Ball {
            center: DVector::zeros(dim),
            radius: 1.0,
        }
    }

    pub fn new_box(min: DVector<f64>, max: DVector<f64>) -> Self {
        assert_eq!(min.len(), max.len());
        assert!(
            min.iter().zip(max.iter()).all(|(a, b)| a < b),
            "box must have positive extent on every axis"
        );
        Chart::Box { min, max }
    }

    pub fn dim(&self) -> usize {
        match self {
            Chart::Ball { center, .. } => center.len(),
            Chart::Box { min, .. } => min.len(),
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, p: &DVector<f64>) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Chart::Ball { center, radius } => (p - center).norm() < *radius,
            Chart::Box { min, max } => p
                .iter()
                .zip(min.iter())
                .zip(max.iter())
                .all(|((x, lo), hi)| lo < x && x < hi),
        }
    }

    /// Membership in the closure, with a tiny tolerance. Evaluation-type
    /// operations use this: analytic families extend continuously to the
    /// boundary, and gauge grids place nodes on box faces.
    pub fn check_contains(&self, p: &DVector<f64>) -> Result<()> {
        let out = Err(Error::OutOfChart {
            point: p.iter().cloned().collect(),
        });
        if p.len() != self.dim() {
            return out;
        }
        let eps = 1e-9 * self.scale().max(1.0);
        let ok = match self {
            Chart::Ball { center, radius } => (p - center).norm() <= radius + eps,
            Chart::Box { min, max } => p
                .iter()
                .zip(min.iter())
                .zip(max.iter())
                .all(|((x, lo), hi)| lo - eps <= *x && *x <= hi + eps),
        };
        if ok {
            Ok(())
        } else {
            out
        }
    }

    pub fn center(&self) -> DVector<f64> {
        match self {
            Chart::Ball { center, .. } => center.clone(),
            Chart::Box { min, max } => (min + max) * 0.5,
        }
    }

    /// Characteristic length used to size finite-difference steps.
    pub fn scale(&self) -> f64 {
        match self {
            Chart::Ball { radius, .. } => *radius,
            Chart::Box { min, max } => {
                (max - min).iter().cloned().fold(0.0f64, f64::max) * 0.5
            }
        }
    }

    /// Radius of the largest ball centered at `center()` inside the chart.
    pub fn inscribed_radius(&self) -> f64 {
        match self {
            Chart::Ball { radius, .. } => *radius,
            Chart::Box { min, max } => {
                (max - min).iter().cloned().fold(f64::MAX, f64::min) * 0.5
            }
        }
    }

    /// Interior probe points on a regular lattice (cell centers), suitable
    /// for sup-norm estimates and residual studies.
    pub fn probe_points(&self, n_per_axis: usize) -> Vec<DVector<f64>> {
        assert!(n_per_axis >= 1);
        let m = self.dim();
        match self {
            Chart::Box { min, max } => {
                let mut out = Vec::new();
                let mut idx = vec![0usize; m];
                loop {
                    let p = DVector::from_fn(m, |i, _| {
                        let frac = (idx[i] as f64 + 0.5) / n_per_axis as f64;
                        min[i] + frac * (max[i] - min[i])
                    });
                    out.push(p);
                    // Odometer increment over the lattice.
                    let mut axis = 0;
                    loop {
                        if axis == m {
                            return out;
                        }
                        idx[axis] += 1;
                        if idx[axis] < n_per_axis {
                            break;
                        }
                        idx[axis] = 0;
                        axis += 1;
                    }
                }
            }
            Chart::Ball { center, radius } => {
                // Polar-style sampling for m = 2, radial shells otherwise.
                let mut out = Vec::new();
                if m == 2 {
                    for i in 0..n_per_axis {
                        let r = (i as f64 + 0.5) / n_per_axis as f64 * radius;
                        let n_theta = 2 * n_per_axis;
                        for j in 0..n_theta {
                            let th = (j as f64 + 0.5) / n_theta as f64
                                * std::f64::consts::TAU;
                            let mut p = center.clone();
                            p[0] += r * th.cos();
                            p[1] += r * th.sin();
                            out.push(p);
                        }
                    }
                } else {
                    // Cartesian lattice over the bounding box, filtered.
                    let half = DVector::from_element(m, *radius);
                    let boxed = Chart::Box {
                        min: center - &half,
                        max: center + &half,
                    };
                    out = boxed
                        .probe_points(n_per_axis)
                        .into_iter()
                        .filter(|p| self.contains(p))
                        .collect();
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_vec(vec![x, y])
    }

    #[test]
    fn ball_membership_is_strict() {
        let chart = Chart::unit_ball(2);
        assert!(chart.contains(&v2(0.5, 0.5)));
        assert!(!chart.contains(&v2(1.0, 0.0)));
        assert!(!chart.contains(&v2(1.5, 0.0)));
        assert!(chart.check_contains(&v2(2.0, 0.0)).is_err());
    }

    #[test]
    fn box_membership_and_geometry() {
        let chart = Chart::new_box(v2(-1.0, -2.0), v2(1.0, 2.0));
        assert!(chart.contains(&v2(0.9, -1.9)));
        assert!(!chart.contains(&v2(1.0, 0.0)));
        assert_eq!(chart.center(), v2(0.0, 0.0));
        assert_eq!(chart.scale(), 2.0);
        assert_eq!(chart.inscribed_radius(), 1.0);
    }

    #[test]
    fn probe_points_stay_inside() {
        for chart in [
            Chart::unit_ball(2),
            Chart::new_box(v2(-1.0, 0.0), v2(2.0, 1.0)),
        ] {
            let probes = chart.probe_points(8);
            assert!(!probes.is_empty());
            assert!(probes.iter().all(|p| chart.contains(p)));
        }
    }

    #[test]
    fn wrong_dimension_is_outside() {
        let chart = Chart::unit_ball(2);
        assert!(!chart.contains(&DVector::from_vec(vec![0.0, 0.0, 0.0])));
    }
}
