//! C^1 surfaces sigma: closed unit disk -> R^m with evaluable Jacobians.

use nalgebra::DVector;

/// One vector-valued monomial c * u^a v^b of a polynomial surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceTerm {
    pub coeff: DVector<f64>,
    pub pow_u: u32,
    pub pow_v: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    /// q |-> center + radius * q, target dimension 2.
    Disk { center: DVector<f64>, radius: f64 },
    /// q = (u, v) |-> sum of coeff * u^a v^b, target dimension `dim`.
    Polynomial { dim: usize, terms: Vec<SurfaceTerm> },
}

impl Surface {
    pub fn unit_disk() -> Self {
        Surface::Disk {
            center: DVector::zeros(2),
            radius: 1.0,
        }
    }

    pub fn disk(center: DVector<f64>, radius: f64) -> Self {
        assert_eq!(center.len(), 2);
        assert!(radius > 0.0);
        Surface::Disk { center, radius }
    }

    /// Affine image of the disk: center + u * col_u + v * col_v.
    pub fn linear(center: DVector<f64>, col_u: DVector<f64>, col_v: DVector<f64>) -> Self {
        let dim = center.len();
        assert_eq!(col_u.len(), dim);
        assert_eq!(col_v.len(), dim);
        Surface::Polynomial {
            dim,
            terms: vec![
                SurfaceTerm {
                    coeff: center,
                    pow_u: 0,
                    pow_v: 0,
                },
                SurfaceTerm {
                    coeff: col_u,
                    pow_u: 1,
                    pow_v: 0,
                },
                SurfaceTerm {
                    coeff: col_v,
                    pow_u: 0,
                    pow_v: 1,
                },
            ],
        }
    }

    pub fn polynomial(dim: usize, terms: Vec<SurfaceTerm>) -> Self {
        assert!(terms.iter().all(|t| t.coeff.len() == dim));
        Surface::Polynomial { dim, terms }
    }

    /// Dimension of the target space.
    pub fn dim(&self) -> usize {
        match self {
            Surface::Disk { center, .. } => center.len(),
            Surface::Polynomial { dim, .. } => *dim,
        }
    }

    pub fn point(&self, q: [f64; 2]) -> DVector<f64> {
        match self {
            Surface::Disk { center, radius } => {
                let mut p = center.clone();
                p[0] += radius * q[0];
                p[1] += radius * q[1];
                p
            }
            Surface::Polynomial { dim, terms } => {
                let mut p = DVector::zeros(*dim);
                for t in terms {
                    p += &t.coeff * (q[0].powi(t.pow_u as i32) * q[1].powi(t.pow_v as i32));
                }
                p
            }
        }
    }

    /// Jacobian columns (d sigma / du, d sigma / dv) at q.
    pub fn jacobian(&self, q: [f64; 2]) -> (DVector<f64>, DVector<f64>) {
        match self {
            Surface::Disk { center, radius } => {
                let mut du = DVector::zeros(center.len());
                let mut dv = DVector::zeros(center.len());
                du[0] = *radius;
                dv[1] = *radius;
                (du, dv)
            }
            Surface::Polynomial { dim, terms } => {
                let mut du = DVector::zeros(*dim);
                let mut dv = DVector::zeros(*dim);
                for t in terms {
                    let (a, b) = (t.pow_u, t.pow_v);
                    if a > 0 {
                        du += &t.coeff
                            * (a as f64
                                * q[0].powi(a as i32 - 1)
                                * q[1].powi(b as i32));
                    }
                    if b > 0 {
                        dv += &t.coeff
                            * (b as f64
                                * q[0].powi(a as i32)
                                * q[1].powi(b as i32 - 1));
                    }
                }
                (du, dv)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn disk_is_affine_scaling() {
        let s = Surface::disk(DVector::from_vec(vec![1.0, -1.0]), 2.0);
        let p = s.point([0.5, 0.25]);
        assert_abs_diff_eq!(p[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], -0.5, epsilon = 1e-15);
        let (du, dv) = s.jacobian([0.3, 0.4]);
        assert_eq!(du, DVector::from_vec(vec![2.0, 0.0]));
        assert_eq!(dv, DVector::from_vec(vec![0.0, 2.0]));
    }

    #[test]
    fn polynomial_jacobian_matches_finite_differences() {
        let s = Surface::polynomial(
            3,
            vec![
                SurfaceTerm {
                    coeff: DVector::from_vec(vec![1.0, 0.0, 0.5]),
                    pow_u: 2,
                    pow_v: 0,
                },
                SurfaceTerm {
                    coeff: DVector::from_vec(vec![0.0, -1.0, 0.25]),
                    pow_u: 1,
                    pow_v: 1,
                },
                SurfaceTerm {
                    coeff: DVector::from_vec(vec![0.3, 0.3, 0.3]),
                    pow_u: 0,
                    pow_v: 2,
                },
            ],
        );
        let q = [0.4, -0.3];
        let h = 1e-6;
        let (du, dv) = s.jacobian(q);
        let du_fd = (s.point([q[0] + h, q[1]]) - s.point([q[0] - h, q[1]])) / (2.0 * h);
        let dv_fd = (s.point([q[0], q[1] + h]) - s.point([q[0], q[1] - h])) / (2.0 * h);
        assert!((du - du_fd).norm() < 1e-9);
        assert!((dv - dv_fd).norm() < 1e-9);
    }

    #[test]
    fn linear_surface_boundary_is_ellipse() {
        let s = Surface::linear(
            DVector::zeros(2),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.5]),
        );
        let angle = std::f64::consts::TAU * 0.3;
        let q = [angle.cos(), angle.sin()];
        let p = s.point(q);
        assert_abs_diff_eq!(p[0], q[0], epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5 * q[1], epsilon = 1e-15);
    }
}
