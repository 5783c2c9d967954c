//! C^1 paths gamma: [0,1] -> R^m with evaluable derivatives.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::surface::Surface;

/// Endpoints closer than this are treated as equal.
pub const CLOSURE_TOL: f64 = 1e-12;

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq)]
pub enum Path {
    Segment {
        from: DVector<f64>,
        to: DVector<f64>,
    },
    /// center + radius (cos 2 pi t, sin 2 pi t), dimension 2.
    Circle {
        center: DVector<f64>,
        radius: f64,
    },
    /// center + (a cos 2 pi t, b sin 2 pi t), dimension 2.
    Ellipse {
        center: DVector<f64>,
        a: f64,
        b: f64,
    },
    Constant {
        point: DVector<f64>,
    },
    /// Closed trigonometric polynomial:
    /// center + sum_k cos(2 pi k t) c_k + sin(2 pi k t) s_k.
    TrigLoop {
        center: DVector<f64>,
        cos_coeffs: Vec<DVector<f64>>,
        sin_coeffs: Vec<DVector<f64>>,
    },
    /// Cubic Hermite interpolation through uniformly spaced samples; node
    /// tangents by centered differences, one-sided at the ends.
    Sampled {
        nodes: Vec<DVector<f64>>,
    },
    /// Runs the parts in order, each on an equal share of [0,1].
    Concat {
        parts: Vec<Path>,
    },
    Reversed {
        inner: Box<Path>,
    },
    /// t |-> sigma(cos 2 pi t, sin 2 pi t).
    SurfaceBoundary {
        surface: Surface,
    },
}

impl Path {
    pub fn segment(from: DVector<f64>, to: DVector<f64>) -> Self {
        assert_eq!(from.len(), to.len());
        Path::Segment { from, to }
    }

    pub fn circle(center: DVector<f64>, radius: f64) -> Self {
        assert_eq!(center.len(), 2);
        assert!(radius > 0.0);
        Path::Circle { center, radius }
    }

    pub fn unit_circle() -> Self {
        Path::circle(DVector::zeros(2), 1.0)
    }

    pub fn ellipse(center: DVector<f64>, a: f64, b: f64) -> Self {
        assert_eq!(center.len(), 2);
        assert!(a > 0.0 && b > 0.0);
        Path::Ellipse { center, a, b }
    }

    pub fn constant(point: DVector<f64>) -> Self {
        Path::Constant { point }
    }

    pub fn sampled(nodes: Vec<DVector<f64>>) -> Self {
        assert!(nodes.len() >= 2, "sampled path needs at least two nodes");
        Path::Sampled { nodes }
    }

    pub fn boundary_of(surface: Surface) -> Self {
        Path::SurfaceBoundary { surface }
    }

    pub fn dim(&self) -> usize {
        match self {
            Path::Segment { from, .. } => from.len(),
            Path::Circle { center, .. } => center.len(),
            Path::Ellipse { center, .. } => center.len(),
            Path::Constant { point } => point.len(),
            Path::TrigLoop { center, .. } => center.len(),
            Path::Sampled { nodes } => nodes[0].len(),
            Path::Concat { parts } => parts[0].dim(),
            Path::Reversed { inner } => inner.dim(),
            Path::SurfaceBoundary { surface } => surface.dim(),
        }
    }

    pub fn point(&self, t: f64) -> DVector<f64> {
        match self {
            Path::Segment { from, to } => from + (to - from) * t,
            Path::Circle { center, radius } => {
                let mut p = center.clone();
                p[0] += radius * (TAU * t).cos();
                p[1] += radius * (TAU * t).sin();
                p
            }
            Path::Ellipse { center, a, b } => {
                let mut p = center.clone();
                p[0] += a * (TAU * t).cos();
                p[1] += b * (TAU * t).sin();
                p
            }
            Path::Constant { point } => point.clone(),
            Path::TrigLoop {
                center,
                cos_coeffs,
                sin_coeffs,
            } => {
                let mut p = center.clone();
                for (k, c) in cos_coeffs.iter().enumerate() {
                    p += c * (TAU * (k + 1) as f64 * t).cos();
                }
                for (k, s) in sin_coeffs.iter().enumerate() {
                    p += s * (TAU * (k + 1) as f64 * t).sin();
                }
                p
            }
            Path::Sampled { nodes } => {
                let (k, s, _) = hermite_locate(nodes.len(), t);
                let (p0, p1, v0, v1) = hermite_data(nodes, k);
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                let dt = 1.0 / (nodes.len() - 1) as f64;
                p0 * h00 + v0 * (h10 * dt) + p1 * h01 + v1 * (h11 * dt)
            }
            Path::Concat { parts } => {
                let (i, s) = concat_locate(parts.len(), t);
                parts[i].point(s)
            }
            Path::Reversed { inner } => inner.point(1.0 - t),
            Path::SurfaceBoundary { surface } => {
                surface.point([(TAU * t).cos(), (TAU * t).sin()])
            }
        }
    }

    pub fn velocity(&self, t: f64) -> DVector<f64> {
        match self {
            Path::Segment { from, to } => to - from,
            Path::Circle { center, radius } => {
                let mut v = DVector::zeros(center.len());
                v[0] = -TAU * radius * (TAU * t).sin();
                v[1] = TAU * radius * (TAU * t).cos();
                v
            }
            Path::Ellipse { center, a, b } => {
                let mut v = DVector::zeros(center.len());
                v[0] = -TAU * a * (TAU * t).sin();
                v[1] = TAU * b * (TAU * t).cos();
                v
            }
            Path::Constant { point } => DVector::zeros(point.len()),
            Path::TrigLoop {
                center,
                cos_coeffs,
                sin_coeffs,
            } => {
                let mut v = DVector::zeros(center.len());
                for (k, c) in cos_coeffs.iter().enumerate() {
                    let w = TAU * (k + 1) as f64;
                    v -= c * (w * (w * t).sin());
                }
                for (k, s) in sin_coeffs.iter().enumerate() {
                    let w = TAU * (k + 1) as f64;
                    v += s * (w * (w * t).cos());
                }
                v
            }
            Path::Sampled { nodes } => {
                let (k, s, cells) = hermite_locate(nodes.len(), t);
                let (p0, p1, v0, v1) = hermite_data(nodes, k);
                let s2 = s * s;
                let dh00 = 6.0 * s2 - 6.0 * s;
                let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
                let dh01 = -6.0 * s2 + 6.0 * s;
                let dh11 = 3.0 * s2 - 2.0 * s;
                (p0 * dh00 + p1 * dh01) * cells as f64 + v0 * dh10 + v1 * dh11
            }
            Path::Concat { parts } => {
                let (i, s) = concat_locate(parts.len(), t);
                parts[i].velocity(s) * parts.len() as f64
            }
            Path::Reversed { inner } => -inner.velocity(1.0 - t),
            Path::SurfaceBoundary { surface } => {
                let q = [(TAU * t).cos(), (TAU * t).sin()];
                let (du, dv) = surface.jacobian(q);
                du * (-TAU * (TAU * t).sin()) + dv * (TAU * (TAU * t).cos())
            }
        }
    }

    pub fn start(&self) -> DVector<f64> {
        self.point(0.0)
    }

    pub fn end(&self) -> DVector<f64> {
        self.point(1.0)
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() <= CLOSURE_TOL
    }

    /// Midpoint-rule arc length with n samples.
    pub fn length(&self, n: usize) -> f64 {
        assert!(n >= 1);
        let dt = 1.0 / n as f64;
        (0..n)
            .map(|k| self.velocity((k as f64 + 0.5) * dt).norm() * dt)
            .sum()
    }

    pub fn reverse(self) -> Path {
        Path::Reversed {
            inner: Box::new(self),
        }
    }
}

/// gamma . eta: run gamma on [0, 1/2], eta on [1/2, 1].
pub fn concatenate(gamma: Path, eta: Path) -> Result<Path> {
    let left = gamma.end();
    let right = eta.start();
    if (&left - &right).norm() > CLOSURE_TOL {
        return Err(Error::EndpointMismatch {
            left: left.iter().cloned().collect(),
            right: right.iter().cloned().collect(),
        });
    }
    Ok(Path::Concat {
        parts: vec![gamma, eta],
    })
}

fn concat_locate(n: usize, t: f64) -> (usize, f64) {
    let scaled = (t.clamp(0.0, 1.0)) * n as f64;
    let i = (scaled.floor() as usize).min(n - 1);
    (i, scaled - i as f64)
}

fn hermite_locate(node_count: usize, t: f64) -> (usize, f64, usize) {
    let cells = node_count - 1;
    let scaled = t.clamp(0.0, 1.0) * cells as f64;
    let k = (scaled.floor() as usize).min(cells - 1);
    (k, scaled - k as f64, cells)
}

/// Node pair and finite-difference tangents (in global parameter units)
/// for Hermite cell k.
fn hermite_data(
    nodes: &[DVector<f64>],
    k: usize,
) -> (DVector<f64>, DVector<f64>, DVector<f64>, DVector<f64>) {
    let cells = (nodes.len() - 1) as f64;
    let tangent = |i: usize| -> DVector<f64> {
        if i == 0 {
            (&nodes[1] - &nodes[0]) * cells
        } else if i == nodes.len() - 1 {
            (&nodes[i] - &nodes[i - 1]) * cells
        } else {
            (&nodes[i + 1] - &nodes[i - 1]) * (cells / 2.0)
        }
    };
    (
        nodes[k].clone(),
        nodes[k + 1].clone(),
        tangent(k),
        tangent(k + 1),
    )
}
