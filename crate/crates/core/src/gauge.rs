//! Gauge fields g: U -> G with evaluable differentials dg_p[v].

use nalgebra::DVector;

use crate::chart::Chart;
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::lie::{exp_map, project_to_group, AlgebraElement, CMat, GroupElement, GroupKind, C64};

/// Scalar monomial c * p^powers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPolyTerm {
    pub coeff: f64,
    pub powers: Vec<u32>,
}

/// Algebra-valued monomial X * p^powers.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraPolyTerm {
    pub coeff: AlgebraElement,
    pub powers: Vec<u32>,
}

pub fn eval_monomial(powers: &[u32], p: &DVector<f64>) -> f64 {
    powers
        .iter()
        .zip(p.iter())
        .map(|(&a, &x)| x.powi(a as i32))
        .product()
}

/// d/dp_j of p^powers.
pub fn eval_monomial_derivative(powers: &[u32], p: &DVector<f64>, j: usize) -> f64 {
    let a = powers[j];
    if a == 0 {
        return 0.0;
    }
    let mut out = a as f64 * p[j].powi(a as i32 - 1);
    for (i, (&b, &x)) in powers.iter().zip(p.iter()).enumerate() {
        if i != j {
            out *= x.powi(b as i32);
        }
    }
    out
}

/// Regular lattice of group elements over a box, with multilinear
/// interpolation (projected back to the group) between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeGrid {
    pub kind: GroupKind,
    pub box_min: DVector<f64>,
    pub box_max: DVector<f64>,
    /// Nodes per axis (cells + 1), identical on every axis.
    pub nodes_per_axis: usize,
    /// Row-major over the lattice, axis 0 slowest.
    pub values: Vec<GroupElement>,
}

impl GaugeGrid {
    pub fn dim(&self) -> usize {
        self.box_min.len()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for &i in idx {
            debug_assert!(i < self.nodes_per_axis);
            flat = flat * self.nodes_per_axis + i;
        }
        flat
    }

    pub fn node_point(&self, idx: &[usize]) -> DVector<f64> {
        DVector::from_fn(self.dim(), |i, _| {
            let frac = idx[i] as f64 / (self.nodes_per_axis - 1) as f64;
            self.box_min[i] + frac * (self.box_max[i] - self.box_min[i])
        })
    }

    pub fn value(&self, idx: &[usize]) -> &GroupElement {
        &self.values[self.flat_index(idx)]
    }

    fn interpolate(&self, p: &DVector<f64>) -> Result<GroupElement> {
        let m = self.dim();
        let cells = (self.nodes_per_axis - 1) as f64;
        let mut base = vec![0usize; m];
        let mut frac = vec![0.0f64; m];
        for i in 0..m {
            let u = ((p[i] - self.box_min[i]) / (self.box_max[i] - self.box_min[i]) * cells)
                .clamp(0.0, cells);
            let b = (u.floor() as usize).min(self.nodes_per_axis - 2);
            base[i] = b;
            frac[i] = u - b as f64;
        }
        let n = self.kind.matrix_dim();
        let mut acc = CMat::zeros(n, n);
        for corner in 0..(1usize << m) {
            let mut w = 1.0;
            let mut idx = vec![0usize; m];
            for i in 0..m {
                if corner & (1 << i) != 0 {
                    w *= frac[i];
                    idx[i] = base[i] + 1;
                } else {
                    w *= 1.0 - frac[i];
                    idx[i] = base[i];
                }
            }
            if w != 0.0 {
                acc += self.value(&idx).mat() * C64::new(w, 0.0);
            }
        }
        project_to_group(self.kind, &acc)
    }
}

/// A map from the chart into the group. `Identity`, `Constant`, and
/// `U1Phase` have analytic differentials; the rest use central differences
/// with a caller-chosen step.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeField {
    Identity {
        kind: GroupKind,
    },
    Constant {
        g: GroupElement,
    },
    /// g(p) = exp(i phi(p)) with phi a real polynomial.
    U1Phase {
        terms: Vec<ScalarPolyTerm>,
    },
    /// g(p) = exp(sum of X_alpha p^alpha).
    ExpPolynomial {
        kind: GroupKind,
        terms: Vec<AlgebraPolyTerm>,
    },
    /// Parallel transport from the seed face of `base`'s box chart to p
    /// along the straight line in direction sign * e_axis, integrated with
    /// a fixed number of substeps so g is smooth in p.
    AxialLine {
        base: Box<Connection>,
        axis: usize,
        sign: f64,
        substeps: usize,
    },
    GridSampled {
        grid: GaugeGrid,
    },
}

impl GaugeField {
    pub fn identity(kind: GroupKind) -> Self {
        GaugeField::Identity { kind }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GaugeField::Identity { kind } => *kind,
            GaugeField::Constant { g } => g.kind(),
            GaugeField::U1Phase { .. } => GroupKind::U1,
            GaugeField::ExpPolynomial { kind, .. } => *kind,
            GaugeField::AxialLine { base, .. } => base.kind(),
            GaugeField::GridSampled { grid } => grid.kind,
        }
    }

    pub fn eval(&self, p: &DVector<f64>) -> Result<GroupElement> {
        match self {
            GaugeField::Identity { kind } => Ok(GroupElement::identity(*kind)),
            GaugeField::Constant { g } => Ok(g.clone()),
            GaugeField::U1Phase { terms } => {
                let phi: f64 = terms.iter().map(|t| t.coeff * eval_monomial(&t.powers, p)).sum();
                Ok(GroupElement::u1_from_angle(phi))
            }
            GaugeField::ExpPolynomial { kind, terms } => {
                let mut x = AlgebraElement::zero(*kind);
                for t in terms {
                    x = x.add(&t.coeff.scale(eval_monomial(&t.powers, p)));
                }
                Ok(exp_map(&x))
            }
            GaugeField::AxialLine {
                base,
                axis,
                sign,
                substeps,
            } => axial_line_transport(base, *axis, *sign, *substeps, p),
            GaugeField::GridSampled { grid } => grid.interpolate(p),
        }
    }

    /// Differential dg_p[e_axis] as a raw matrix (a tangent vector at
    /// g(p), not an algebra element). `h` is the finite-difference step
    /// for the variants without analytic derivatives.
    pub fn differential(&self, p: &DVector<f64>, axis: usize, h: f64) -> Result<CMat> {
        match self {
            GaugeField::Identity { kind } => {
                let n = kind.matrix_dim();
                Ok(CMat::zeros(n, n))
            }
            GaugeField::Constant { g } => Ok(CMat::zeros(g.dim(), g.dim())),
            GaugeField::U1Phase { terms } => {
                let dphi: f64 = terms
                    .iter()
                    .map(|t| t.coeff * eval_monomial_derivative(&t.powers, p, axis))
                    .sum();
                let g = self.eval(p)?;
                Ok(g.mat() * C64::new(0.0, dphi))
            }
            _ => {
                let mut fwd = p.clone();
                fwd[axis] += h;
                let mut bwd = p.clone();
                bwd[axis] -= h;
                let gf = self.eval(&fwd)?;
                let gb = self.eval(&bwd)?;
                Ok((gf.mat() - gb.mat()) * C64::new(0.5 / h, 0.0))
            }
        }
    }
}

/// Integrate g' + omega[v] g = 0 along the axis-parallel line from the
/// seed face through p, returning g at p. The seed face (g = id) is the
/// box face with minimal v-coordinate.
fn axial_line_transport(
    conn: &Connection,
    axis: usize,
    sign: f64,
    substeps: usize,
    p: &DVector<f64>,
) -> Result<GroupElement> {
    let (lo, hi) = match conn.chart() {
        Chart::Box { min, max } => (min[axis], max[axis]),
        Chart::Ball { .. } => return Err(Error::ChartNotBox),
    };
    let seed = if sign > 0.0 { lo } else { hi };
    let mut v = DVector::zeros(conn.dim());
    v[axis] = sign;
    let len = (p[axis] - seed) * sign;
    debug_assert!(len >= -1e-12);
    if len <= 0.0 {
        return Ok(GroupElement::identity(conn.kind()));
    }
    let h = len / substeps as f64;
    let mut g = GroupElement::identity(conn.kind());
    let mut x = p.clone();
    for k in 0..substeps {
        x[axis] = seed + sign * (k as f64 + 0.5) * h;
        let a = conn.eval_form(&x, &v)?;
        let step = exp_map(&a.scale(-h));
        g = project_to_group(conn.kind(), step.mul(&g).mat())?;
    }
    Ok(g)
}
