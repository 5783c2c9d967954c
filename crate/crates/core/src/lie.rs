//! Matrix Lie groups U(1), SU(2), SO(n) with the bi-invariant Frobenius
//! metric: exponential and principal logarithm, geodesic distance, and
//! projection of nearby matrices back onto the group.
//!
//! Elements are stored as dense complex matrices regardless of kind; SO(n)
//! elements carry zero imaginary part, U(1) elements are 1x1.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Frobenius deviation of `g* g` from the identity tolerated by validators.
pub const TOL_GROUP: f64 = 1e-10;
/// Skewness / tracelessness tolerance for algebra validators.
pub const TOL_ALGEBRA: f64 = 1e-12;
/// How close to the cut locus the principal log refuses to go.
const CUT_MARGIN: f64 = 1e-9;

/// Structure group of a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    U1,
    Su2,
    SOn(usize),
}

impl GroupKind {
    /// Dimension of the defining matrix representation.
    pub fn matrix_dim(self) -> usize {
        match self {
            GroupKind::U1 => 1,
            GroupKind::Su2 => 2,
            GroupKind::SOn(n) => n,
        }
    }

    pub fn label(self) -> String {
        match self {
            GroupKind::U1 => "U(1)".into(),
            GroupKind::Su2 => "SU(2)".into(),
            GroupKind::SOn(n) => format!("SO({n})"),
        }
    }

    /// True when the group is commutative, so holonomy reduces to an
    /// integral of the connection along the loop.
    pub fn is_abelian(self) -> bool {
        matches!(self, GroupKind::U1 | GroupKind::SOn(2))
    }
}

fn cmat_zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

fn cmat_identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

fn real_part(m: &CMat) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

fn cmat_from_real(m: &DMatrix<f64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], 0.0))
}

fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()))
}

/// Group element: unitary (U(1), SU(2)) or special orthogonal (SO(n)).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    mat: CMat,
}

impl GroupElement {
    pub fn identity(kind: GroupKind) -> Self {
        GroupElement {
            kind,
            mat: cmat_identity(kind.matrix_dim()),
        }
    }

    /// Validates dimensions, unitarity within [`TOL_GROUP`], and the
    /// kind-specific constraints (det for SU(2)/SO(n), realness for SO(n)).
    pub fn new(kind: GroupKind, mat: CMat) -> Result<Self> {
        let n = kind.matrix_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::InvalidElement {
                kind: kind.label(),
                reason: format!("expected {n}x{n}, got {}x{}", mat.nrows(), mat.ncols()),
            });
        }
        let defect = (mat.adjoint() * &mat - cmat_identity(n)).norm();
        if defect > TOL_GROUP {
            return Err(Error::InvalidElement {
                kind: kind.label(),
                reason: format!("unitarity defect {defect:.3e}"),
            });
        }
        match kind {
            GroupKind::U1 => {}
            GroupKind::Su2 => {
                let det = mat[(0, 0)] * mat[(1, 1)] - mat[(0, 1)] * mat[(1, 0)];
                if (det - C64::new(1.0, 0.0)).norm() > 1e-8 {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: format!("determinant {det} != 1"),
                    });
                }
            }
            GroupKind::SOn(_) => {
                if max_imag(&mat) > TOL_GROUP {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: "entries must be real".into(),
                    });
                }
                let det = real_part(&mat).determinant();
                if (det - 1.0).abs() > 1e-8 {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: format!("determinant {det} != +1"),
                    });
                }
            }
        }
        Ok(GroupElement { kind, mat })
    }

    /// Wraps a matrix that is already known to satisfy the invariants
    /// (outputs of `exp_map`, products of validated elements, ...).
    pub(crate) fn from_parts(kind: GroupKind, mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), kind.matrix_dim());
        GroupElement { kind, mat }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.kind.matrix_dim()
    }

    /// Group product `self * rhs`. Kinds must agree.
    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.kind, rhs.kind, "group kind mismatch in product");
        GroupElement {
            kind: self.kind,
            mat: &self.mat * &rhs.mat,
        }
    }

    /// Inverse via the adjoint; exact on the group up to the unitarity
    /// defect of `self`.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            kind: self.kind,
            mat: self.mat.adjoint(),
        }
    }

    /// Frobenius norm of `g* g - id`; measures drift off the group.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (self.mat.adjoint() * &self.mat - cmat_identity(n)).norm()
    }

    /// Frobenius distance to the identity matrix (chordal, not geodesic).
    pub fn chordal_distance_to_identity(&self) -> f64 {
        (&self.mat - cmat_identity(self.dim())).norm()
    }

    /// The unique entry of a U(1) element.
    pub fn u1_value(&self) -> C64 {
        assert_eq!(self.kind, GroupKind::U1);
        self.mat[(0, 0)]
    }

    pub fn u1_from_angle(theta: f64) -> Self {
        GroupElement {
            kind: GroupKind::U1,
            mat: CMat::from_element(1, 1, C64::new(theta.cos(), theta.sin())),
        }
    }
}

/// Lie algebra element: skew-Hermitian, traceless for su(2), real for so(n).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: GroupKind,
    mat: CMat,
}

impl AlgebraElement {
    pub fn zero(kind: GroupKind) -> Self {
        AlgebraElement {
            kind,
            mat: cmat_zeros(kind.matrix_dim()),
        }
    }

    /// Validates skewness within [`TOL_ALGEBRA`] plus the kind-specific
    /// constraints.
    pub fn new(kind: GroupKind, mat: CMat) -> Result<Self> {
        let n = kind.matrix_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::InvalidElement {
                kind: kind.label(),
                reason: format!("expected {n}x{n}, got {}x{}", mat.nrows(), mat.ncols()),
            });
        }
        let scale = mat.norm().max(1.0);
        let skew_defect = (mat.adjoint() + &mat).norm();
        if skew_defect > TOL_ALGEBRA * scale {
            return Err(Error::InvalidElement {
                kind: kind.label(),
                reason: format!("skew-Hermitian defect {skew_defect:.3e}"),
            });
        }
        match kind {
            GroupKind::U1 => {}
            GroupKind::Su2 => {
                let tr = mat[(0, 0)] + mat[(1, 1)];
                if tr.norm() > TOL_ALGEBRA * scale {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: format!("trace {tr} != 0"),
                    });
                }
            }
            GroupKind::SOn(_) => {
                if max_imag(&mat) > TOL_ALGEBRA * scale {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: "entries must be real".into(),
                    });
                }
            }
        }
        Ok(AlgebraElement { kind, mat })
    }

    /// Orthogonal projection of an arbitrary matrix onto the algebra.
    /// Used to clean up matrices obtained by finite differences.
    pub fn project(kind: GroupKind, mat: &CMat) -> Self {
        let n = kind.matrix_dim();
        assert_eq!(mat.nrows(), n);
        assert_eq!(mat.ncols(), n);
        let mut skew = (mat - mat.adjoint()) * C64::new(0.5, 0.0);
        match kind {
            GroupKind::U1 => {}
            GroupKind::Su2 => {
                let half_tr = (skew[(0, 0)] + skew[(1, 1)]) * C64::new(0.5, 0.0);
                skew[(0, 0)] -= half_tr;
                skew[(1, 1)] -= half_tr;
            }
            GroupKind::SOn(_) => {
                for z in skew.iter_mut() {
                    *z = C64::new(z.re, 0.0);
                }
            }
        }
        AlgebraElement { kind, mat: skew }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Frobenius norm; the bi-invariant metric on the algebra.
    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn add(&self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.kind, rhs.kind, "group kind mismatch in sum");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat + &rhs.mat,
        }
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.kind, rhs.kind, "group kind mismatch in difference");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat - &rhs.mat,
        }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat * C64::new(s, 0.0),
        }
    }

    /// Commutator [self, rhs].
    pub fn bracket(&self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.kind, rhs.kind, "group kind mismatch in bracket");
        AlgebraElement {
            kind: self.kind,
            mat: &self.mat * &rhs.mat - &rhs.mat * &self.mat,
        }
    }

    /// Adjoint action `g X g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> AlgebraElement {
        assert_eq!(self.kind, g.kind, "group kind mismatch in conjugation");
        AlgebraElement {
            kind: self.kind,
            mat: &g.mat * &self.mat * g.mat.adjoint(),
        }
    }

    /// u(1) element `i theta`.
    pub fn u1(theta: f64) -> Self {
        AlgebraElement {
            kind: GroupKind::U1,
            mat: CMat::from_element(1, 1, C64::new(0.0, theta)),
        }
    }

    /// The angle `theta` of a u(1) element `i theta`.
    pub fn u1_angle(&self) -> f64 {
        assert_eq!(self.kind, GroupKind::U1);
        self.mat[(0, 0)].im
    }

    /// su(2) element [[ia, b+ic], [-b+ic, -ia]].
    pub fn su2(a: f64, b: f64, c: f64) -> Self {
        let mat = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, a),
                C64::new(b, c),
                C64::new(-b, c),
                C64::new(0.0, -a),
            ],
        );
        AlgebraElement {
            kind: GroupKind::Su2,
            mat,
        }
    }

    /// so(n) element from the strictly upper-triangular coefficients,
    /// row-major: X[i][j] = coeffs[k], X[j][i] = -coeffs[k].
    pub fn so_n(n: usize, coeffs: &[f64]) -> Self {
        assert_eq!(coeffs.len(), n * (n - 1) / 2);
        let mut mat = cmat_zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                mat[(i, j)] = C64::new(coeffs[k], 0.0);
                mat[(j, i)] = C64::new(-coeffs[k], 0.0);
                k += 1;
            }
        }
        AlgebraElement {
            kind: GroupKind::SOn(n),
            mat,
        }
    }
}

/// Exponential map from the algebra to the group. Closed forms for U(1),
/// SU(2), SO(2), SO(3); scaling-and-squaring Taylor otherwise.
pub fn exp_map(x: &AlgebraElement) -> GroupElement {
    let kind = x.kind;
    let mat = match kind {
        GroupKind::U1 => {
            let theta = x.mat[(0, 0)].im;
            CMat::from_element(1, 1, C64::new(theta.cos(), theta.sin()))
        }
        GroupKind::Su2 => exp_su2(&x.mat),
        GroupKind::SOn(2) => {
            let t = x.mat[(1, 0)].re;
            CMat::from_row_slice(
                2,
                2,
                &[
                    C64::new(t.cos(), 0.0),
                    C64::new(-t.sin(), 0.0),
                    C64::new(t.sin(), 0.0),
                    C64::new(t.cos(), 0.0),
                ],
            )
        }
        GroupKind::SOn(3) => exp_so3(&x.mat),
        _ => expm(&x.mat),
    };
    GroupElement::from_parts(kind, mat)
}

/// sin(t)/t with a series fallback near zero.
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// (1 - cos t)/t^2 with a series fallback near zero.
fn cosc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        0.5 - t2 / 24.0 + t2 * t2 / 720.0
    } else {
        (1.0 - t.cos()) / (t * t)
    }
}

fn exp_su2(x: &CMat) -> CMat {
    // X = [[ia, b+ic], [-b+ic, -ia]] squares to -theta^2 I.
    let a = x[(0, 0)].im;
    let b = x[(0, 1)].re;
    let c = x[(0, 1)].im;
    let theta = (a * a + b * b + c * c).sqrt();
    let cos = C64::new(theta.cos(), 0.0);
    let s = C64::new(sinc(theta), 0.0);
    let mut out = x * s;
    out[(0, 0)] += cos;
    out[(1, 1)] += cos;
    out
}

fn exp_so3(x: &CMat) -> CMat {
    // Rodrigues: exp X = I + sinc(theta) X + cosc(theta) X^2 with
    // theta = |X|_F / sqrt(2) the rotation angle.
    let theta = x.norm() / std::f64::consts::SQRT_2;
    let x2 = x * x;
    let mut out = x * C64::new(sinc(theta), 0.0) + x2 * C64::new(cosc(theta), 0.0);
    for i in 0..3 {
        out[(i, i)] += C64::new(1.0, 0.0);
    }
    out
}

/// Taylor exponential with scaling and squaring; adequate for the small
/// matrices handled here.
fn expm(x: &CMat) -> CMat {
    let n = x.nrows();
    let norm = x.norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = x * C64::new(0.5f64.powi(s as i32), 0.0);
    let mut term = cmat_identity(n);
    let mut sum = cmat_identity(n);
    for m in 1..60 {
        term = &term * &scaled * C64::new(1.0 / m as f64, 0.0);
        sum += &term;
        if term.norm() < 1e-18 * sum.norm().max(1.0) {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

/// Principal logarithm. Fails with [`Error::CutLocus`] near the cut locus,
/// carrying the geodesic length of the ambiguous branches as `candidate`.
pub fn log_map(g: &GroupElement) -> Result<AlgebraElement> {
    let kind = g.kind;
    let mat = match kind {
        GroupKind::U1 => {
            let z = g.mat[(0, 0)];
            let theta = z.im.atan2(z.re);
            if std::f64::consts::PI - theta.abs() < CUT_MARGIN {
                return Err(Error::CutLocus {
                    candidate: std::f64::consts::PI,
                });
            }
            CMat::from_element(1, 1, C64::new(0.0, theta))
        }
        GroupKind::Su2 => log_su2(&g.mat)?,
        GroupKind::SOn(_) => log_special_orthogonal(&g.mat)?,
    };
    Ok(AlgebraElement::project(kind, &mat))
}

fn log_su2(g: &CMat) -> Result<CMat> {
    // trace(g) = 2 cos(theta); the skew part is sin(theta) * X/theta.
    let half_tr = ((g[(0, 0)] + g[(1, 1)]) * C64::new(0.5, 0.0)).re;
    let t = half_tr.clamp(-1.0, 1.0);
    let theta = t.acos();
    if std::f64::consts::PI - theta < 1e-6 {
        // Antipode -id: every direction is a geodesic of length pi*sqrt(2).
        return Err(Error::CutLocus {
            candidate: std::f64::consts::PI * std::f64::consts::SQRT_2,
        });
    }
    let skew = (g - g.adjoint()) * C64::new(0.5, 0.0);
    let factor = if theta < 1e-4 {
        let t2 = theta * theta;
        1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0
    } else {
        theta / theta.sin()
    };
    Ok(skew * C64::new(factor, 0.0))
}

/// Inverse scaling-and-squaring: repeated principal square roots
/// (Denman-Beavers) until close to the identity, then a Mercator series.
fn log_special_orthogonal(g: &CMat) -> Result<CMat> {
    let n = g.nrows();
    // An eigenvalue at -1 means a rotation by pi in some plane; the
    // principal log is then ambiguous.
    let eigs = real_part(g).complex_eigenvalues();
    let mut flipped_planes = 0usize;
    for lambda in eigs.iter() {
        if (lambda + C64::new(1.0, 0.0)).norm() < CUT_MARGIN {
            flipped_planes += 1;
        }
    }
    if flipped_planes > 0 {
        let planes = flipped_planes.div_ceil(2);
        return Err(Error::CutLocus {
            candidate: std::f64::consts::PI * (2.0 * planes as f64).sqrt(),
        });
    }
    let id = cmat_identity(n);
    let mut a = g.clone();
    let mut doublings = 0u32;
    while (&a - &id).norm() > 0.25 {
        a = sqrtm_denman_beavers(&a)?;
        doublings += 1;
        if doublings > 40 {
            return Err(Error::SingularInput);
        }
    }
    let e = &a - &id;
    let mut term = cmat_identity(n);
    let mut sum = cmat_zeros(n);
    for m in 1..200 {
        term = &term * &e;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        sum += &term * C64::new(sign / m as f64, 0.0);
        if term.norm() / m as f64 <= 1e-17 {
            break;
        }
    }
    Ok(sum * C64::new(2f64.powi(doublings as i32), 0.0))
}

fn sqrtm_denman_beavers(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = cmat_identity(n);
    for _ in 0..60 {
        let y_inv = y.clone().try_inverse().ok_or(Error::SingularInput)?;
        let z_inv = z.clone().try_inverse().ok_or(Error::SingularInput)?;
        let y_next = (&y + z_inv) * C64::new(0.5, 0.0);
        let z_next = (&z + y_inv) * C64::new(0.5, 0.0);
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm().max(1.0) {
            return Ok(y);
        }
    }
    Ok(y)
}

/// Frobenius norm of an algebra element.
pub fn algebra_norm(x: &AlgebraElement) -> f64 {
    x.norm()
}

/// Bi-invariant geodesic distance `|log(g^{-1} h)|_F`.
pub fn geodesic_distance(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    if g.kind != h.kind {
        return Err(Error::KindMismatch {
            left: g.kind.label(),
            right: h.kind.label(),
        });
    }
    let rel = g.inverse().mul(h);
    Ok(log_map(&rel)?.norm())
}

/// Nearest group element to an arbitrary matrix (polar projection).
pub fn project_to_group(kind: GroupKind, mat: &CMat) -> Result<GroupElement> {
    let n = kind.matrix_dim();
    if mat.nrows() != n || mat.ncols() != n {
        return Err(Error::InvalidElement {
            kind: kind.label(),
            reason: format!("expected {n}x{n}, got {}x{}", mat.nrows(), mat.ncols()),
        });
    }
    match kind {
        GroupKind::U1 => {
            let z = mat[(0, 0)];
            let r = z.norm();
            if r < 1e-12 {
                return Err(Error::SingularInput);
            }
            Ok(GroupElement::from_parts(
                kind,
                CMat::from_element(1, 1, z / C64::new(r, 0.0)),
            ))
        }
        GroupKind::Su2 => {
            let mut u = polar_unitary(mat)?;
            // Rotate the determinant phase back to +1 to land in SU(2).
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            let phase = det.im.atan2(det.re);
            let corr = C64::from_polar(1.0, -phase / 2.0);
            u *= corr;
            let det2 = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            if (det2 - C64::new(1.0, 0.0)).norm() > 1e-8 {
                u *= C64::new(-1.0, 0.0);
            }
            Ok(GroupElement::from_parts(kind, u))
        }
        GroupKind::SOn(_) => {
            if max_imag(mat) > 1e-9 * mat.norm().max(1.0) {
                return Err(Error::InvalidElement {
                    kind: kind.label(),
                    reason: "entries must be real".into(),
                });
            }
            let svd = real_part(mat).svd(true, true);
            let min_sv = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
            if min_sv < 1e-12 {
                return Err(Error::SingularInput);
            }
            let mut u = svd.u.ok_or(Error::SingularInput)?;
            let v_t = svd.v_t.ok_or(Error::SingularInput)?;
            if (&u * &v_t).determinant() < 0.0 {
                // Flip the column paired with the smallest singular value
                // (nalgebra sorts them in descending order).
                let last = u.ncols() - 1;
                for i in 0..u.nrows() {
                    u[(i, last)] = -u[(i, last)];
                }
            }
            Ok(GroupElement::from_parts(kind, cmat_from_real(&(u * v_t))))
        }
    }
}

/// Newton iteration for the unitary polar factor.
fn polar_unitary(mat: &CMat) -> Result<CMat> {
    let n = mat.nrows();
    let mut x = mat.clone();
    for _ in 0..50 {
        let x_inv_adj = x
            .clone()
            .try_inverse()
            .ok_or(Error::SingularInput)?
            .adjoint();
        let next = (&x + x_inv_adj) * C64::new(0.5, 0.0);
        let delta = (&next - &x).norm();
        x = next;
        if delta <= 1e-15 * x.norm().max(1.0) {
            break;
        }
    }
    let defect = (x.adjoint() * &x - cmat_identity(n)).norm();
    if defect > 1e-9 {
        return Err(Error::SingularInput);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Plain truncated power series, independent of the closed forms.
    fn exp_series(x: &CMat, terms: usize) -> CMat {
        let n = x.nrows();
        let mut term = cmat_identity(n);
        let mut sum = cmat_identity(n);
        for m in 1..=terms {
            term = &term * x * C64::new(1.0 / m as f64, 0.0);
            sum += &term;
        }
        sum
    }

    fn random_algebra(kind: GroupKind, rng: &mut ChaCha8Rng, scale: f64) -> AlgebraElement {
        match kind {
            GroupKind::U1 => AlgebraElement::u1(rng.random_range(-scale..scale)),
            GroupKind::Su2 => AlgebraElement::su2(
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
                rng.random_range(-scale..scale),
            ),
            GroupKind::SOn(n) => {
                let coeffs: Vec<f64> = (0..n * (n - 1) / 2)
                    .map(|_| rng.random_range(-scale..scale))
                    .collect();
                AlgebraElement::so_n(n, &coeffs)
            }
        }
    }

    const KINDS: [GroupKind; 4] = [
        GroupKind::U1,
        GroupKind::Su2,
        GroupKind::SOn(3),
        GroupKind::SOn(4),
    ];

    #[test]
    fn exp_matches_power_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in KINDS {
            for _ in 0..25 {
                let x = random_algebra(kind, &mut rng, 1.5);
                let closed = exp_map(&x);
                let series = exp_series(x.mat(), 40);
                assert!(
                    (closed.mat() - &series).norm() < 1e-12,
                    "{}: closed form vs series",
                    kind.label()
                );
            }
        }
    }

    #[test]
    fn exp_lands_on_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for kind in KINDS {
            for _ in 0..25 {
                let x = random_algebra(kind, &mut rng, 2.0);
                let g = exp_map(&x);
                assert!(g.unitarity_defect() < 1e-12);
                GroupElement::new(kind, g.mat().clone()).expect("validator");
            }
        }
    }

    #[test]
    fn log_exp_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for kind in KINDS {
            for _ in 0..50 {
                // Stay below the injectivity radius so the principal log
                // must recover the original element.
                let x = random_algebra(kind, &mut rng, 0.9);
                let back = log_map(&exp_map(&x)).expect("within injectivity radius");
                assert!(
                    back.sub(&x).norm() < 1e-9,
                    "{}: roundtrip error {}",
                    kind.label(),
                    back.sub(&x).norm()
                );
            }
        }
    }

    #[test]
    fn exp_log_roundtrip_on_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for kind in KINDS {
            for _ in 0..50 {
                let g = exp_map(&random_algebra(kind, &mut rng, 1.2));
                let x = match log_map(&g) {
                    Ok(x) => x,
                    Err(Error::CutLocus { .. }) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                };
                let back = exp_map(&x);
                assert!((back.mat() - g.mat()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn u1_log_is_principal_angle() {
        for &theta in &[0.0, 0.3, -2.9, 3.1, -3.1] {
            let g = GroupElement::u1_from_angle(theta);
            let x = log_map(&g).unwrap();
            assert_abs_diff_eq!(x.u1_angle(), theta, epsilon = 1e-12);
        }
        // Wrapping: exp(i * 5) has principal angle 5 - 2 pi.
        let g = GroupElement::u1_from_angle(5.0);
        assert_abs_diff_eq!(log_map(&g).unwrap().u1_angle(), 5.0 - 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn su2_antipode_is_cut_locus() {
        let minus_id = GroupElement::new(
            GroupKind::Su2,
            CMat::from_row_slice(
                2,
                2,
                &[
                    C64::new(-1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(-1.0, 0.0),
                ],
            ),
        )
        .unwrap();
        match log_map(&minus_id) {
            Err(Error::CutLocus { candidate }) => {
                assert_abs_diff_eq!(candidate, PI * std::f64::consts::SQRT_2, epsilon = 1e-12);
            }
            other => panic!("expected cut locus, got {other:?}"),
        }
    }

    #[test]
    fn so3_half_turn_is_cut_locus() {
        // Rotation by pi about the z axis has eigenvalues {-1, -1, 1}.
        let x = AlgebraElement::so_n(3, &[PI, 0.0, 0.0]);
        let g = exp_map(&x);
        match log_map(&g) {
            Err(Error::CutLocus { candidate }) => {
                assert_abs_diff_eq!(candidate, PI * std::f64::consts::SQRT_2, epsilon = 1e-12);
            }
            other => panic!("expected cut locus, got {other:?}"),
        }
    }

    #[test]
    fn su2_norm_is_sqrt2_times_angle() {
        let x = AlgebraElement::su2(0.3, -0.4, 0.5);
        let theta = (0.3f64 * 0.3 + 0.4 * 0.4 + 0.5 * 0.5).sqrt();
        assert_abs_diff_eq!(x.norm(), theta * std::f64::consts::SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn geodesic_distance_u1_closed_form() {
        let g = GroupElement::u1_from_angle(0.4);
        let h = GroupElement::u1_from_angle(1.9);
        assert_abs_diff_eq!(geodesic_distance(&g, &h).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn geodesic_distance_bi_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for kind in KINDS {
            for _ in 0..25 {
                let g = exp_map(&random_algebra(kind, &mut rng, 0.8));
                let h = exp_map(&random_algebra(kind, &mut rng, 0.8));
                let k = exp_map(&random_algebra(kind, &mut rng, 0.8));
                let d = geodesic_distance(&g, &h).unwrap();
                let dl = geodesic_distance(&k.mul(&g), &k.mul(&h)).unwrap();
                let dr = geodesic_distance(&g.mul(&k), &h.mul(&k)).unwrap();
                assert_abs_diff_eq!(d, dl, epsilon = 1e-10);
                assert_abs_diff_eq!(d, dr, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn distance_kind_mismatch_is_error() {
        let g = GroupElement::identity(GroupKind::U1);
        let h = GroupElement::identity(GroupKind::Su2);
        assert!(matches!(
            geodesic_distance(&g, &h),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn projection_recovers_perturbed_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for kind in KINDS {
            for _ in 0..25 {
                let g = exp_map(&random_algebra(kind, &mut rng, 1.0));
                let noise = CMat::from_fn(g.dim(), g.dim(), |_, _| {
                    if matches!(kind, GroupKind::SOn(_)) {
                        C64::new(rng.random_range(-1e-6..1e-6), 0.0)
                    } else {
                        C64::new(
                            rng.random_range(-1e-6..1e-6),
                            rng.random_range(-1e-6..1e-6),
                        )
                    }
                });
                let dirty = g.mat() + noise;
                let clean = project_to_group(kind, &dirty).expect("projectable");
                assert!(clean.unitarity_defect() < 1e-12);
                assert!(
                    (clean.mat() - g.mat()).norm() < 1e-5,
                    "{}: projection moved too far",
                    kind.label()
                );
            }
        }
    }

    #[test]
    fn projection_rejects_singular_input() {
        assert!(matches!(
            project_to_group(GroupKind::U1, &cmat_zeros(1)),
            Err(Error::SingularInput)
        ));
        assert!(matches!(
            project_to_group(GroupKind::SOn(3), &cmat_zeros(3)),
            Err(Error::SingularInput)
        ));
    }

    #[test]
    fn projection_is_idempotent_on_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for kind in KINDS {
            let g = exp_map(&random_algebra(kind, &mut rng, 1.0));
            let p = project_to_group(kind, g.mat()).unwrap();
            assert!((p.mat() - g.mat()).norm() < 1e-13);
        }
    }

    #[test]
    fn validators_reject_malformed_input() {
        // Non-unitary group matrix.
        let bad = CMat::from_element(1, 1, C64::new(2.0, 0.0));
        assert!(GroupElement::new(GroupKind::U1, bad).is_err());
        // Non-skew algebra matrix.
        let bad = CMat::from_element(1, 1, C64::new(1.0, 0.0));
        assert!(AlgebraElement::new(GroupKind::U1, bad).is_err());
        // Wrong dimensions.
        assert!(GroupElement::new(GroupKind::Su2, cmat_identity(3)).is_err());
        // SO(n) with determinant -1.
        let mut refl = DMatrix::<f64>::identity(3, 3);
        refl[(2, 2)] = -1.0;
        assert!(GroupElement::new(GroupKind::SOn(3), cmat_from_real(&refl)).is_err());
    }

    #[test]
    fn bracket_vanishes_for_abelian_kinds() {
        let x = AlgebraElement::u1(0.7);
        let y = AlgebraElement::u1(-1.3);
        assert_eq!(x.bracket(&y).norm(), 0.0);
        let x = AlgebraElement::so_n(2, &[0.7]);
        let y = AlgebraElement::so_n(2, &[-0.2]);
        assert!(x.bracket(&y).norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_su2_roundtrip(a in -0.9f64..0.9, b in -0.9f64..0.9, c in -0.9f64..0.9) {
            let x = AlgebraElement::su2(a, b, c);
            prop_assume!(x.norm() < 0.9 * PI * std::f64::consts::SQRT_2);
            let back = log_map(&exp_map(&x)).unwrap();
            prop_assert!(back.sub(&x).norm() < 1e-9);
        }

        #[test]
        fn prop_u1_roundtrip(theta in -3.0f64..3.0) {
            let x = AlgebraElement::u1(theta);
            let back = log_map(&exp_map(&x)).unwrap();
            prop_assert!((back.u1_angle() - theta).abs() < 1e-12);
        }

        #[test]
        fn prop_so4_exp_in_group(
            c0 in -1.0f64..1.0, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0,
            c3 in -1.0f64..1.0, c4 in -1.0f64..1.0, c5 in -1.0f64..1.0,
        ) {
            let x = AlgebraElement::so_n(4, &[c0, c1, c2, c3, c4, c5]);
            let g = exp_map(&x);
            prop_assert!(g.unitarity_defect() < 1e-12);
            prop_assert!(max_imag(g.mat()) == 0.0);
        }
    }
}
