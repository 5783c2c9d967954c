//! Lie-algebra-valued connection 1-forms on a chart: evaluation, curvature
//! Omega = d omega + omega ^ omega, and gauge transformation.

use nalgebra::DVector;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::gauge::{eval_monomial, eval_monomial_derivative, GaugeField};
use crate::lie::{AlgebraElement, GroupKind};

/// Relative finite-difference step for connection components.
const H_CONN_REL: f64 = 1e-5;
/// Relative finite-difference step for gauge differentials. Larger than
/// the component step: gauge values may themselves carry finite-difference
/// or integrator noise, and the nested difference divides by this step.
const H_GAUGE_REL: f64 = 2e-4;

/// One algebra-valued monomial X * p^powers attached to dx_axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialTerm {
    pub axis: usize,
    pub powers: Vec<u32>,
    pub coeff: AlgebraElement,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionFamily {
    Zero,
    /// omega = (i B / 2)(x dy - y dx) on a 2-dimensional U(1) chart;
    /// curvature is the constant i B dx ^ dy.
    ConstantField { b: f64 },
    /// omega = sum_k X_k dx_k with constant coefficients.
    ConstantCoefficients { coeffs: Vec<AlgebraElement> },
    /// omega = sum of terms X p^alpha dx_k.
    Polynomial { terms: Vec<MonomialTerm> },
    /// omega = amplitude * exp(-|p - center|^2 / width^2) * sum_k X_k dx_k.
    GaussianBump {
        amplitude: f64,
        center: DVector<f64>,
        width: f64,
        dirs: Vec<AlgebraElement>,
    },
    /// omega = g^{-1} dg.
    PureGauge { gauge: GaugeField },
    /// omega' = g^{-1} dg + g^{-1} omega g for a base connection omega.
    GaugeTransformed {
        base: Box<Connection>,
        gauge: GaugeField,
    },
}

/// Curvature evaluated at a point on a pair of constant vector fields.
#[derive(Debug, Clone)]
pub struct CurvatureValue {
    pub value: AlgebraElement,
    pub basepoint: DVector<f64>,
    pub u: DVector<f64>,
    pub v: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    kind: GroupKind,
    chart: Chart,
    family: ConnectionFamily,
}

impl Connection {
    pub fn new(kind: GroupKind, chart: Chart, family: ConnectionFamily) -> Result<Self> {
        let m = chart.dim();
        let check_alg = |x: &AlgebraElement| -> Result<()> {
            if x.kind() != kind {
                return Err(Error::KindMismatch {
                    left: kind.label(),
                    right: x.kind().label(),
                });
            }
            Ok(())
        };
        match &family {
            ConnectionFamily::Zero => {}
            ConnectionFamily::ConstantField { .. } => {
                if kind != GroupKind::U1 {
                    return Err(Error::WrongGroup);
                }
                if m != 2 {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: "constant-field family needs a 2-dimensional chart".into(),
                    });
                }
            }
            ConnectionFamily::ConstantCoefficients { coeffs } => {
                if coeffs.len() != m {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: format!("expected {m} coefficients, got {}", coeffs.len()),
                    });
                }
                coeffs.iter().try_for_each(&check_alg)?;
            }
            ConnectionFamily::Polynomial { terms } => {
                for t in terms {
                    if t.axis >= m || t.powers.len() != m {
                        return Err(Error::InvalidElement {
                            kind: kind.label(),
                            reason: "polynomial term indices do not match chart dimension"
                                .into(),
                        });
                    }
                    check_alg(&t.coeff)?;
                }
            }
            ConnectionFamily::GaussianBump {
                center,
                width,
                dirs,
                ..
            } => {
                if center.len() != m || dirs.len() != m {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: "bump parameters do not match chart dimension".into(),
                    });
                }
                if *width <= 0.0 {
                    return Err(Error::InvalidElement {
                        kind: kind.label(),
                        reason: "bump width must be positive".into(),
                    });
                }
                dirs.iter().try_for_each(&check_alg)?;
            }
            ConnectionFamily::PureGauge { gauge } | ConnectionFamily::GaugeTransformed { gauge, .. } => {
                if gauge.kind() != kind {
                    return Err(Error::KindMismatch {
                        left: kind.label(),
                        right: gauge.kind().label(),
                    });
                }
                if let ConnectionFamily::GaugeTransformed { base, .. } = &family {
                    if base.kind != kind {
                        return Err(Error::KindMismatch {
                            left: kind.label(),
                            right: base.kind.label(),
                        });
                    }
                }
            }
        }
        Ok(Connection { kind, chart, family })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn family(&self) -> &ConnectionFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn h_conn(&self) -> f64 {
        H_CONN_REL * self.chart.scale()
    }

    fn h_gauge(&self) -> f64 {
        H_GAUGE_REL * self.chart.scale()
    }

    /// Component fields A_k(p) with omega_p[v] = sum_k A_k(p) v_k.
    pub fn components(&self, p: &DVector<f64>) -> Result<Vec<AlgebraElement>> {
        self.chart.check_contains(p)?;
        let m = self.dim();
        match &self.family {
            ConnectionFamily::Zero => Ok(vec![AlgebraElement::zero(self.kind); m]),
            ConnectionFamily::ConstantField { b } => Ok(vec![
                AlgebraElement::u1(-b / 2.0 * p[1]),
                AlgebraElement::u1(b / 2.0 * p[0]),
            ]),
            ConnectionFamily::ConstantCoefficients { coeffs } => Ok(coeffs.clone()),
            ConnectionFamily::Polynomial { terms } => {
                let mut out = vec![AlgebraElement::zero(self.kind); m];
                for t in terms {
                    let c = eval_monomial(&t.powers, p);
                    out[t.axis] = out[t.axis].add(&t.coeff.scale(c));
                }
                Ok(out)
            }
            ConnectionFamily::GaussianBump {
                amplitude,
                center,
                width,
                dirs,
            } => {
                let f = amplitude * (-(p - center).norm_squared() / (width * width)).exp();
                Ok(dirs.iter().map(|d| d.scale(f)).collect())
            }
            ConnectionFamily::PureGauge { gauge } => {
                let g = gauge.eval(p)?;
                let g_inv = g.inverse();
                let h = self.h_gauge();
                (0..m)
                    .map(|k| {
                        let dg = gauge.differential(p, k, h)?;
                        Ok(AlgebraElement::project(self.kind, &(g_inv.mat() * dg)))
                    })
                    .collect()
            }
            ConnectionFamily::GaugeTransformed { base, gauge } => {
                let g = gauge.eval(p)?;
                let g_inv = g.inverse();
                let base_comps = base.components(p)?;
                let h = self.h_gauge();
                (0..m)
                    .map(|k| {
                        let dg = gauge.differential(p, k, h)?;
                        let mat =
                            g_inv.mat() * dg + g_inv.mat() * base_comps[k].mat() * g.mat();
                        Ok(AlgebraElement::project(self.kind, &mat))
                    })
                    .collect()
            }
        }
    }

    /// omega_p[v].
    pub fn eval_form(&self, p: &DVector<f64>, v: &DVector<f64>) -> Result<AlgebraElement> {
        let comps = self.components(p)?;
        let mut out = AlgebraElement::zero(self.kind);
        for (a, &vk) in comps.iter().zip(v.iter()) {
            out = out.add(&a.scale(vk));
        }
        Ok(out)
    }

    /// All partial derivatives (d A_k / d p_j) for fixed j; analytic where
    /// the family allows, central differences otherwise.
    pub fn component_derivative(&self, p: &DVector<f64>, j: usize) -> Result<Vec<AlgebraElement>> {
        self.chart.check_contains(p)?;
        let m = self.dim();
        match &self.family {
            ConnectionFamily::Zero | ConnectionFamily::ConstantCoefficients { .. } => {
                Ok(vec![AlgebraElement::zero(self.kind); m])
            }
            ConnectionFamily::ConstantField { b } => {
                let mut out = vec![AlgebraElement::zero(self.kind); m];
                if j == 0 {
                    out[1] = AlgebraElement::u1(b / 2.0);
                } else {
                    out[0] = AlgebraElement::u1(-b / 2.0);
                }
                Ok(out)
            }
            ConnectionFamily::Polynomial { terms } => {
                let mut out = vec![AlgebraElement::zero(self.kind); m];
                for t in terms {
                    let c = eval_monomial_derivative(&t.powers, p, j);
                    if c != 0.0 {
                        out[t.axis] = out[t.axis].add(&t.coeff.scale(c));
                    }
                }
                Ok(out)
            }
            ConnectionFamily::GaussianBump {
                amplitude,
                center,
                width,
                dirs,
            } => {
                let w2 = width * width;
                let f = amplitude * (-(p - center).norm_squared() / w2).exp();
                let df = -2.0 * (p[j] - center[j]) / w2 * f;
                Ok(dirs.iter().map(|d| d.scale(df)).collect())
            }
            ConnectionFamily::PureGauge { .. } | ConnectionFamily::GaugeTransformed { .. } => {
                let h = self.h_conn();
                let mut fwd = p.clone();
                fwd[j] += h;
                let mut bwd = p.clone();
                bwd[j] -= h;
                let cf = self.components(&fwd)?;
                let cb = self.components(&bwd)?;
                Ok(cf
                    .iter()
                    .zip(cb.iter())
                    .map(|(a, b)| a.sub(b).scale(0.5 / h))
                    .collect())
            }
        }
    }

    /// Omega_p[u, v] = d omega_p[u, v] + [omega_p[u], omega_p[v]] with
    /// d omega_p[u, v] = D_u(omega[v]) - D_v(omega[u]) for constant u, v.
    pub fn curvature(
        &self,
        p: &DVector<f64>,
        u: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<CurvatureValue> {
        let m = self.dim();
        let comps = self.components(p)?;
        let mut omega_u = AlgebraElement::zero(self.kind);
        let mut omega_v = AlgebraElement::zero(self.kind);
        for k in 0..m {
            omega_u = omega_u.add(&comps[k].scale(u[k]));
            omega_v = omega_v.add(&comps[k].scale(v[k]));
        }
        let mut d_omega = AlgebraElement::zero(self.kind);
        for j in 0..m {
            if u[j] == 0.0 && v[j] == 0.0 {
                continue;
            }
            let d_j = self.component_derivative(p, j)?;
            for k in 0..m {
                let w = u[j] * v[k] - v[j] * u[k];
                if w != 0.0 {
                    d_omega = d_omega.add(&d_j[k].scale(w));
                }
            }
        }
        Ok(CurvatureValue {
            value: d_omega.add(&omega_u.bracket(&omega_v)),
            basepoint: p.clone(),
            u: u.clone(),
            v: v.clone(),
        })
    }

    /// Curvature density on a 2-dimensional chart: |Omega_p[e1, e2]|.
    pub fn curvature_density_2d(&self, p: &DVector<f64>) -> Result<f64> {
        assert_eq!(self.dim(), 2);
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        Ok(self.curvature(p, &e1, &e2)?.value.norm())
    }

    /// The connection in the gauge g: omega' = g^{-1} dg + g^{-1} omega g.
    pub fn gauge_transform(&self, gauge: GaugeField) -> Result<Connection> {
        if gauge.kind() != self.kind {
            return Err(Error::KindMismatch {
                left: self.kind.label(),
                right: gauge.kind().label(),
            });
        }
        Ok(Connection {
            kind: self.kind,
            chart: self.chart.clone(),
            family: ConnectionFamily::GaugeTransformed {
                base: Box::new(self.clone()),
                gauge,
            },
        })
    }
}
