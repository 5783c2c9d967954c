//! TOML scenario configuration and builders for the core objects.
//!
//! A config file holds an optional `[defaults]` table, any number of
//! `[[scenario]]` tables, and an optional `[fuzz]` table. Every key is
//! checked; unknown keys are reported by name so typos fail loudly
//! instead of silently running a different experiment.

use nalgebra::DVector;
use serde::Deserialize;

use holonomy_core::{
    AlgebraElement, Chart, Connection, ConnectionFamily, GroupKind, MonomialTerm, Path, Surface,
};

use crate::AppError;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<ScenarioConfig>,
    #[serde(default)]
    pub fuzz: Option<FuzzConfig>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub steps: Option<usize>,
    pub grid: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub group: String,
    pub chart: ChartConfig,
    pub connection: ConnectionConfig,
    pub path: Option<PathConfig>,
    pub surface: Option<SurfaceConfig>,
    pub steps: Option<usize>,
    pub grid: Option<String>,
    pub radius: Option<f64>,
    pub h_r: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub direction: Option<Vec<f64>>,
    pub cells: Option<usize>,
    pub line_steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum ChartConfig {
    Ball { center: Vec<f64>, radius: f64 },
    Box { min: Vec<f64>, max: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "family", rename_all = "kebab-case")]
pub enum ConnectionConfig {
    Zero,
    ConstantField { b: f64 },
    ConstantCoefficients { coeffs: Vec<Vec<f64>> },
    Polynomial { terms: Vec<TermConfig> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub axis: usize,
    pub powers: Vec<u32>,
    pub coeff: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum PathConfig {
    Circle { center: Vec<f64>, radius: f64 },
    Ellipse { center: Vec<f64>, a: f64, b: f64 },
    Segment { from: Vec<f64>, to: Vec<f64> },
    /// Boundary loop of the scenario's surface.
    Boundary,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceConfig {
    Disk {
        center: Vec<f64>,
        radius: f64,
    },
    Linear {
        center: Vec<f64>,
        col_u: Vec<f64>,
        col_v: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzConfig {
    pub suite: Option<String>,
    pub count: Option<u64>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
}

pub fn load(path: &std::path::Path) -> Result<ConfigFile, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: ConfigFile = toml::from_str(&text)
        .map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
    for sc in &file.scenarios {
        if sc.id.contains(',') {
            return Err(AppError::Config(format!(
                "scenario id `{}` must not contain commas",
                sc.id
            )));
        }
    }
    Ok(file)
}

pub fn parse_group(name: &str) -> Result<GroupKind, AppError> {
    match name {
        "u1" => Ok(GroupKind::U1),
        "su2" => Ok(GroupKind::Su2),
        other => {
            if let Some(n) = other.strip_prefix("so") {
                if let Ok(n) = n.parse::<usize>() {
                    if n >= 2 {
                        return Ok(GroupKind::SOn(n));
                    }
                }
            }
            Err(AppError::Config(format!(
                "unknown group `{other}` (expected u1, su2, or soN)"
            )))
        }
    }
}

pub fn parse_grid(text: &str) -> Result<(usize, usize), AppError> {
    let mut parts = text.split('x');
    let bad = || AppError::Config(format!("grid `{text}` must look like 64x128"));
    let a = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let b = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

fn algebra_coeff(kind: GroupKind, raw: &[f64], what: &str) -> Result<AlgebraElement, AppError> {
    let wrong = |want: usize| {
        AppError::Config(format!(
            "{what}: group {} expects {want} coefficient(s), got {}",
            kind.label(),
            raw.len()
        ))
    };
    match kind {
        GroupKind::U1 => {
            if raw.len() != 1 {
                return Err(wrong(1));
            }
            Ok(AlgebraElement::u1(raw[0]))
        }
        GroupKind::Su2 => {
            if raw.len() != 3 {
                return Err(wrong(3));
            }
            Ok(AlgebraElement::su2(raw[0], raw[1], raw[2]))
        }
        GroupKind::SOn(n) => {
            let want = n * (n - 1) / 2;
            if raw.len() != want {
                return Err(wrong(want));
            }
            Ok(AlgebraElement::so_n(n, raw))
        }
    }
}

fn vector(raw: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(raw)
}

impl ScenarioConfig {
    pub fn build_chart(&self) -> Chart {
        match &self.chart {
            ChartConfig::Ball { center, radius } => Chart::ball(vector(center), *radius),
            ChartConfig::Box { min, max } => Chart::new_box(vector(min), vector(max)),
        }
    }

    pub fn build_connection(&self) -> Result<Connection, AppError> {
        let kind = parse_group(&self.group)?;
        let chart = self.build_chart();
        let family = match &self.connection {
            ConnectionConfig::Zero => ConnectionFamily::Zero,
            ConnectionConfig::ConstantField { b } => ConnectionFamily::ConstantField { b: *b },
            ConnectionConfig::ConstantCoefficients { coeffs } => {
                let mut out = Vec::with_capacity(coeffs.len());
                for (axis, raw) in coeffs.iter().enumerate() {
                    out.push(algebra_coeff(
                        kind,
                        raw,
                        &format!("scenario `{}`, coeffs[{axis}]", self.id),
                    )?);
                }
                ConnectionFamily::ConstantCoefficients { coeffs: out }
            }
            ConnectionConfig::Polynomial { terms } => {
                let mut out = Vec::with_capacity(terms.len());
                for (i, term) in terms.iter().enumerate() {
                    out.push(MonomialTerm {
                        axis: term.axis,
                        powers: term.powers.clone(),
                        coeff: algebra_coeff(
                            kind,
                            &term.coeff,
                            &format!("scenario `{}`, terms[{i}].coeff", self.id),
                        )?,
                    });
                }
                ConnectionFamily::Polynomial { terms: out }
            }
        };
        Connection::new(kind, chart, family)
            .map_err(|e| AppError::Config(format!("scenario `{}`: {e}", self.id)))
    }

    pub fn build_surface(&self) -> Result<Surface, AppError> {
        match &self.surface {
            Some(SurfaceConfig::Disk { center, radius }) => {
                Ok(Surface::disk(vector(center), *radius))
            }
            Some(SurfaceConfig::Linear {
                center,
                col_u,
                col_v,
            }) => Ok(Surface::linear(vector(center), vector(col_u), vector(col_v))),
            None => Err(AppError::Config(format!(
                "scenario `{}`: missing key `surface`",
                self.id
            ))),
        }
    }

    pub fn build_path(&self) -> Result<Path, AppError> {
        match &self.path {
            Some(PathConfig::Circle { center, radius }) => {
                Ok(Path::circle(vector(center), *radius))
            }
            Some(PathConfig::Ellipse { center, a, b }) => {
                Ok(Path::ellipse(vector(center), *a, *b))
            }
            Some(PathConfig::Segment { from, to }) => Ok(Path::segment(vector(from), vector(to))),
            Some(PathConfig::Boundary) => Ok(Path::boundary_of(self.build_surface()?)),
            None => Err(AppError::Config(format!(
                "scenario `{}`: missing key `path`",
                self.id
            ))),
        }
    }

    pub fn require<T: Copy>(&self, value: Option<T>, key: &str) -> Result<T, AppError> {
        value.ok_or_else(|| {
            AppError::Config(format!("scenario `{}`: missing key `{key}`", self.id))
        })
    }
}
