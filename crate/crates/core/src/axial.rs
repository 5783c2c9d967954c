//! Axial gauge construction on box charts.
//!
//! Given a connection on a box and a signed coordinate direction v, the
//! axial gauge solves dg[v] + omega[v] g = 0 along every v-parallel line,
//! seeding g = id on the face where the lines enter the box. In the
//! transformed connection the v-component vanishes identically, which is
//! checked here through a finite-difference residual on a node lattice.

use nalgebra::DVector;

use crate::chart::Chart;
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::gauge::{GaugeField, GaugeGrid};
use crate::lie::{exp_map, project_to_group, C64, GroupElement};

/// Outcome of a lattice axial-gauge construction.
#[derive(Debug, Clone)]
pub struct AxialGaugeResult {
    /// Multilinear interpolation of the node values.
    pub gauge: GaugeField,
    /// The direction that was gauged away.
    pub direction: DVector<f64>,
    /// Max over axis-interior nodes of || dg[v] + omega[v] g ||_F, with
    /// dg[v] estimated by a centered difference across neighboring nodes.
    pub residual: f64,
    /// Cells per axis of the node lattice.
    pub cells: usize,
}

/// Splits a direction vector into (axis, sign). The vector must equal a
/// signed standard basis vector to within 1e-12 per entry.
pub fn unit_axis_direction(v: &DVector<f64>) -> Result<(usize, f64)> {
    let mut found = None;
    for i in 0..v.len() {
        if v[i].abs() <= 1e-12 {
            continue;
        }
        if found.is_some() || (v[i].abs() - 1.0).abs() > 1e-12 {
            return Err(Error::DirectionNotUnit);
        }
        found = Some((i, v[i].signum()));
    }
    found.ok_or(Error::DirectionNotUnit)
}

fn box_bounds(conn: &Connection) -> Result<(DVector<f64>, DVector<f64>)> {
    match conn.chart() {
        Chart::Box { min, max } => Ok((min.clone(), max.clone())),
        Chart::Ball { .. } => Err(Error::ChartNotBox),
    }
}

/// Builds the axial gauge on a `cells + 1` node lattice per axis. Each
/// v-parallel line is integrated with midpoint exponential steps,
/// `max(1, line_steps / cells)` substeps per cell, so the total step count
/// along a line stays near `line_steps` regardless of lattice resolution.
pub fn axial_gauge(
    conn: &Connection,
    v: &DVector<f64>,
    cells: usize,
    line_steps: usize,
) -> Result<AxialGaugeResult> {
    if cells < 8 {
        return Err(Error::StepCountTooSmall(cells));
    }
    let (min, max) = box_bounds(conn)?;
    let (axis, sign) = unit_axis_direction(v)?;
    let m = conn.dim();
    if v.len() != m {
        return Err(Error::DirectionNotUnit);
    }
    let kind = conn.kind();
    let nodes = cells + 1;
    let mut grid = GaugeGrid {
        kind,
        box_min: min.clone(),
        box_max: max.clone(),
        nodes_per_axis: nodes,
        values: vec![GroupElement::identity(kind); nodes.pow(m as u32)],
    };

    let cell_len = (max[axis] - min[axis]) / cells as f64;
    let substeps = (line_steps / cells).max(1);
    let h = cell_len / substeps as f64;
    let mut dir = DVector::zeros(m);
    dir[axis] = sign;

    // March node by node away from the seed face along each line.
    let mut idx = vec![0usize; m];
    loop {
        let mut g = GroupElement::identity(kind);
        let mut x = grid.node_point(&idx);
        let seed = if sign > 0.0 { min[axis] } else { max[axis] };
        for j in 0..=cells {
            let node_axis = if sign > 0.0 { j } else { cells - j };
            idx[axis] = node_axis;
            if j > 0 {
                let from = seed + sign * (j - 1) as f64 * cell_len;
                for k in 0..substeps {
                    x[axis] = from + sign * (k as f64 + 0.5) * h;
                    let a = conn.eval_form(&x, &dir)?;
                    let step = exp_map(&a.scale(-h));
                    g = project_to_group(kind, step.mul(&g).mat())?;
                }
            }
            let flat = grid.flat_index(&idx);
            grid.values[flat] = g.clone();
        }
        idx[axis] = 0;
        if !advance_transverse(&mut idx, axis, nodes) {
            break;
        }
    }

    let residual = lattice_residual(conn, &grid, axis, sign, cell_len, &dir)?;
    Ok(AxialGaugeResult {
        gauge: GaugeField::GridSampled { grid },
        direction: v.clone(),
        residual,
        cells,
    })
}

fn advance_transverse(idx: &mut [usize], skip: usize, nodes: usize) -> bool {
    for i in (0..idx.len()).rev() {
        if i == skip {
            continue;
        }
        idx[i] += 1;
        if idx[i] < nodes {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn lattice_residual(
    conn: &Connection,
    grid: &GaugeGrid,
    axis: usize,
    sign: f64,
    cell_len: f64,
    dir: &DVector<f64>,
) -> Result<f64> {
    let nodes = grid.nodes_per_axis;
    let m = grid.dim();
    let mut worst: f64 = 0.0;
    let mut idx = vec![0usize; m];
    loop {
        for j in 1..nodes - 1 {
            idx[axis] = j;
            let p = grid.node_point(&idx);
            let g = grid.value(&idx).mat().clone();
            idx[axis] = j + 1;
            let fwd = grid.value(&idx).mat().clone();
            idx[axis] = j - 1;
            let bwd = grid.value(&idx).mat().clone();
            let dg = (fwd - bwd) * C64::new(sign / (2.0 * cell_len), 0.0);
            let a = conn.eval_form(&p, dir)?;
            let res = (dg + a.mat() * g).norm();
            worst = worst.max(res);
        }
        idx[axis] = 0;
        if !advance_transverse(&mut idx, axis, nodes) {
            break;
        }
    }
    Ok(worst)
}

/// On-demand axial gauge: g(p) is obtained by integrating the line from
/// the seed face through p with a fixed substep count, so the field is
/// smooth in p and can be differentiated numerically.
pub fn axial_gauge_field(
    conn: &Connection,
    v: &DVector<f64>,
    substeps: usize,
) -> Result<GaugeField> {
    box_bounds(conn)?;
    let (axis, sign) = unit_axis_direction(v)?;
    Ok(GaugeField::AxialLine {
        base: Box::new(conn.clone()),
        axis,
        sign,
        substeps,
    })
}

/// Max of || omega[v] || over the chart probe lattice. Applied to a
/// transformed connection this measures how completely the v-component
/// was removed.
pub fn axial_component_sup(
    conn: &Connection,
    v: &DVector<f64>,
    probes_per_axis: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in conn.chart().probe_points(probes_per_axis) {
        worst = worst.max(conn.eval_form(&p, v)?.norm());
    }
    Ok(worst)
}
