//! Ghost-layer population on the four domain edges, and the corner reset used by
//! the forward-facing step.

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservedState, GasModel, PrimitiveState};

use super::grid::{Field, Grid2D, GHOST};

/// Condition applied on one edge of the rectangle.
#[derive(Debug, Clone, Copy)]
pub enum EdgeCondition {
    Dirichlet(PrimitiveState),
    ReflectiveWall,
    /// Zeroth-order extrapolation of the nearest interior state.
    SupersonicOutflow,
    /// Reference solution evaluated at the ghost coordinates.
    ExactFunction(fn(f64, f64) -> PrimitiveState),
    /// Reflective for `x in [start, end]`, extrapolated elsewhere. Bottom edge only.
    SlipSegment { start: f64, end: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct BoundarySpec {
    pub left: EdgeCondition,
    pub right: EdgeCondition,
    pub bottom: EdgeCondition,
    pub top: EdgeCondition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl BoundarySpec {
    pub fn uniform(condition: EdgeCondition) -> Self {
        Self {
            left: condition,
            right: condition,
            bottom: condition,
            top: condition,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [("left", self.left), ("right", self.right), ("top", self.top)] {
            if let EdgeCondition::SlipSegment { .. } = c {
                return Err(Error::Config(format!(
                    "slip segment is only supported on the bottom edge, found on the {name} edge"
                )));
            }
        }
        if let EdgeCondition::SlipSegment { start, end } = self.bottom {
            if !(end >= start) {
                return Err(Error::Config(format!("empty slip segment [{start}, {end}]")));
            }
        }
        Ok(())
    }
}

/// Populate every ghost point adjacent to the interior from `spec`.
///
/// Only the ghost strips along each edge are touched; the four ghost corner
/// blocks are never read by the line stencils.
pub fn fill_ghosts(field: &mut Field, grid: &Grid2D, spec: &BoundarySpec, gas: &GasModel) -> Result<()> {
    spec.validate()?;
    for (edge, condition) in [
        (Edge::Left, spec.left),
        (Edge::Right, spec.right),
        (Edge::Bottom, spec.bottom),
        (Edge::Top, spec.top),
    ] {
        fill_edge(field, grid, edge, condition, gas)?;
    }
    Ok(())
}

fn fill_edge(field: &mut Field, grid: &Grid2D, edge: Edge, condition: EdgeCondition, gas: &GasModel) -> Result<()> {
    let (nx, ny) = (field.nx() as isize, field.ny() as isize);
    let g = GHOST as isize;
    let (len, n, axis) = match edge {
        Edge::Left | Edge::Right => (ny, nx, Axis::X),
        Edge::Bottom | Edge::Top => (nx, ny, Axis::Y),
    };
    // (ghost index, mirror interior index) along the normal, ghost layer k = 0 nearest
    let normal = |k: isize| match edge {
        Edge::Left | Edge::Bottom => (-1 - k, k),
        Edge::Right | Edge::Top => (n + k, n - 1 - k),
    };
    let point = |t: isize, m: isize| match axis {
        Axis::X => (m, t),
        Axis::Y => (t, m),
    };
    let dirichlet = match condition {
        EdgeCondition::Dirichlet(w) => Some(w.to_conserved(gas)?),
        _ => None,
    };
    for t in 0..len {
        for k in 0..g {
            let (ghost, mirror) = normal(k);
            let (gi, gj) = point(t, ghost);
            let (mi, mj) = point(t, mirror.clamp(0, n - 1));
            let (ni, nj) = point(t, normal(0).1);
            let state = match condition {
                EdgeCondition::Dirichlet(_) => dirichlet.expect("converted above"),
                EdgeCondition::ReflectiveWall => field.get(mi, mj).reflected(axis),
                EdgeCondition::SupersonicOutflow => field.get(ni, nj),
                EdgeCondition::ExactFunction(f) => f(grid.x(gi), grid.y(gj))
                    .to_conserved(gas)
                    .map_err(|e| e.at(gi, gj))?,
                EdgeCondition::SlipSegment { start, end } => {
                    let x = grid.x(gi);
                    if x >= start && x <= end {
                        field.get(mi, mj).reflected(axis)
                    } else {
                        field.get(ni, nj)
                    }
                }
            };
            field.set(gi, gj, state);
        }
    }
    Ok(())
}

/// Nearly-steady reset near a convex corner: target points take the entropy and
/// total enthalpy of a reference point while keeping their own pressure and flow
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerFix {
    pub reference: (usize, usize),
    pub targets: Vec<(usize, usize)>,
}

impl CornerFix {
    pub fn is_target(&self, i: usize, j: usize) -> bool {
        self.targets.contains(&(i, j))
    }

    /// Reset the target at `(i, j)` if it is one; returns whether it was.
    pub fn apply_at(&self, field: &mut Field, i: usize, j: usize, gas: &GasModel) -> Result<bool> {
        if !self.is_target(i, j) {
            return Ok(false);
        }
        let (ri, rj) = self.reference;
        let reference = field.get(ri as isize, rj as isize);
        let w_ref = reference.to_primitive(gas).map_err(|e| e.at(ri as isize, rj as isize))?;
        let s = field.get(i as isize, j as isize);
        let w = s.to_primitive(gas).map_err(|e| e.at(i as isize, j as isize))?;
        field.set(i as isize, j as isize, reset_state(&w, &w_ref, gas));
        Ok(true)
    }

    pub fn apply(&self, field: &mut Field, gas: &GasModel) -> Result<()> {
        for &(i, j) in &self.targets {
            self.apply_at(field, i, j, gas)?;
        }
        Ok(())
    }
}

fn reset_state(w: &PrimitiveState, w_ref: &PrimitiveState, gas: &GasModel) -> ConservedState {
    let gm = gas.gamma;
    let entropy = w_ref.p / w_ref.rho.powf(gm);
    let total_enthalpy =
        gm / (gm - 1.0) * w_ref.p / w_ref.rho + 0.5 * (w_ref.u * w_ref.u + w_ref.v * w_ref.v);
    let rho = (w.p / entropy).powf(1.0 / gm);
    let h = gm / (gm - 1.0) * w.p / rho;
    let q_new = (2.0 * (total_enthalpy - h)).max(0.0).sqrt();
    let q_old = w.u.hypot(w.v);
    let (u, v) = if q_old > 0.0 {
        (w.u * q_new / q_old, w.v * q_new / q_old)
    } else {
        (0.0, 0.0)
    };
    ConservedState::new(
        rho,
        rho * u,
        rho * v,
        w.p / (gm - 1.0) + 0.5 * rho * (u * u + v * v),
    )
}
