//! The semi-discrete operator `L(u) = -(f̂ east - f̂ west)/dx - (ĝ north - ĝ south)/dy + R`.

use std::fmt;
use std::sync::Arc;

use crate::aweno::{interface_flux_window, FluxScheme, InterpVariables};
use crate::error::Result;
use crate::euler::{flux, max_wave_speeds, Axis, ConservedState, Eigensystem};
use crate::interpolation::{detect_troubled, StencilWindow};

use super::boundary::{fill_ghosts, BoundarySpec, CornerFix};
use super::grid::{Field, Grid2D, GHOST};
use super::topology::{Obstacle, Topology};

/// Source term `R(u, x, y)`.
pub type SourceTerm = Arc<dyn Fn(&ConservedState, f64, f64) -> [f64; 4] + Send + Sync>;

/// Everything needed to evaluate `L` on a field: geometry, boundary data and scheme.
#[derive(Clone)]
pub struct Discretization {
    pub grid: Grid2D,
    pub topology: Topology,
    pub boundary: BoundarySpec,
    pub corner_fix: Option<CornerFix>,
    pub scheme: FluxScheme,
    pub source: Option<SourceTerm>,
}

impl fmt::Debug for Discretization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Discretization")
            .field("grid", &self.grid)
            .field("boundary", &self.boundary)
            .field("corner_fix", &self.corner_fix)
            .field("scheme", &self.scheme)
            .field("source", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

impl Discretization {
    pub fn new(grid: Grid2D, boundary: BoundarySpec, scheme: FluxScheme) -> Result<Self> {
        Self::with_obstacles(grid, boundary, scheme, &[])
    }

    pub fn with_obstacles(
        grid: Grid2D,
        boundary: BoundarySpec,
        scheme: FluxScheme,
        obstacles: &[Obstacle],
    ) -> Result<Self> {
        boundary.validate()?;
        scheme.weno.validate()?;
        Ok(Self {
            topology: Topology::with_obstacles(&grid, obstacles)?,
            grid,
            boundary,
            corner_fix: None,
            scheme,
            source: None,
        })
    }

    pub fn fill_ghosts(&self, field: &mut Field) -> Result<()> {
        fill_ghosts(field, &self.grid, &self.boundary, &self.scheme.gas)
    }

    /// Largest `|u| + c` and `|v| + c` over fluid points.
    pub fn max_wave_speeds(&self, field: &Field) -> Result<(f64, f64)> {
        let states: Vec<ConservedState> = self
            .topology
            .fluid_points()
            .map(|(i, j)| field.get(i as isize, j as isize))
            .collect();
        max_wave_speeds(states.iter(), &self.scheme.gas)
    }

    #[inline]
    fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.grid.dx,
            Axis::Y => self.grid.dy,
        }
    }

    /// `(f̂(+1/2) - f̂(-1/2)) / h` along `axis` at fluid point `(i, j)`.
    #[inline]
    fn flux_difference(&self, field: &Field, i: usize, j: usize, axis: Axis, lambda: f64) -> Result<[f64; 4]> {
        let gas = &self.scheme.gas;
        let w = self.topology.window(field, i, j, axis);
        let mut phys = [[0.0; 4]; 7];
        for (p, s) in phys.iter_mut().zip(&w) {
            *p = flux(s, axis, gas).map_err(|e| e.at(i as isize, j as isize))?;
        }
        let h = self.spacing(axis);
        let west = interface_flux_window(&w[0..6], &phys[0..6], h, axis, lambda, &self.scheme)?;
        let east = interface_flux_window(&w[1..7], &phys[1..7], h, axis, lambda, &self.scheme)?;
        Ok(std::array::from_fn(|k| (east[k] - west[k]) / h))
    }

    #[inline]
    fn combine(&self, field: &Field, i: usize, j: usize, dfx: &[f64; 4], dgy: &[f64; 4]) -> [f64; 4] {
        let mut l: [f64; 4] = std::array::from_fn(|k| -dfx[k] - dgy[k]);
        if let Some(source) = &self.source {
            let r = source(&field.get(i as isize, j as isize), self.grid.x(i as isize), self.grid.y(j as isize));
            for k in 0..4 {
                l[k] += r[k];
            }
        }
        l
    }

    /// `L` at fluid point `(i, j)`; ghosts must be filled. `lambda` holds the
    /// dissipation speeds along x and y.
    pub fn operator_at(&self, field: &Field, i: usize, j: usize, lambda: (f64, f64)) -> Result<[f64; 4]> {
        debug_assert!(!self.topology.is_solid(i, j));
        let dfx = self.flux_difference(field, i, j, Axis::X, lambda.0)?;
        let dgy = self.flux_difference(field, i, j, Axis::Y, lambda.1)?;
        Ok(self.combine(field, i, j, &dfx, &dgy))
    }

    /// `L` at every interior point (row-major, zero on solid points), with each
    /// interface flux evaluated once. Agrees bitwise with [`Self::operator_at`].
    pub fn operator_field(&self, field: &Field, lambda: (f64, f64), out: &mut Vec<[f64; 4]>) -> Result<()> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        out.clear();
        out.resize(nx * ny, [0.0; 4]);
        let mut dfx = vec![[0.0; 4]; nx * ny];
        let mut dgy = vec![[0.0; 4]; nx * ny];
        let mut line = Vec::new();
        let mut phys = Vec::new();
        let mut faces = Vec::new();
        for (axis, lambda, diff) in [(Axis::X, lambda.0, &mut dfx), (Axis::Y, lambda.1, &mut dgy)] {
            let h = self.spacing(axis);
            for &(l, span) in self.topology.runs(axis) {
                self.topology.padded_run(field, axis, l, span, &mut line);
                phys.clear();
                for (m, s) in line.iter().enumerate() {
                    let k = span.lo + m as isize - GHOST as isize;
                    let (i, j) = match axis {
                        Axis::X => (k, l as isize),
                        Axis::Y => (l as isize, k),
                    };
                    phys.push(flux(s, axis, &self.scheme.gas).map_err(|e| e.at(i, j))?);
                }
                // faces[m] is the west/south face of run point m
                faces.clear();
                let len = (span.hi - span.lo + 1) as usize;
                for m in 0..=len {
                    faces.push(interface_flux_window(
                        &line[m..m + 6],
                        &phys[m..m + 6],
                        h,
                        axis,
                        lambda,
                        &self.scheme,
                    )?);
                }
                for m in 0..len {
                    let k = span.lo as usize + m;
                    let idx = match axis {
                        Axis::X => l * nx + k,
                        Axis::Y => k * nx + l,
                    };
                    diff[idx] = std::array::from_fn(|c| (faces[m + 1][c] - faces[m][c]) / h);
                }
            }
        }
        for (i, j) in self.topology.fluid_points() {
            let idx = j * nx + i;
            out[idx] = self.combine(field, i, j, &dfx[idx], &dgy[idx]);
        }
        Ok(())
    }

    /// Points whose x or y stencil is flagged by the troubled-cell detector in any
    /// interpolated component: conserved, or characteristic at the right-hand interface.
    pub fn troubled_mask(&self, field: &Field) -> Vec<bool> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let gas = &self.scheme.gas;
        let mut mask = vec![false; nx * ny];
        for (i, j) in self.topology.fluid_points() {
            mask[j * nx + i] = [Axis::X, Axis::Y].into_iter().any(|axis| {
                let w = self.topology.window(field, i, j, axis);
                let comps: [[f64; 4]; 5] = match self.scheme.variables {
                    InterpVariables::Conserved => std::array::from_fn(|m| w[m + 1].to_array()),
                    InterpVariables::Characteristic => match Eigensystem::roe(&w[3], &w[4], axis, gas) {
                        Ok(eig) => std::array::from_fn(|m| eig.to_characteristic(w[m + 1].to_array())),
                        Err(_) => return true,
                    },
                };
                (0..4).any(|c| detect_troubled(&StencilWindow(std::array::from_fn(|m| comps[m][c]))))
            });
        }
        mask
    }
}
