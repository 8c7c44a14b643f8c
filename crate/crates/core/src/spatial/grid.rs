//! Uniform grid and ghosted field storage.

use crate::error::{Error, Result};
use crate::euler::{ConservedState, GasModel, PrimitiveState};

/// Ghost layer width on every side; interface `i+1/2` reads states `i-2..=i+3`.
pub const GHOST: usize = 3;

/// Uniform cell-centered grid: `x[i] = x0 + (i + 1/2) dx` for `i = 0..nx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Result<Self> {
        if nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0) {
            return Err(Error::Config(format!(
                "invalid grid {nx}x{ny} on [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x0,
            x1,
            y0,
            y1,
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
        })
    }

    #[inline]
    pub fn x(&self, i: isize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y(&self, j: isize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }
}

/// Conserved states on the interior plus `GHOST` layers on each side.
///
/// Indices are interior-relative: `(0, 0)` is the first interior point and ghosts
/// sit at negative indices or at `nx..nx+GHOST`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    nx: usize,
    ny: usize,
    data: Vec<ConservedState>,
}

impl Field {
    pub fn uniform(nx: usize, ny: usize, state: ConservedState) -> Self {
        Self {
            nx,
            ny,
            data: vec![state; (nx + 2 * GHOST) * (ny + 2 * GHOST)],
        }
    }

    /// Sample a primitive-state function at every point, ghosts included.
    pub fn from_fn<F>(grid: &Grid2D, gas: &GasModel, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> PrimitiveState,
    {
        let mut field = Self::uniform(grid.nx, grid.ny, ConservedState::default());
        let g = GHOST as isize;
        for j in -g..grid.ny as isize + g {
            for i in -g..grid.nx as isize + g {
                let s = f(grid.x(i), grid.y(j)).to_conserved(gas).map_err(|e| e.at(i, j))?;
                field.set(i, j, s);
            }
        }
        Ok(field)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    fn index(&self, i: isize, j: isize) -> usize {
        let g = GHOST as isize;
        debug_assert!(i >= -g && i < self.nx as isize + g, "i = {i}");
        debug_assert!(j >= -g && j < self.ny as isize + g, "j = {j}");
        (j + g) as usize * (self.nx + 2 * GHOST) + (i + g) as usize
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> ConservedState {
        self.data[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, s: ConservedState) {
        let k = self.index(i, j);
        self.data[k] = s;
    }

    /// Interior states in row-major order (`j` outer, `i` inner).
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, ConservedState)> + '_ {
        (0..self.ny).flat_map(move |j| {
            (0..self.nx).map(move |i| (i, j, self.get(i as isize, j as isize)))
        })
    }
}
