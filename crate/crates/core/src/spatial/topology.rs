//! Solid obstacles inside the rectangular domain and the resulting fluid runs along
//! each grid line.
//!
//! A run is a maximal set of consecutive fluid points on a row (or column). Stencil
//! reads beyond a run end come either from the ghost layers (domain edge) or from
//! the run itself mirrored across the wall with the wall-normal momentum flipped.

use crate::error::{Error, Result};
use crate::euler::{Axis, ConservedState};

use super::grid::{Field, Grid2D, GHOST};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    /// Solid block `{x > corner_x, y < height}` resting on the bottom edge.
    ForwardStep { corner_x: f64, height: f64 },
    /// Zero-thickness slip plate on the grid interface `y = y_plate`, `x in [x_start, x_end]`.
    ThinPlate { y: f64, x_start: f64, x_end: f64 },
}

/// Inclusive fluid run `lo..=hi` along one grid line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: isize,
    pub hi: isize,
    /// The run starts at a wall (mirror) rather than at the domain edge (ghosts).
    pub lo_wall: bool,
    pub hi_wall: bool,
}

#[derive(Debug, Clone)]
pub struct Topology {
    nx: usize,
    ny: usize,
    solid: Vec<bool>,
    span_x: Vec<Span>,
    span_y: Vec<Span>,
    runs_x: Vec<(usize, Span)>,
    runs_y: Vec<(usize, Span)>,
}

impl Topology {
    /// Plain rectangle: every row and column is a single run bounded by ghosts.
    pub fn open(nx: usize, ny: usize) -> Self {
        Self::build(nx, ny, vec![false; nx * ny], &[], &[]).expect("open rectangle is valid")
    }

    pub fn with_obstacles(grid: &Grid2D, obstacles: &[Obstacle]) -> Result<Self> {
        let (nx, ny) = (grid.nx, grid.ny);
        let mut solid = vec![false; nx * ny];
        let mut y_cuts = Vec::new();
        for obstacle in obstacles {
            match *obstacle {
                Obstacle::ForwardStep { corner_x, height } => {
                    for j in 0..ny {
                        for i in 0..nx {
                            if grid.x(i as isize) > corner_x && grid.y(j as isize) < height {
                                solid[j * nx + i] = true;
                            }
                        }
                    }
                }
                Obstacle::ThinPlate { y, x_start, x_end } => {
                    let k = (y - grid.y0) / grid.dy;
                    if (k - k.round()).abs() > 1e-9 || k.round() < 1.0 || k.round() >= ny as f64 {
                        return Err(Error::Config(format!(
                            "plate at y = {y} does not lie on an interior grid interface"
                        )));
                    }
                    let below = k.round() as usize - 1;
                    for i in 0..nx {
                        let x = grid.x(i as isize);
                        if x >= x_start && x <= x_end {
                            y_cuts.push((i, below));
                        }
                    }
                }
            }
        }
        Self::build(nx, ny, solid, &[], &y_cuts)
    }

    /// `x_cuts` holds walls between `(i, j)` and `(i+1, j)`; `y_cuts` between `(i, j)` and `(i, j+1)`.
    fn build(
        nx: usize,
        ny: usize,
        solid: Vec<bool>,
        x_cuts: &[(usize, usize)],
        y_cuts: &[(usize, usize)],
    ) -> Result<Self> {
        let mut span_x = vec![Span { lo: 0, hi: -1, lo_wall: false, hi_wall: false }; nx * ny];
        let mut span_y = span_x.clone();
        let mut runs_x = Vec::new();
        let mut runs_y = Vec::new();

        for j in 0..ny {
            let is_solid = |i: usize| solid[j * nx + i];
            let cut_after = |i: usize| x_cuts.contains(&(i, j));
            for span in line_runs(nx, is_solid, cut_after)? {
                for i in span.lo..=span.hi {
                    span_x[j * nx + i as usize] = span;
                }
                runs_x.push((j, span));
            }
        }
        for i in 0..nx {
            let is_solid = |j: usize| solid[j * nx + i];
            let cut_after = |j: usize| y_cuts.contains(&(i, j));
            for span in line_runs(ny, is_solid, cut_after)? {
                for j in span.lo..=span.hi {
                    span_y[j as usize * nx + i] = span;
                }
                runs_y.push((i, span));
            }
        }
        Ok(Self {
            nx,
            ny,
            solid,
            span_x,
            span_y,
            runs_x,
            runs_y,
        })
    }

    #[inline]
    pub fn is_solid(&self, i: usize, j: usize) -> bool {
        self.solid[j * self.nx + i]
    }

    pub fn solid_count(&self) -> usize {
        self.solid.iter().filter(|&&s| s).count()
    }

    pub fn fluid_count(&self) -> usize {
        self.nx * self.ny - self.solid_count()
    }

    #[inline]
    pub fn span(&self, i: usize, j: usize, axis: Axis) -> Span {
        match axis {
            Axis::X => self.span_x[j * self.nx + i],
            Axis::Y => self.span_y[j * self.nx + i],
        }
    }

    /// Runs along `axis` as `(line index, span)`: rows for `X`, columns for `Y`.
    pub fn runs(&self, axis: Axis) -> &[(usize, Span)] {
        match axis {
            Axis::X => &self.runs_x,
            Axis::Y => &self.runs_y,
        }
    }

    /// Fluid points in row-major order.
    pub fn fluid_points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
            .filter(move |&(i, j)| !self.is_solid(i, j))
    }

    /// State at position `k` of `line` along `axis`, as seen from inside `span`.
    #[inline]
    pub fn read(&self, field: &Field, axis: Axis, line: usize, span: Span, k: isize) -> ConservedState {
        let (k, mirror) = if k < span.lo && span.lo_wall {
            (2 * span.lo - 1 - k, true)
        } else if k > span.hi && span.hi_wall {
            (2 * span.hi + 1 - k, true)
        } else {
            (k, false)
        };
        let s = match axis {
            Axis::X => field.get(k, line as isize),
            Axis::Y => field.get(line as isize, k),
        };
        if mirror {
            s.reflected(axis)
        } else {
            s
        }
    }

    /// The seven states `k-3..=k+3` around fluid point `(i, j)` along `axis`.
    #[inline]
    pub fn window(&self, field: &Field, i: usize, j: usize, axis: Axis) -> [ConservedState; 7] {
        let span = self.span(i, j, axis);
        let (line, center) = match axis {
            Axis::X => (j, i as isize),
            Axis::Y => (i, j as isize),
        };
        std::array::from_fn(|m| self.read(field, axis, line, span, center + m as isize - 3))
    }

    /// A run padded with `GHOST` states on each side.
    pub fn padded_run(&self, field: &Field, axis: Axis, line: usize, span: Span, out: &mut Vec<ConservedState>) {
        out.clear();
        let g = GHOST as isize;
        out.extend((span.lo - g..=span.hi + g).map(|k| self.read(field, axis, line, span, k)));
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }
}

fn line_runs(
    n: usize,
    is_solid: impl Fn(usize) -> bool,
    cut_after: impl Fn(usize) -> bool,
) -> Result<Vec<Span>> {
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for k in 0..n {
        if is_solid(k) {
            if let Some(s) = start.take() {
                runs.push((s, k - 1));
            }
            continue;
        }
        if start.is_none() {
            start = Some(k);
        }
        if cut_after(k) && k + 1 < n {
            runs.push((start.take().unwrap(), k));
        }
    }
    if let Some(s) = start {
        runs.push((s, n - 1));
    }
    runs.into_iter()
        .map(|(lo, hi)| {
            let span = Span {
                lo: lo as isize,
                hi: hi as isize,
                lo_wall: lo > 0,
                hi_wall: hi + 1 < n,
            };
            if (span.lo_wall || span.hi_wall) && hi + 1 - lo < GHOST {
                return Err(Error::Config(format!(
                    "fluid run {lo}..={hi} is too short to mirror across its wall"
                )));
            }
            Ok(span)
        })
        .collect()
}
