//! Benchmark cases: smooth periodic-like flow with an exact solution, regular shock
//! reflection, supersonic flow past a flat plate, and the Mach 3 forward-facing step.

use std::f64::consts::PI;

use crate::aweno::FluxScheme;
use crate::error::{Error, Result};
use crate::euler::PrimitiveState;
use crate::spatial::{BoundarySpec, CornerFix, Discretization, EdgeCondition, Field, Grid2D, Obstacle};

pub const CASE_NAMES: [&str; 4] = ["smooth", "shock-reflection", "plate", "forward-step"];

#[derive(Debug, Clone)]
pub struct ProblemCase {
    pub name: &'static str,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub default_grid: (usize, usize),
    pub initial: fn(f64, f64) -> PrimitiveState,
    pub boundary: BoundarySpec,
    pub exact: Option<fn(f64, f64) -> PrimitiveState>,
    pub obstacles: Vec<Obstacle>,
}

impl ProblemCase {
    pub fn grid(&self, nx: usize, ny: usize) -> Result<Grid2D> {
        Grid2D::new(nx, ny, self.x_range, self.y_range)
    }

    pub fn default_grid(&self) -> Result<Grid2D> {
        self.grid(self.default_grid.0, self.default_grid.1)
    }

    pub fn discretization(&self, grid: Grid2D, scheme: FluxScheme) -> Result<Discretization> {
        let mut disc = Discretization::with_obstacles(grid, self.boundary, scheme, &self.obstacles)?;
        for obstacle in &self.obstacles {
            if let Obstacle::ForwardStep { corner_x, height } = *obstacle {
                disc.corner_fix = Some(step_corner_fix(&grid, corner_x, height)?);
            }
        }
        Ok(disc)
    }

    /// Initial field with ghosts filled. Solid points hold the initial state too.
    pub fn initial_field(&self, disc: &Discretization) -> Result<Field> {
        let mut field = Field::from_fn(&disc.grid, &disc.scheme.gas, self.initial)?;
        disc.fill_ghosts(&mut field)?;
        Ok(field)
    }
}

/// Reference point just upstream of and below the corner; targets are the fluid
/// points touching the corner on the step top.
fn step_corner_fix(grid: &Grid2D, corner_x: f64, height: f64) -> Result<CornerFix> {
    let ic = (0..grid.nx).find(|&i| grid.x(i as isize) > corner_x);
    let jc = (0..grid.ny).find(|&j| grid.y(j as isize) > height);
    match (ic, jc) {
        (Some(ic), Some(jc)) if ic >= 1 && jc >= 1 && ic + 1 < grid.nx && jc + 1 < grid.ny => Ok(CornerFix {
            reference: (ic - 1, jc - 1),
            targets: vec![(ic, jc), (ic + 1, jc), (ic, jc + 1)],
        }),
        _ => Err(Error::Config(format!(
            "step corner ({corner_x}, {height}) does not leave fluid on both sides"
        ))),
    }
}

pub fn smooth_exact(x: f64, y: f64) -> PrimitiveState {
    PrimitiveState::new(1.0 + 0.2 * (x - y).sin(), 1.0, 1.0, 1.0)
}

pub fn case_smooth() -> ProblemCase {
    ProblemCase {
        name: "smooth",
        x_range: (0.0, 2.0 * PI),
        y_range: (0.0, 2.0 * PI),
        default_grid: (20, 20),
        initial: smooth_exact,
        boundary: BoundarySpec::uniform(EdgeCondition::ExactFunction(smooth_exact)),
        exact: Some(smooth_exact),
        obstacles: Vec::new(),
    }
}

pub const SHOCK_LEFT: PrimitiveState = PrimitiveState::new(1.0, 2.9, 0.0, 5.0 / 7.0);
pub const SHOCK_TOP: PrimitiveState = PrimitiveState::new(1.69997, 2.61934, -0.50632, 1.52819);

pub fn case_shock_reflection() -> ProblemCase {
    ProblemCase {
        name: "shock-reflection",
        x_range: (0.0, 4.0),
        y_range: (0.0, 1.0),
        default_grid: (120, 30),
        initial: |_, _| SHOCK_LEFT,
        boundary: BoundarySpec {
            left: EdgeCondition::Dirichlet(SHOCK_LEFT),
            right: EdgeCondition::SupersonicOutflow,
            bottom: EdgeCondition::ReflectiveWall,
            top: EdgeCondition::Dirichlet(SHOCK_TOP),
        },
        exact: None,
        obstacles: Vec::new(),
    }
}

pub const PLATE_MACH: f64 = 3.0;
pub const PLATE_ATTACK_DEG: f64 = 10.0;

pub fn plate_freestream() -> PrimitiveState {
    let a = PLATE_ATTACK_DEG.to_radians();
    PrimitiveState::new(1.0, a.cos(), a.sin(), 1.0 / (1.4 * PLATE_MACH * PLATE_MACH))
}

pub fn case_plate() -> ProblemCase {
    let free = plate_freestream();
    ProblemCase {
        name: "plate",
        x_range: (0.0, 10.0),
        y_range: (-5.0, 5.0),
        default_grid: (200, 200),
        initial: |_, _| plate_freestream(),
        boundary: BoundarySpec {
            left: EdgeCondition::Dirichlet(free),
            right: EdgeCondition::SupersonicOutflow,
            bottom: EdgeCondition::Dirichlet(free),
            top: EdgeCondition::Dirichlet(free),
        },
        exact: None,
        obstacles: vec![Obstacle::ThinPlate {
            y: 0.0,
            x_start: 1.0,
            x_end: 2.0,
        }],
    }
}

pub const STEP_INFLOW: PrimitiveState = PrimitiveState::new(1.4, 3.0, 0.0, 1.0);

pub fn case_forward_step() -> ProblemCase {
    ProblemCase {
        name: "forward-step",
        x_range: (0.0, 3.0),
        y_range: (0.0, 1.0),
        default_grid: (90, 30),
        initial: |_, _| STEP_INFLOW,
        boundary: BoundarySpec {
            left: EdgeCondition::Dirichlet(STEP_INFLOW),
            right: EdgeCondition::SupersonicOutflow,
            bottom: EdgeCondition::ReflectiveWall,
            top: EdgeCondition::ReflectiveWall,
        },
        exact: None,
        obstacles: vec![Obstacle::ForwardStep {
            corner_x: 0.6,
            height: 0.2,
        }],
    }
}

pub fn case_by_name(name: &str) -> Result<ProblemCase> {
    match name {
        "smooth" => Ok(case_smooth()),
        "shock-reflection" => Ok(case_shock_reflection()),
        "plate" => Ok(case_plate()),
        "forward-step" => Ok(case_forward_step()),
        _ => Err(Error::Config(format!(
            "unknown case `{name}` (expected one of {})",
            CASE_NAMES.join(", ")
        ))),
    }
}
