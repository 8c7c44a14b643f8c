//! Steady-state iterations: fixed-point fast sweeping (Gauss–Seidel with four
//! alternating orderings) and third-order SSP Runge–Kutta pseudo-time marching.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spatial::{Discretization, Field};

/// Traversal order of a fast-sweeping iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepOrder {
    /// i increasing, j increasing
    IUpJUp,
    IDownJUp,
    IDownJDown,
    IUpJDown,
}

impl SweepOrder {
    pub const CYCLE: [SweepOrder; 4] = [Self::IUpJUp, Self::IDownJUp, Self::IDownJDown, Self::IUpJDown];

    /// Ordering used by sweep number `n` (0-based).
    pub fn for_sweep(n: usize) -> Self {
        Self::CYCLE[n % 4]
    }

    /// Grid points in traversal order; `j` is the outer loop.
    pub fn points(self, nx: usize, ny: usize) -> impl Iterator<Item = (usize, usize)> {
        let (i_up, j_up) = match self {
            Self::IUpJUp => (true, true),
            Self::IDownJUp => (false, true),
            Self::IDownJDown => (false, false),
            Self::IUpJDown => (true, false),
        };
        (0..ny).flat_map(move |jj| {
            let j = if j_up { jj } else { ny - 1 - jj };
            (0..nx).map(move |ii| (if i_up { ii } else { nx - 1 - ii }, j))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IteratorKind {
    FastSweep,
    Rk3,
}

impl IteratorKind {
    /// Complete grid updates performed by one step: one per Runge–Kutta stage.
    pub fn updates_per_step(self) -> usize {
        match self {
            Self::FastSweep => 1,
            Self::Rk3 => 3,
        }
    }
}

impl fmt::Display for IteratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FastSweep => "fs",
            Self::Rk3 => "rk3",
        })
    }
}

impl FromStr for IteratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fs" | "fast-sweep" => Ok(Self::FastSweep),
            "rk3" | "rk" => Ok(Self::Rk3),
            _ => Err(Error::Config(format!("unknown iterator `{s}` (expected fs or rk3)"))),
        }
    }
}

/// How the characteristic speeds entering the pseudo-time step are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WaveSpeedMode {
    /// `alpha_x = max |u| + c`, `alpha_y = max |v| + c`
    PerAxis,
    /// both set to `max(|u|, |v|) + c` over the grid
    #[default]
    Isotropic,
}

impl WaveSpeedMode {
    pub fn apply(self, (ax, ay): (f64, f64)) -> (f64, f64) {
        match self {
            Self::PerAxis => (ax, ay),
            Self::Isotropic => {
                let a = ax.max(ay);
                (a, a)
            }
        }
    }
}

impl fmt::Display for WaveSpeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PerAxis => "per-axis",
            Self::Isotropic => "isotropic",
        })
    }
}

impl FromStr for WaveSpeedMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "per-axis" => Ok(Self::PerAxis),
            "isotropic" => Ok(Self::Isotropic),
            _ => Err(Error::Config(format!("unknown wave-speed mode `{s}`"))),
        }
    }
}

/// Pseudo-time step `cfl / (alpha_x/dx + alpha_y/dy)`.
pub fn pseudo_dt(alpha_x: f64, alpha_y: f64, dx: f64, dy: f64, cfl: f64) -> f64 {
    cfl / (alpha_x / dx + alpha_y / dy)
}

/// One entry of the residue history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Complete grid updates performed so far.
    pub n: usize,
    pub res_a: f64,
    pub dt: f64,
    /// Accumulated pseudo-time.
    pub t: f64,
    pub cfl: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub cfl: f64,
    pub tol: f64,
    /// Budget in grid updates; `None` uses [`SolveConfig::default_budget`].
    pub max_iters: Option<usize>,
    pub iterator: IteratorKind,
    pub wave_speeds: WaveSpeedMode,
}

impl SolveConfig {
    pub fn new(iterator: IteratorKind, cfl: f64) -> Self {
        Self {
            cfl,
            tol: 1e-12,
            max_iters: None,
            iterator,
            wave_speeds: WaveSpeedMode::default(),
        }
    }

    pub fn default_budget(iterator: IteratorKind, nx: usize, ny: usize) -> usize {
        let n = nx.max(ny);
        match iterator {
            IteratorKind::FastSweep => 500 * n,
            IteratorKind::Rk3 => 2000 * n,
        }
    }

    pub fn budget(&self, nx: usize, ny: usize) -> usize {
        self.max_iters.unwrap_or_else(|| Self::default_budget(self.iterator, nx, ny))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return Err(Error::Config(format!("cfl must be positive, got {}", self.cfl)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == Some(0) {
            return Err(Error::Config("max-iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Converged,
    Stalled,
    Diverged,
    BudgetExceeded,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Converged => "converged",
            Self::Stalled => "stalled",
            Self::Diverged => "not conv",
            Self::BudgetExceeded => "budget exceeded",
        })
    }
}

#[derive(Debug)]
pub struct Solution {
    pub field: Field,
    pub history: Vec<IterationRecord>,
    pub outcome: Outcome,
    /// Per-point residuals `(u_new - u_old) / dt` of the last completed iteration.
    pub residuals: Vec<[f64; 4]>,
    /// The state error that ended a diverged run, if any.
    pub failure: Option<Error>,
}

impl Solution {
    pub fn iterations(&self) -> usize {
        self.history.last().map_or(0, |r| r.n)
    }

    pub fn final_time(&self) -> f64 {
        self.history.last().map_or(0.0, |r| r.t)
    }
}

/// Dissipation speeds and pseudo-time step from the current field.
pub fn frozen_speeds(disc: &Discretization, field: &Field, config: &SolveConfig) -> Result<((f64, f64), f64)> {
    let lambda = config.wave_speeds.apply(disc.max_wave_speeds(field)?);
    let dt = pseudo_dt(lambda.0, lambda.1, disc.grid.dx, disc.grid.dy, config.cfl);
    Ok((lambda, dt))
}

/// Grid-averaged residue over fluid points: mean over points of the mean absolute
/// component residual.
pub fn average_residue(disc: &Discretization, residuals: &[[f64; 4]]) -> f64 {
    let nx = disc.grid.nx;
    let sum: f64 = disc
        .topology
        .fluid_points()
        .map(|(i, j)| {
            let r = &residuals[j * nx + i];
            (r[0].abs() + r[1].abs() + r[2].abs() + r[3].abs()) / 4.0
        })
        .sum();
    sum / disc.topology.fluid_count() as f64
}

/// One Gauss–Seidel sweep in `order`; `visit` sees every updated point in turn.
/// Returns the pseudo-time step used; residuals are written row-major.
pub fn fast_sweep_iteration_observed(
    disc: &Discretization,
    field: &mut Field,
    config: &SolveConfig,
    order: SweepOrder,
    residuals: &mut Vec<[f64; 4]>,
    mut visit: impl FnMut(usize, usize),
) -> Result<f64> {
    let (nx, ny) = (disc.grid.nx, disc.grid.ny);
    let gas = disc.scheme.gas;
    disc.fill_ghosts(field)?;
    let (lambda, dt) = frozen_speeds(disc, field, config)?;
    residuals.clear();
    residuals.resize(nx * ny, [0.0; 4]);
    for (i, j) in order.points(nx, ny) {
        if disc.topology.is_solid(i, j) {
            continue;
        }
        visit(i, j);
        let (ii, jj) = (i as isize, j as isize);
        let old = field.get(ii, jj);
        let l = disc.operator_at(field, i, j, lambda)?;
        let u = old.to_array();
        let new = std::array::from_fn(|k| u[k] + dt * l[k]);
        let new = crate::euler::ConservedState::from_array(new);
        new.to_primitive(&gas).map_err(|e| e.at(ii, jj))?;
        field.set(ii, jj, new);
        if let Some(fix) = &disc.corner_fix {
            fix.apply_at(field, i, j, &gas)?;
        }
        let new = field.get(ii, jj).to_array();
        residuals[j * nx + i] = std::array::from_fn(|k| (new[k] - u[k]) / dt);
    }
    Ok(dt)
}

pub fn fast_sweep_iteration(
    disc: &Discretization,
    field: &mut Field,
    config: &SolveConfig,
    order: SweepOrder,
    residuals: &mut Vec<[f64; 4]>,
) -> Result<f64> {
    fast_sweep_iteration_observed(disc, field, config, order, residuals, |_, _| {})
}

/// Scratch buffers reused across Runge–Kutta steps.
#[derive(Debug, Default)]
pub struct Rk3Workspace {
    stage: Option<Field>,
    l0: Vec<[f64; 4]>,
    l1: Vec<[f64; 4]>,
    l2: Vec<[f64; 4]>,
}

/// One SSP-RK3 step. Stages are written in increment form,
/// `u2 = u + dt/4 (L0 + L1)`, `u3 = u + dt/6 (L0 + L1 + 4 L2)`, which equals the
/// convex-combination form in exact arithmetic and leaves a fixed point bitwise
/// unchanged.
pub fn rk3_iteration(
    disc: &Discretization,
    field: &mut Field,
    config: &SolveConfig,
    residuals: &mut Vec<[f64; 4]>,
    work: &mut Rk3Workspace,
) -> Result<f64> {
    let (nx, ny) = (disc.grid.nx, disc.grid.ny);
    let gas = disc.scheme.gas;
    disc.fill_ghosts(field)?;
    let (lambda, dt) = frozen_speeds(disc, field, config)?;
    let stage = work.stage.get_or_insert_with(|| field.clone());

    let fluid: Vec<(usize, usize)> = disc.topology.fluid_points().collect();
    let write_stage = |stage: &mut Field, f: &dyn Fn(usize) -> [f64; 4]| -> Result<()> {
        for &(i, j) in &fluid {
            let (ii, jj) = (i as isize, j as isize);
            let s = crate::euler::ConservedState::from_array(f(j * nx + i));
            s.to_primitive(&gas).map_err(|e| e.at(ii, jj))?;
            stage.set(ii, jj, s);
        }
        if let Some(fix) = &disc.corner_fix {
            fix.apply(stage, &gas)?;
        }
        Ok(())
    };

    disc.operator_field(field, lambda, &mut work.l0)?;
    stage.clone_from(field);
    let l0 = &work.l0;
    write_stage(stage, &|idx| {
        let (i, j) = (idx % nx, idx / nx);
        let u = field.get(i as isize, j as isize).to_array();
        std::array::from_fn(|k| u[k] + dt * l0[idx][k])
    })?;

    disc.fill_ghosts(stage)?;
    disc.operator_field(stage, lambda, &mut work.l1)?;
    let l1 = &work.l1;
    write_stage(stage, &|idx| {
        let (i, j) = (idx % nx, idx / nx);
        let u = field.get(i as isize, j as isize).to_array();
        std::array::from_fn(|k| u[k] + dt / 4.0 * (l0[idx][k] + l1[idx][k]))
    })?;

    disc.fill_ghosts(stage)?;
    disc.operator_field(stage, lambda, &mut work.l2)?;
    let l2 = &work.l2;
    write_stage(stage, &|idx| {
        let (i, j) = (idx % nx, idx / nx);
        let u = field.get(i as isize, j as isize).to_array();
        std::array::from_fn(|k| u[k] + dt / 6.0 * (l0[idx][k] + l1[idx][k] + 4.0 * l2[idx][k]))
    })?;

    residuals.clear();
    residuals.resize(nx * ny, [0.0; 4]);
    for &(i, j) in &fluid {
        let (ii, jj) = (i as isize, j as isize);
        let old = field.get(ii, jj).to_array();
        let new = stage.get(ii, jj);
        let a = new.to_array();
        residuals[j * nx + i] = std::array::from_fn(|k| (a[k] - old[k]) / dt);
        field.set(ii, jj, new);
    }
    Ok(dt)
}

/// Growth of the first residue beyond which a run counts as diverged.
const DIVERGENCE_FACTOR: f64 = 1e6;
/// Trailing fraction of the budget over which the running minimum must fall.
const STALL_WINDOW: f64 = 0.2;
/// Required decrease of the running minimum over the stall window.
const STALL_DECREASE: f64 = 10.0;

fn is_state_error(e: &Error) -> bool {
    matches!(e, Error::InvalidState { .. })
}

/// Iterate from `field` until the residue drops below `tol`, the run diverges or
/// stalls, or the budget is spent. `observe` sees every history record together
/// with the field it describes.
pub fn solve_observed(
    disc: &Discretization,
    mut field: Field,
    config: &SolveConfig,
    mut observe: impl FnMut(&IterationRecord, &Field),
) -> Result<Solution> {
    config.validate()?;
    let budget = config.budget(disc.grid.nx, disc.grid.ny);
    let window = ((budget as f64 * STALL_WINDOW) as usize).max(1);
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut running_min: Vec<f64> = Vec::new();
    let mut residuals = Vec::new();
    let mut work = Rk3Workspace::default();
    let mut t = 0.0;
    let mut n = 0;
    let mut sweep = 0;
    let mut failure = None;

    let outcome = loop {
        let step = match config.iterator {
            IteratorKind::FastSweep => {
                fast_sweep_iteration(disc, &mut field, config, SweepOrder::for_sweep(sweep), &mut residuals)
            }
            IteratorKind::Rk3 => rk3_iteration(disc, &mut field, config, &mut residuals, &mut work),
        };
        let dt = match step {
            Ok(dt) => dt,
            Err(e) if is_state_error(&e) => {
                failure = Some(e);
                break Outcome::Diverged;
            }
            Err(e) => return Err(e),
        };
        sweep += 1;
        n += config.iterator.updates_per_step();
        t += dt;
        let res_a = average_residue(disc, &residuals);
        let record = IterationRecord {
            n,
            res_a,
            dt,
            t,
            cfl: config.cfl,
        };
        history.push(record);
        observe(&record, &field);
        let min = running_min.last().map_or(res_a, |&m: &f64| m.min(res_a));
        running_min.push(min);

        if !res_a.is_finite() || res_a > DIVERGENCE_FACTOR * history[0].res_a {
            break Outcome::Diverged;
        }
        if res_a < config.tol {
            break Outcome::Converged;
        }
        if n >= window {
            // running minimum at the last record no later than n - window
            let k = history.partition_point(|r| r.n <= n - window);
            let earlier = if k == 0 { f64::INFINITY } else { running_min[k - 1] };
            if min > earlier / STALL_DECREASE {
                break Outcome::Stalled;
            }
        }
        if n >= budget {
            break Outcome::BudgetExceeded;
        }
    };
    Ok(Solution {
        field,
        history,
        outcome,
        residuals,
        failure,
    })
}

pub fn solve(disc: &Discretization, field: Field, config: &SolveConfig) -> Result<Solution> {
    solve_observed(disc, field, config, |_, _| {})
}
