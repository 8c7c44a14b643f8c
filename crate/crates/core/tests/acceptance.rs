//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! `ACCEPTANCE_ONLY=1,8` restricts the run to the listed criteria.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use fsaweno::aweno::{interface_flux, FluxScheme};
use fsaweno::cli::{accuracy_table, execute, RunConfig, RunSummary};
use fsaweno::euler::{flux, Axis, GasModel, PrimitiveState};
use fsaweno::interpolation::{
    detect_troubled, interp_es, interp_minus_plus, interp_us_linear, interp_us_weno, interpolate, smoothness_us,
    weights_us, InterpKind, StencilWindow, WenoParams,
};
use fsaweno::iterate::{fast_sweep_iteration_observed, solve, IteratorKind, Outcome, SolveConfig, SweepOrder};
use fsaweno::riemann::{numerical_flux, FluxKind};
use fsaweno::spatial::{BoundarySpec, Discretization, EdgeCondition, Field, Grid2D};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const TOL: f64 = 1e-12;

// smooth case
const L1_AT_40: f64 = 1.18e-6;
const L1_FACTOR: f64 = 2.0;
const MIN_ORDER: f64 = 4.5;
const HLLC_TO_LLF: f64 = 0.6;

// shock reflection, iteration counts by CFL
const SHOCK_FS_LLF: [(f64, usize); 3] = [(0.6, 1755), (0.7, 1487), (0.8, 1290)];
const SHOCK_FS_HLLC_CFLS: [f64; 4] = [0.6, 0.7, 0.8, 0.9];
const SHOCK_RK_LLF: [(f64, usize); 5] = [(0.6, 5607), (0.7, 4806), (0.8, 4203), (0.9, 3735), (1.0, 3363)];
const SHOCK_COUNT_CFL: f64 = 0.8;
const SHOCK_FS_AT_COUNT_CFL: usize = 1290;

const COUNT_TOLERANCE: f64 = 0.25;
const FS_TO_RK: f64 = 0.45;

// forward step at CFL 0.4
const STEP_CFL: f64 = 0.4;
const STEP_FS: usize = 30396;
const STEP_RK: usize = 110421;
/// Budget as a multiple of the expected count, so a slow run is measured rather
/// than cut off.
const STEP_BUDGET_FACTOR: usize = 4;

const HYBRID_CFL_SHOCK: f64 = 0.6;
const HYBRID_CFL_PLATE: f64 = 0.5;
const PLATE_SMOKE: usize = 100;
const HYBRID_COUNT_TOLERANCE: f64 = 0.05;

const PLATE_CFL: f64 = 1.0;
const PLATE_FULL: usize = 200;
const PLATE_COUNT: usize = 1248;

const ES_STALL_CFL: f64 = 0.6;

struct Gate {
    only: Option<BTreeSet<u32>>,
    failed: Vec<u32>,
}

impl Gate {
    fn wants(&self, id: u32) -> bool {
        self.only.as_ref().is_none_or(|s| s.contains(&id))
    }

    fn report(&mut self, id: u32, name: &str, pass: bool, detail: &str) {
        println!("{} {id}. {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id);
        }
    }
}

fn config(case: &str, interp: InterpKind, flux: FluxKind, iterator: IteratorKind, cfl: f64) -> RunConfig {
    RunConfig::new(case, interp, flux, iterator, cfl)
}

fn run(c: &RunConfig) -> RunSummary {
    let s = execute(c, |_, _, _| {}).expect("solve runs").summary;
    println!(
        "    {} {}x{} {} cfl={}: {} after {} (ResA {:.2e}, {:.1} s)",
        s.case, s.nx, s.ny, s.label, s.cfl, s.outcome, s.iterations, s.res_a, s.seconds
    );
    s
}

fn within(count: usize, reference: usize, tol: f64) -> bool {
    (count as f64 - reference as f64).abs() <= tol * reference as f64
}

fn converged(s: &RunSummary) -> bool {
    s.outcome == Outcome::Converged && s.res_a < TOL
}

/// Least-squares slope of `-ln e` against `ln n`.
fn fitted_order(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.1.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn physical_state() -> impl Strategy<Value = PrimitiveState> {
    (0.1f64..5.0, -4.0f64..4.0, -4.0f64..4.0, 0.05f64..5.0).prop_map(|(r, u, v, p)| PrimitiveState::new(r, u, v, p))
}

fn window() -> impl Strategy<Value = [f64; 5]> {
    prop::array::uniform5(-2.0f64..2.0)
}

fn magnitude(u: &[f64]) -> f64 {
    1.0 + u.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn property_suites() -> Vec<(&'static str, Result<(), String>)> {
    let gas = GasModel::default();
    let p = WenoParams::default();
    let mut out = Vec::new();

    out.push((
        "flux consistency",
        property(200, (physical_state(), any::<bool>()), |(w, y)| {
            let axis = if y { Axis::Y } else { Axis::X };
            let u = w.to_conserved(&gas).unwrap();
            let f = flux(&u, axis, &gas).unwrap();
            let scale = magnitude(&f);
            for kind in [FluxKind::Llf, FluxKind::Hllc] {
                let h = numerical_flux(kind, &u, &u, None, axis, &gas).unwrap();
                ensure(h.iter().zip(&f).all(|(a, b)| (a - b).abs() <= 1e-13 * scale), || format!("{kind}: {h:?} vs {f:?}"))?;
                let line = vec![u; 6];
                let g = interface_flux(&line, 2, 0.05, axis, 10.0, &FluxScheme::new(InterpKind::HybridUs, kind)).unwrap().0;
                ensure(g.iter().zip(&f).all(|(a, b)| (a - b).abs() <= 1e-13 * scale), || format!("aweno {kind}: {g:?}"))?;
            }
            Ok(())
        }),
    ));

    out.push((
        "linear and quartic reproduction",
        property(100, (prop::array::uniform5(-1.0f64..1.0), -2.0f64..2.0, -2.0f64..2.0), |(c, a, b)| {
            let quartic: [f64; 5] = std::array::from_fn(|m| common::eval(&c, m as f64 - 2.0));
            let exact = common::eval(&c, 0.5);
            let got = interp_us_linear(&StencilWindow(quartic));
            ensure((got - exact).abs() < 1e-13 * magnitude(&quartic), || format!("quartic {got} vs {exact}"))?;
            let line: [f64; 5] = std::array::from_fn(|m| a + b * (m as f64 - 2.0));
            let w = StencilWindow(line);
            for kind in [InterpKind::LinearUs, InterpKind::WenoUs, InterpKind::WenoEs, InterpKind::HybridUs] {
                let v = interpolate(kind, &w, &p);
                ensure((v - (a + 0.5 * b)).abs() < 1e-12 * magnitude(&line), || format!("{kind} on linear data: {v}"))?;
            }
            Ok(())
        }),
    ));

    out.push((
        "weight convexity",
        property(100, window(), |u| {
            let w = weights_us(&smoothness_us(&StencilWindow(u)), &p);
            ensure(w.iter().all(|&x| x > 0.0) && (w.iter().sum::<f64>() - 1.0).abs() < 1e-14, || format!("{w:?}"))
        }),
    ));

    out.push((
        "mirror symmetry",
        property(100, prop::array::uniform7(-2.0f64..2.0), |line| {
            let rev: Vec<f64> = line.iter().rev().copied().collect();
            for kind in [InterpKind::WenoUs, InterpKind::WenoEs, InterpKind::HybridUs] {
                let (m, pl) = interp_minus_plus(&line, 3, kind, &p).unwrap();
                let (m2, p2) = interp_minus_plus(&rev, 2, kind, &p).unwrap();
                ensure(m == p2 && pl == m2, || format!("{kind}: ({m}, {pl}) vs ({m2}, {p2})"))?;
            }
            Ok(())
        }),
    ));

    out.push((
        "detector affine invariance",
        property(100, (window(), 0.1f64..10.0, -5.0f64..5.0, any::<bool>()), |(u, a, b, flip)| {
            let curv = [u[0] - 2.0 * u[1] + u[2], u[1] - 2.0 * u[2] + u[3], u[2] - 2.0 * u[3] + u[4]];
            if curv.iter().any(|c| c.abs() <= 1e-6) {
                return Ok(());
            }
            let s = if flip { -a } else { a };
            let mapped = StencilWindow(u.map(|x| s * x + b));
            ensure(detect_troubled(&StencilWindow(u)) == detect_troubled(&mapped), || format!("{u:?} {s} {b}"))
        }),
    ));

    out.push((
        "discrete conservation",
        property(50, prop::array::uniform32(0.0f64..1.0), |seed| {
            let (nx, ny) = (8, 6);
            let grid = Grid2D::new(nx, ny, (0.0, 1.0), (0.0, 0.75)).unwrap();
            let scheme = FluxScheme::new(InterpKind::HybridUs, FluxKind::Hllc);
            let disc = Discretization::new(grid, BoundarySpec::uniform(EdgeCondition::ReflectiveWall), scheme).unwrap();
            let mut field = Field::uniform(nx, ny, Default::default());
            for j in 0..ny {
                for i in 0..nx {
                    let s = seed[(j * nx + i) % 32];
                    let w = PrimitiveState::new(1.0 + 0.3 * s, 0.4 * (s - 0.5), 0.2 * (0.5 - s), 1.0 + 0.5 * s * s);
                    field.set(i as isize, j as isize, w.to_conserved(&gas).unwrap());
                }
            }
            disc.fill_ghosts(&mut field).unwrap();
            let mut l = Vec::new();
            disc.operator_field(&field, (2.0, 2.0), &mut l).unwrap();
            for c in [0, 3] {
                let total: f64 = l.iter().map(|x| x[c]).sum();
                let scale: f64 = l.iter().map(|x| x[c].abs()).sum::<f64>().max(1.0);
                ensure(total.abs() < 1e-12 * scale, || format!("component {c}: {total}"))?;
            }
            Ok(())
        }),
    ));

    out.push(("fixed-point preservation", fixed_points()));
    out.push(("sweep-order cycling", sweep_cycle()));

    out.push((
        "brute-force interpolation",
        property(100, window(), |u| {
            let w = StencilWindow(u);
            let (us, es) = (interp_us_weno(&w, &p), interp_es(&w, &p));
            let (us_ref, es_ref) = (common::oracle_us(u, &p), common::oracle_es(u, &p));
            let scale = magnitude(&u);
            ensure((us - us_ref).abs() <= 1e-12 * scale, || format!("unequal-sized {us} vs {us_ref}"))?;
            ensure((es - es_ref).abs() <= 1e-12 * scale, || format!("equal-sized {es} vs {es_ref}"))
        }),
    ));
    out
}

fn channel(nx: usize, ny: usize, scheme: FluxScheme) -> (Discretization, Field) {
    let free = PrimitiveState::new(1.0, 2.9, 0.0, 5.0 / 7.0);
    let grid = Grid2D::new(nx, ny, (0.0, 1.0), (0.0, 0.5)).unwrap();
    let spec = BoundarySpec {
        left: EdgeCondition::Dirichlet(free),
        right: EdgeCondition::SupersonicOutflow,
        bottom: EdgeCondition::ReflectiveWall,
        top: EdgeCondition::ReflectiveWall,
    };
    let disc = Discretization::new(grid, spec, scheme).unwrap();
    let mut field = Field::uniform(nx, ny, free.to_conserved(&scheme.gas).unwrap());
    disc.fill_ghosts(&mut field).unwrap();
    (disc, field)
}

fn fixed_points() -> Result<(), String> {
    for interp in [InterpKind::HybridUs, InterpKind::WenoUs, InterpKind::WenoEs] {
        for flux in [FluxKind::Llf, FluxKind::Hllc] {
            let (disc, start) = channel(9, 5, FluxScheme::new(interp, flux));
            for iterator in [IteratorKind::FastSweep, IteratorKind::Rk3] {
                let mut c = SolveConfig::new(iterator, 0.9);
                c.max_iters = Some(30);
                let sol = solve(&disc, start.clone(), &c).map_err(|e| e.to_string())?;
                let same = sol.field.interior().zip(start.interior()).all(|(a, b)| a == b);
                if sol.outcome != Outcome::Converged || sol.history[0].res_a != 0.0 || !same {
                    return Err(format!("{interp} {flux} {iterator}: {} with ResA {}", sol.outcome, sol.history[0].res_a));
                }
            }
        }
    }
    Ok(())
}

fn sweep_cycle() -> Result<(), String> {
    let (disc, mut field) = channel(5, 4, FluxScheme::new(InterpKind::HybridUs, FluxKind::Llf));
    let c = SolveConfig::new(IteratorKind::FastSweep, 0.5);
    let expected = [((0, 0), (4, 3)), ((4, 0), (0, 3)), ((4, 3), (0, 0)), ((0, 3), (4, 0))];
    let mut residuals = Vec::new();
    for n in 0..8 {
        let mut seen = Vec::new();
        fast_sweep_iteration_observed(&disc, &mut field, &c, SweepOrder::for_sweep(n), &mut residuals, |i, j| {
            seen.push((i, j))
        })
        .map_err(|e| e.to_string())?;
        let ends = (seen[0], seen[seen.len() - 1]);
        if seen.len() != 20 || ends != expected[n % 4] {
            return Err(format!("sweep {n}: {} points from {:?} to {:?}", seen.len(), ends.0, ends.1));
        }
    }
    Ok(())
}

/// Shock-reflection FS runs shared by the convergence, count and cost criteria.
struct ShockRuns {
    llf: Vec<RunSummary>,
    hllc: Vec<RunSummary>,
}

fn shock_runs() -> ShockRuns {
    let fs = |flux, cfl| run(&config("shock-reflection", InterpKind::HybridUs, flux, IteratorKind::FastSweep, cfl));
    ShockRuns {
        llf: SHOCK_FS_LLF.iter().map(|&(cfl, _)| fs(FluxKind::Llf, cfl)).collect(),
        hllc: SHOCK_FS_HLLC_CFLS.iter().map(|&cfl| fs(FluxKind::Hllc, cfl)).collect(),
    }
}

fn list(runs: &[RunSummary]) -> String {
    runs.iter()
        .map(|s| format!("{}:{}", s.cfl, if converged(s) { s.iterations.to_string() } else { s.outcome.to_string() }))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let only = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let mut gate = Gate { only, failed: Vec::new() };
    let start = Instant::now();

    if gate.wants(8) {
        let results = property_suites();
        for (name, r) in &results {
            println!("    {name}: {}", r.as_ref().map_or_else(|e| format!("failed: {e}"), |_| "ok".into()));
        }
        let failed: Vec<&str> = results.iter().filter(|r| r.1.is_err()).map(|r| r.0).collect();
        let detail = if failed.is_empty() {
            format!("{} suites hold", results.len())
        } else {
            format!("failing: {}", failed.join(", "))
        };
        gate.report(8, "property suites", failed.is_empty(), &detail);
    }

    if gate.wants(1) || gate.wants(2) {
        let llf = config("smooth", InterpKind::HybridUs, FluxKind::Llf, IteratorKind::FastSweep, 1.0);
        let rows = accuracy_table(&llf, &[20, 30, 40, 50, 60, 70, 80]).expect("table runs");
        for r in &rows {
            println!("    smooth {0}x{0}: L1 {1:.3e} after {2} ({3})", r.n, r.l1, r.iterations, r.outcome);
        }
        let all_converged = rows.iter().all(|r| r.outcome == Outcome::Converged);
        if gate.wants(1) {
            let tail: Vec<(usize, f64)> = rows[rows.len() - 4..].iter().map(|r| (r.n, r.l1)).collect();
            let order = fitted_order(&tail);
            let l1_40 = rows.iter().find(|r| r.n == 40).unwrap().l1;
            let ratio = l1_40 / L1_AT_40;
            let pass = all_converged && order >= MIN_ORDER && (1.0 / L1_FACTOR..=L1_FACTOR).contains(&ratio);
            let detail = format!("order {order:.2} over 50..80, L1(40x40) {l1_40:.3e} ({ratio:.2}x reference)");
            gate.report(1, "fifth-order accuracy", pass, &detail);
        }
        if gate.wants(2) {
            let mut hllc = llf.clone();
            hllc.flux = FluxKind::Hllc;
            let h = accuracy_table(&hllc, &[80]).expect("table runs");
            let l = rows.last().unwrap();
            let ratio = h[0].l1 / l.l1;
            let pass = all_converged && h[0].outcome == Outcome::Converged && ratio <= HLLC_TO_LLF;
            let detail = format!("80x80 L1 HLLC {:.3e} vs LLF {:.3e}, ratio {ratio:.2}", h[0].l1, l.l1);
            gate.report(2, "HLLC dissipates less than LLF", pass, &detail);
        }
    }

    let shock = (gate.wants(3) || gate.wants(5) || gate.wants(6)).then(shock_runs);

    if let (true, Some(sh)) = (gate.wants(3), &shock) {
        let at_count = sh.llf.iter().find(|s| s.cfl == SHOCK_COUNT_CFL).unwrap();
        let all = sh.llf.iter().chain(&sh.hllc).all(converged);
        let count_ok = converged(at_count) && within(at_count.iterations, SHOCK_FS_AT_COUNT_CFL, COUNT_TOLERANCE);
        let detail = format!(
            "LLF [{}], HLLC [{}], reference {SHOCK_FS_AT_COUNT_CFL} at {SHOCK_COUNT_CFL}",
            list(&sh.llf),
            list(&sh.hllc)
        );
        gate.report(3, "absolute convergence on shock reflection", all && count_ok, &detail);
    }

    if gate.wants(6) {
        let sh = shock.as_ref().unwrap();
        let hyb_shock = sh.llf.iter().find(|s| s.cfl == HYBRID_CFL_SHOCK).unwrap().clone();
        let us_shock = run(&config("shock-reflection", InterpKind::WenoUs, FluxKind::Llf, IteratorKind::FastSweep, HYBRID_CFL_SHOCK));
        let plate = |interp| {
            let mut c = config("plate", interp, FluxKind::Llf, IteratorKind::FastSweep, HYBRID_CFL_PLATE);
            c.grid = Some((PLATE_SMOKE, PLATE_SMOKE));
            run(&c)
        };
        let (hyb_plate, us_plate) = (plate(InterpKind::HybridUs), plate(InterpKind::WenoUs));
        let mut pass = true;
        let mut parts = Vec::new();
        for (name, h, u) in [("shock", &hyb_shock, &us_shock), ("plate", &hyb_plate, &us_plate)] {
            let ok = converged(h)
                && converged(u)
                && within(h.iterations, u.iterations, HYBRID_COUNT_TOLERANCE)
                && h.seconds <= u.seconds;
            pass &= ok;
            parts.push(format!(
                "{name} {} its {:.1} s vs {} its {:.1} s",
                h.iterations, h.seconds, u.iterations, u.seconds
            ));
        }
        gate.report(6, "hybrid is cheaper than full WENO", pass, &parts.join("; "));
    }

    if gate.wants(4) {
        let mut stalled = true;
        let mut parts = Vec::new();
        for flux in [FluxKind::Llf, FluxKind::Hllc] {
            let s = run(&config("shock-reflection", InterpKind::WenoEs, flux, IteratorKind::Rk3, ES_STALL_CFL));
            stalled &= s.outcome == Outcome::Stalled && s.res_a > TOL;
            parts.push(format!("{flux}: {} at ResA {:.2e}", s.outcome, s.res_a));
        }
        gate.report(4, "equal-sized WENO with RK stalls", stalled, &parts.join(", "));
    }

    if gate.wants(5) {
        let sh = shock.as_ref().unwrap();
        let mut parts = Vec::new();
        let mut pass = true;

        // largest CFL at which both iterations converge, searched downwards
        let mut mutual = None;
        for (fs, &(cfl, fs_ref)) in sh.llf.iter().zip(&SHOCK_FS_LLF).rev() {
            if !converged(fs) {
                continue;
            }
            let rk_ref = SHOCK_RK_LLF.iter().find(|r| r.0 == cfl).unwrap().1;
            let rk = run(&config("shock-reflection", InterpKind::HybridUs, FluxKind::Llf, IteratorKind::Rk3, cfl));
            if converged(&rk) {
                mutual = Some((cfl, fs.iterations, fs_ref, rk.iterations, rk_ref));
                break;
            }
        }
        match mutual {
            Some((cfl, fs, fs_ref, rk, rk_ref)) => {
                let ok = fs as f64 <= FS_TO_RK * rk as f64
                    && within(fs, fs_ref, COUNT_TOLERANCE)
                    && within(rk, rk_ref, COUNT_TOLERANCE)
                    && cfl == SHOCK_COUNT_CFL;
                pass &= ok;
                parts.push(format!("shock at {cfl}: FS {fs} (ref {fs_ref}) vs RK {rk} (ref {rk_ref})"));
            }
            None => {
                pass = false;
                parts.push("shock: no mutually convergent CFL".into());
            }
        }

        let step = |iterator, reference: usize| {
            let mut c = config("forward-step", InterpKind::HybridUs, FluxKind::Llf, iterator, STEP_CFL);
            c.solve.max_iters = Some(STEP_BUDGET_FACTOR * reference);
            run(&c)
        };
        let (fs, rk) = (step(IteratorKind::FastSweep, STEP_FS), step(IteratorKind::Rk3, STEP_RK));
        let ok = converged(&fs)
            && converged(&rk)
            && fs.iterations as f64 <= FS_TO_RK * rk.iterations as f64
            && within(fs.iterations, STEP_FS, COUNT_TOLERANCE)
            && within(rk.iterations, STEP_RK, COUNT_TOLERANCE);
        pass &= ok;
        parts.push(format!(
            "step at {STEP_CFL}: FS {} {} (ref {STEP_FS}) vs RK {} {} (ref {STEP_RK})",
            fs.outcome, fs.iterations, rk.outcome, rk.iterations
        ));
        gate.report(5, "fast sweeping needs fewer iterations", pass, &parts.join("; "));
    }

    if gate.wants(7) {
        let plate = |n| {
            let mut c = config("plate", InterpKind::HybridUs, FluxKind::Llf, IteratorKind::FastSweep, PLATE_CFL);
            c.grid = Some((n, n));
            run(&c)
        };
        let smoke = plate(PLATE_SMOKE);
        let full = plate(PLATE_FULL);
        let pass = converged(&smoke) && converged(&full) && within(full.iterations, PLATE_COUNT, COUNT_TOLERANCE);
        let detail = format!(
            "{PLATE_SMOKE}x{PLATE_SMOKE}: {} {}; {PLATE_FULL}x{PLATE_FULL}: {} {} (ref {PLATE_COUNT})",
            smoke.outcome, smoke.iterations, full.outcome, full.iterations
        );
        gate.report(7, "plate absolute convergence", pass, &detail);
    }

    println!("acceptance finished in {:.0} s", start.elapsed().as_secs_f64());
    if gate.failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {:?}", gate.failed);
        ExitCode::FAILURE
    }
}
