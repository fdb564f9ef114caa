//! Test catalog, scheme labels, error norms, EOC tables and the CPU-ratio
//! benchmark methodology.
//!
//! The thirteen cases cover a composite linear-advection profile, a
//! breaking Burgers pulse, five 1D Euler Riemann problems and six 2D
//! Euler quadrant configurations. Scheme labels follow the grammar
//! `{W|FOW}{3|5|7}{R3|R4|C2|C4|C6|L3|L5|L7}`: reconstruction family and
//! order, then the time integrator (SSPRK, CAT or LAT) and its order.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::exactsol::{
    advection_exact, burgers_breaking_time, burgers_characteristic, euler_exact_riemann,
};
use crate::grid::{
    gaussian_profile, init_gaussian_burgers, init_riemann_1d, init_riemann_2d, init_test1,
    test1_profile, Boundary, Grid1, Grid2, GridError, State1, State2,
};
pub use crate::integrators::RunStats;
use crate::integrators::{SchemeConfig, SolverError, Stepper1, TimeIntegrator};
use crate::models::{EulerPrimitive1D, EulerPrimitive2D, FluxModel};
use crate::reconstruct::{
    fast_indicator_ops, jiang_shu_indicator_ops, OpCount, ReconstructError, ReconstructionConfig,
};
use crate::solver2d::Stepper2;

pub const SCHEME_GRAMMAR: &str = "{W|FOW}{3|5|7}{R3|R4|C2|C4|C6|L3|L5|L7}";

/// The eighteen labels the experiments use.
pub const CANONICAL_SCHEMES: [&str; 18] = [
    "W3R3", "W3C2", "W3L3", "W5R3", "W5C4", "W5L5", "W7R4", "W7C6", "W7L7", "FOW3R3", "FOW3C2",
    "FOW3L3", "FOW5R3", "FOW5C4", "FOW5L5", "FOW7R4", "FOW7C6", "FOW7L7",
];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown case `{0}` (expected test1..test13)")]
    UnknownCase(String),
    #[error("unknown scheme label `{0}`; the grammar is {SCHEME_GRAMMAR}")]
    UnknownScheme(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

// --- catalog ---------------------------------------------------------------

/// Default CFL number, possibly graded by reconstruction order.
#[derive(Debug, Clone, Copy)]
pub enum CflRule {
    Flat(f64),
    /// Separate defaults for 3rd, 5th and 7th order reconstructions.
    PerOrder(f64, f64, f64),
}

impl CflRule {
    pub fn for_order(&self, order: usize) -> f64 {
        match *self {
            CflRule::Flat(c) => c,
            CflRule::PerOrder(c3, c5, c7) => match order {
                3 => c3,
                5 => c5,
                _ => c7,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    /// Exact transport of the initial profile.
    AdvectionExact,
    /// Characteristic solution before shock formation, fine-grid self
    /// reference afterwards.
    Burgers,
    /// Exact Riemann solver.
    EulerExact,
    /// FOW5C4 run at 20x resolution.
    FineGrid,
    /// No error norms (2D quadrant cases).
    None,
}

#[derive(Debug, Clone)]
pub enum CaseSetup {
    AdvectionProfile,
    GaussianBurgers,
    Riemann1d {
        left: EulerPrimitive1D,
        right: EulerPrimitive1D,
    },
    Quadrants2d([EulerPrimitive2D; 4]),
}

/// One catalog entry; the numeric parameters match the experimental setup
/// the reproduction targets.
#[derive(Debug, Clone)]
pub struct TestCase {
    pub id: &'static str,
    pub title: &'static str,
    pub model: FluxModel,
    pub dimension: usize,
    pub domain: (f64, f64),
    pub default_cells: usize,
    pub boundary: Boundary,
    pub t_final: f64,
    pub cfl: CflRule,
    pub reference: RefKind,
    pub setup: CaseSetup,
}

const GAMMA: f64 = 1.4;

fn prim1(rho: f64, u: f64, p: f64) -> EulerPrimitive1D {
    EulerPrimitive1D { rho, u, p }
}

fn prim2(rho: f64, u: f64, v: f64, p: f64) -> EulerPrimitive2D {
    EulerPrimitive2D { rho, u, v, p }
}

/// The thirteen reproduction cases.
pub fn catalog() -> Vec<TestCase> {
    vec![
        TestCase {
            id: "test1",
            title: "linear transport of a composite profile",
            model: FluxModel::Advection { a: 1.0 },
            dimension: 1,
            domain: (0.0, 2.0),
            default_cells: 200,
            boundary: Boundary::Periodic,
            t_final: 2.0,
            cfl: CflRule::Flat(0.5),
            reference: RefKind::AdvectionExact,
            setup: CaseSetup::AdvectionProfile,
        },
        TestCase {
            id: "test2",
            title: "Burgers equation, Gaussian pulse",
            model: FluxModel::Burgers,
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 160,
            boundary: Boundary::Periodic,
            t_final: 2.0,
            cfl: CflRule::Flat(0.5),
            reference: RefKind::Burgers,
            setup: CaseSetup::GaussianBurgers,
        },
        TestCase {
            id: "test3",
            title: "Sod shock tube",
            model: FluxModel::Euler1d { gamma: GAMMA },
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 200,
            boundary: Boundary::Outflow,
            t_final: 0.25,
            cfl: CflRule::PerOrder(0.9, 0.5, 0.25),
            reference: RefKind::EulerExact,
            setup: CaseSetup::Riemann1d {
                left: prim1(1.0, 0.0, 1.0),
                right: prim1(0.125, 0.0, 0.1),
            },
        },
        TestCase {
            id: "test4",
            title: "123 problem (near-vacuum double rarefaction)",
            model: FluxModel::Euler1d { gamma: GAMMA },
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 200,
            boundary: Boundary::Outflow,
            t_final: 0.15,
            cfl: CflRule::PerOrder(0.9, 0.5, 0.25),
            reference: RefKind::EulerExact,
            setup: CaseSetup::Riemann1d {
                left: prim1(1.0, -2.0, 0.4),
                right: prim1(1.0, 2.0, 0.4),
            },
        },
        TestCase {
            id: "test5",
            title: "left half of the blast-wave problem",
            model: FluxModel::Euler1d { gamma: GAMMA },
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 200,
            boundary: Boundary::Outflow,
            t_final: 0.012,
            cfl: CflRule::PerOrder(0.9, 0.5, 0.25),
            reference: RefKind::EulerExact,
            setup: CaseSetup::Riemann1d {
                left: prim1(1.0, 0.0, 1000.0),
                right: prim1(1.0, 0.0, 0.01),
            },
        },
        TestCase {
            id: "test6",
            title: "right half of the blast-wave problem",
            model: FluxModel::Euler1d { gamma: GAMMA },
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 200,
            boundary: Boundary::Outflow,
            t_final: 0.035,
            cfl: CflRule::PerOrder(0.9, 0.5, 0.25),
            reference: RefKind::EulerExact,
            setup: CaseSetup::Riemann1d {
                left: prim1(1.0, 0.0, 0.01),
                right: prim1(1.0, 0.0, 100.0),
            },
        },
        TestCase {
            id: "test7",
            title: "blast-wave shock collision",
            model: FluxModel::Euler1d { gamma: GAMMA },
            dimension: 1,
            domain: (0.0, 1.0),
            default_cells: 200,
            boundary: Boundary::Outflow,
            t_final: 0.035,
            cfl: CflRule::Flat(0.25),
            reference: RefKind::FineGrid,
            setup: CaseSetup::Riemann1d {
                left: prim1(0.99924, 19.5975, 460.894),
                right: prim1(5.99242, -6.19633, 46.0950),
            },
        },
        TestCase {
            id: "test8",
            title: "2D Riemann configuration 3 (four shocks)",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.5, 0.0, 0.0, 1.5),
                prim2(0.5323, 1.206, 0.0, 0.3),
                prim2(0.138, 1.206, 1.206, 0.029),
                prim2(0.5323, 0.0, 1.206, 0.3),
            ]),
        },
        TestCase {
            id: "test9",
            title: "2D Riemann configuration 6 (four slip lines)",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.0, 0.75, -0.5, 1.0),
                prim2(2.0, 0.75, 0.5, 1.0),
                prim2(1.0, -0.75, 0.5, 1.0),
                prim2(3.0, -0.75, -0.5, 1.0),
            ]),
        },
        TestCase {
            id: "test10",
            title: "2D Riemann configuration 11",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.0, 0.1, 0.0, 1.0),
                prim2(0.5313, 0.8275, 0.0, 0.4),
                prim2(0.8, 0.1, 0.0, 0.4),
                prim2(0.5313, 0.1, 0.7276, 0.4),
            ]),
        },
        TestCase {
            id: "test11",
            title: "2D Riemann configuration 13",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.0, 0.0, -0.3, 1.0),
                prim2(2.0, 0.0, 0.3, 1.0),
                prim2(1.0625, 0.0, 0.8145, 0.4),
                prim2(0.5313, 0.0, 0.4276, 0.4),
            ]),
        },
        TestCase {
            id: "test12",
            title: "2D Riemann configuration 17",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.0, 0.0, -0.4, 1.0),
                prim2(2.0, 0.0, -0.3, 1.0),
                prim2(1.0625, 0.0, 0.2145, 0.4),
                prim2(0.5197, 0.0, -1.1259, 0.4),
            ]),
        },
        TestCase {
            id: "test13",
            title: "2D Riemann configuration 19",
            model: FluxModel::Euler2d { gamma: GAMMA },
            dimension: 2,
            domain: (0.0, 1.0),
            default_cells: 400,
            boundary: Boundary::Outflow,
            t_final: 0.3,
            cfl: CflRule::Flat(0.475),
            reference: RefKind::None,
            setup: CaseSetup::Quadrants2d([
                prim2(1.0, 0.0, 0.3, 1.0),
                prim2(2.0, 0.0, -0.3, 1.0),
                prim2(1.0625, 0.0, 0.2145, 0.4),
                prim2(0.5197, 0.0, -0.4259, 0.4),
            ]),
        },
    ]
}

pub fn find_case(id: &str) -> Result<TestCase, HarnessError> {
    catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| HarnessError::UnknownCase(id.to_string()))
}

// --- scheme labels ----------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WenoFamilyTag {
    /// Classical Jiang-Shu WENO, eps = 1e-6.
    W,
    /// Fast/optimal WENO (OWENO3 at third order), eps = 1e-100.
    Fow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorTag {
    R3,
    R4,
    C2,
    C4,
    C6,
    L3,
    L5,
    L7,
}

/// Parsed scheme label, e.g. `FOW5C4` = FOWENO5 reconstruction with the
/// fourth-order compact approximate Taylor integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeLabel {
    pub family: WenoFamilyTag,
    pub order: usize,
    pub integrator: IntegratorTag,
}

impl FromStr for SchemeLabel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::UnknownScheme(s.to_string());
        let (family, rest) = if let Some(r) = s.strip_prefix("FOW") {
            (WenoFamilyTag::Fow, r)
        } else if let Some(r) = s.strip_prefix('W') {
            (WenoFamilyTag::W, r)
        } else {
            return Err(bad());
        };
        let mut chars = rest.chars();
        let order = match chars.next() {
            Some('3') => 3,
            Some('5') => 5,
            Some('7') => 7,
            _ => return Err(bad()),
        };
        let integrator = match chars.as_str() {
            "R3" => IntegratorTag::R3,
            "R4" => IntegratorTag::R4,
            "C2" => IntegratorTag::C2,
            "C4" => IntegratorTag::C4,
            "C6" => IntegratorTag::C6,
            "L3" => IntegratorTag::L3,
            "L5" => IntegratorTag::L5,
            "L7" => IntegratorTag::L7,
            _ => return Err(bad()),
        };
        Ok(SchemeLabel {
            family,
            order,
            integrator,
        })
    }
}

impl fmt::Display for SchemeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            WenoFamilyTag::W => "W",
            WenoFamilyTag::Fow => "FOW",
        };
        let integ = match self.integrator {
            IntegratorTag::R3 => "R3",
            IntegratorTag::R4 => "R4",
            IntegratorTag::C2 => "C2",
            IntegratorTag::C4 => "C4",
            IntegratorTag::C6 => "C6",
            IntegratorTag::L3 => "L3",
            IntegratorTag::L5 => "L5",
            IntegratorTag::L7 => "L7",
        };
        write!(f, "{fam}{}{integ}", self.order)
    }
}

impl SchemeLabel {
    pub fn reconstruction(&self) -> Result<ReconstructionConfig, ReconstructError> {
        match self.family {
            WenoFamilyTag::W => ReconstructionConfig::weno_js(self.order / 2),
            WenoFamilyTag::Fow => ReconstructionConfig::foweno_order(self.order),
        }
    }

    pub fn integrator(&self) -> TimeIntegrator {
        match self.integrator {
            IntegratorTag::R3 => TimeIntegrator::SspRk3,
            IntegratorTag::R4 => TimeIntegrator::SspRk104,
            IntegratorTag::C2 => TimeIntegrator::cat(2),
            IntegratorTag::C4 => TimeIntegrator::cat(4),
            IntegratorTag::C6 => TimeIntegrator::cat(6),
            IntegratorTag::L3 => TimeIntegrator::lat(3),
            IntegratorTag::L5 => TimeIntegrator::lat(5),
            IntegratorTag::L7 => TimeIntegrator::lat(7),
        }
    }

    pub fn scheme_config(&self, cfl: f64) -> Result<SchemeConfig, HarnessError> {
        let recon = self.reconstruction()?;
        Ok(SchemeConfig::new(self.integrator(), cfl, recon))
    }
}

// --- run orchestration ----------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub cells: Option<usize>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    /// Deterministic single-threaded execution (always on; kept as an
    /// explicit knob for the CLI surface).
    pub serial: bool,
    /// Skip reference/error computation (benchmark runs).
    pub skip_errors: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum RunStatus {
    Completed,
    Diverged { step: u64 },
}

/// Structured run summary, serializable as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub case: String,
    pub scheme: String,
    pub cells: usize,
    pub cfl: f64,
    pub t_final: f64,
    pub status: RunStatus,
    /// L1 error per component against the case reference, when available.
    pub l1: Option<Vec<f64>>,
    /// Max-norm error per component.
    pub linf: Option<Vec<f64>>,
    pub wall_seconds: f64,
    pub steps: u64,
    pub rhs_evals: u64,
    pub flux_evals: u64,
    pub fallbacks: u64,
}

/// Final field of a finished run, for CSV output.
pub enum Solution {
    OneD(Grid1, State1),
    TwoD(Grid2, State2),
}

fn build_state_1d(case: &TestCase, grid: &Grid1, ghost: usize) -> Result<State1, HarnessError> {
    match &case.setup {
        CaseSetup::AdvectionProfile => Ok(init_test1(grid, ghost)?),
        CaseSetup::GaussianBurgers => Ok(init_gaussian_burgers(grid, ghost)?),
        CaseSetup::Riemann1d { left, right } => Ok(init_riemann_1d(
            grid, case.model, *left, *right, 0.5, ghost,
        )?),
        CaseSetup::Quadrants2d(_) => unreachable!("2D setup in a 1D case"),
    }
}

/// Runs one case with one scheme; divergence is reported in the status,
/// not as an error.
pub fn run_case(
    case: &TestCase,
    label: SchemeLabel,
    overrides: &RunOverrides,
) -> Result<(RunReport, Solution), HarnessError> {
    let cells = overrides.cells.unwrap_or(case.default_cells);
    let cfl = overrides.cfl.unwrap_or(case.cfl.for_order(label.order));
    let t_final = overrides.t_final.unwrap_or(case.t_final);
    let scheme = label.scheme_config(cfl)?;

    if case.dimension == 1 {
        let grid = Grid1::new(case.domain.0, case.domain.1, cells);
        let stepper = Stepper1::new(scheme)?;
        let mut state = build_state_1d(case, &grid, stepper.ghost_width())?;
        let mut stats = RunStats::default();
        let start = Instant::now();
        let status = match stepper.advance(
            &mut state,
            &grid,
            case.model,
            case.boundary,
            t_final,
            &mut stats,
        ) {
            Ok(()) => RunStatus::Completed,
            Err(SolverError::Diverged { step }) => RunStatus::Diverged { step },
            // A state that loses admissibility is the Euler signature of
            // blow-up; report it as divergence, not a crash.
            Err(SolverError::Inadmissible { .. }) => RunStatus::Diverged { step: stats.steps },
            Err(e) => return Err(e.into()),
        };
        let wall_seconds = start.elapsed().as_secs_f64();

        let (l1, linf) = if status == RunStatus::Completed && !overrides.skip_errors {
            match reference_1d(case, &grid, t_final)? {
                Some(reference) => {
                    let (l1, linf) =
                        error_norms(state.interior(), &reference, state.ncomp, grid.dx());
                    (Some(l1), Some(linf))
                }
                None => (None, None),
            }
        } else {
            (None, None)
        };

        let report = RunReport {
            case: case.id.to_string(),
            scheme: label.to_string(),
            cells,
            cfl,
            t_final,
            status,
            l1,
            linf,
            wall_seconds,
            steps: stats.steps,
            rhs_evals: stats.rhs_evals,
            flux_evals: stats.flux_evals,
            fallbacks: stats.fallbacks,
        };
        Ok((report, Solution::OneD(grid, state)))
    } else {
        let grid = Grid2::square(case.domain.0, case.domain.1, cells);
        let stepper = Stepper2::new(scheme)?;
        let quadrants = match &case.setup {
            CaseSetup::Quadrants2d(q) => *q,
            _ => unreachable!("1D setup in a 2D case"),
        };
        let mut state = init_riemann_2d(
            &grid,
            case.model,
            quadrants,
            (0.5, 0.5),
            stepper.ghost_width(),
        )?;
        let mut stats = RunStats::default();
        let start = Instant::now();
        let status = match stepper.advance(
            &mut state,
            &grid,
            case.model,
            case.boundary,
            t_final,
            &mut stats,
        ) {
            Ok(()) => RunStatus::Completed,
            Err(SolverError::Diverged { step }) => RunStatus::Diverged { step },
            Err(SolverError::Inadmissible2d { .. }) => RunStatus::Diverged { step: stats.steps },
            Err(e) => return Err(e.into()),
        };
        let wall_seconds = start.elapsed().as_secs_f64();
        let report = RunReport {
            case: case.id.to_string(),
            scheme: label.to_string(),
            cells,
            cfl,
            t_final,
            status,
            l1: None,
            linf: None,
            wall_seconds,
            steps: stats.steps,
            rhs_evals: stats.rhs_evals,
            flux_evals: stats.flux_evals,
            fallbacks: stats.fallbacks,
        };
        Ok((report, Solution::TwoD(grid, state)))
    }
}

/// Reference solution at the cell centers (conserved variables,
/// cell-major), or None when the case has no affordable reference.
pub fn reference_1d(
    case: &TestCase,
    grid: &Grid1,
    t: f64,
) -> Result<Option<Vec<f64>>, HarnessError> {
    match (case.reference, &case.setup) {
        (RefKind::AdvectionExact, CaseSetup::AdvectionProfile) => {
            let a = match case.model {
                FluxModel::Advection { a } => a,
                _ => unreachable!(),
            };
            let vals = (0..grid.n as isize)
                .map(|i| {
                    advection_exact(&test1_profile, a, grid.xmin, grid.xmax, grid.center(i), t)
                })
                .collect();
            Ok(Some(vals))
        }
        (RefKind::Burgers, CaseSetup::GaussianBurgers) => {
            // Characteristics must trace through the periodically wrapped
            // profile (which has a derivative kink at the seam, a genuine
            // feature of the periodic problem).
            let (lo, hi) = (grid.xmin, grid.xmax);
            let period = hi - lo;
            let wrap = move |x: f64| {
                let mut xi = (x - lo) % period;
                if xi < 0.0 {
                    xi += period;
                }
                lo + xi
            };
            let profile = move |x: f64| gaussian_profile(wrap(x));
            let slope = move |x: f64| {
                let xw = wrap(x);
                -20.0 * (xw - 0.5) * gaussian_profile(xw)
            };
            let t_break = burgers_breaking_time(&slope, grid.xmin, grid.xmax);
            if t < t_break {
                let mut vals = Vec::with_capacity(grid.n);
                for i in 0..grid.n as isize {
                    let v = burgers_characteristic(&profile, &slope, t_break, grid.center(i), t)
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                    vals.push(v);
                }
                Ok(Some(vals))
            } else {
                Ok(Some(fine_grid_reference(case, grid, t)?))
            }
        }
        (RefKind::EulerExact, CaseSetup::Riemann1d { left, right }) => {
            let gamma = case.model.gas_gamma().expect("Euler case");
            let sol = euler_exact_riemann(*left, *right, gamma)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            let mut vals = Vec::with_capacity(grid.n * 3);
            for i in 0..grid.n as isize {
                let xi = (grid.center(i) - 0.5) / t;
                let q = sol.sample(xi);
                vals.extend(
                    case.model
                        .primitive_to_conserved(&[q.rho, q.u, q.p])
                        .expect("admissible sample"),
                );
            }
            Ok(Some(vals))
        }
        (RefKind::FineGrid, _) => Ok(Some(fine_grid_reference(case, grid, t)?)),
        _ => Ok(None),
    }
}

/// FOW5C4 self-reference at 20x resolution, averaged back onto the coarse
/// centers (each coarse center sits between two fine cells).
fn fine_grid_reference(case: &TestCase, grid: &Grid1, t: f64) -> Result<Vec<f64>, HarnessError> {
    const FACTOR: usize = 20;
    let label: SchemeLabel = "FOW5C4".parse()?;
    let fine_cells = grid.n * FACTOR;
    let fine_grid = Grid1::new(grid.xmin, grid.xmax, fine_cells);
    let scheme = label.scheme_config(case.cfl.for_order(5))?;
    let stepper = Stepper1::new(scheme)?;
    let mut state = build_state_1d(case, &fine_grid, stepper.ghost_width())?;
    let mut stats = RunStats::default();
    stepper.advance(
        &mut state,
        &fine_grid,
        case.model,
        case.boundary,
        t,
        &mut stats,
    )?;
    let nc = state.ncomp;
    let mut vals = vec![0.0; grid.n * nc];
    for i in 0..grid.n {
        let a = state.cell((i * FACTOR + FACTOR / 2 - 1) as isize);
        let b = state.cell((i * FACTOR + FACTOR / 2) as isize);
        for c in 0..nc {
            vals[i * nc + c] = 0.5 * (a[c] + b[c]);
        }
    }
    Ok(vals)
}

/// L1 (`sum |e| * volume`) and max norms per component; the reference is
/// sampled at cell centers.
pub fn error_norms(
    numerical: &[f64],
    reference: &[f64],
    ncomp: usize,
    cell_volume: f64,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(numerical.len(), reference.len());
    let mut l1 = vec![0.0f64; ncomp];
    let mut linf = vec![0.0f64; ncomp];
    for (cell_n, cell_r) in numerical
        .chunks_exact(ncomp)
        .zip(reference.chunks_exact(ncomp))
    {
        for c in 0..ncomp {
            let e = (cell_n[c] - cell_r[c]).abs();
            l1[c] += e;
            linf[c] = linf[c].max(e);
        }
    }
    for v in &mut l1 {
        *v *= cell_volume;
    }
    (l1, linf)
}

// --- EOC tables ------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct EocRow {
    pub cells: usize,
    pub l1_error: f64,
    /// log2(previous / this) under mesh halving; None on the coarsest mesh.
    pub order: Option<f64>,
}

/// Refinement study of the first solution component in the L1 norm.
pub fn eoc_table(
    case: &TestCase,
    label: SchemeLabel,
    meshes: &[usize],
    overrides: &RunOverrides,
) -> Result<Vec<EocRow>, HarnessError> {
    let mut rows: Vec<EocRow> = Vec::new();
    for &cells in meshes {
        let mut o = overrides.clone();
        o.cells = Some(cells);
        let (report, _) = run_case(case, label, &o)?;
        let err = report
            .l1
            .as_ref()
            .and_then(|v| v.first().copied())
            .ok_or_else(|| {
                HarnessError::Config(format!(
                    "case {} has no usable reference for an EOC study",
                    case.id
                ))
            })?;
        let order = rows.last().map(|prev: &EocRow| {
            (prev.l1_error / err).log2() / (cells as f64 / prev.cells as f64).log2()
        });
        rows.push(EocRow {
            cells,
            l1_error: err,
            order,
        });
    }
    Ok(rows)
}

/// Fits `log2(e_k / e_{k+1})` on consecutive rows of an error ladder.
pub fn eoc_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

// --- benchmark ---------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BenchEntry {
    pub scheme: String,
    pub mean_seconds: f64,
    /// Mean wall time divided by the reference scheme's mean.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub case: String,
    pub reference_scheme: String,
    pub repetitions: usize,
    pub entries: Vec<BenchEntry>,
    /// Hardware-independent surrogate: static arithmetic cost of one
    /// indicator-set evaluation (adds, mults).
    pub indicator_ops: Vec<IndicatorOps>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndicatorOps {
    pub p: usize,
    pub fast: (usize, usize),
    pub jiang_shu: (usize, usize),
}

/// Reference scheme for the ratio column, following the table captions
/// of the experiments.
pub fn bench_reference(case_id: &str) -> &'static str {
    match case_id {
        "test1" => "W5R3",
        "test7" | "test9" => "W3C2",
        _ => "W5R3",
    }
}

/// Times `reps` full serial runs of every scheme (wall clock of the time
/// loop only; initialization and I/O excluded) and reports means and
/// ratios against the case's reference scheme.
pub fn benchmark(
    case: &TestCase,
    labels: &[SchemeLabel],
    reps: usize,
    overrides: &RunOverrides,
) -> Result<BenchTable, HarnessError> {
    let reference: SchemeLabel = bench_reference(case.id).parse()?;
    let mut all = vec![reference];
    for l in labels {
        if !all.contains(l) {
            all.push(*l);
        }
    }
    let mut o = overrides.clone();
    o.skip_errors = true;
    let mut means = Vec::new();
    for label in &all {
        let mut total = 0.0;
        for _ in 0..reps.max(1) {
            let (report, _) = run_case(case, *label, &o)?;
            total += report.wall_seconds;
        }
        means.push(total / reps.max(1) as f64);
    }
    let ref_mean = means[0];
    let entries = all
        .iter()
        .zip(&means)
        .map(|(label, mean)| BenchEntry {
            scheme: label.to_string(),
            mean_seconds: *mean,
            ratio: mean / ref_mean,
        })
        .collect();
    let indicator_ops = [2usize, 3]
        .iter()
        .map(|&p| {
            let f: OpCount = fast_indicator_ops(p);
            let j: OpCount = jiang_shu_indicator_ops(p);
            IndicatorOps {
                p,
                fast: (f.adds, f.mults),
                jiang_shu: (j.adds, j.mults),
            }
        })
        .collect();
    Ok(BenchTable {
        case: case.id.to_string(),
        reference_scheme: reference.to_string(),
        repetitions: reps,
        entries,
        indicator_ops,
    })
}
