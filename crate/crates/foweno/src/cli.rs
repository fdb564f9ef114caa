//! Command-line interface: `run`, `eoc`, `bench`, `exact`, `list`.
//!
//! Flag precedence is explicit flags > config file (`key=value` lines) >
//! catalog defaults. Exit codes: 0 success, 2 configuration error,
//! 3 divergence (or a solver abort). The only environment variable the
//! harness honours is `FOWENO_OUT_DIR`, prepended to relative `--out`
//! paths.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::exactsol::{
    advection_exact, burgers_breaking_time, burgers_characteristic, euler_exact_riemann,
};
use crate::grid::{gaussian_profile, test1_profile, write_csv_1d, write_csv_2d, Grid1};
use crate::harness::{
    benchmark, catalog, eoc_table, find_case, run_case, CaseSetup, HarnessError, RunOverrides,
    RunStatus, SchemeLabel, Solution, TestCase, CANONICAL_SCHEMES, SCHEME_GRAMMAR,
};
use crate::models::FluxModel;

const EXIT_OK: i32 = 0;
const EXIT_CONFIG: i32 = 2;
const EXIT_DIVERGED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "foweno",
    about = "Finite-difference WENO/FOWENO solvers with approximate Taylor and SSP Runge-Kutta time stepping",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one test case with one scheme; prints a JSON report.
    Run(RunArgs),
    /// Mesh-refinement study: L1 error and observed order per mesh.
    Eoc(EocArgs),
    /// Wall-clock ratio table over a list of schemes.
    Bench(BenchArgs),
    /// Sample the exact/reference solution of a case to CSV.
    Exact(ExactArgs),
    /// List the test catalog and the scheme grammar.
    List,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Test case id, test1..test13.
    #[arg(long)]
    case: Option<String>,
    /// Scheme label, e.g. FOW5C4 (comma-separated list for `bench`).
    #[arg(long)]
    scheme: Option<String>,
    /// Cells per axis (comma-separated list for `eoc`).
    #[arg(long)]
    cells: Option<String>,
    /// Courant number override.
    #[arg(long)]
    cfl: Option<f64>,
    /// Final time override.
    #[arg(long)]
    tfinal: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<String>,
    /// Force the deterministic serial path (always on; accepted for
    /// reproducibility scripts).
    #[arg(long)]
    serial: bool,
    /// Benchmark repetitions.
    #[arg(long)]
    reps: Option<usize>,
    /// key=value file supplying defaults for any of the above.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EocArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version on stdout with success.
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a.common),
        Command::Eoc(a) => cmd_eoc(a.common),
        Command::Bench(a) => cmd_bench(a.common),
        Command::Exact(a) => cmd_exact(a.common),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                HarnessError::Solver(_) => EXIT_DIVERGED,
                _ => EXIT_CONFIG,
            }
        }
    }
}

fn merge_config(mut common: CommonArgs) -> Result<CommonArgs, HarnessError> {
    let Some(path) = common.config.clone() else {
        return Ok(common);
    };
    let text = fs::read_to_string(&path).map_err(|source| HarnessError::Io {
        path: path.clone(),
        source,
    })?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(HarnessError::Config(format!(
                "{path}:{}: expected key=value",
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let parse_f64 = |k: &str, v: &String| {
        v.parse::<f64>()
            .map_err(|_| HarnessError::Config(format!("config key {k}: bad number `{v}`")))
    };
    for (k, v) in &map {
        match k.as_str() {
            "case" => common.case.get_or_insert_with(|| v.clone()),
            "scheme" => common.scheme.get_or_insert_with(|| v.clone()),
            "cells" => common.cells.get_or_insert_with(|| v.clone()),
            "out" => common.out.get_or_insert_with(|| v.clone()),
            "cfl" => {
                if common.cfl.is_none() {
                    common.cfl = Some(parse_f64(k, v)?);
                }
                continue;
            }
            "tfinal" => {
                if common.tfinal.is_none() {
                    common.tfinal = Some(parse_f64(k, v)?);
                }
                continue;
            }
            "reps" => {
                if common.reps.is_none() {
                    common.reps = Some(v.parse().map_err(|_| {
                        HarnessError::Config(format!("config key reps: bad integer `{v}`"))
                    })?);
                }
                continue;
            }
            "serial" => {
                common.serial = common.serial || v == "true" || v == "1";
                continue;
            }
            _ => {
                return Err(HarnessError::Config(format!(
                    "config key `{k}` not recognized"
                )))
            }
        };
    }
    Ok(common)
}

fn required_case(common: &CommonArgs) -> Result<TestCase, HarnessError> {
    let id = common
        .case
        .as_deref()
        .ok_or_else(|| HarnessError::Config("--case is required".into()))?;
    find_case(id)
}

fn required_scheme(common: &CommonArgs) -> Result<SchemeLabel, HarnessError> {
    common
        .scheme
        .as_deref()
        .ok_or_else(|| HarnessError::Config("--scheme is required".into()))?
        .parse()
}

fn parse_single_cells(common: &CommonArgs) -> Result<Option<usize>, HarnessError> {
    match &common.cells {
        None => Ok(None),
        Some(s) => s
            .parse::<usize>()
            .map(Some)
            .map_err(|_| HarnessError::Config(format!("--cells: bad integer `{s}`"))),
    }
}

fn out_path(raw: &str) -> PathBuf {
    let p = PathBuf::from(raw);
    if p.is_relative() {
        if let Ok(dir) = std::env::var("FOWENO_OUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(p);
            }
        }
    }
    p
}

fn write_out(path: &str, bytes: &[u8]) -> Result<(), HarnessError> {
    let full = out_path(path);
    if let Some(parent) = full.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| HarnessError::Io {
                path: full.display().to_string(),
                source,
            })?;
        }
    }
    fs::write(&full, bytes).map_err(|source| HarnessError::Io {
        path: full.display().to_string(),
        source,
    })
}

fn overrides_from(common: &CommonArgs) -> Result<RunOverrides, HarnessError> {
    Ok(RunOverrides {
        cells: parse_single_cells(common)?,
        cfl: common.cfl,
        t_final: common.tfinal,
        serial: common.serial,
        skip_errors: false,
    })
}

fn cmd_run(common: CommonArgs) -> Result<i32, HarnessError> {
    let common = merge_config(common)?;
    let case = required_case(&common)?;
    let label = required_scheme(&common)?;
    let overrides = overrides_from(&common)?;
    let (report, solution) = run_case(&case, label, &overrides)?;
    if let Some(out) = &common.out {
        let mut buf = Vec::new();
        match &solution {
            Solution::OneD(grid, state) => {
                write_csv_1d(grid, state, &mut buf).map_err(|source| HarnessError::Io {
                    path: out.clone(),
                    source,
                })?
            }
            Solution::TwoD(grid, state) => {
                write_csv_2d(grid, state, &mut buf).map_err(|source| HarnessError::Io {
                    path: out.clone(),
                    source,
                })?
            }
        }
        write_out(out, &buf)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    match report.status {
        RunStatus::Completed => Ok(EXIT_OK),
        RunStatus::Diverged { .. } => Ok(EXIT_DIVERGED),
    }
}

fn cmd_eoc(common: CommonArgs) -> Result<i32, HarnessError> {
    let common = merge_config(common)?;
    let case = required_case(&common)?;
    let label = required_scheme(&common)?;
    let meshes: Vec<usize> = match &common.cells {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| HarnessError::Config(format!("--cells: bad integer `{t}`")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![50, 100, 200, 400],
    };
    let overrides = RunOverrides {
        cfl: common.cfl,
        t_final: common.tfinal,
        serial: common.serial,
        ..Default::default()
    };
    let rows = eoc_table(&case, label, &meshes, &overrides)?;
    println!("# case {} scheme {label}", case.id);
    println!("{:>8} {:>14} {:>8}", "cells", "L1 error", "order");
    let mut csv = String::from("cells,l1_error,order\n");
    for row in &rows {
        match row.order {
            Some(o) => {
                println!("{:>8} {:>14.6e} {:>8.3}", row.cells, row.l1_error, o);
                csv.push_str(&format!("{},{:.16e},{:.3}\n", row.cells, row.l1_error, o));
            }
            None => {
                println!("{:>8} {:>14.6e} {:>8}", row.cells, row.l1_error, "-");
                csv.push_str(&format!("{},{:.16e},\n", row.cells, row.l1_error));
            }
        }
    }
    if let Some(out) = &common.out {
        write_out(out, csv.as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn cmd_bench(common: CommonArgs) -> Result<i32, HarnessError> {
    let common = merge_config(common)?;
    let case = required_case(&common)?;
    let labels: Vec<SchemeLabel> = match &common.scheme {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()?,
        None => CANONICAL_SCHEMES
            .iter()
            .map(|s| s.parse().unwrap())
            .collect(),
    };
    let reps = common.reps.unwrap_or(10);
    let overrides = RunOverrides {
        cells: parse_single_cells(&common)?,
        cfl: common.cfl,
        t_final: common.tfinal,
        serial: common.serial,
        skip_errors: true,
    };
    let table = benchmark(&case, &labels, reps, &overrides)?;
    println!(
        "# case {}, mean of {} runs, ratios vs {}",
        table.case, table.repetitions, table.reference_scheme
    );
    println!("{:>8} {:>12} {:>8}", "scheme", "seconds", "ratio");
    for e in &table.entries {
        println!("{:>8} {:>12.6} {:>8.4}", e.scheme, e.mean_seconds, e.ratio);
    }
    println!("# static indicator cost per evaluation (adds+mults):");
    for ops in &table.indicator_ops {
        println!(
            "#   p={}: fast {} vs jiang-shu {}",
            ops.p,
            ops.fast.0 + ops.fast.1,
            ops.jiang_shu.0 + ops.jiang_shu.1
        );
    }
    if let Some(out) = &common.out {
        let mut csv = String::from("scheme,mean_seconds,ratio\n");
        for e in &table.entries {
            csv.push_str(&format!(
                "{},{:.16e},{:.16e}\n",
                e.scheme, e.mean_seconds, e.ratio
            ));
        }
        write_out(out, csv.as_bytes())?;
    }
    Ok(EXIT_OK)
}

fn cmd_exact(common: CommonArgs) -> Result<i32, HarnessError> {
    let common = merge_config(common)?;
    let case = required_case(&common)?;
    let cells = parse_single_cells(&common)?.unwrap_or(1000);
    let t = common.tfinal.unwrap_or(case.t_final);
    let grid = Grid1::new(case.domain.0, case.domain.1, cells);
    let mut buf = Vec::new();
    match &case.setup {
        CaseSetup::AdvectionProfile => {
            let a = match case.model {
                FluxModel::Advection { a } => a,
                _ => unreachable!(),
            };
            writeln!(buf, "x,comp0").unwrap();
            for i in 0..cells as isize {
                let x = grid.center(i);
                let v = advection_exact(&test1_profile, a, grid.xmin, grid.xmax, x, t);
                writeln!(buf, "{x:.16e},{v:.16e}").unwrap();
            }
        }
        CaseSetup::GaussianBurgers => {
            let (lo, period) = (grid.xmin, grid.xmax - grid.xmin);
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
            if t >= t_break {
                return Err(HarnessError::Config(format!(
                    "no closed-form reference past the shock-formation time {t_break:.6}; \
                     use a fine-grid run instead"
                )));
            }
            writeln!(buf, "x,comp0").unwrap();
            for i in 0..cells as isize {
                let x = grid.center(i);
                let v = burgers_characteristic(&profile, &slope, t_break, x, t)
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                writeln!(buf, "{x:.16e},{v:.16e}").unwrap();
            }
        }
        CaseSetup::Riemann1d { left, right } => {
            let gamma = case.model.gas_gamma().expect("Euler case");
            let sol = euler_exact_riemann(*left, *right, gamma)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            writeln!(buf, "x,comp0,comp1,comp2").unwrap();
            for i in 0..cells as isize {
                let x = grid.center(i);
                let q = sol.sample((x - 0.5) / t);
                let cons = case
                    .model
                    .primitive_to_conserved(&[q.rho, q.u, q.p])
                    .expect("admissible sample");
                writeln!(
                    buf,
                    "{x:.16e},{:.16e},{:.16e},{:.16e}",
                    cons[0], cons[1], cons[2]
                )
                .unwrap();
            }
        }
        CaseSetup::Quadrants2d(_) => {
            return Err(HarnessError::Config(
                "the 2D quadrant configurations have no closed-form solution".into(),
            ));
        }
    }
    match &common.out {
        Some(out) => write_out(out, &buf)?,
        None => print!("{}", String::from_utf8_lossy(&buf)),
    }
    Ok(EXIT_OK)
}

fn cmd_list() -> Result<i32, HarnessError> {
    println!("scheme grammar: {SCHEME_GRAMMAR}");
    println!("schemes: {}", CANONICAL_SCHEMES.join(" "));
    println!();
    println!(
        "{:<8} {:<46} {:>5} {:>7} {:>7}",
        "id", "description", "dim", "cells", "tfinal"
    );
    for case in catalog() {
        println!(
            "{:<8} {:<46} {:>5} {:>7} {:>7}",
            case.id, case.title, case.dimension, case.default_cells, case.t_final
        );
    }
    Ok(EXIT_OK)
}
