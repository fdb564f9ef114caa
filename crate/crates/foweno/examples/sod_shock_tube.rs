//! Sod shock tube with the fifth-order fast/optimal WENO reconstruction and
//! the fourth-order compact approximate Taylor integrator, compared against
//! the exact Riemann solution.
//!
//! Writes `sod_fow5c4.csv` (numerical) and `sod_exact.csv` (reference) to
//! the current directory.

use std::fs::File;
use std::io::BufWriter;

use foweno::exactsol::euler_exact_riemann;
use foweno::grid::{write_csv_1d, Grid1};
use foweno::harness::{find_case, run_case, RunOverrides, SchemeLabel, Solution};
use foweno::models::EulerPrimitive1D;

fn main() {
    let case = find_case("test3").expect("catalog case");
    let label: SchemeLabel = "FOW5C4".parse().unwrap();
    let overrides = RunOverrides {
        cells: Some(400),
        ..Default::default()
    };
    let (report, solution) = run_case(&case, label, &overrides).expect("run");
    println!(
        "{} on {}: {:?} after {} steps, {:.3}s wall",
        report.scheme, report.case, report.status, report.steps, report.wall_seconds
    );
    if let Some(l1) = &report.l1 {
        println!("L1 errors vs exact solution (rho, rho u, E): {l1:?}");
    }

    if let Solution::OneD(grid, state) = solution {
        let mut out = BufWriter::new(File::create("sod_fow5c4.csv").expect("create csv"));
        write_csv_1d(&grid, &state, &mut out).expect("write csv");
    }

    // Exact solution sampled on a fine grid for overlay plots.
    let left = EulerPrimitive1D::new(1.0, 0.0, 1.0);
    let right = EulerPrimitive1D::new(0.125, 0.0, 0.1);
    let sol = euler_exact_riemann(left, right, 1.4).expect("non-vacuum data");
    println!(
        "star region: p* = {:.5}, u* = {:.5}",
        sol.p_star, sol.u_star
    );
    let fine = Grid1::new(0.0, 1.0, 2000);
    let mut out = BufWriter::new(File::create("sod_exact.csv").expect("create csv"));
    use std::io::Write;
    writeln!(out, "x,rho,u,p").unwrap();
    for i in 0..fine.n as isize {
        let x = fine.center(i);
        let q = sol.sample((x - 0.5) / case.t_final);
        writeln!(out, "{x:.16e},{:.16e},{:.16e},{:.16e}", q.rho, q.u, q.p).unwrap();
    }
    println!("wrote sod_fow5c4.csv and sod_exact.csv");
}
