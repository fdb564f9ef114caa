//! Linear transport of the composite profile (Gaussian, triangle, top hat,
//! half-ellipse) over one full period: classical WENO3 versus the optimal
//! third-order reconstruction, both with the compact Taylor integrator.

use std::fs::File;
use std::io::BufWriter;

use foweno::grid::write_csv_1d;
use foweno::harness::{find_case, reference_1d, run_case, RunOverrides, SchemeLabel, Solution};

fn main() {
    let case = find_case("test1").expect("catalog case");
    let overrides = RunOverrides {
        cfl: Some(0.5),
        ..Default::default()
    };
    for label in ["W3C2", "FOW3C2", "FOW5C4"] {
        let parsed: SchemeLabel = label.parse().unwrap();
        let (report, solution) = run_case(&case, parsed, &overrides).expect("run");
        let (grid, state) = match solution {
            Solution::OneD(g, s) => (g, s),
            _ => unreachable!(),
        };
        // Error over the smooth Gaussian hump only.
        let reference = reference_1d(&case, &grid, case.t_final)
            .expect("reference")
            .expect("advection has an exact reference");
        let mut hump: f64 = 0.0;
        for i in 0..grid.n as isize {
            let x = grid.center(i);
            if (0.2..=0.47).contains(&x) {
                hump = hump.max((state.cell(i)[0] - reference[i as usize]).abs());
            }
        }
        println!(
            "{label}: L1 = {:.4e}, Linf = {:.4e}, Gaussian-hump Linf = {hump:.4e}",
            report.l1.as_ref().unwrap()[0],
            report.linf.as_ref().unwrap()[0],
        );
        let path = format!("advection_{}.csv", label.to_lowercase());
        let mut out = BufWriter::new(File::create(&path).expect("create csv"));
        write_csv_1d(&grid, &state, &mut out).expect("write csv");
        println!("  wrote {path}");
    }
}
