//! Mesh-refinement study on smooth periodic advection (u0 = sin 2 pi x,
//! one period): observed orders for a few scheme pairings.

use foweno::grid::{Boundary, Grid1, State1};
use foweno::harness::SchemeLabel;
use foweno::integrators::{RunStats, Stepper1};
use foweno::models::FluxModel;

fn l1_error(label: SchemeLabel, n: usize, cfl: f64) -> f64 {
    let stepper = Stepper1::new(label.scheme_config(cfl).unwrap()).unwrap();
    let grid = Grid1::new(0.0, 1.0, n);
    let mut state = State1::zeros(&grid, 1, stepper.ghost_width()).unwrap();
    for i in 0..n as isize {
        state.cell_mut(i)[0] = (2.0 * std::f64::consts::PI * grid.center(i)).sin();
    }
    let mut stats = RunStats::default();
    stepper
        .advance(
            &mut state,
            &grid,
            FluxModel::Advection { a: 1.0 },
            Boundary::Periodic,
            1.0,
            &mut stats,
        )
        .expect("stable run");
    let mut l1 = 0.0;
    for i in 0..n as isize {
        let exact = (2.0 * std::f64::consts::PI * grid.center(i)).sin();
        l1 += (state.cell(i)[0] - exact).abs();
    }
    l1 * grid.dx()
}

fn main() {
    let meshes = [50usize, 100, 200, 400];
    for label in ["FOW3C2", "FOW3R3", "FOW3L3", "FOW5C4", "FOW5L5", "FOW7C6"] {
        let parsed: SchemeLabel = label.parse().unwrap();
        let errs: Vec<f64> = meshes.iter().map(|&n| l1_error(parsed, n, 0.5)).collect();
        println!("{label}:");
        println!("  {:>6} {:>14} {:>7}", "cells", "L1 error", "order");
        for (i, (&n, e)) in meshes.iter().zip(&errs).enumerate() {
            match i {
                0 => println!("  {n:>6} {e:>14.6e} {:>7}", "-"),
                _ => println!("  {n:>6} {e:>14.6e} {:>7.3}", (errs[i - 1] / e).log2()),
            }
        }
    }
}
