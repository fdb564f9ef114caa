//! Acceptance suite: every numbered criterion below runs at its stated
//! tolerance and prints one `[criterion N] PASS/FAIL` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use foweno::exactsol::euler_exact_riemann;
use foweno::grid::{fill_ghosts_2d, Boundary, Grid1, Grid2, State1, State2};
use foweno::harness::{
    benchmark, find_case, run_case, RunOverrides, RunStatus, SchemeLabel, Solution,
    CANONICAL_SCHEMES,
};
use foweno::integrators::{
    cfl_dt, FirstOrderTerm, LatWidths, RunStats, SchemeConfig, Stepper1, TimeIntegrator,
};
use foweno::models::{EulerPrimitive1D, FluxModel};
use foweno::numdiff::{centered_diff_coeffs, interp_avg_coeffs};
use foweno::reconstruct::ReconstructionConfig;
use foweno::solver2d::{cfl_dt_2d, Stepper2};
use num_rational::Rational64;

fn report(n: usize, passed: bool, detail: &str) {
    println!(
        "[criterion {n}] {}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// Criterion 1: the telescoping identity between the centered and the
/// midpoint sliding-average differentiation formulas, on random data.
#[test]
fn criterion_1_coefficient_identities() {
    let mut rng = Lcg(0xfeedbeefcafe);
    let h = 0.41;
    let mut worst: f64 = 0.0;
    for p in 1..=4usize {
        for k in 1..=2 * p {
            let d = centered_diff_coeffs(p, k).unwrap();
            let a = interp_avg_coeffs(p, k - 1, Rational64::new(1, 2)).unwrap();
            for _ in 0..1000 {
                let data: Vec<f64> = (0..2 * p + 3).map(|_| rng.next_f64()).collect();
                let i = p + 1;
                let lhs = d.apply(&data[i - p..=i + p], h).unwrap();
                let hi = a.apply(&data[i - p + 1..=i + p], h).unwrap();
                let lo = a.apply(&data[i - p..=i + p - 1], h).unwrap();
                let rhs = (hi - lo) / h;
                // Residual relative to the magnitude of the terms entering
                // the two sides (both sides may cancel to near zero on
                // random data; the identity itself is exact in rationals).
                let mag_lhs: f64 = d
                    .weights
                    .iter()
                    .zip(&data[i - p..=i + p])
                    .map(|(w, v)| (w * v).abs())
                    .sum::<f64>()
                    / h.powi(k as i32);
                let mag_rhs: f64 = (a
                    .weights
                    .iter()
                    .zip(&data[i - p + 1..=i + p])
                    .map(|(w, v)| (w * v).abs())
                    .sum::<f64>()
                    + a.weights
                        .iter()
                        .zip(&data[i - p..=i + p - 1])
                        .map(|(w, v)| (w * v).abs())
                        .sum::<f64>())
                    / h.powi(k as i32);
                let rel = (lhs - rhs).abs() / mag_lhs.max(mag_rhs).max(1e-300);
                worst = worst.max(rel);
            }
        }
    }
    let passed = worst <= 1e-12;
    report(1, passed, &format!("worst relative residual {worst:.3e}"));
    assert!(passed);
}

fn sine_state(grid: &Grid1, ghost: usize) -> State1 {
    let mut s = State1::zeros(grid, 1, ghost).unwrap();
    for i in 0..grid.n as isize {
        s.cell_mut(i)[0] = (2.0 * std::f64::consts::PI * grid.center(i)).sin();
    }
    s
}

/// Criterion 2: linear reductions of the compact and global approximate
/// Taylor methods.
#[test]
fn criterion_2_linear_reduction() {
    // CAT2 trajectory against classical Lax-Wendroff: N = 100, CFL = 0.8,
    // 50 steps.
    let n = 100;
    let grid = Grid1::new(0.0, 1.0, n);
    let scheme = SchemeConfig::new(TimeIntegrator::cat(2), 0.8, ReconstructionConfig::oweno3())
        .with_first_order(FirstOrderTerm::Centered);
    let stepper = Stepper1::new(scheme).unwrap();
    let mut s = sine_state(&grid, stepper.ghost_width());
    let mut lw: Vec<f64> = s.interior().to_vec();
    let dt = 0.8 * grid.dx();
    let c = 0.8;
    let mut stats = RunStats::default();
    let model = FluxModel::Advection { a: 1.0 };
    let mut max_diff: f64 = 0.0;
    for _ in 0..50 {
        stepper
            .step(&mut s, &grid, model, Boundary::Periodic, dt, &mut stats)
            .unwrap();
        let old = lw.clone();
        for i in 0..n {
            let um = old[(i + n - 1) % n];
            let up = old[(i + 1) % n];
            lw[i] = old[i] - 0.5 * c * (up - um) + 0.5 * c * c * (up - 2.0 * old[i] + um);
        }
        for (a, b) in s.interior().iter().zip(&lw) {
            max_diff = max_diff.max((a - b).abs());
        }
    }
    let cat_ok = max_diff <= 1e-13;

    // LAT with m = 2, uniform half-width 1, centered first derivative:
    // one step equals the five-point scheme
    // u - (c/2)(u_{i+1} - u_{i-1}) + (c^2/8)(u_{i+2} - 2u_i + u_{i-2}).
    let scheme = SchemeConfig::new(
        TimeIntegrator::Lat {
            m: 2,
            widths: LatWidths::Uniform(1),
        },
        0.5,
        ReconstructionConfig::oweno3(),
    )
    .with_first_order(FirstOrderTerm::Centered);
    let stepper = Stepper1::new(scheme).unwrap();
    let grid = Grid1::new(0.0, 1.0, 80);
    let mut s = sine_state(&grid, stepper.ghost_width());
    let initial: Vec<f64> = s.interior().to_vec();
    let dt = 0.5 * grid.dx();
    stepper
        .step(&mut s, &grid, model, Boundary::Periodic, dt, &mut stats)
        .unwrap();
    let c = 0.5;
    let mut lat_diff: f64 = 0.0;
    let n = 80;
    for i in 0..n {
        let um2 = initial[(i + n - 2) % n];
        let um1 = initial[(i + n - 1) % n];
        let up1 = initial[(i + 1) % n];
        let up2 = initial[(i + 2) % n];
        let expect =
            initial[i] - 0.5 * c * (up1 - um1) + c * c / 8.0 * (up2 - 2.0 * initial[i] + um2);
        lat_diff = lat_diff.max((s.interior()[i] - expect).abs());
    }
    let lat_ok = lat_diff <= 1e-15;

    let passed = cat_ok && lat_ok;
    report(
        2,
        passed,
        &format!(
            "CAT2 vs Lax-Wendroff max diff {max_diff:.3e}; LAT(m=2) vs 5-point {lat_diff:.3e}"
        ),
    );
    assert!(passed);
}

fn sine_l1_error(label: &str, cfl: f64, n: usize) -> f64 {
    let l: SchemeLabel = label.parse().unwrap();
    let scheme = l.scheme_config(cfl).unwrap();
    let stepper = Stepper1::new(scheme).unwrap();
    let grid = Grid1::new(0.0, 1.0, n);
    let mut state = sine_state(&grid, stepper.ghost_width());
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
        .unwrap();
    let mut l1 = 0.0;
    for i in 0..n as isize {
        let exact = (2.0 * std::f64::consts::PI * grid.center(i)).sin();
        l1 += (state.cell(i)[0] - exact).abs();
    }
    l1 * grid.dx()
}

/// Criterion 3: empirical orders of accuracy on smooth periodic advection
/// (u0 = sin(2 pi x), t = 1, meshes 50/100/200/400).
///
/// FOW5C4 runs at its canonical CFL 0.5: the correction terms of the CAT
/// flux all carry powers of dt, so shrinking the CFL suppresses exactly
/// the fourth-order terms this check targets and leaves the fifth-order
/// reconstruction error dominant on these meshes.
#[test]
fn criterion_3_orders_of_accuracy() {
    let cases = [
        ("FOW3C2", 0.5, 2.0),
        ("FOW3L3", 0.5, 3.0),
        ("FOW3R3", 0.5, 3.0),
        ("FOW5C4", 0.5, 4.0),
        ("FOW5L5", 0.5, 5.0),
    ];
    let mut passed = true;
    let mut detail = String::new();
    for (label, cfl, target) in cases {
        let errs: Vec<f64> = [50usize, 100, 200, 400]
            .iter()
            .map(|&n| sine_l1_error(label, cfl, n))
            .collect();
        let eocs: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let ok = eocs.iter().all(|e| (e - target).abs() <= 0.4);
        passed &= ok;
        detail.push_str(&format!(
            "{label}: eoc {:.2}/{:.2}/{:.2} (target {target}); ",
            eocs[0], eocs[1], eocs[2]
        ));
    }
    report(3, passed, detail.trim_end_matches("; "));
    assert!(passed);
}

/// Cell averages of x^j on the stencil with the interface at the critical
/// point x = 0 (cell centers at (i + 1/2) h), reconstructed at that
/// interface; returns |q - 0|.
fn critical_point_error(cfg: &ReconstructionConfig, h: f64, j: i32) -> f64 {
    let avg = |c: f64| -> f64 {
        ((c + h / 2.0).powi(j + 1) - (c - h / 2.0).powi(j + 1)) / ((j as f64 + 1.0) * h)
    };
    let n = cfg.window_len();
    let p = cfg.p as i64;
    let stencil: Vec<f64> = (0..n)
        .map(|k| avg((k as i64 - p) as f64 * h - h / 2.0))
        .collect();
    cfg.reconstruct(&stencil).unwrap().value.abs()
}

/// Criterion 4: critical-point optimality of the third-order optimal
/// weights versus the classical ones on f(x) = x^3.
#[test]
fn criterion_4_critical_point_optimality() {
    let ladder = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let oweno = ReconstructionConfig::oweno3();
    let js = ReconstructionConfig::weno_js(1).unwrap(); // eps = 1e-6
    let mean_eoc = |cfg: &ReconstructionConfig| -> f64 {
        let errs: Vec<f64> = ladder
            .iter()
            .map(|&h| critical_point_error(cfg, h, 3))
            .collect();
        let eocs: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        eocs.iter().sum::<f64>() / eocs.len() as f64
    };
    let e_ow = mean_eoc(&oweno);
    let e_js = mean_eoc(&js);
    let passed = e_ow >= 2.7 && e_js <= 2.5;
    report(
        4,
        passed,
        &format!(
            "OWENO3 mean EOC {e_ow:.3} (need >= 2.7); WENO-JS mean EOC {e_js:.3} (need <= 2.5)"
        ),
    );
    assert!(passed);
}

/// Criterion 5: Sod reproduction with FOW5C4 and refinement improvement.
#[test]
fn criterion_5_sod_reproduction() {
    let case = find_case("test3").unwrap();
    let label: SchemeLabel = "FOW5C4".parse().unwrap();
    let run = |cells: usize| {
        let o = RunOverrides {
            cells: Some(cells),
            ..Default::default()
        };
        let (r, _) = run_case(&case, label, &o).unwrap();
        assert_eq!(r.status, RunStatus::Completed, "N={cells} did not finish");
        r.l1.unwrap()[0]
    };
    let e200 = run(200);
    let e400 = run(400);
    let passed = e200 <= 2e-2 && e400 < e200;
    report(
        5,
        passed,
        &format!("density L1 at N=200: {e200:.4e} (<= 2e-2); N=400: {e400:.4e}"),
    );
    assert!(passed);
}

/// Criterion 6: stability contrast at CFL 0.9 on the advection profile,
/// as stated: FOW5C4 completes with max|u| <= 1.5 and FOW5L5 diverges.
///
/// The implemented method reproduces the printed flux formulas faithfully,
/// and for those the frozen-coefficient growth factors are 1.80 for the
/// WENO-coupled CAT4 flux and 1.0000 for graded LAT5 at this CFL, so the
/// measured outcomes are the exact opposite of the stated ones. The
/// criterion is asserted as written and the measured behavior printed.
#[test]
fn criterion_6_stability_contrast() {
    let case = find_case("test1").unwrap();
    let outcome = |label: &str| {
        let l: SchemeLabel = label.parse().unwrap();
        let o = RunOverrides {
            cfl: Some(0.9),
            skip_errors: true,
            ..Default::default()
        };
        let (r, sol) = run_case(&case, l, &o).unwrap();
        let maxu = match sol {
            Solution::OneD(_, s) => s.interior_max_abs(),
            _ => unreachable!(),
        };
        (r.status, maxu)
    };
    let (c4_status, c4_max) = outcome("FOW5C4");
    let (l5_status, _) = outcome("FOW5L5");
    let c4_ok = c4_status == RunStatus::Completed && c4_max <= 1.5;
    let l5_ok = matches!(l5_status, RunStatus::Diverged { .. });
    let passed = c4_ok && l5_ok;
    report(
        6,
        passed,
        &format!(
            "FOW5C4: {c4_status:?}, max|u| {c4_max:.3e} (stated: completes <= 1.5); \
             FOW5L5: {l5_status:?} (stated: diverged): measured stability roles are swapped \
             relative to the stated ones; see the frozen-coefficient analysis in the test doc"
        ),
    );
    assert!(passed);
}

/// Criterion 7: mass conservation over 100 periodic Burgers steps for all
/// eighteen scheme pairings.
#[test]
fn criterion_7_conservation() {
    let grid = Grid1::new(0.0, 1.0, 160);
    let model = FluxModel::Burgers;
    let mut passed = true;
    let mut worst: f64 = 0.0;
    let mut worst_label = "";
    for label in CANONICAL_SCHEMES {
        let l: SchemeLabel = label.parse().unwrap();
        let scheme = l.scheme_config(0.5).unwrap();
        let stepper = Stepper1::new(scheme).unwrap();
        let mut s = foweno::grid::init_gaussian_burgers(&grid, stepper.ghost_width()).unwrap();
        let mass0 = s.interior_sums()[0] * grid.dx();
        let mut stats = RunStats::default();
        for _ in 0..100 {
            let dt = cfl_dt(&s, model, &grid, 0.5).unwrap();
            stepper
                .step(&mut s, &grid, model, Boundary::Periodic, dt, &mut stats)
                .unwrap();
        }
        let drift = ((s.interior_sums()[0] * grid.dx() - mass0) / mass0).abs();
        if drift > worst {
            worst = drift;
            worst_label = label;
        }
        passed &= drift <= 1e-12;
    }
    report(
        7,
        passed,
        &format!("worst relative mass drift {worst:.3e} ({worst_label}), limit 1e-12"),
    );
    assert!(passed);
}

/// Independent pressure-function bisection oracle for the star region,
/// written from the jump/rarefaction relations directly.
fn bisect_star(left: EulerPrimitive1D, right: EulerPrimitive1D, gamma: f64) -> (f64, f64) {
    let wave = |p: f64, s: &EulerPrimitive1D| -> f64 {
        let c = (gamma * s.p / s.rho).sqrt();
        if p > s.p {
            let a = 2.0 / ((gamma + 1.0) * s.rho);
            let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
            (p - s.p) * (a / (p + b)).sqrt()
        } else {
            2.0 * c / (gamma - 1.0) * ((p / s.p).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        }
    };
    let f = |p: f64| wave(p, &left) + wave(p, &right) + right.u - left.u;
    let mut lo = 1e-12;
    let mut hi = 10.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let u = 0.5 * (left.u + right.u) + 0.5 * (wave(p, &right) - wave(p, &left));
    (p, u)
}

/// Criterion 8: exact Riemann star states versus the bisection oracle for
/// the five 1D Euler data sets.
#[test]
fn criterion_8_exact_riemann() {
    let gamma = 1.4;
    let data = [
        (
            EulerPrimitive1D::new(1.0, 0.0, 1.0),
            EulerPrimitive1D::new(0.125, 0.0, 0.1),
        ),
        (
            EulerPrimitive1D::new(1.0, -2.0, 0.4),
            EulerPrimitive1D::new(1.0, 2.0, 0.4),
        ),
        (
            EulerPrimitive1D::new(1.0, 0.0, 1000.0),
            EulerPrimitive1D::new(1.0, 0.0, 0.01),
        ),
        (
            EulerPrimitive1D::new(1.0, 0.0, 0.01),
            EulerPrimitive1D::new(1.0, 0.0, 100.0),
        ),
        (
            EulerPrimitive1D::new(0.99924, 19.5975, 460.894),
            EulerPrimitive1D::new(5.99242, -6.19633, 46.0950),
        ),
    ];
    let mut passed = true;
    let mut worst: f64 = 0.0;
    for (l, r) in data {
        let sol = euler_exact_riemann(l, r, gamma).unwrap();
        let (p_oracle, u_oracle) = bisect_star(l, r, gamma);
        let dp = (sol.p_star - p_oracle).abs() / p_oracle.max(1e-30);
        let du = (sol.u_star - u_oracle).abs() / u_oracle.abs().max(1.0);
        worst = worst.max(dp).max(du);
        passed &= dp <= 1e-10 && du <= 1e-10;
    }
    // Sod star pressure against the textbook value.
    let sod = euler_exact_riemann(data[0].0, data[0].1, gamma).unwrap();
    let sod_ok = (sod.p_star - 0.30313).abs() < 5e-6;
    passed &= sod_ok;
    report(
        8,
        passed,
        &format!(
            "worst star-state relative gap {worst:.3e}; Sod p* = {:.5}",
            sod.p_star
        ),
    );
    assert!(passed);
}

/// Criterion 9: diagonal symmetry of the configuration-3 quadrant run and
/// exact 1D reduction of y-independent data for every scheme pairing.
#[test]
fn criterion_9_two_dimensional_checks() {
    // Diagonal symmetry at 100x100 with FOW3C2, serial, t = 0.3.
    let case = find_case("test8").unwrap();
    let label: SchemeLabel = "FOW3C2".parse().unwrap();
    let o = RunOverrides {
        cells: Some(100),
        serial: true,
        ..Default::default()
    };
    let (rep, sol) = run_case(&case, label, &o).unwrap();
    assert_eq!(rep.status, RunStatus::Completed);
    let sym = match sol {
        Solution::TwoD(_, s) => {
            let mut worst: f64 = 0.0;
            for j in 0..100isize {
                for i in 0..100isize {
                    worst = worst.max((s.cell(i, j)[0] - s.cell(j, i)[0]).abs());
                }
            }
            worst
        }
        _ => unreachable!(),
    };
    let sym_ok = sym <= 1e-10;

    // y-independent 2D evolution equals the 1D evolution, all schemes.
    let model = FluxModel::Euler2d { gamma: 1.4 };
    let n = 44;
    let grid2 = Grid2::square(0.0, 1.0, n);
    let grid1 = Grid1::new(0.0, 1.0, n);
    let mut reduction_worst: f64 = 0.0;
    let mut reduction_ok = true;
    for label in CANONICAL_SCHEMES {
        let l: SchemeLabel = label.parse().unwrap();
        let scheme = l.scheme_config(0.4).unwrap();
        let stepper2 = Stepper2::new(scheme.clone()).unwrap();
        let stepper1 = Stepper1::new(scheme).unwrap();
        let mut s2 = State2::zeros(&grid2, 4, stepper2.ghost_width()).unwrap();
        let mut s1 = State1::zeros(&grid1, 4, stepper1.ghost_width()).unwrap();
        for i in 0..n as isize {
            let x = grid1.center(i);
            let rho = 1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin();
            let prim = [rho, 0.4, -0.1, 1.0];
            let cons = model.primitive_to_conserved(&prim).unwrap();
            s1.cell_mut(i).copy_from_slice(&cons);
            for j in 0..n as isize {
                s2.cell_mut(i, j).copy_from_slice(&cons);
            }
        }
        let mut st1 = RunStats::default();
        let mut st2 = RunStats::default();
        for _ in 0..3 {
            let dt = cfl_dt_2d(&s2, model, &grid2, 0.4).unwrap();
            stepper2
                .step(&mut s2, &grid2, model, Boundary::Periodic, dt, &mut st2)
                .unwrap();
            stepper1
                .step(&mut s1, &grid1, model, Boundary::Periodic, dt, &mut st1)
                .unwrap();
        }
        for i in 0..n as isize {
            for c in 0..4 {
                let a = s2.cell(i, (n / 2) as isize)[c];
                let b = s1.cell(i)[c];
                let gap = (a - b).abs() / b.abs().max(1.0);
                reduction_worst = reduction_worst.max(gap);
                reduction_ok &= gap <= 1e-12;
            }
        }
    }

    let passed = sym_ok && reduction_ok;
    report(
        9,
        passed,
        &format!(
            "diagonal symmetry residual {sym:.3e} (limit 1e-10); worst 1D-reduction gap {reduction_worst:.3e} (limit 1e-12)"
        ),
    );
    assert!(passed);
}

/// Criterion 10: benchmark methodology: ratio table with the reference
/// at 1.0 and the hardware-independent indicator-cost surrogate.
#[test]
fn criterion_10_cost_methodology() {
    let case = find_case("test1").unwrap();
    let labels: Vec<SchemeLabel> = ["W5R3", "FOW5C4", "W3C2", "FOW3C2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let o = RunOverrides {
        cells: Some(50),
        t_final: Some(0.05),
        ..Default::default()
    };
    let table = benchmark(&case, &labels, 2, &o).unwrap();
    let fmt_ok = table.reference_scheme == "W5R3"
        && table.entries[0].ratio == 1.0
        && table.entries.len() == labels.len()
        && table.entries.iter().all(|e| e.mean_seconds > 0.0);
    let mut ops_ok = true;
    for ops in &table.indicator_ops {
        ops_ok &= ops.fast.0 < ops.jiang_shu.0 && ops.fast.1 < ops.jiang_shu.1;
    }
    let passed = fmt_ok && ops_ok;
    let surrogate: Vec<String> = table
        .indicator_ops
        .iter()
        .map(|o| {
            format!(
                "p={}: fast {} < jiang-shu {}",
                o.p,
                o.fast.0 + o.fast.1,
                o.jiang_shu.0 + o.jiang_shu.1
            )
        })
        .collect();
    report(
        10,
        passed,
        &format!(
            "reference {} at ratio 1.0, {} schemes; indicator ops {}",
            table.reference_scheme,
            table.entries.len(),
            surrogate.join(", ")
        ),
    );
    assert!(passed);
}

// Keep the symmetry helper honest: ghost filling is part of the step and
// must preserve the diagonal map too.
#[allow(dead_code)]
fn fill_check(state: &mut State2) {
    fill_ghosts_2d(state, Boundary::Outflow, Boundary::Outflow);
}
