//! Burgers equation with a Gaussian pulse: characteristic solution before
//! the shock forms, fine-grid self-reference after.

use foweno::exactsol::{burgers_breaking_time, burgers_characteristic};
use foweno::grid::gaussian_profile;
use foweno::harness::{find_case, run_case, RunOverrides, SchemeLabel};

fn main() {
    // Shock-formation time of the periodic profile: -1 / min u0'.
    let slope = |x: f64| {
        let xw = x.rem_euclid(1.0);
        -20.0 * (xw - 0.5) * gaussian_profile(xw)
    };
    let t_break = burgers_breaking_time(&slope, 0.0, 1.0);
    println!("shock forms at t = {t_break:.6}");

    // Pre-shock: compare against the characteristic solution.
    let case = find_case("test2").expect("catalog case");
    let label: SchemeLabel = "FOW5C4".parse().unwrap();
    let pre = RunOverrides {
        t_final: Some(0.5 * t_break),
        ..Default::default()
    };
    let (report, _) = run_case(&case, label, &pre).expect("pre-shock run");
    println!(
        "pre-shock  (t = {:.3}): L1 vs characteristics = {:.4e}",
        report.t_final,
        report.l1.as_ref().unwrap()[0]
    );
    // Spot value by direct characteristic tracing.
    let profile = |x: f64| gaussian_profile(x.rem_euclid(1.0));
    let v = burgers_characteristic(&profile, &slope, t_break, 0.62, 0.5 * t_break).unwrap();
    println!("characteristic value at x = 0.62: {v:.6}");

    // Post-shock: the harness switches to a 20x fine-grid self-reference.
    let post = RunOverrides::default();
    let (report, _) = run_case(&case, label, &post).expect("post-shock run");
    println!(
        "post-shock (t = {:.3}): L1 vs fine grid = {:.4e}, {} steps",
        report.t_final,
        report.l1.as_ref().unwrap()[0],
        report.steps
    );
}
