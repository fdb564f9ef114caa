//! Exact Riemann solver star states for the five 1D Euler data sets, plus
//! the wave pattern each one produces.

use foweno::exactsol::{euler_exact_riemann, WaveKind};
use foweno::models::EulerPrimitive1D;

fn main() {
    let cases = [
        ("Sod", (1.0, 0.0, 1.0), (0.125, 0.0, 0.1)),
        ("123 (near vacuum)", (1.0, -2.0, 0.4), (1.0, 2.0, 0.4)),
        ("blast left half", (1.0, 0.0, 1000.0), (1.0, 0.0, 0.01)),
        ("blast right half", (1.0, 0.0, 0.01), (1.0, 0.0, 100.0)),
        (
            "shock collision",
            (0.99924, 19.5975, 460.894),
            (5.99242, -6.19633, 46.0950),
        ),
    ];
    let wave = |w: WaveKind| match w {
        WaveKind::Shock => "shock",
        WaveKind::Rarefaction => "rarefaction",
    };
    println!(
        "{:<20} {:>12} {:>12}  {:<12} {:<12}",
        "problem", "p*", "u*", "left wave", "right wave"
    );
    for (name, l, r) in cases {
        let sol = euler_exact_riemann(
            EulerPrimitive1D::new(l.0, l.1, l.2),
            EulerPrimitive1D::new(r.0, r.1, r.2),
            1.4,
        )
        .expect("non-vacuum data");
        println!(
            "{:<20} {:>12.6} {:>12.6}  {:<12} {:<12}",
            name,
            sol.p_star,
            sol.u_star,
            wave(sol.left_wave),
            wave(sol.right_wave)
        );
    }

    // Sample a solution profile at a few self-similar coordinates.
    let sod = euler_exact_riemann(
        EulerPrimitive1D::new(1.0, 0.0, 1.0),
        EulerPrimitive1D::new(0.125, 0.0, 0.1),
        1.4,
    )
    .unwrap();
    println!("\nSod profile at t = 0.25 (xi = (x - 1/2)/t):");
    for x in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let q = sod.sample((x - 0.5) / 0.25);
        println!(
            "  x = {x:.2}: rho = {:.5}, u = {:.5}, p = {:.5}",
            q.rho, q.u, q.p
        );
    }
}
