//! How the nonlinear weights react to data: smooth samples, a step, and a
//! critical point, for the classical and the fast/optimal reconstructions.

use foweno::reconstruct::{
    fast_indicator_ops, fast_indicators, jiang_shu_indicator_ops, jiang_shu_indicators,
    ReconstructionConfig,
};

fn show(cfg: &ReconstructionConfig, name: &str, window: &[f64]) {
    let r = cfg.reconstruct(window).unwrap();
    println!(
        "  {name:<22} value {:+.6}  weights {:?}",
        r.value,
        r.weights
            .iter()
            .map(|w| (w * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
}

fn main() {
    let smooth: Vec<f64> = (-2..=2).map(|j| (0.3 * j as f64).exp()).collect();
    let step = [0.0, 0.0, 0.0, 1.0, 1.0];

    println!("fifth-order stencils (ideal weights 0.1/0.6/0.3):");
    let js5 = ReconstructionConfig::weno_js(2).unwrap();
    let fow5 = ReconstructionConfig::foweno(2).unwrap();
    println!(" smooth exponential:");
    show(&js5, "WENO-JS5", &smooth);
    show(&fow5, "FOWENO5", &smooth);
    println!(" step (discontinuity between cells 0 and 1):");
    show(&js5, "WENO-JS5", &step);
    show(&fow5, "FOWENO5", &step);

    println!("\nthird-order extended stencil:");
    let ow3 = ReconstructionConfig::oweno3();
    show(&ow3, "OWENO3 smooth", &smooth[..4]);
    show(&ow3, "OWENO3 step", &[0.0, 0.0, 1.0, 1.0]);

    println!("\nsmoothness indicators on the step stencil:");
    println!("  fast:      {:?}", fast_indicators(&step, 2).unwrap());
    println!("  jiang-shu: {:?}", jiang_shu_indicators(&step, 2).unwrap());

    println!("\nstatic arithmetic cost per indicator-set evaluation:");
    for p in [2usize, 3] {
        let f = fast_indicator_ops(p);
        let j = jiang_shu_indicator_ops(p);
        println!(
            "  p = {p}: fast {} adds + {} mults = {}, jiang-shu {} adds + {} mults = {}",
            f.adds,
            f.mults,
            f.total(),
            j.adds,
            j.mults,
            j.total()
        );
    }
}
