//! Wall-clock ratio table over scheme pairings (the CPU-cost methodology):
//! serial repetitions, timing only the time loop, ratios against a named
//! reference scheme.
//!
//! Desk-scale settings; pass `--full` for the catalog resolution and ten
//! repetitions.

use foweno::harness::{benchmark, find_case, RunOverrides, SchemeLabel};

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let case = find_case("test1").expect("catalog case");
    let labels: Vec<SchemeLabel> = [
        "W3C2", "W3L3", "W3R3", "W5C4", "W5L5", "W5R3", "FOW3C2", "FOW3L3", "FOW3R3", "FOW5C4",
        "FOW5L5", "FOW5R3",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let overrides = if full {
        RunOverrides {
            cfl: Some(0.5),
            skip_errors: true,
            ..Default::default()
        }
    } else {
        RunOverrides {
            cells: Some(100),
            t_final: Some(0.25),
            cfl: Some(0.5),
            skip_errors: true,
            ..Default::default()
        }
    };
    let reps = if full { 10 } else { 3 };
    let table = benchmark(&case, &labels, reps, &overrides).expect("benchmark");
    println!(
        "case {}, mean of {} runs, ratios vs {}:",
        table.case, table.repetitions, table.reference_scheme
    );
    println!("{:>8} {:>12} {:>8}", "scheme", "seconds", "ratio");
    for e in &table.entries {
        println!("{:>8} {:>12.6} {:>8.4}", e.scheme, e.mean_seconds, e.ratio);
    }
    println!("\nhardware-independent surrogate (indicator arithmetic):");
    for ops in &table.indicator_ops {
        println!(
            "  p = {}: fast {}+{} ops vs jiang-shu {}+{}",
            ops.p, ops.fast.0, ops.fast.1, ops.jiang_shu.0, ops.jiang_shu.1
        );
    }
}
