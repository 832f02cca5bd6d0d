//! Trace beta0(c) and beta1(c) and print the diagram as a table.

use rmwave::bifurcation::{c_grid, TraceMode, DEFAULT_BETA_TOL};
use rmwave::{ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let sys = WaveSystem::new(ModelParams::reference());
    let grid = c_grid(2.0, 5.0, 0.2)?;
    let (b0, b1) = sys.trace_curves(&grid, DEFAULT_BETA_TOL, TraceMode::Sequential);
    println!("{:>5} {:>12} {:>12}", "c", "beta0", "beta1");
    for (e0, e1) in b0.entries.iter().zip(&b1.entries) {
        let beta1 = match &e1.result {
            Ok(p) => format!("{:.8}", p.beta),
            Err(f) => f.status().to_string(),
        };
        println!(
            "{:>5.2} {:>12.8} {beta1:>12}",
            e0.c,
            e0.beta().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
