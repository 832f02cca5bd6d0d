//! Bifurcation diagram under Arrhenius kinetics for several reaction orders.

use rmwave::bifurcation::{c_grid, find_turning_point, TraceMode};
use rmwave::{Kinetics, ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let grid = c_grid(2.0, 4.0, 0.05)?;
    for alpha in [0.25, 0.5, 0.75] {
        let p = ModelParams::new(alpha, 2.0, 0.5, Kinetics::Arrhenius { ta: 1.0 })?;
        let sys = WaveSystem::new(p);
        let (b0, b1) = sys.trace_curves(&grid, 1e-8, TraceMode::Parallel { jobs: 4 });
        let tp = find_turning_point(&b0)?;
        let last1 = b1.solved().last().map(|pt| (pt.c, pt.beta));
        println!(
            "alpha = {alpha}: beta_cj = {:.6}, turning point ({:.4}, {:.6}), last beta1 below cap {:?}",
            b0.entries[0].beta().unwrap_or(f64::NAN),
            tp.c,
            tp.beta,
            last1
        );
    }
    Ok(())
}
