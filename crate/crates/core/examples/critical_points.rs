//! The CJ point and the turning point of beta0(c).

use rmwave::bifurcation::{c_grid, find_turning_point, TraceMode};
use rmwave::{Branch, ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let sys = WaveSystem::new(ModelParams::reference());
    let (c_cj, beta_cj) = sys.find_cj_point(1e-10)?;
    println!("CJ point:      c = {c_cj}, beta = {beta_cj:.12}");

    let grid = c_grid(2.0, 5.0, 0.02)?;
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let curve = sys.trace_curve(Branch::Strong, &grid, 1e-10, TraceMode::Parallel { jobs });
    let tp = find_turning_point(&curve)?;
    println!("turning point: c = {:.6}, beta = {:.10}", tp.c, tp.beta);
    println!("local minima on the grid: {:?}", tp.local_minima);
    Ok(())
}
