//! Whole-line profile of a bump-type wave, written as CSV.
//!
//! Usage: cargo run --example wave_profile [beta] [c] > profile.csv

use rmwave::table::ProfileTable;
use rmwave::{FlowParams, ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("number"));
    let beta = args.next().unwrap_or(0.4);
    let c = args.next().unwrap_or(2.5);
    let sys = WaveSystem::new(ModelParams::reference());
    let prof = sys.profile(FlowParams::new(beta, c), -6.0, 2.0, 401)?;
    eprintln!(
        "{}: ell = {:.6}, T behind = {:.6}, max boundary jump = {:.1e}",
        prof.class.wave, prof.ell, prof.t_minus, prof.boundary_jump
    );
    print!("{}", ProfileTable::from_profile(&prof).to_csv());
    Ok(())
}
