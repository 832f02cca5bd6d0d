//! Classify waves over a few (beta, c) pairs through the transition map.

use rmwave::{FlowParams, ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let sys = WaveSystem::new(ModelParams::reference());
    let cases = [(0.4, 2.5), (0.8, 2.5), (3.0, 2.5), (0.4, 2.0), (2.0, 5.0)];
    println!(
        "{:>6} {:>5}  {:<16} {:>10} {:>10}",
        "beta", "c", "type", "Z0", "Z1"
    );
    for (beta, c) in cases {
        let class = sys.classify(FlowParams::new(beta, c))?;
        let z1 = class.z1.map_or("-".to_string(), |z| format!("{z:.6}"));
        println!(
            "{beta:>6} {c:>5}  {:<16} {:>10.6} {z1:>10}",
            class.wave, class.z0
        );
    }

    // the special type sits exactly on the curve beta0(c)
    let b0 = sys.solve_beta0(2.5, 1e-12, None)?.beta;
    let class = sys.classify(FlowParams::new(b0, 2.5))?;
    println!("\nbeta0(2.5) = {b0:.10} -> {}", class.wave);
    Ok(())
}
