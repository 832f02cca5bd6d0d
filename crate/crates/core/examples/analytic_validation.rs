//! Closed-form roots from Kummer and Bessel series against shooting.

use rmwave::analytic::{analytic_beta0, analytic_beta1, solve_beta_cj};
use rmwave::{ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let sys = WaveSystem::new(ModelParams::reference());
    println!("beta_cj (Bessel) = {:.15}", solve_beta_cj()?);
    println!(
        "{:>4} {:>14} {:>14} {:>9} {:>14} {:>14} {:>9}",
        "c", "beta0 series", "beta0 shoot", "gap", "beta1 series", "beta1 shoot", "gap"
    );
    for c in [2.0, 2.2, 2.5, 3.0, 3.5] {
        let a0 = analytic_beta0(c)?;
        let s0 = sys.solve_beta0(c, 1e-11, None)?.beta;
        let a1 = analytic_beta1(c)?;
        let s1 = sys.solve_beta1(c, 1e-11, None)?.beta;
        println!(
            "{c:>4} {a0:>14.10} {s0:>14.10} {:>9.1e} {a1:>14.10} {s1:>14.10} {:>9.1e}",
            (a0 - s0).abs(),
            (a1 - s1).abs()
        );
    }
    Ok(())
}
