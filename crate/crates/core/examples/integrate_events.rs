//! Adaptive Dormand-Prince integration with event localization.

use rmwave::integrator::{integrate, Direction, Event, IntegratorConfig, Termination};

fn main() -> rmwave::Result<()> {
    // harmonic oscillator: first downward zero of x is at pi/2
    let cfg = IntegratorConfig::default();
    let tr = integrate(
        |_, y| [y[1], -y[0]],
        [1.0, 0.0],
        0.0,
        &[
            Event::crossing(0, 0.0, Direction::Down),
            Event::horizon(10.0),
        ],
        &cfg,
    )?;
    assert_eq!(tr.terminal, Termination::Event(0));
    println!(
        "crossing at t = {:.15} (pi/2 = {:.15})",
        tr.t_end(),
        std::f64::consts::FRAC_PI_2
    );
    println!("steps: {:?}", tr.stats);

    // dense output between accepted steps
    for t in [0.1, 0.5, 1.0, 1.5] {
        let y = tr.interpolate(t).unwrap();
        println!("x({t}) = {:.12}  cos = {:.12}", y[0], f64::cos(t));
    }
    Ok(())
}
