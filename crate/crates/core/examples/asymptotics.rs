//! Contact order at the equilibria and the center-manifold expansion for large c.

use rmwave::{Branch, FlowParams, ModelParams, WaveSystem};

fn main() -> rmwave::Result<()> {
    let flow = FlowParams::new(0.5, 2.5);
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        let sys = WaveSystem::new(ModelParams::reference().with_alpha(alpha)?);
        let strong = sys.contact_order_estimate(flow, Branch::Strong)?;
        let weak = sys.contact_order_estimate(flow, Branch::Weak)?;
        let expect = (2.0 - alpha) / (1.0 - alpha);
        println!("alpha = {alpha}: fitted {strong:.4} / {weak:.4}, expected {expect:.4}");
    }

    let sys = WaveSystem::new(ModelParams::reference());
    let mut prev: Option<f64> = None;
    for c in [12.5, 25.0, 50.0, 100.0] {
        let r = sys.center_manifold_residual(1.0, c, 0.5)?;
        let ratio = prev.map_or(String::new(), |p| format!("ratio {:.2}", p / r));
        println!("c = {c:>5}: residual {r:.3e} {ratio}");
        prev = Some(r);
    }
    Ok(())
}
