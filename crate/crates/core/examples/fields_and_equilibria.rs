//! Equilibria, CJ velocity and the three equivalent planar fields.

use rmwave::model::{PhaseState, UState, VState};
use rmwave::{FlowParams, ModelParams};

fn main() -> rmwave::Result<()> {
    let p = ModelParams::reference();
    println!("c_cj = {}  c_star = {}", p.cj_velocity(), p.c_star());
    for c in [2.0, 2.5, 3.0, 4.25, 5.0] {
        let (t0, t1) = p.equilibria(c)?;
        println!(
            "c = {c:<5} T0 = {t0:.6}  T1 = {t1:.6}  weak orbit above T_i: {}",
            t1 > p.ti()
        );
    }

    let flow = FlowParams::new(0.5, 2.5);
    let (t, z) = (3.0, 0.25);
    let u = p.z_to_u(z);
    println!("\nat T = {t}, Z = {z} (U = {u:.6}):");
    println!(
        "  (T, Z) field: {:?}",
        p.field_fast(flow, PhaseState { t, z })
    );
    println!("  (T, U) field: {:?}", p.field_u(flow, UState { t, u }));
    let eps = 1.0 / flow.c;
    println!(
        "  (V, Z) field: {:?}",
        p.field_compactified(flow.beta, eps, VState { v: 1.0 / t, z })?
    );
    let (zi, ui) = p.ignition_contact(2.5)?;
    println!("homocline meets T_i at Z = {zi:.6} (U = {ui:.6})");
    Ok(())
}
