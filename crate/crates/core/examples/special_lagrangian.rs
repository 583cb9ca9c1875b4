//! Traces profile curves of S² at phases 0 and π/2, sweeps them by the group
//! inside the quadric, and checks that the result is Lagrangian with constant
//! calibration phase.
//!
//! cargo run --example special_lagrangian

use std::f64::consts::FRAC_PI_2;

use slag::monge_ampere::ScalarProfile;
use slag::quadric::{verify_special_lagrangian, wrap_half_turn, Potential};
use slag::registry::sphere_action;
use slag::tracer::{trace_level_curve, TraceOptions};
use slag::{Calibration, C64};

fn main() -> slag::Result<()> {
    let pot = Potential::new(ScalarProfile::new(1.0, 1.0, 1.0, 1)?);
    let action = sphere_action(2, 1)?;
    let mut phases = Vec::new();
    for theta in [0.0, FRAC_PI_2] {
        let cal = Calibration::from_action(&action, theta)?;
        let curve = trace_level_curve(&cal, C64::new(0.8, 0.1), &TraceOptions::default())?;
        let rep = verify_special_lagrangian(&curve, 2, 1, &pot, 200)?;
        println!(
            "θ = {theta:.4}: max |ω| {:.1e}, phase {:.6}, drift {:.1e}, |μ| ≤ {:.1e}",
            rep.max_omega_defect, rep.phase, rep.phase_drift_rad, rep.moment_max_on_level
        );
        phases.push(rep.phase);
    }
    println!(
        "phase gap mod π: {:.6}",
        wrap_half_turn(phases[1] - phases[0]).abs()
    );
    Ok(())
}
