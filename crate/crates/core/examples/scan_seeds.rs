//! Finds seeds on the zero level of `Im F̂ = Im sin τ` in a window and traces
//! one curve from each branch.
//!
//! cargo run --example scan_seeds

use std::f64::consts::PI;

use slag::registry::sphere_action;
use slag::tracer::{scan_seeds, trace, TraceOptions, Window, DEFAULT_STOP_SPEED};
use slag::Calibration;

fn main() -> slag::Result<()> {
    // SO(2)×SO(1) on S²: F = cos τ, F̂ = sin τ.
    let cal = Calibration::from_action(&sphere_action(2, 2)?, 0.0)?;
    let window = Window {
        phi: (0.0, PI),
        rho: (-1.0, 1.0),
    };
    let seeds = scan_seeds(&cal, window, (21, 11), 0.0, DEFAULT_STOP_SPEED)?;
    println!("{} seeds on Im sin τ = 0", seeds.len());

    let on_axis = seeds.iter().find(|z| z.im.abs() < 1e-10 && z.re > 0.2);
    let on_line = seeds.iter().find(|z| z.im.abs() > 0.2);
    let opts = TraceOptions {
        max_steps: 500,
        ..Default::default()
    };
    for seed in [on_axis, on_line].into_iter().flatten() {
        let t = trace(&cal, *seed, &opts)?;
        let end = t.curve.axes[0].tau.last().unwrap();
        println!("seed {seed:.4} → end {end:.4}");
    }
    Ok(())
}
