//! Checks the mixed-partial identity `∂²F̂(τ₁(s₁), τ₂(s₂))/∂s₁∂s₂ = F τ₁′ τ₂′`
//! for a rank-two action along a pair of complex lines.
//!
//! cargo run --example verify_product

use slag::calibration::{AxisSamples, CurveMeta};
use slag::tracer::verify_curve;
use slag::{ActionCatalog, Calibration, ProfileCurve, C64};

fn main() -> slag::Result<()> {
    let catalog = ActionCatalog::builtin();
    for name in ["SO(6) on SU(6)/Sp(3)", "rho14(SO(4)) on G2/SO(4)"] {
        let cal = Calibration::from_action(catalog.lookup(name)?, 0.0)?;
        let curve = ProfileCurve {
            axes: vec![
                AxisSamples::line(C64::new(0.0, 0.0), C64::new(1.0, 0.0), 0.1, 1e-3, 1001),
                AxisSamples::line(C64::new(0.0, 0.0), C64::new(0.2, 0.1), 0.1, 1e-3, 1001),
            ],
            meta: CurveMeta::default(),
        };
        let report = cal.mixed_partial_check(&curve, 1e-3)?;
        println!(
            "{name}: sup relative error {:.2e}, pointwise max {:.2e} ({} checked, {} skipped)",
            report.sup_rel_error, report.max_rel_error, report.checked, report.skipped
        );
    }

    // Two real lines: every factor is real, so the residual vanishes.
    let cal = Calibration::from_action(catalog.lookup("SO(6) on SU(6)/Sp(3)")?, 0.0)?;
    let real = ProfileCurve {
        axes: vec![
            AxisSamples::line(C64::new(0.1, 0.0), C64::new(1.0, 0.0), 0.0, 0.05, 20),
            AxisSamples::line(C64::new(-0.4, 0.0), C64::new(0.5, 0.0), 0.0, 0.05, 20),
        ],
        meta: CurveMeta::default(),
    };
    let rep = verify_curve(&cal, &real)?;
    println!(
        "real lines: max raw residual {:.1e} over {} grid points",
        rep.max_raw_residual, rep.samples
    );
    Ok(())
}
