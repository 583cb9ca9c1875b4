//! Traces a level curve of `Im F̂` for the CP² isotropy action, verifies it
//! and writes it as CSV.
//!
//! cargo run --example trace_curve -- curve.csv

use slag::tracer::{trace, verify_curve, TraceOptions};
use slag::{ActionCatalog, Calibration, C64};

fn main() -> slag::Result<()> {
    let catalog = ActionCatalog::builtin();
    let cal = Calibration::from_action(catalog.lookup("CPm isotropy, m=2")?, 0.0)?;

    let t = trace(&cal, C64::new(0.3, 0.2), &TraceOptions::default())?;
    let report = verify_curve(&cal, &t.curve)?;
    println!(
        "stopped: {:?} after {} samples",
        t.stop,
        t.curve.axes[0].len()
    );
    println!("level Im F̂ = {:.6e}", t.curve.meta.level);
    println!("level drift {:.2e}", report.level_drift);
    println!(
        "max normalized residual {:.2e}",
        report.max_normalized_residual
    );
    println!("Newton corrections {}", t.corrections);

    match std::env::args_os().nth(1) {
        Some(path) => {
            t.curve.write_csv(&cal, path.as_ref())?;
            println!("wrote {}", path.to_string_lossy());
        }
        None => print!(
            "{}",
            t.curve
                .to_csv_string(&cal)?
                .lines()
                .take(10)
                .collect::<Vec<_>>()
                .join("\n")
                + "\n…\n"
        ),
    }
    Ok(())
}
