//! Compares `det(2 x_i x_j f″ + f′ δ_ij)` with the rank-one update formula and
//! with the constant `2a/r` for `f′ = (a ln y + b)^{1/r}`.
//!
//! cargo run --example monge_ampere_report

use slag::cli::random_grid;
use slag::monge_ampere::{det_report, ScalarProfile};

fn main() -> slag::Result<()> {
    let profile = ScalarProfile::new(3.0, 1.0, 1.0, 2)?;
    let report = det_report(&profile, &random_grid(2, 64, 42))?;

    println!(
        "A = B (determinant lemma): {} (max rel {:.1e})",
        report.assert_A_eq_B, report.max_rel_A_vs_B
    );
    println!(
        "C = D = 2a/r = 3:          {} (max rel {:.1e})",
        report.assert_C_eq_D, report.max_rel_C_vs_D
    );
    println!(
        "|A − C|: max {:.3}, mean {:.3}",
        report.dev_A_vs_C.max, report.dev_A_vs_C.mean
    );
    for row in report.grid.iter().take(5) {
        println!(
            "  x = [{:+.3}, {:+.3}]  A = {:.4}  C = {:.4}",
            row.x[0], row.x[1], row.a, row.c
        );
    }
    Ok(())
}
