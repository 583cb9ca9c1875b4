//! Expands the integrand for the CP² isotropy action and checks it against
//! `½ sin 2τ − ¼ sin 4τ` and its primitive `−¼ cos 2τ + 1/16 cos 4τ`.
//!
//! cargo run --example expand_integrand

use slag::{ActionCatalog, Calibration, C64};

fn main() -> slag::Result<()> {
    let catalog = ActionCatalog::builtin();
    let cal = Calibration::from_action(catalog.lookup("CPm isotropy, m=2")?, 0.0)?;

    println!("F:");
    for t in cal.integrand().terms() {
        println!("  {:+.4} exp(i·{:?}·τ)", t.coeff, t.lattice);
    }
    println!("F̂:");
    for t in cal.primitive().terms() {
        println!("  {:+.4} exp(i·{:?}·τ)", t.coeff, t.lattice);
    }

    for tau in [C64::new(0.3, 0.2), C64::new(-1.1, 0.7), C64::new(2.5, -0.4)] {
        let closed = (2.0 * tau).sin() * 0.5 - (4.0 * tau).sin() * 0.25;
        let closed_hat = -(2.0 * tau).cos() * 0.25 + (4.0 * tau).cos() / 16.0;
        println!(
            "τ = {tau:.2}: |F − closed| = {:.1e}, |F̂ − closed| = {:.1e}",
            (cal.f(&[tau]) - closed).norm(),
            (cal.f_hat(&[tau]) - closed_hat).norm()
        );
    }
    Ok(())
}
