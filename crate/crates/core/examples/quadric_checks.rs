//! Embeds a tangent vector of S² into the quadric and evaluates the potential,
//! the Kähler form, the moment map and the volume ratio there.
//!
//! cargo run --example quadric_checks

use slag::monge_ampere::ScalarProfile;
use slag::quadric::{
    block_generators, embed, kahler_form, moment_check, tangent_basis, unembed, volume_ratio,
    Potential, SphereTangent,
};
use slag::C64;

fn main() -> slag::Result<()> {
    let pot = Potential::new(ScalarProfile::new(1.0, 1.0, 1.0, 1)?);
    let (s, c) = 0.7f64.sin_cos();
    let p = vec![c, s, 0.0];

    // v normal to the SO(2) orbit through p, then v along it.
    for (label, v) in [
        ("normal", vec![-0.6 * s, 0.6 * c, 0.0]),
        ("tangent", vec![0.0, 0.0, 0.6]),
    ] {
        let t = SphereTangent::new(p.clone(), v)?;
        let z = embed(&t);
        let back = unembed(&z)?;
        let shown: Vec<String> = z.z().iter().map(|w| format!("{w:.4}")).collect();
        println!("{label}: z = [{}]", shown.join(", "));
        println!(
            "  Σz² − 1 = {:.1e}, round trip |Δv| = {:.1e}",
            z.membership_defect(),
            (back.v()[2] - t.v()[2]).abs()
        );
        println!("  ψ = {:.6}", pot.value(&z)?);

        let basis = tangent_basis(&z);
        let iu: Vec<C64> = basis[0].iter().map(|w| w * C64::i()).collect();
        println!(
            "  ω(u, iu) = {:.6} (positive)",
            kahler_form(&z, &pot, &basis[0], &iu)?
        );
        println!("  volume ratio {:.6}", volume_ratio(&z, &pot)?);
        for g in block_generators(2, 1)? {
            let m = moment_check(&z, &g, &pot)?;
            println!("  μ = {:+.3e} (analytic {:+.3e})", m.numeric, m.analytic);
        }
    }
    Ok(())
}
