//! Prints the built-in catalog: every action with its restricted roots.
//!
//! cargo run --example list_actions

use slag::ActionCatalog;

fn main() {
    let catalog = ActionCatalog::builtin();
    for spec in catalog.iter() {
        let roots: Vec<String> = spec
            .roots
            .iter()
            .map(|r| format!("{:?}:{}/{}", r.lattice, r.m_v, r.m_h))
            .collect();
        println!(
            "{:<45} {} {:<5} {}",
            spec.name,
            spec.rank(),
            spec.family,
            roots.join(" ")
        );
    }

    println!("\nrows whose root count disagrees with dim G/K:");
    for gap in catalog.dimension_report() {
        println!("  {gap:?}");
    }
}
