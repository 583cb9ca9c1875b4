//! Merges a user-supplied action into the catalog and expands its integrand.
//!
//! cargo run --example custom_registry

use slag::registry::load_catalog;
use slag::{Calibration, C64};

const ENTRY: &str = r#"{"actions":[{
    "name": "toy-b2", "display": "toy", "family": "b2", "rank": 2,
    "frame": {"basis": [[1.0, -1.0], [0.0, 1.0]]},
    "roots": [{"lattice": [1, 0], "mv": 1, "mh": 0}, {"lattice": [1, 1], "mv": 0, "mh": 2}],
    "rank1": null, "dual": null, "notes": null}]}"#;

fn main() -> slag::Result<()> {
    let dir = std::env::temp_dir().join("slag-custom-registry");
    let path = dir.join("actions.json");
    std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(&path, ENTRY))
        .map_err(|source| slag::Error::Io {
            path: path.clone(),
            source,
        })?;

    let catalog = load_catalog(Some(&path))?;
    let spec = catalog.lookup("toy-b2")?;
    let cal = Calibration::from_action(spec, 0.0)?;
    println!("{} actions after merge", catalog.len());
    println!(
        "F has {} terms, F̂ has {}",
        cal.integrand().len(),
        cal.primitive().len()
    );
    let tau = [C64::new(0.4, 0.1), C64::new(-0.3, 0.2)];
    println!("F(τ) = {:.6}", cal.f(&tau));

    match catalog.lookup("toy-b3") {
        Err(e) => println!("lookup of a typo: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
