//! Rewrites the bundled networks in `networks/` from their definitions.

use std::path::Path;

use transfinite::bundled;

fn main() -> transfinite::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("networks");
    for n in 3..=8 {
        let path = dir.join(format!("{}.json", bundled::name(n)));
        bundled::generate_bundled(n).save(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
