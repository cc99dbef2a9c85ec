//! Regenerates the bundled device files in `devices/`.

use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("devices");
    for spec in noisyqml::device::generate::bundled_devices() {
        let path = dir.join(format!("{}.json", spec.name));
        std::fs::write(&path, spec.to_json())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
