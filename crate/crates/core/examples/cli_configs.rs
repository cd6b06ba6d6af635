//! Loads every shipped run configuration and summarises the data it would emit.

use std::path::Path;

use sqsl::cli::{render_curve, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<_> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    paths.sort();
    for p in paths {
        let cfg = RunConfig::parse(&std::fs::read_to_string(&p)?)?;
        let name = p.file_name().unwrap_or_default().to_string_lossy();
        if cfg.optimizer.is_some() {
            println!("{name}: optimizer run for {:?}", cfg.model.kind);
            continue;
        }
        let (text, r) = render_curve(&cfg)?;
        println!("{name}: {} with {} curve(s), {} rows", r.model.name(), r.orthos.len(), text.lines().count() - 1);
    }
    Ok(())
}
