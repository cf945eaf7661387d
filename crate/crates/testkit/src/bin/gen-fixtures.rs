//! Rewrites the checked-in fixtures from their generators.

use corpusforge_testkit::{fixture, fixtures_dir, heldout_files, mixed, mixed_dir, mixed_files};

fn main() -> std::io::Result<()> {
    std::fs::create_dir_all(mixed_dir())?;
    for (name, content) in mixed_files(&mixed::build(mixed::SEED)) {
        std::fs::write(mixed_dir().join(&name), content)?;
        println!("wrote fixtures/mixed/{name}");
    }
    for (name, content) in heldout_files() {
        std::fs::write(fixture(&name), content)?;
        println!("wrote fixtures/{name}");
    }
    println!("fixtures in {}", fixtures_dir().display());
    Ok(())
}
