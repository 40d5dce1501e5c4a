//! Regenerates `fixtures/octahedron_so4.json` from the sign search.
//!
//! cargo run -p witt-core --example derive_octahedron_fixture

use witt_core::octahedron::{default_fixture_path, derive_model_fixture, solve_model_signs};

fn main() {
    let sols = solve_model_signs();
    eprintln!("{} sign assignments close every face and span so(4)", sols.len());
    let path = default_fixture_path();
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, derive_model_fixture().to_json()).unwrap();
    eprintln!("wrote {}", path.display());
}
