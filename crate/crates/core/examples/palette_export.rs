//! Prints the builtin palette as LaTeX `\definecolor` lines, or as JSON
//! with `--json`.

use ktc::palette::{builtin_registry, emit_palette_definitions};

fn main() {
    let registry = builtin_registry();
    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&registry.to_json()).unwrap());
    } else {
        print!("{}", emit_palette_definitions(&registry).unwrap());
    }
}
