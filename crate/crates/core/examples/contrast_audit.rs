//! Contrast table for every theme and mode: title on background, and text
//! on background where the mode defines one.

use ktc::palette::{builtin_registry, contrast_floor, contrast_ratio, validate_registry, Mode, Role};

fn main() {
    let registry = builtin_registry();
    println!("{:<10} {:<6} {:>8} {:>8}  floor", "theme", "mode", "title", "text");
    for theme in registry.themes() {
        for mode in [Mode::Light, Mode::Dark] {
            let Ok(bg) = registry.resolve(&theme.name, Role::Bg, mode) else {
                continue;
            };
            let ratio = |role| {
                registry
                    .resolve(&theme.name, role, mode)
                    .map(|c| format!("{:.2}", contrast_ratio(c, bg)))
                    .unwrap_or_else(|_| "-".into())
            };
            println!(
                "{:<10} {:<6} {:>8} {:>8}  {}",
                theme.name,
                mode.as_str(),
                ratio(Role::Title),
                ratio(Role::Text),
                contrast_floor(&theme.name)
            );
        }
    }
    let diags = validate_registry(&registry);
    println!("\n{} diagnostics", diags.len());
    for d in diags {
        println!("{d}");
    }
}
