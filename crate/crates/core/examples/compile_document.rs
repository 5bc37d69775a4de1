//! Compiles a JSON document to an output directory and prints the manifest.
//!
//! cargo run --example compile_document -- fixtures/themed_numbered.json /tmp/ktc-out

use std::fs;
use std::path::PathBuf;

use ktc::{compile, parse_document, CompileOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let doc_path = args.next().unwrap_or_else(|| "fixtures/themed_numbered.json".into());
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ktc-example-out"));
    let parsed = match parse_document(&fs::read_to_string(&doc_path).expect("read document")) {
        Ok(p) => p,
        Err(e) => {
            for d in e.diagnostics() {
                eprintln!("{d}");
            }
            std::process::exit(1);
        }
    };
    for w in &parsed.warnings {
        eprintln!("{w}");
    }
    let manifest = compile(&parsed.doc, &CompileOptions::default(), &out).expect("compile");
    println!("wrote {}", out.display());
    print!("{}", manifest.to_json());
}
