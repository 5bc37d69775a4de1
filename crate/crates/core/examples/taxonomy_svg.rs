//! Renders the tree items of a document to SVG files.
//!
//! cargo run --example taxonomy_svg -- fixtures/cv_tree.json /tmp/out

use std::fs;
use std::path::PathBuf;

use ktc::frontend::{parse_document, Item};
use ktc::svgrender::{layout, overflow_warnings, render_svg, LayoutConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let doc_path = args.next().unwrap_or_else(|| "fixtures/framework_tree.json".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let text = fs::read_to_string(&doc_path).expect("read document");
    let doc = parse_document(&text).expect("valid document").doc;
    let registry = doc.registry();
    let cfg = LayoutConfig::default();
    for (i, item) in doc.items.iter().enumerate() {
        let Item::Tree(t) = item else { continue };
        for w in overflow_warnings(t, &cfg) {
            eprintln!("{w}");
        }
        let nodes = layout(t, &cfg);
        let right = nodes.iter().map(|n| n.right()).fold(0.0, f64::max);
        let bottom = nodes.iter().map(|n| n.bottom()).fold(0.0, f64::max);
        let path = out.join(format!("tree-{i:02}.svg"));
        fs::write(&path, render_svg(t, &registry, &cfg).unwrap()).expect("write svg");
        println!("{}: {} nodes, {right:.0} x {bottom:.0} px before scaling", path.display(), nodes.len());
    }
}
