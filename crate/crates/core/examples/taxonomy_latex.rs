//! Builds a small taxonomy in code and prints its forest LaTeX along with
//! the preamble it relies on.

use ktc::latexgen::{gen_preamble, gen_tree, PreambleOptions};
use ktc::palette::{builtin_registry, Role};
use ktc::treemodel::{validate_taxonomy, Fill, FusionAnnotation, SizeTag, Taxonomy, TreeNode};

fn main() {
    let reg = builtin_registry();
    let leaf = |label: &str, anchor: &str| {
        TreeNode::new(label)
            .fill(Fill::themed("orange", Role::Bg))
            .anchor(anchor)
            .cite(&["key2024"])
    };
    let mut tree = Taxonomy::new(
        TreeNode::new("Methods")
            .size(SizeTag::S)
            .fill(Fill::themed("red", Role::Bg))
            .child(leaf("Retrieval", "m1").annotation("dense and sparse"))
            .child(leaf("Generation", "m2"))
            .child(leaf("Evaluation", "m3")),
    );
    tree.fusions
        .push(FusionAnnotation::split("m123", "m1", "m3", "\\textbf{Scope}", "\\textbf{Gaps}"));
    for d in validate_taxonomy(&tree, &reg) {
        eprintln!("{d}");
    }
    if std::env::args().any(|a| a == "--preamble") {
        println!("{}", gen_preamble(&reg, PreambleOptions::default()).unwrap().text);
    }
    println!("{}", gen_tree(&tree, &reg).unwrap().text);
}
