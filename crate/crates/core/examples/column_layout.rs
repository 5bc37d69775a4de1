//! Side-by-side boxes in two, three and four columns.

use ktc::boxmodel::{make_box, make_columns, Block, BoxKind, NumberedAssignment};
use ktc::latexgen::gen_columns;
use ktc::palette::{builtin_registry, Mode};

fn main() {
    let reg = builtin_registry();
    let themes = ["blue", "green", "orange", "red"];
    for n in 2..=4 {
        let boxes = themes[..n]
            .iter()
            .map(|t| {
                make_box(
                    BoxKind::Standard,
                    Some(format!("Column {t}")),
                    Some(t.to_string()),
                    None,
                    vec![Block::Paragraph(format!("Body of the {t} column."))],
                    &reg,
                )
                .unwrap()
            })
            .collect();
        let layout = make_columns(boxes, n).unwrap();
        println!("% {n} columns, {} \\textwidth each", layout.width_text());
        let frag = gen_columns(&layout, 0, &NumberedAssignment::default(), Mode::Light).unwrap();
        println!("{}\n", frag.text);
    }
}
