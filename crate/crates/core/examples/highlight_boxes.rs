//! Standard, numbered and wide boxes in light and dark mode.

use ktc::boxmodel::{make_box, Block, BoxKind};
use ktc::frontend::{DocumentIR, Item};
use ktc::latexgen::gen_body;
use ktc::palette::{builtin_registry, Mode};

fn main() {
    let reg = builtin_registry();
    let para = |s: &str| vec![Block::Paragraph(s.into())];
    let items = vec![
        make_box(BoxKind::Standard, Some("Key Insight".into()), None, None, para("Defaults to the blue theme."), &reg),
        make_box(
            BoxKind::Numbered,
            Some("Finding".into()),
            Some("green".into()),
            None,
            vec![
                Block::Paragraph("Numbered boxes count in document order.".into()),
                Block::List(vec!["first point".into(), "second point".into()]),
            ],
            &reg,
        ),
        make_box(BoxKind::Numbered, Some("Caveat".into()), Some("red".into()), Some(Mode::Dark), para("Dark variant."), &reg),
        make_box(BoxKind::Wide, None, Some("orange".into()), None, para("Wide boxes carry no title."), &reg),
    ];
    let doc = DocumentIR {
        items: items.into_iter().map(|b| Item::Box(b.unwrap())).collect(),
        ..Default::default()
    };
    println!("{}", gen_body(&doc).unwrap());

    // a numbered box without a title is rejected at construction
    let err = make_box(BoxKind::Numbered, None, None, None, para("x"), &reg).unwrap_err();
    println!("% rejected: {err}");
}
