#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ktc::boxmodel::{make_box, make_columns, Block, BoxKind, BoxSpec};
use ktc::frontend::{parse_document, AuthorItem, DocumentIR, Item};
use ktc::orcid::{parse_orcid, AuthorMeta, OrcidStyle};
use ktc::palette::{builtin_registry, Mode, Role};
use ktc::treemodel::{Fill, FusionAnnotation, FusionContent, LinkStyle, SizeTag, Taxonomy, TreeNode};
use proptest::prelude::*;

pub const THEMES: [&str; 10] = [
    "gray", "blue", "green", "yellow", "orange", "red", "cyan", "purple", "magenta", "white",
];
pub const DARK_THEMES: [&str; 6] = ["gray", "blue", "green", "yellow", "orange", "red"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture_dir() -> PathBuf {
    crate_dir().join("fixtures")
}

/// `(name, json text)` for every fixture, sorted by name.
pub fn fixtures() -> Vec<(String, String)> {
    let mut out: Vec<_> = fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

pub fn load_fixture(name: &str) -> DocumentIR {
    let text = fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
    parse_document(&text).unwrap().doc
}

pub fn golden_path(name: &str) -> PathBuf {
    fixture_dir().join("golden").join(format!("{name}.tex"))
}

pub fn framework_tree() -> Taxonomy {
    match load_fixture("framework_tree").items.remove(0) {
        Item::Tree(t) => t,
        other => panic!("expected a tree, got {}", other.kind()),
    }
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

// ------------------------------------------------------------ generators

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "Vision", "Transformer", "CNN", "Attention", "Encoders", "Hierarchical", "Efficiency-Oriented", "3D",
        "Models", "(ViT)", "Multi-stream", "LSTM", "Swin", "of", "and",
    ])
    .prop_map(str::to_string)
}

fn phrase(max_words: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..=max_words).prop_map(|w| w.join(" "))
}

fn size_tag() -> impl Strategy<Value = SizeTag> {
    prop::sample::select(SizeTag::ALL.to_vec())
}

fn fill() -> impl Strategy<Value = Fill> {
    prop_oneof![
        (prop::sample::select(THEMES.to_vec()), prop::sample::select(vec![Role::Bg, Role::Titlebox, Role::Border]))
            .prop_map(|(t, r)| Fill::themed(t, r)),
        (prop::sample::select(DARK_THEMES.to_vec()), prop::sample::select(vec![Role::Bg, Role::Titlebox]))
            .prop_map(|(t, role)| Fill::Themed { theme: t.to_string(), role, mode: Mode::Dark }),
        prop::sample::select(vec!["ktgreen-bg", "ktred-titlebox", "ktblue-bg-dark"]).prop_map(|n| Fill::Named(n.into())),
    ]
}

fn leaf() -> impl Strategy<Value = TreeNode> {
    (
        prop::collection::vec(phrase(4), 1..=3),
        prop::option::of(prop::sample::select(vec!["(2015--2023)", "Sec.~\\ref{sec:x}", "2021"])),
        prop::collection::vec(prop::sample::select(vec!["2015-simonyank-verydeep", "key2", "a-b-c"]), 0..=2),
        size_tag(),
        fill(),
    )
        .prop_map(|(label_lines, note, cites, size, fill)| {
            let mut cites: Vec<String> = cites.into_iter().map(str::to_string).collect();
            cites.dedup();
            TreeNode {
                label_lines,
                sub_annotation: note.map(str::to_string),
                citation_keys: cites,
                size,
                fill,
                anchor: None,
                children: Vec::new(),
            }
        })
}

/// Trees with nodes at depth at most `max_depth` and at most 4 children
/// per node.
pub fn tree_node(max_depth: u32) -> BoxedStrategy<TreeNode> {
    if max_depth == 0 {
        return leaf().boxed();
    }
    (leaf(), prop::collection::vec(tree_node(max_depth - 1), 0..=4))
        .prop_map(|(mut n, children)| {
            n.children = children;
            n
        })
        .boxed()
}

/// Adds anchors to the children of the first node with two or more
/// children and a fusion over the first two of them.
fn with_fusion(mut t: Taxonomy, split: bool, offset: Option<f64>) -> Taxonomy {
    fn first_fork(n: &mut TreeNode) -> Option<&mut TreeNode> {
        if n.children.len() >= 2 {
            return Some(n);
        }
        n.children.iter_mut().find_map(first_fork)
    }
    if let Some(parent) = first_fork(&mut t.root) {
        for (i, c) in parent.children.iter_mut().enumerate() {
            c.anchor = Some(format!("f{i}"));
        }
        let mut f = FusionAnnotation::split("grp", "f0", "f1", "\\textbf{Left}\\\\text", "Right");
        if !split {
            f.content = FusionContent::Text("plain note".into());
        }
        f.offset_pt = offset;
        t.fusions.push(f);
    }
    t
}

pub fn taxonomy(max_depth: u32, fusions: bool) -> impl Strategy<Value = Taxonomy> {
    (
        tree_node(max_depth),
        prop::sample::select(vec![LinkStyle::ArrowUnified, LinkStyle::Plain]),
        prop::sample::select(vec![1.0, 0.45, 0.7, 1.5]),
        any::<bool>(),
        any::<bool>(),
        prop::option::of(prop::sample::select(vec![18.0, 5.5, 10.0])),
    )
        .prop_map(move |(root, style, scale, add, split, offset)| {
            let t = Taxonomy {
                root,
                style,
                fusions: Vec::new(),
                scale,
            };
            if fusions && add {
                with_fusion(t, split, offset)
            } else {
                t
            }
        })
}

fn simple_block() -> impl Strategy<Value = Block> {
    prop_oneof![
        4 => phrase(8).prop_map(Block::Paragraph),
        1 => prop::collection::vec(phrase(4), 1..=3).prop_map(Block::List),
        1 => phrase(5).prop_map(|p| Block::Code(format!("\\begin{{x}}\n  {p}\n\\end{{x}}"))),
    ]
}

/// Box kind, title and theme choices that `make_box` accepts.
fn box_head() -> impl Strategy<Value = (BoxKind, Option<String>, Option<String>, Option<Mode>)> {
    (
        prop::sample::select(vec![BoxKind::Standard, BoxKind::Numbered, BoxKind::Wide]),
        prop::option::of(phrase(3)),
        prop::option::of(prop::sample::select(DARK_THEMES.to_vec())),
        prop::option::of(prop::sample::select(vec![Mode::Light, Mode::Dark])),
    )
        .prop_map(|(kind, title, theme, mode)| {
            let title = match kind {
                BoxKind::Numbered => Some(title.unwrap_or_else(|| "Insight".into())),
                BoxKind::Wide => None,
                BoxKind::Standard => title,
            };
            (kind, title, theme.map(str::to_string), mode)
        })
}

fn flat_box() -> impl Strategy<Value = BoxSpec> {
    (box_head(), prop::collection::vec(simple_block(), 1..=3)).prop_map(|((kind, title, theme, mode), body)| {
        make_box(kind, title, theme, mode, body, &builtin_registry()).unwrap()
    })
}

fn columns_of(inner: impl Strategy<Value = BoxSpec>) -> impl Strategy<Value = ktc::boxmodel::ColumnLayout> {
    prop::collection::vec(inner, 2..=4).prop_map(|boxes| {
        let n = boxes.len();
        make_columns(boxes, n).unwrap()
    })
}

/// A box whose body may hold one nested column layout.
pub fn rich_box() -> impl Strategy<Value = BoxSpec> {
    (
        box_head(),
        prop::collection::vec(simple_block(), 1..=3),
        prop::option::of(columns_of(flat_box())),
    )
        .prop_map(|((kind, title, theme, mode), mut body, cols)| {
            if let Some(c) = cols {
                body.push(Block::Columns(c));
            }
            make_box(kind, title, theme, mode, body, &builtin_registry()).unwrap()
        })
}

fn author() -> impl Strategy<Value = AuthorItem> {
    (
        prop::sample::select(vec!["Bhaskar Mangal", "A. Bhatia", "Ada"]),
        prop::option::of(prop::sample::select(vec!["0000-0002-8126-3528", "0000-0002-3576-0275", "0000-0002-1694-233X"])),
        prop::sample::select(vec![OrcidStyle::Icon, OrcidStyle::Full]),
    )
        .prop_map(|(name, id, style)| AuthorItem {
            meta: AuthorMeta::new(name, id.map(|i| parse_orcid(i).unwrap())).unwrap(),
            style,
        })
}

pub fn item() -> impl Strategy<Value = Item> {
    prop_oneof![
        4 => rich_box().prop_map(Item::Box),
        1 => columns_of(rich_box_without_columns()).prop_map(Item::Columns),
        1 => taxonomy(3, true).prop_map(Item::Tree),
        1 => author().prop_map(Item::Author),
    ]
}

fn rich_box_without_columns() -> impl Strategy<Value = BoxSpec> {
    flat_box()
}

pub fn document() -> impl Strategy<Value = DocumentIR> {
    (prop::collection::vec(item(), 0..8), any::<bool>()).prop_map(|(items, dark)| DocumentIR {
        mode: if dark { Mode::Dark } else { Mode::Light },
        palette_overrides: None,
        items,
    })
}

// ------------------------------------------------------------ svg checks

use ktc::svgrender::{layout, render_svg, LayoutConfig};
use ktc::treemodel::size_width;

/// Checks layout and SVG invariants for one tree; `Err` names the first
/// violation.
pub fn svg_properties(t: &Taxonomy, cfg: &LayoutConfig) -> Result<(), String> {
    let nodes = layout(t, cfg);
    for (i, a) in nodes.iter().enumerate() {
        if a.width != size_width(a.node.size) * cfg.em_px {
            return Err(format!("node {i} width {} is off the ladder", a.width));
        }
        for (j, b) in nodes.iter().enumerate().skip(i + 1) {
            let disjoint = a.x + a.width <= b.x
                || b.x + b.width <= a.x
                || a.y + a.height <= b.y
                || b.y + b.height <= a.y;
            if !disjoint {
                return Err(format!("nodes {i} and {j} overlap"));
            }
        }
        let kids: Vec<_> = nodes.iter().filter(|n| n.parent == Some(i)).collect();
        if !kids.is_empty() {
            let mean = kids.iter().map(|k| k.center_y()).sum::<f64>() / kids.len() as f64;
            if (a.center_y() - mean).abs() >= 0.5 {
                return Err(format!("node {i} is {} px off its children's mean", a.center_y() - mean));
            }
        }
        if let Some(p) = a.parent {
            let p = &nodes[p];
            if a.x < p.x + p.width + cfg.h_gap {
                return Err(format!("edge into node {i} is not monotone in x"));
            }
        }
    }

    let svg = render_svg(t, &builtin_registry(), cfg).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| format!("not well-formed XML: {e}"))?;
    let root = doc.root_element();
    if root.attribute("width").is_none() || root.attribute("height").is_none() {
        return Err("root lacks width/height".into());
    }
    let ids: std::collections::BTreeSet<_> = doc.descendants().filter_map(|n| n.attribute("id")).collect();
    for n in doc.descendants() {
        for attr in n.attributes() {
            if let Some(rest) = attr.value().strip_prefix("url(#") {
                let id = rest.trim_end_matches(')');
                if !ids.contains(id) {
                    return Err(format!("reference to undefined id `{id}`"));
                }
            }
        }
    }
    let rects = doc.descendants().filter(|n| n.attribute("class") == Some("node")).count();
    if rects != nodes.len() {
        return Err(format!("{rects} node rects for {} nodes", nodes.len()));
    }
    Ok(())
}

// ------------------------------------------------------------- numbering

use ktc::boxmodel::assign_numbers;
use std::collections::BTreeMap;

pub fn numbered(i: usize) -> Item {
    Item::Box(
        make_box(
            BoxKind::Numbered,
            Some(format!("N{i}")),
            None,
            None,
            vec![Block::Paragraph("x".into())],
            &builtin_registry(),
        )
        .unwrap(),
    )
}

/// `k` numbered boxes with titles N0..N(k-1) interleaved with other items.
pub fn interleaved() -> impl Strategy<Value = (DocumentIR, usize)> {
    let others = prop::collection::vec((item(), any::<prop::sample::Index>()), 0..10);
    (0usize..=50, others).prop_map(|(k, others)| {
        let mut items: Vec<Item> = (0..k).map(numbered).collect();
        for (other, at) in others {
            // other items may contain numbered boxes of their own; drop those
            let has_numbered = DocumentIR { items: vec![other.clone()], ..Default::default() }
                .boxes()
                .iter()
                .any(|(_, b)| b.kind() == BoxKind::Numbered);
            if has_numbered {
                continue;
            }
            let at = at.index(items.len() + 1);
            items.insert(at, other);
        }
        (DocumentIR { items, ..Default::default() }, k)
    })
}

pub fn numbers_by_title(doc: &DocumentIR) -> BTreeMap<String, u32> {
    let n = assign_numbers(doc);
    doc.boxes()
        .into_iter()
        .filter_map(|(id, b)| Some((b.title()?.to_string(), n.get(&id)?)))
        .collect()
}

