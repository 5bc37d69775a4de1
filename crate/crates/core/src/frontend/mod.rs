//! Document front end: the intermediate representation, the JSON reader and
//! writer, and whole-document checks.

mod parse;
mod serialize;
pub mod shape;

use std::collections::BTreeMap;

pub use parse::{parse_document, ParseError, Parsed};
pub use serialize::{serialize_document, to_json};

use crate::boxmodel::{BoxId, BoxSpec, ColumnLayout};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::orcid::{AuthorMeta, OrcidStyle};
use crate::palette::{builtin_registry, validate_registry, Mode, PaletteRegistry};
use crate::svgrender::{overflow_warnings, LayoutConfig};
use crate::treemodel::{validate_taxonomy, Taxonomy};

#[derive(Clone, Debug, PartialEq)]
pub struct AuthorItem {
    pub meta: AuthorMeta,
    pub style: OrcidStyle,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Box(BoxSpec),
    Columns(ColumnLayout),
    Tree(Taxonomy),
    Author(AuthorItem),
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Box(_) => "box",
            Item::Columns(_) => "columns",
            Item::Tree(_) => "tree",
            Item::Author(_) => "author",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DocumentIR {
    pub mode: Mode,
    pub palette_overrides: Option<PaletteRegistry>,
    pub items: Vec<Item>,
}

impl DocumentIR {
    /// Builtin palette with the document's overrides applied.
    pub fn registry(&self) -> PaletteRegistry {
        let mut reg = builtin_registry();
        if let Some(patch) = &self.palette_overrides {
            reg.merge(patch);
        }
        reg
    }

    /// Every box in pre-order, with its [`BoxId`].
    pub fn boxes(&self) -> Vec<(BoxId, &BoxSpec)> {
        fn with_nested<'a>(id: Vec<usize>, spec: &'a BoxSpec, out: &mut Vec<(BoxId, &'a BoxSpec)>) {
            out.push((BoxId(id.clone()), spec));
            for (block, layout) in spec.nested_layouts() {
                for (col, inner) in layout.boxes().iter().enumerate() {
                    let mut inner_id = id.clone();
                    inner_id.extend([block, col]);
                    with_nested(inner_id, inner, out);
                }
            }
        }
        let mut out = Vec::new();
        for (i, item) in self.items.iter().enumerate() {
            match item {
                Item::Box(spec) => with_nested(vec![i], spec, &mut out),
                Item::Columns(layout) => {
                    for (col, spec) in layout.boxes().iter().enumerate() {
                        with_nested(vec![i, col], spec, &mut out);
                    }
                }
                _ => {}
            }
        }
        out
    }

    pub fn trees(&self) -> impl Iterator<Item = (usize, &Taxonomy)> {
        self.items.iter().enumerate().filter_map(|(i, item)| match item {
            Item::Tree(t) => Some((i, t)),
            _ => None,
        })
    }
}

pub(crate) fn box_path(id: &BoxId) -> String {
    let mut path = format!("items[{}]", id.0[0]);
    let rest = &id.0[1..];
    if rest.len() % 2 == 1 {
        // item-level column layout: [item, col, (block, col)*]
        path.push_str(&format!(".columns.boxes[{}]", rest[0]));
        path.push_str(&nested_path(&rest[1..]));
    } else {
        path.push_str(".box");
        path.push_str(&nested_path(rest));
    }
    path
}

fn nested_path(pairs: &[usize]) -> String {
    pairs
        .chunks(2)
        .map(|c| format!(".body[{}].columns.boxes[{}]", c[0], c[1]))
        .collect()
}

/// Every validation the compiler depends on. No `Error` in the result means
/// compilation will succeed.
pub fn check(doc: &DocumentIR) -> Vec<Diagnostic> {
    let registry = doc.registry();
    let mut diags: Vec<Diagnostic> = validate_registry(&registry)
        .into_iter()
        .map(|d| d.nested("palette"))
        .collect();

    for (id, spec) in doc.boxes() {
        let mode = spec.mode_or(doc.mode);
        let theme = spec.theme();
        match registry.get(theme) {
            None => diags.push(Diagnostic::error(
                "unknown-theme",
                format!("{}.theme", box_path(&id)),
                format!("unknown theme `{theme}`"),
            )),
            Some(t) if t.colors(mode).is_none() => diags.push(Diagnostic::error(
                "role-unavailable",
                format!("{}.theme", box_path(&id)),
                format!("theme `{theme}` has no {mode} mode colors"),
            )),
            Some(_) => {}
        }
    }

    let cfg = LayoutConfig::default();
    let mut anchor_owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, tree) in doc.trees() {
        let prefix = format!("items[{i}].tree");
        diags.extend(validate_taxonomy(tree, &registry).into_iter().map(|d| d.nested(&prefix)));
        diags.extend(overflow_warnings(tree, &cfg).into_iter().map(|d| d.nested(&prefix)));
        let names = tree
            .preorder()
            .into_iter()
            .filter_map(|(_, _, n)| n.anchor.as_deref())
            .chain(tree.fusions.iter().map(|f| f.id.as_str()))
            .collect::<std::collections::BTreeSet<_>>();
        for name in names {
            if let Some(prev) = anchor_owner.insert(name, i) {
                diags.push(Diagnostic::warn(
                    "anchor-reused",
                    prefix.clone(),
                    format!("anchor `{name}` is also used by items[{prev}]; TikZ names may collide"),
                ));
            }
        }
    }
    diags
}

/// `check` and report whether it is safe to compile.
pub fn check_ok(doc: &DocumentIR) -> Result<Vec<Diagnostic>, Vec<Diagnostic>> {
    let diags = check(doc);
    if has_errors(&diags) {
        Err(diags)
    } else {
        Ok(diags)
    }
}
