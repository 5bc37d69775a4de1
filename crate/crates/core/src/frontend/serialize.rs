use serde_json::{json, Map, Value};

use super::{DocumentIR, Item};
use crate::boxmodel::{Block, BoxKind, BoxSpec, ColumnLayout};
use crate::palette::{Mode, Role};
use crate::treemodel::{Fill, FusionAnnotation, FusionContent, Taxonomy, TreeNode};

/// Writes the document back in its input schema. Defaulted fields are
/// omitted, so `parse(serialize(doc)) == doc`.
pub fn to_json(doc: &DocumentIR) -> Value {
    let mut out = Map::new();
    if doc.mode != Mode::Light {
        out.insert("mode".into(), json!(doc.mode.as_str()));
    }
    if let Some(patch) = &doc.palette_overrides {
        out.insert("palette".into(), patch.to_json());
    }
    let items: Vec<Value> = doc.items.iter().map(item).collect();
    out.insert("items".into(), Value::Array(items));
    Value::Object(out)
}

pub fn serialize_document(doc: &DocumentIR) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(doc)).expect("IR serializes");
    s.push('\n');
    s
}

fn item(it: &Item) -> Value {
    match it {
        Item::Box(b) => json!({ "box": box_spec(b) }),
        Item::Columns(c) => json!({ "columns": columns(c) }),
        Item::Tree(t) => json!({ "tree": tree(t) }),
        Item::Author(a) => {
            let mut m = Map::new();
            m.insert("name".into(), json!(a.meta.display_name()));
            if let Some(id) = a.meta.orcid() {
                m.insert("orcid".into(), json!(id.as_str()));
            }
            if a.style != Default::default() {
                m.insert("style".into(), json!(a.style.as_str()));
            }
            json!({ "author": m })
        }
    }
}

fn box_spec(b: &BoxSpec) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(b.kind().as_str()));
    if let Some(t) = b.title() {
        m.insert("title".into(), json!(t));
    }
    if let Some(t) = b.explicit_theme() {
        m.insert("theme".into(), json!(t));
    }
    if let Some(mode) = b.explicit_mode() {
        m.insert("mode".into(), json!(mode.as_str()));
    }
    let body: Vec<Value> = b.body().iter().map(block).collect();
    m.insert("body".into(), Value::Array(body));
    debug_assert!(b.kind() != BoxKind::Numbered || b.title().is_some());
    Value::Object(m)
}

fn block(b: &Block) -> Value {
    match b {
        Block::Paragraph(s) => json!(s),
        Block::List(items) => json!({ "list": items }),
        Block::Code(code) => json!({ "code": code }),
        Block::Columns(c) => json!({ "columns": columns(c) }),
    }
}

fn columns(c: &ColumnLayout) -> Value {
    let boxes: Vec<Value> = c.boxes().iter().map(box_spec).collect();
    json!({ "boxes": boxes })
}

fn tree(t: &Taxonomy) -> Value {
    let mut m = Map::new();
    if t.style != Default::default() {
        m.insert("style".into(), json!(t.style.as_str()));
    }
    if t.scale != 1.0 {
        m.insert("scale".into(), json!(t.scale));
    }
    m.insert("root".into(), node(&t.root));
    if !t.fusions.is_empty() {
        let fusions: Vec<Value> = t.fusions.iter().map(fusion).collect();
        m.insert("fusions".into(), Value::Array(fusions));
    }
    Value::Object(m)
}

fn node(n: &TreeNode) -> Value {
    let mut m = Map::new();
    m.insert("label".into(), json!(n.label_lines));
    if let Some(a) = &n.sub_annotation {
        m.insert("annotation".into(), json!(a));
    }
    if !n.citation_keys.is_empty() {
        m.insert("cite".into(), json!(n.citation_keys));
    }
    if n.size != Default::default() {
        m.insert("size".into(), json!(n.size.as_str()));
    }
    if n.fill != Fill::default() {
        m.insert("fill".into(), fill(&n.fill));
    }
    if let Some(a) = &n.anchor {
        m.insert("anchor".into(), json!(a));
    }
    if !n.children.is_empty() {
        let children: Vec<Value> = n.children.iter().map(node).collect();
        m.insert("children".into(), Value::Array(children));
    }
    Value::Object(m)
}

fn fill(f: &Fill) -> Value {
    match f {
        Fill::Named(name) => json!(name),
        Fill::Themed { theme, role, mode } => {
            let mut m = Map::new();
            m.insert("theme".into(), json!(theme));
            if *role != Role::Bg {
                m.insert("role".into(), json!(role.as_str()));
            }
            if *mode != Mode::Light {
                m.insert("mode".into(), json!(mode.as_str()));
            }
            Value::Object(m)
        }
    }
}

fn fusion(f: &FusionAnnotation) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), json!(f.id));
    m.insert("first".into(), json!(f.first));
    m.insert("last".into(), json!(f.last));
    if let Some(o) = f.offset_pt {
        m.insert("offset".into(), json!(o));
    }
    match &f.content {
        FusionContent::Split(s) => {
            m.insert("split".into(), json!({ "left": s.left, "right": s.right }));
        }
        FusionContent::Text(t) => {
            m.insert("text".into(), json!(t));
        }
    }
    Value::Object(m)
}
