//! Left-to-right taxonomy trees: the wrap-box size ladder, node fills,
//! link styles and fusion annotations (a curly brace over a run of sibling
//! nodes with an attached note or split box).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::diagnostic::Diagnostic;
use crate::palette::{color_name, parse_color_name, Mode, PaletteRegistry, Role};

/// Offset used by `\ktcurl` when the annotation does not give one.
pub const DEFAULT_CURL_OFFSET_PT: f64 = 10.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SizeTag {
    Xs,
    S,
    #[default]
    M,
    L,
    Xl,
    Xxl,
    Xxxl,
}

impl SizeTag {
    pub const ALL: [SizeTag; 7] = [
        SizeTag::Xs,
        SizeTag::S,
        SizeTag::M,
        SizeTag::L,
        SizeTag::Xl,
        SizeTag::Xxl,
        SizeTag::Xxxl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SizeTag::Xs => "xs",
            SizeTag::S => "s",
            SizeTag::M => "m",
            SizeTag::L => "l",
            SizeTag::Xl => "xl",
            SizeTag::Xxl => "xxl",
            SizeTag::Xxxl => "xxxl",
        }
    }

    /// `\ktwrapbox<tag>`
    pub fn command(&self) -> String {
        format!("\\ktwrapbox{}", self.as_str())
    }
}

impl fmt::Display for SizeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SizeTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SizeTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown size `{s}` (expected one of xs, s, m, l, xl, xxl, xxxl)"))
    }
}

/// Wrap-box width in em.
pub fn size_width(tag: SizeTag) -> f64 {
    match tag {
        SizeTag::Xs => 6.0,
        SizeTag::S => 7.5,
        SizeTag::M => 9.0,
        SizeTag::L => 11.0,
        SizeTag::Xl => 13.0,
        SizeTag::Xxl => 15.0,
        SizeTag::Xxxl => 25.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fill {
    Themed { theme: String, role: Role, mode: Mode },
    /// A full color name such as `ktorange-bg`.
    Named(String),
}

impl Default for Fill {
    fn default() -> Self {
        Fill::Themed {
            theme: crate::boxmodel::DEFAULT_THEME.to_string(),
            role: Role::Bg,
            mode: Mode::Light,
        }
    }
}

impl Fill {
    pub fn themed(theme: &str, role: Role) -> Self {
        Fill::Themed {
            theme: theme.to_string(),
            role,
            mode: Mode::Light,
        }
    }

    pub fn color_name(&self) -> String {
        match self {
            Fill::Themed { theme, role, mode } => color_name(theme, *role, *mode),
            Fill::Named(name) => name.clone(),
        }
    }

    /// Theme, role and mode this fill refers to, if it follows the `kt`
    /// naming convention.
    pub fn parts(&self) -> Option<(String, Role, Mode)> {
        match self {
            Fill::Themed { theme, role, mode } => Some((theme.clone(), *role, *mode)),
            Fill::Named(name) => parse_color_name(name).ok(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TreeNode {
    pub label_lines: Vec<String>,
    pub sub_annotation: Option<String>,
    pub citation_keys: Vec<String>,
    pub size: SizeTag,
    pub fill: Fill,
    pub anchor: Option<String>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn new(label: impl Into<String>) -> Self {
        TreeNode {
            label_lines: vec![label.into()],
            ..Default::default()
        }
    }

    pub fn size(mut self, size: SizeTag) -> Self {
        self.size = size;
        self
    }

    pub fn fill(mut self, fill: Fill) -> Self {
        self.fill = fill;
        self
    }

    pub fn anchor(mut self, anchor: &str) -> Self {
        self.anchor = Some(anchor.to_string());
        self
    }

    pub fn annotation(mut self, text: &str) -> Self {
        self.sub_annotation = Some(text.to_string());
        self
    }

    pub fn cite(mut self, keys: &[&str]) -> Self {
        self.citation_keys = keys.iter().map(|k| k.to_string()).collect();
        self
    }

    pub fn child(mut self, child: TreeNode) -> Self {
        self.children.push(child);
        self
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LinkStyle {
    #[default]
    ArrowUnified,
    Plain,
}

impl LinkStyle {
    pub fn as_str(&self) -> &'static str {
        match self {
            LinkStyle::ArrowUnified => "arrow_unified",
            LinkStyle::Plain => "plain",
        }
    }

    /// Name of the forest style in the generated preamble.
    pub fn forest_style(&self) -> &'static str {
        match self {
            LinkStyle::ArrowUnified => "ktlrtree-arrow-unified",
            LinkStyle::Plain => "ktlrtree-plain-unified",
        }
    }
}

impl FromStr for LinkStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arrow_unified" => Ok(LinkStyle::ArrowUnified),
            "plain" => Ok(LinkStyle::Plain),
            _ => Err(format!("unknown link style `{s}` (expected arrow_unified or plain)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitBox {
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FusionContent {
    Split(SplitBox),
    Text(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FusionAnnotation {
    pub id: String,
    pub first: String,
    pub last: String,
    /// Horizontal brace offset in pt; `None` means the macro default.
    pub offset_pt: Option<f64>,
    pub content: FusionContent,
}

impl FusionAnnotation {
    pub fn split(id: &str, first: &str, last: &str, left: &str, right: &str) -> Self {
        FusionAnnotation {
            id: id.to_string(),
            first: first.to_string(),
            last: last.to_string(),
            offset_pt: None,
            content: FusionContent::Split(SplitBox {
                left: left.to_string(),
                right: right.to_string(),
            }),
        }
    }

    pub fn with_offset(mut self, pt: f64) -> Self {
        self.offset_pt = Some(pt);
        self
    }

    pub fn offset(&self) -> f64 {
        self.offset_pt.unwrap_or(DEFAULT_CURL_OFFSET_PT)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Taxonomy {
    pub root: TreeNode,
    pub style: LinkStyle,
    pub fusions: Vec<FusionAnnotation>,
    pub scale: f64,
}

impl Taxonomy {
    pub fn new(root: TreeNode) -> Self {
        Taxonomy {
            root,
            style: LinkStyle::default(),
            fusions: Vec::new(),
            scale: 1.0,
        }
    }

    /// Pre-order traversal yielding `(depth, path, node)`; the path is the
    /// diagnostic trail (`root.children[1]...`).
    pub fn preorder(&self) -> Vec<(usize, String, &TreeNode)> {
        fn walk<'a>(n: &'a TreeNode, depth: usize, path: String, out: &mut Vec<(usize, String, &'a TreeNode)>) {
            out.push((depth, path.clone(), n));
            for (i, c) in n.children.iter().enumerate() {
                walk(c, depth + 1, format!("{path}.children[{i}]"), out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, 0, "root".to_string(), &mut out);
        out
    }

    /// Sibling run covered by a fusion: the parent and the inclusive index
    /// range of the spanned children. `None` if the anchors do not form a
    /// valid run.
    pub fn fusion_span(&self, fusion: &FusionAnnotation) -> Option<(&TreeNode, usize, usize)> {
        fn find<'a>(n: &'a TreeNode, first: &str, last: &str) -> Option<(&'a TreeNode, usize, usize)> {
            let pos = |a: &str| n.children.iter().position(|c| c.anchor.as_deref() == Some(a));
            if let (Some(i), Some(j)) = (pos(first), pos(last)) {
                return (i < j).then_some((n, i, j));
            }
            n.children.iter().find_map(|c| find(c, first, last))
        }
        find(&self.root, &fusion.first, &fusion.last)
    }
}

pub fn node_count(t: &Taxonomy) -> usize {
    fn count(n: &TreeNode) -> usize {
        1 + n.children.iter().map(count).sum::<usize>()
    }
    count(&t.root)
}

fn is_anchor_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

/// Structural and color checks. The result is sorted, so it does not depend
/// on the order of the fusion list.
pub fn validate_taxonomy(t: &Taxonomy, registry: &PaletteRegistry) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if !(t.scale.is_finite() && t.scale > 0.0) {
        diags.push(Diagnostic::error("bad-scale", "scale", "scale must be a positive number"));
    }

    // anchor -> (parent path, sibling index)
    let mut anchors: BTreeMap<&str, (Option<String>, usize)> = BTreeMap::new();
    let nodes = t.preorder();
    for (_, path, node) in &nodes {
        if node.label_lines.is_empty() {
            diags.push(Diagnostic::error("empty-label", path.clone(), "node has no label lines"));
        }
        for key in &node.citation_keys {
            if key.is_empty() || key.contains([',', '{', '}']) || key.contains(char::is_whitespace) {
                diags.push(Diagnostic::error(
                    "bad-cite-key",
                    format!("{path}.cite"),
                    format!("invalid citation key `{key}`"),
                ));
            }
        }
        match node.fill.parts() {
            Some((theme, role, mode)) => {
                if let Err(e) = registry.resolve(&theme, role, mode) {
                    diags.push(Diagnostic::error(
                        "unresolvable-fill",
                        format!("{path}.fill"),
                        format!("fill `{}`: {e}", node.fill.color_name()),
                    ));
                }
            }
            None => diags.push(Diagnostic::error(
                "unresolvable-fill",
                format!("{path}.fill"),
                format!("fill `{}` is not a kt color name", node.fill.color_name()),
            )),
        }
        for (i, child) in node.children.iter().enumerate() {
            if let Some(a) = child.anchor.as_deref() {
                let cpath = format!("{path}.children[{i}].anchor");
                if !is_anchor_name(a) {
                    diags.push(Diagnostic::error("bad-anchor", cpath, format!("invalid anchor name `{a}`")));
                } else if anchors.insert(a, (Some(path.clone()), i)).is_some() {
                    diags.push(Diagnostic::error("duplicate-anchor", cpath, format!("anchor `{a}` is defined more than once")));
                }
            }
        }
    }
    if let Some(a) = t.root.anchor.as_deref() {
        if !is_anchor_name(a) {
            diags.push(Diagnostic::error("bad-anchor", "root.anchor", format!("invalid anchor name `{a}`")));
        } else if anchors.insert(a, (None, 0)).is_some() {
            diags.push(Diagnostic::error("duplicate-anchor", "root.anchor", format!("anchor `{a}` is defined more than once")));
        }
    }

    let mut ids = BTreeSet::new();
    for f in &t.fusions {
        let path = format!("fusions[{}]", f.id);
        if !is_anchor_name(&f.id) {
            diags.push(Diagnostic::error("bad-anchor", format!("{path}.id"), format!("invalid fusion id `{}`", f.id)));
        } else if !ids.insert(f.id.as_str()) || anchors.contains_key(f.id.as_str()) {
            diags.push(Diagnostic::error(
                "duplicate-anchor",
                format!("{path}.id"),
                format!("fusion id `{}` clashes with another name", f.id),
            ));
        }
        if let Some(o) = f.offset_pt {
            if !(o.is_finite() && o > 0.0) {
                diags.push(Diagnostic::error("bad-offset", format!("{path}.offset"), "offset must be a positive length"));
            }
        }
        match &f.content {
            FusionContent::Split(s) => {
                if s.left.trim().is_empty() || s.right.trim().is_empty() {
                    diags.push(Diagnostic::error("empty-split", format!("{path}.split"), "both halves of a split box must be non-empty"));
                }
            }
            FusionContent::Text(text) => {
                if text.trim().is_empty() {
                    diags.push(Diagnostic::error("empty-split", format!("{path}.text"), "fusion text must be non-empty"));
                }
            }
        }
        let first = anchors.get(f.first.as_str());
        let last = anchors.get(f.last.as_str());
        for (field, name, found) in [("first", &f.first, first), ("last", &f.last, last)] {
            if found.is_none() {
                diags.push(Diagnostic::error(
                    "unknown-anchor",
                    format!("{path}.{field}"),
                    format!("fusion refers to unknown anchor `{name}`"),
                ));
            }
        }
        if let (Some((p1, i1)), Some((p2, i2))) = (first, last) {
            if p1.is_none() || p1 != p2 {
                diags.push(Diagnostic::error(
                    "fusion-not-siblings",
                    path,
                    format!("`{}` and `{}` are not siblings", f.first, f.last),
                ));
            } else if i1 >= i2 {
                diags.push(Diagnostic::error(
                    "fusion-order",
                    path,
                    format!("`{}` must come before `{}` in sibling order", f.first, f.last),
                ));
            }
        }
    }
    diags.sort_by(|a, b| (&a.path, a.code, &a.message).cmp(&(&b.path, b.code, &b.message)));
    diags.dedup();
    diags
}
