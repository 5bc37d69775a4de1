//! Standalone SVG rendering of taxonomy trees.
//!
//! Layout is left to right. Every depth gets a column whose x offset is the
//! sum of the widest node in each earlier column plus `h_gap`. Vertically,
//! each subtree owns a horizontal band: children are stacked top to bottom
//! in pre-order with `v_gap` between bands, and the parent is centered on
//! the mean of its children's centers. A parent taller than the span of its
//! children would poke out above its band, so in that case the whole
//! subtree is pushed down until the parent fits.

use std::fmt::Write as _;

use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic};
use crate::palette::{builtin_registry, ColorValue, Mode, PaletteRegistry, Role};
use crate::treemodel::{size_width, validate_taxonomy, FusionContent, LinkStyle, Taxonomy, TreeNode};

/// Id of the arrowhead marker used by `arrow_unified` edges.
pub const ARROW_MARKER_ID: &str = "kt-arrow";

/// Rough advance of one glyph in units of the font size.
const GLYPH_ADVANCE: f64 = 0.5;
/// Outer margin around the drawing, in pixels.
const MARGIN: f64 = 8.0;
/// Brace bulge in pt (matches the `amplitude` of `\ktcurl`).
const BRACE_AMPLITUDE_PT: f64 = 6.0;
/// Width of each half of a split box, in em.
const SPLIT_HALF_EM: f64 = 10.0;
const TEXT_COLOR: &str = "#212121";
const CITE_COLOR: &str = "#616161";

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("bad layout config: {0}")]
    BadConfig(String),
    #[error("validation failed ({} diagnostics)", .0.len())]
    ValidationFailed(Vec<Diagnostic>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayoutConfig {
    pub em_px: f64,
    pub h_gap: f64,
    pub v_gap: f64,
    pub corner_radius: f64,
    pub padding: f64,
    /// Label font size by depth; deeper levels reuse the last entry.
    pub font_sizes: Vec<f64>,
    /// Line height as a multiple of the font size.
    pub line_height: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            em_px: 12.0,
            h_gap: 36.0,
            v_gap: 10.0,
            corner_radius: 6.0,
            padding: 5.0,
            font_sizes: vec![12.0, 11.0, 10.0, 9.0],
            line_height: 1.25,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<(), SvgError> {
        let scalars = [
            ("em_px", self.em_px),
            ("h_gap", self.h_gap),
            ("v_gap", self.v_gap),
            ("corner_radius", self.corner_radius),
            ("padding", self.padding),
            ("line_height", self.line_height),
        ];
        for (name, v) in scalars {
            if !(v.is_finite() && v > 0.0) {
                return Err(SvgError::BadConfig(format!("{name} must be a positive number, got {v}")));
            }
        }
        if self.font_sizes.is_empty() || self.font_sizes.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(SvgError::BadConfig("font_sizes must be non-empty and positive".into()));
        }
        Ok(())
    }

    pub fn font_size(&self, depth: usize) -> f64 {
        self.font_sizes[depth.min(self.font_sizes.len() - 1)]
    }

    fn small_font(&self, depth: usize) -> f64 {
        self.font_size(depth) * 0.8
    }

    fn pt_to_px(&self, pt: f64) -> f64 {
        // 1em of \small text is roughly 10pt
        pt * self.em_px / 10.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositionedNode<'a> {
    pub node: &'a TreeNode,
    pub depth: usize,
    /// Index of the parent in the layout vector.
    pub parent: Option<usize>,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    /// Wrapped text, top to bottom.
    pub lines: Vec<TextLine>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineKind {
    Label,
    Annotation,
    Citation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TextLine {
    pub text: String,
    pub font_size: f64,
    pub kind: LineKind,
}

impl PositionedNode<'_> {
    pub fn center_y(&self) -> f64 {
        self.y + self.height / 2.0
    }

    pub fn right(&self) -> f64 {
        self.x + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.height
    }
}

/// Best-effort plain text for a LaTeX label: control words are dropped,
/// braces removed, ties and dashes turned into their Unicode forms.
pub fn latex_to_plain(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.peek() {
                Some(n) if n.is_ascii_alphabetic() => {
                    while chars.peek().is_some_and(|n| n.is_ascii_alphabetic()) {
                        chars.next();
                    }
                    if chars.peek() == Some(&' ') {
                        chars.next();
                    }
                }
                Some('\\') => {
                    chars.next();
                    out.push(' ');
                }
                Some(_) => out.push(chars.next().expect("peeked")),
                None => {}
            },
            '{' | '}' => {}
            '~' => out.push(' '),
            '-' if chars.peek() == Some(&'-') => {
                chars.next();
                if chars.peek() == Some(&'-') {
                    chars.next();
                    out.push('\u{2014}');
                } else {
                    out.push('\u{2013}');
                }
            }
            _ => out.push(c),
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn text_width(s: &str, font: f64) -> f64 {
    s.chars().count() as f64 * font * GLYPH_ADVANCE
}

/// Font scale of a leading size switch such as `\\scriptsize`.
fn size_switch(raw: &str) -> f64 {
    const SWITCHES: [(&str, f64); 4] = [
        ("\\tiny", 0.6),
        ("\\scriptsize", 0.75),
        ("\\footnotesize", 0.85),
        ("\\small", 0.9),
    ];
    let t = raw.trim_start().trim_start_matches('{');
    SWITCHES
        .iter()
        .find(|(cmd, _)| {
            t.strip_prefix(cmd)
                .is_some_and(|rest| !rest.starts_with(|c: char| c.is_ascii_alphabetic()))
        })
        .map_or(1.0, |(_, f)| *f)
}

/// Splits a word after `-` and `:` so long compounds can wrap.
fn pieces(word: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in word.char_indices() {
        if (c == '-' || c == ':') && i + 1 < word.len() {
            out.push(&word[start..=i]);
            start = i + 1;
        }
    }
    out.push(&word[start..]);
    out
}

/// Greedy wrap at spaces, or after `-`/`:` inside a word. A piece wider
/// than `avail` gets a line of its own.
fn wrap(text: &str, font: f64, avail: f64) -> Vec<String> {
    let mut lines = Vec::new();
    let mut current = String::new();
    for word in text.split_whitespace() {
        for (k, piece) in pieces(word).into_iter().enumerate() {
            let sep = if k == 0 && !current.is_empty() { " " } else { "" };
            let candidate = format!("{current}{sep}{piece}");
            if !current.is_empty() && text_width(&candidate, font) > avail {
                lines.push(std::mem::replace(&mut current, piece.to_string()));
            } else {
                current = candidate;
            }
        }
    }
    if !current.is_empty() || lines.is_empty() {
        lines.push(current);
    }
    lines
}

fn text_lines(node: &TreeNode, depth: usize, width: f64, cfg: &LayoutConfig) -> Vec<TextLine> {
    let avail = width - 2.0 * cfg.padding;
    let base = cfg.font_size(depth);
    let mut out = Vec::new();
    // `\\` inside a line is a manual break
    let mut push = |raw: &str, font: f64, kind| {
        for part in raw.split("\\\\") {
            for text in wrap(&latex_to_plain(part), font, avail) {
                out.push(TextLine { text, font_size: font, kind });
            }
        }
    };
    for raw in &node.label_lines {
        push(raw, base * size_switch(raw), LineKind::Label);
    }
    if let Some(note) = &node.sub_annotation {
        push(note, cfg.small_font(depth), LineKind::Annotation);
    }
    if !node.citation_keys.is_empty() {
        // keys are opaque and may be longer than the box; they stay on one line
        out.push(TextLine {
            text: format!("[{}]", node.citation_keys.join(", ")),
            font_size: cfg.small_font(depth),
            kind: LineKind::Citation,
        });
    }
    out
}

fn node_height(lines: &[TextLine], cfg: &LayoutConfig) -> f64 {
    lines.iter().map(|l| l.font_size * cfg.line_height).sum::<f64>() + 2.0 * cfg.padding
}

/// Computes node boxes in pre-order. The root sits at x = 0 and the topmost
/// band starts at y = 0.
pub fn layout<'a>(t: &'a Taxonomy, cfg: &LayoutConfig) -> Vec<PositionedNode<'a>> {
    let mut nodes: Vec<PositionedNode<'a>> = Vec::new();
    fn collect<'a>(
        n: &'a TreeNode,
        depth: usize,
        parent: Option<usize>,
        cfg: &LayoutConfig,
        out: &mut Vec<PositionedNode<'a>>,
    ) {
        let width = size_width(n.size) * cfg.em_px;
        let lines = text_lines(n, depth, width, cfg);
        let height = node_height(&lines, cfg);
        let idx = out.len();
        out.push(PositionedNode {
            node: n,
            depth,
            parent,
            x: 0.0,
            y: 0.0,
            width,
            height,
            lines,
        });
        for c in &n.children {
            collect(c, depth + 1, Some(idx), cfg, out);
        }
    }
    collect(&t.root, 0, None, cfg, &mut nodes);

    // columns
    let max_depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    let mut widest = vec![0.0f64; max_depth + 1];
    for n in &nodes {
        widest[n.depth] = widest[n.depth].max(n.width);
    }
    let mut col_x = vec![0.0; max_depth + 1];
    for d in 1..=max_depth {
        col_x[d] = col_x[d - 1] + widest[d - 1] + cfg.h_gap;
    }
    for n in &mut nodes {
        n.x = col_x[n.depth];
    }

    // children lists in pre-order
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, n) in nodes.iter().enumerate() {
        if let Some(p) = n.parent {
            children[p].push(i);
        }
    }

    /// Places the subtree at `idx` in a band starting at `top`; returns the
    /// band's bottom edge.
    fn place(idx: usize, top: f64, nodes: &mut [PositionedNode<'_>], children: &[Vec<usize>], cfg: &LayoutConfig) -> f64 {
        let kids = &children[idx];
        if kids.is_empty() {
            nodes[idx].y = top;
            return top + nodes[idx].height;
        }
        let mut cursor = top;
        let mut bottom = top;
        for (k, &c) in kids.iter().enumerate() {
            if k > 0 {
                cursor = bottom + cfg.v_gap;
            }
            bottom = place(c, cursor, nodes, children, cfg);
        }
        let mean = kids.iter().map(|&c| nodes[c].center_y()).sum::<f64>() / kids.len() as f64;
        let y = mean - nodes[idx].height / 2.0;
        if y < top {
            let shift = top - y;
            shift_subtree(idx, shift, nodes, children);
            bottom += shift;
        }
        nodes[idx].y = y.max(top);
        bottom.max(nodes[idx].bottom())
    }

    fn shift_subtree(idx: usize, dy: f64, nodes: &mut [PositionedNode<'_>], children: &[Vec<usize>]) {
        for &c in &children[idx] {
            nodes[c].y += dy;
            shift_subtree(c, dy, nodes, children);
        }
    }

    if !nodes.is_empty() {
        place(0, 0.0, &mut nodes, &children, cfg);
    }
    nodes
}

/// Warns when a word cannot fit inside its box even after wrapping.
pub fn overflow_warnings(t: &Taxonomy, cfg: &LayoutConfig) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (depth, path, node) in t.preorder() {
        let width = size_width(node.size) * cfg.em_px;
        let avail = width - 2.0 * cfg.padding;
        let wide = text_lines(node, depth, width, cfg)
            .into_iter()
            .find(|l| l.kind != LineKind::Citation && text_width(&l.text, l.font_size) > avail);
        if let Some(line) = wide {
            diags.push(Diagnostic::warn(
                "label-overflow",
                path,
                format!("`{}` is wider than its {} box", line.text, node.size),
            ));
        }
    }
    diags
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn resolve(registry: &PaletteRegistry, theme: &str, role: Role, mode: Mode) -> ColorValue {
    registry
        .resolve(theme, role, mode)
        .or_else(|_| builtin_registry().resolve(theme, role, mode))
        .unwrap_or(ColorValue::new(0x9E, 0x9E, 0x9E))
}

struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

struct FusionGeometry {
    brace: String,
    halves: Vec<(Rect, String)>,
    text: Option<(f64, f64, String)>,
    right: f64,
    top: f64,
    bottom: f64,
}

/// Brace from `(x, y0)` to `(x, y1)` with its tip pointing right by `a`.
/// Each half is one cubic: it leaves the end point heading right, bends
/// back, and meets the other half at the tip `(x + a, mid)`.
fn brace_path(x: f64, y0: f64, y1: f64, a: f64) -> String {
    let mid = (y0 + y1) / 2.0;
    format!(
        "M {} {} C {} {} {} {} {} {} C {} {} {} {} {} {}",
        num(x),
        num(y0),
        num(x + a),
        num(y0),
        num(x),
        num(mid),
        num(x + a),
        num(mid),
        num(x),
        num(mid),
        num(x + a),
        num(y1),
        num(x),
        num(y1)
    )
}

fn fusion_geometry(t: &Taxonomy, nodes: &[PositionedNode<'_>], cfg: &LayoutConfig) -> Vec<FusionGeometry> {
    let index_of = |a: &str| nodes.iter().position(|n| n.node.anchor.as_deref() == Some(a));
    let descendants = |root: usize| -> Vec<usize> {
        let mut out = vec![root];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            out.extend((0..nodes.len()).filter(|&k| nodes[k].parent == Some(cur)));
            i += 1;
        }
        out
    };
    let mut placed: Vec<FusionGeometry> = Vec::new();
    for f in &t.fusions {
        let (Some(first), Some(last)) = (index_of(&f.first), index_of(&f.last)) else {
            continue;
        };
        let Some(parent) = nodes[first].parent else { continue };
        // every sibling from first to last plus their subtrees
        let siblings: Vec<usize> = (0..nodes.len())
            .filter(|&k| nodes[k].parent == Some(parent) && k >= first && k <= last)
            .collect();
        let covered: Vec<usize> = siblings.iter().flat_map(|&s| descendants(s)).collect();
        let y0 = nodes[first].y;
        let y1 = nodes[last].bottom();
        let a = cfg.pt_to_px(BRACE_AMPLITUDE_PT);
        let mut bx = covered.iter().map(|&k| nodes[k].right()).fold(0.0, f64::max) + cfg.pt_to_px(f.offset());
        // stay clear of earlier fusions that share vertical space
        for g in &placed {
            if g.top < y1 && y0 < g.bottom {
                bx = bx.max(g.right + cfg.v_gap);
            }
        }
        let mid = (y0 + y1) / 2.0;
        let gap = cfg.pt_to_px(8.0);
        let font = cfg.font_sizes[cfg.font_sizes.len() - 1];
        let half_w = SPLIT_HALF_EM * cfg.em_px;
        let mut g = FusionGeometry {
            brace: brace_path(bx, y0, y1, a),
            halves: Vec::new(),
            text: None,
            right: bx + a,
            top: y0,
            bottom: y1,
        };
        let left_x = bx + a + gap;
        match &f.content {
            FusionContent::Split(s) => {
                let wrapped: Vec<Vec<String>> = [&s.left, &s.right]
                    .iter()
                    .map(|raw| {
                        raw.split("\\\\")
                            .flat_map(|l| wrap(&latex_to_plain(l), font, half_w - 2.0 * cfg.padding))
                            .collect()
                    })
                    .collect();
                let rows = wrapped.iter().map(Vec::len).max().unwrap_or(1);
                let h = rows as f64 * font * cfg.line_height + 2.0 * cfg.padding;
                for (k, lines) in wrapped.into_iter().enumerate() {
                    let rect = Rect {
                        x: left_x + k as f64 * half_w,
                        y: mid - h / 2.0,
                        w: half_w,
                        h,
                    };
                    g.halves.push((rect, lines.join("\n")));
                }
                g.right = left_x + 2.0 * half_w;
                g.top = g.top.min(mid - h / 2.0);
                g.bottom = g.bottom.max(mid + h / 2.0);
            }
            FusionContent::Text(text) => {
                let plain = latex_to_plain(text);
                g.right = left_x + text_width(&plain, font);
                g.text = Some((left_x, mid + font * 0.35, plain));
            }
        }
        placed.push(g);
    }
    placed
}

/// Renders a standalone SVG document. The tree is validated first.
pub fn render_svg(t: &Taxonomy, registry: &PaletteRegistry, cfg: &LayoutConfig) -> Result<String, SvgError> {
    cfg.validate()?;
    let diags = validate_taxonomy(t, registry);
    if has_errors(&diags) {
        return Err(SvgError::ValidationFailed(diags));
    }
    let nodes = layout(t, cfg);
    let fusions = fusion_geometry(t, &nodes, cfg);

    let mut min_y: f64 = 0.0;
    let mut max_x: f64 = 0.0;
    let mut max_y: f64 = 0.0;
    for n in &nodes {
        max_x = max_x.max(n.right());
        max_y = max_y.max(n.bottom());
    }
    for g in &fusions {
        min_y = min_y.min(g.top);
        max_x = max_x.max(g.right);
        max_y = max_y.max(g.bottom);
    }
    let dy = -min_y;
    let width = (max_x * t.scale + 2.0 * MARGIN).ceil();
    let height = ((max_y + dy) * t.scale + 2.0 * MARGIN).ceil();

    let edge_color = resolve(registry, "gray", Role::Border, Mode::Light).css();
    let note_color = resolve(registry, "orange", Role::Bg, Mode::Dark).css();
    let split_fill = resolve(registry, "gray", Role::Bg, Mode::Light).css();
    let split_stroke = edge_color.clone();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="Helvetica, Arial, sans-serif">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    );
    if t.style == LinkStyle::ArrowUnified {
        s.push_str("  <defs>\n");
        let _ = writeln!(
            s,
            r#"    <marker id="{ARROW_MARKER_ID}" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="{edge_color}"/></marker>"#
        );
        s.push_str("  </defs>\n");
    }
    let _ = writeln!(
        s,
        r#"  <g transform="translate({} {}) scale({}) translate(0 {})">"#,
        num(MARGIN),
        num(MARGIN),
        num(t.scale),
        num(dy)
    );

    let marker = match t.style {
        LinkStyle::ArrowUnified => format!(r#" marker-end="url(#{ARROW_MARKER_ID})""#),
        LinkStyle::Plain => String::new(),
    };
    for n in &nodes {
        if let Some(p) = n.parent {
            let p = &nodes[p];
            let _ = writeln!(
                s,
                r#"    <path class="edge" d="M {} {} L {} {}" stroke="{edge_color}" stroke-width="1.2" fill="none"{marker}/>"#,
                num(p.right()),
                num(p.center_y()),
                num(n.x),
                num(n.center_y())
            );
        }
    }

    for n in &nodes {
        let (fill, stroke) = match n.node.fill.parts() {
            Some((theme, role, mode)) => (
                resolve(registry, &theme, role, mode),
                resolve(registry, &theme, Role::Border, mode),
            ),
            None => (ColorValue::new(0xFF, 0xFF, 0xFF), ColorValue::new(0x9E, 0x9E, 0x9E)),
        };
        let _ = writeln!(
            s,
            r#"    <rect class="node" x="{}" y="{}" width="{}" height="{}" rx="{}" fill="{}" stroke="{}" stroke-width="1"/>"#,
            num(n.x),
            num(n.y),
            num(n.width),
            num(n.height),
            num(cfg.corner_radius),
            fill.css(),
            stroke.css()
        );
        let cx = num(n.x + n.width / 2.0);
        let mut baseline = n.y + cfg.padding;
        for line in &n.lines {
            let font = line.font_size;
            baseline += font * cfg.line_height;
            let color = match line.kind {
                LineKind::Label => TEXT_COLOR,
                LineKind::Annotation => note_color.as_str(),
                LineKind::Citation => CITE_COLOR,
            };
            let _ = writeln!(
                s,
                r#"    <text x="{cx}" y="{}" font-size="{}" text-anchor="middle" fill="{color}">{}</text>"#,
                num(baseline - font * (cfg.line_height - 1.0) - font * 0.15),
                num(font),
                escape(&line.text)
            );
        }
    }

    let font = cfg.font_sizes[cfg.font_sizes.len() - 1];
    for g in &fusions {
        let _ = writeln!(
            s,
            r#"    <path class="brace" d="{}" stroke="{edge_color}" stroke-width="1.4" fill="none"/>"#,
            g.brace
        );
        for (r, text) in &g.halves {
            let _ = writeln!(
                s,
                r#"    <rect class="split" x="{}" y="{}" width="{}" height="{}" rx="{}" fill="{split_fill}" stroke="{split_stroke}" stroke-width="1"/>"#,
                num(r.x),
                num(r.y),
                num(r.w),
                num(r.h),
                num(cfg.corner_radius)
            );
            let mut baseline = r.y + cfg.padding;
            for line in text.lines() {
                baseline += font * cfg.line_height;
                let _ = writeln!(
                    s,
                    r#"    <text x="{}" y="{}" font-size="{}" text-anchor="middle" fill="{TEXT_COLOR}">{}</text>"#,
                    num(r.x + r.w / 2.0),
                    num(baseline - font * (cfg.line_height - 1.0) - font * 0.15),
                    num(font),
                    escape(line)
                );
            }
        }
        if let Some((x, y, text)) = &g.text {
            let _ = writeln!(
                s,
                r#"    <text x="{}" y="{}" font-size="{}" fill="{TEXT_COLOR}">{}</text>"#,
                num(*x),
                num(*y),
                num(font),
                escape(text)
            );
        }
    }
    s.push_str("  </g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::palette::builtin_registry;
    use crate::treemodel::{Fill, FusionAnnotation, SizeTag};

    fn cfg() -> LayoutConfig {
        LayoutConfig::default()
    }

    #[test]
    fn single_node_at_origin() {
        let t = Taxonomy::new(TreeNode::new("X"));
        let nodes = layout(&t, &cfg());
        assert_eq!(nodes.len(), 1);
        assert_eq!((nodes[0].x, nodes[0].y), (0.0, 0.0));
        assert_eq!(nodes[0].width, 9.0 * 12.0);
        assert_eq!(nodes[0].height, 12.0 * 1.25 + 10.0);
    }

    #[test]
    fn parent_centered_on_children() {
        let t = Taxonomy::new(TreeNode::new("r").child(TreeNode::new("a")).child(TreeNode::new("b")));
        let nodes = layout(&t, &cfg());
        let mid = (nodes[1].center_y() + nodes[2].center_y()) / 2.0;
        assert!((nodes[0].center_y() - mid).abs() < 1e-9);
        assert_eq!(nodes[1].x, 108.0 + 36.0);
        assert_eq!(nodes[2].y, nodes[1].bottom() + 10.0);
    }

    #[test]
    fn tall_parent_pushes_band_down() {
        let t = Taxonomy::new(TreeNode {
            label_lines: vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
            ..TreeNode::new("").child(TreeNode::new("leaf"))
        });
        let nodes = layout(&t, &cfg());
        assert_eq!(nodes[0].y, 0.0);
        assert!((nodes[0].center_y() - nodes[1].center_y()).abs() < 1e-9);
    }

    #[test]
    fn root_fill_and_marker() {
        let reg = builtin_registry();
        let t = Taxonomy::new(TreeNode::new("X").fill(Fill::themed("red", Role::Bg)));
        let svg = render_svg(&t, &reg, &cfg()).unwrap();
        assert!(svg.contains(r##"fill="#FFEBEE""##));

        let t = Taxonomy::new(TreeNode::new("r").child(TreeNode::new("c")));
        let svg = render_svg(&t, &reg, &cfg()).unwrap();
        assert_eq!(svg.matches(r#"class="edge""#).count(), 1);
        assert_eq!(svg.matches("url(#kt-arrow)").count(), 1);
        let mut plain = t.clone();
        plain.style = LinkStyle::Plain;
        let svg = render_svg(&plain, &reg, &cfg()).unwrap();
        assert!(!svg.contains("kt-arrow"));
    }

    #[test]
    fn fusions_draw_brace_and_split() {
        let reg = builtin_registry();
        let mut t = Taxonomy::new(
            TreeNode::new("r")
                .child(TreeNode::new("a").anchor("a1"))
                .child(TreeNode::new("b").anchor("a2").child(TreeNode::new("deep"))),
        );
        t.fusions.push(FusionAnnotation::split("f", "a1", "a2", "L", "R & S"));
        let svg = render_svg(&t, &reg, &cfg()).unwrap();
        assert_eq!(svg.matches(r#"class="brace""#).count(), 1);
        assert_eq!(svg.matches(r#"class="split""#).count(), 2);
        assert!(svg.contains("R &amp; S"));
        // brace sits to the right of the grandchild column
        let nodes = layout(&t, &cfg());
        let g = fusion_geometry(&t, &nodes, &cfg());
        assert!(g[0].right > nodes[3].right());
    }

    #[test]
    fn bad_config_rejected() {
        let t = Taxonomy::new(TreeNode::new("X"));
        let bad = LayoutConfig { v_gap: 0.0, ..cfg() };
        assert!(matches!(render_svg(&t, &builtin_registry(), &bad), Err(SvgError::BadConfig(_))));
    }

    #[test]
    fn plain_text() {
        assert_eq!(latex_to_plain("\\scriptsize VGG Family"), "VGG Family");
        assert_eq!(latex_to_plain("(2015--2023)"), "(2015\u{2013}2023)");
        assert_eq!(latex_to_plain("Sec.~\\ref{sec:x}"), "Sec. sec:x");
        assert_eq!(latex_to_plain("A \\& B"), "A & B");
    }

    #[test]
    fn wrapping_and_overflow() {
        assert_eq!(wrap("aa bb cc", 10.0, 20.0), ["aa", "bb", "cc"]);
        assert_eq!(wrap("", 10.0, 30.0), [""]);
        let t = Taxonomy::new(TreeNode::new("Supercalifragilistic").size(SizeTag::Xs));
        assert_eq!(overflow_warnings(&t, &cfg())[0].code, "label-overflow");
        let t = Taxonomy::new(TreeNode::new("short words only").size(SizeTag::Xs));
        assert!(overflow_warnings(&t, &cfg()).is_empty());
        assert_eq!(wrap("Sec. sec:semantic-color", 10.0, 60.0), ["Sec. sec:", "semantic-", "color"]);
        assert_eq!(size_switch("\\scriptsize VGG"), 0.75);
        assert_eq!(size_switch("\\smallcaps"), 1.0);
    }

    #[test]
    fn numbers_trimmed() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(1.256), "1.26");
        assert_eq!(num(-0.001), "0");
    }
}
