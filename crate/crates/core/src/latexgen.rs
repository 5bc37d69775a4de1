//! LaTeX backend. Turns validated IR into the preamble (colors,
//! environments, tree helpers, ORCID wrappers) and body snippets.
//!
//! All output is built line by line with two-space indentation per nesting
//! level; verbatim code is written without indentation. Generators are pure,
//! so identical input gives identical bytes.

use thiserror::Error;

use crate::boxmodel::{Block, BoxId, BoxKind, BoxSpec, ColumnLayout, NumberedAssignment};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::frontend::{AuthorItem, DocumentIR, Item};
use crate::orcid::{render_orcid_latex, ORCID_URL_PREFIX};
use crate::palette::{
    builtin_registry, definecolor, emit_palette_definitions, Mode, PaletteError, PaletteRegistry, Role,
};
use crate::treemodel::{size_width, validate_taxonomy, FusionContent, SizeTag, Taxonomy, TreeNode};

/// Color of the small secondary line under a tree node label.
pub const ANNOTATION_COLOR: &str = "ktorange-bg-dark";

/// Option list for the container that holds multi-column layouts.
pub const COLUMN_CONTAINER_OPTIONS: &str = "enhanced, sharp corners=south, colframe=white, colback=white, boxrule=0pt, top=0pt, bottom=0pt, left=0pt, right=0pt";

/// Packages behind `--link-packages`.
pub const LINKED_PACKAGES: &str = "\\usepackage{ktcolor,ktbox,ktlrtree,ktorcid}";

#[derive(Debug, Error)]
pub enum GenError {
    #[error("validation failed ({} diagnostics)", .0.len())]
    ValidationFailed(Vec<Diagnostic>),
    #[error("numbered box {0} has no assigned number")]
    MissingNumber(BoxId),
}

impl From<PaletteError> for GenError {
    fn from(e: PaletteError) -> Self {
        match e {
            PaletteError::ValidationFailed(d) => GenError::ValidationFailed(d),
            other => GenError::ValidationFailed(vec![Diagnostic::error("palette", "", other.to_string())]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentKind {
    Preamble,
    BodySnippet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatexFragment {
    pub text: String,
    pub kind: FragmentKind,
}

impl LatexFragment {
    fn body(text: String) -> Self {
        LatexFragment {
            text,
            kind: FragmentKind::BodySnippet,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PreambleOptions {
    /// Emit `\usepackage{ktcolor,ktbox,ktlrtree,ktorcid}` instead of
    /// inlining the definitions.
    pub link_packages: bool,
}

#[derive(Default)]
struct Writer {
    out: String,
    indent: usize,
}

impl Writer {
    fn line(&mut self, s: &str) {
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn raw(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn blank(&mut self) {
        self.out.push('\n');
    }

    fn open(&mut self, s: &str) {
        self.line(s);
        self.indent += 1;
    }

    fn close(&mut self, s: &str) {
        self.indent -= 1;
        self.line(s);
    }
}

// ---------------------------------------------------------------- preamble

const PACKAGES: &str = r"\usepackage[table,dvipsnames]{xcolor}
\usepackage[most]{tcolorbox}
\usepackage{forest}
\usepackage{graphicx}
\usepackage{listings}
\usepackage{hyperref}
\usepackage{orcidlink}
\usetikzlibrary{arrows.meta,decorations.pathreplacing,calc}";

const BOX_ENVIRONMENTS: &str = r"\newtcolorbox{ktbox}[1][]{ktbase, ktthemestyle/blue, attach boxed title to top left={xshift=3mm, yshift*=-\tcboxedtitleheight/2}, boxed title style={arc=1.5mm, boxrule=0.6pt}, #1}
\newtcolorbox[auto counter]{ktboxnumbered}[2][]{ktbase, ktthemestyle/blue, attach boxed title to top left={xshift=3mm, yshift*=-\tcboxedtitleheight/2}, boxed title style={arc=1.5mm, boxrule=0.6pt}, title={\thetcbcounter.~#2}, #1}
\newtcolorbox{ktboxwide}[1][]{ktbase, ktthemestyle/blue, breakable, sharp corners=north, width=\linewidth, #1}
\lstnewenvironment{codeblock}{\lstset{basicstyle=\ttfamily\footnotesize, breaklines=true, columns=fullflexible, keepspaces=true}}{}";

const TREE_STYLES: &str = r"\forestset{
  ktlrtree-base/.style={for tree={grow'=0, draw=ktgray-border, rounded corners=3pt, align=center, anchor=west, child anchor=west, parent anchor=east, inner sep=3pt, l sep+=12pt, s sep=4pt, font=\small}},
  ktlrtree-arrow-unified/.style={ktlrtree-base, for tree={edge={-Latex, draw=ktgray-border}}},
  ktlrtree-plain-unified/.style={ktlrtree-base, for tree={edge={draw=ktgray-border}}},
}";

const FUSION_HELPERS: &str = r"\newcommand{\ktcurl}[5][10pt]{%
  \draw[decorate, decoration={brace, amplitude=6pt}, thick, draw=ktgray-border]
    ($(#3.north east)+(#1,0)$) -- ($(#4.south east)+(#1,0)$)
    node[midway, right=8pt, name=#2]{#5};%
}
\newcommand{\ktfusionboxsplit}[2]{%
  \begin{tcolorbox}[enhanced, sidebyside, lefthand ratio=0.5, width=20em, colback=ktgray-bg, colframe=ktgray-border, arc=2mm, boxrule=0.6pt, fontupper=\scriptsize, fontlower=\scriptsize, left=4pt, right=4pt, top=3pt, bottom=3pt]
    #1\tcblower #2
  \end{tcolorbox}%
}";

fn theme_styles(registry: &PaletteRegistry, only_new: bool) -> Vec<String> {
    let builtin = builtin_registry();
    let mut lines = Vec::new();
    for theme in registry.themes() {
        if only_new && builtin.contains(&theme.name) {
            continue;
        }
        for mode in Mode::ALL {
            if theme.colors(mode).is_none() {
                continue;
            }
            let c = |role| crate::palette::color_name(&theme.name, role, mode);
            let mut keys = format!(
                "colback={}, colframe={}, coltitle={}, colbacktitle={}",
                c(Role::Bg),
                c(Role::Border),
                c(Role::Title),
                c(Role::Titlebox)
            );
            if mode == Mode::Dark {
                keys.push_str(&format!(", colupper={}", c(Role::Text)));
            }
            lines.push(format!("  ktthemestyle/{}{}/.style={{{keys}}},", theme.name, mode.suffix()));
        }
    }
    lines
}

/// `\newcommand{\ktwrapbox<tag>}[1]{\ktwrapbox{<w>em}{#1}}` for the ladder.
pub fn wrap_box_commands() -> Vec<String> {
    let mut lines = vec!["\\newcommand{\\ktwrapbox}[2]{\\parbox{#1}{\\centering #2}}".to_string()];
    for tag in SizeTag::ALL {
        lines.push(format!(
            "\\newcommand{{{}}}[1]{{\\ktwrapbox{{{}em}}{{#1}}}}",
            tag.command(),
            size_width(tag)
        ));
    }
    lines
}

pub fn gen_preamble(registry: &PaletteRegistry, opts: PreambleOptions) -> Result<LatexFragment, GenError> {
    let colors = emit_palette_definitions(registry)?;
    let mut w = Writer::default();
    w.line("% Generated by ktc. Do not edit by hand.");
    if opts.link_packages {
        w.line(LINKED_PACKAGES);
        // Only colors and themes the packages do not already ship.
        let builtin = builtin_registry();
        let mut extra = Vec::new();
        for theme in registry.themes() {
            for mode in Mode::ALL {
                for (role, color) in theme.colors(mode).into_iter().flatten() {
                    if builtin.resolve(&theme.name, *role, mode).ok() != Some(*color) {
                        extra.push(definecolor(&theme.name, *role, mode, *color));
                    }
                }
            }
        }
        for line in &extra {
            w.line(line);
        }
        let styles = theme_styles(registry, true);
        if !styles.is_empty() {
            w.line("\\tcbset{");
            for s in &styles {
                w.line(s);
            }
            w.line("}");
        }
        return Ok(LatexFragment {
            text: w.out,
            kind: FragmentKind::Preamble,
        });
    }

    w.raw(PACKAGES);
    w.blank();
    w.line("% ktcolor: semantic palettes");
    w.out.push_str(&colors);
    w.blank();
    w.line("% ktbox: highlight environments");
    w.line("\\tcbset{");
    for s in theme_styles(registry, false) {
        w.line(&s);
    }
    w.line("  theme/.style={ktthemestyle/#1},");
    w.line("  ktbase/.style={enhanced, arc=2mm, boxrule=0.8pt, fonttitle=\\bfseries\\small, left=6pt, right=6pt, top=4pt, bottom=4pt},");
    w.line("}");
    w.raw(BOX_ENVIRONMENTS);
    w.blank();
    w.line("% ktlrtree: taxonomy trees");
    for line in wrap_box_commands() {
        w.line(&line);
    }
    w.raw(TREE_STYLES);
    w.raw(FUSION_HELPERS);
    w.blank();
    w.line("% ktorcid: author metadata");
    w.line("\\providecommand{\\orcidicon}[1]{\\textsuperscript{\\orcidlink{#1}}}");
    w.line(&format!(
        "\\providecommand{{\\orcid}}[1]{{\\href{{{ORCID_URL_PREFIX}#1}}{{\\orcidlink{{#1}}\\,\\texttt{{#1}}}}}}"
    ));
    Ok(LatexFragment {
        text: w.out,
        kind: FragmentKind::Preamble,
    })
}

// -------------------------------------------------------------------- boxes

/// How `[...]` options are written. Standalone boxes use `title={..}` then
/// `theme=..`; boxes inside column layouts put the theme first and leave
/// simple titles unbraced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OptionStyle {
    Standard,
    Compact,
}

fn needs_braces(title: &str) -> bool {
    title.contains([',', '=', '[', ']']) || title.starts_with(' ') || title.ends_with(' ')
}

fn theme_value(spec: &BoxSpec, mode: Mode) -> Option<String> {
    match (spec.explicit_theme(), mode) {
        (None, Mode::Light) => None,
        (theme, mode) => Some(format!("{}{}", theme.unwrap_or(spec.theme()), mode.suffix())),
    }
}

fn begin_line(spec: &BoxSpec, mode: Mode, style: OptionStyle) -> String {
    let env = spec.kind().environment();
    let theme = theme_value(spec, mode).map(|t| format!("theme={t}"));
    let mut opts = Vec::new();
    match spec.kind() {
        BoxKind::Standard => {
            let title = spec.title().map(|t| match style {
                OptionStyle::Compact if !needs_braces(t) => format!("title={t}"),
                _ => format!("title={{{t}}}"),
            });
            match style {
                OptionStyle::Standard => opts.extend(title.into_iter().chain(theme)),
                OptionStyle::Compact => opts.extend(theme.into_iter().chain(title)),
            }
        }
        BoxKind::Numbered | BoxKind::Wide => opts.extend(theme),
    }
    let mut line = format!("\\begin{{{env}}}");
    if !opts.is_empty() {
        line.push_str(&format!("[{}]", opts.join(", ")));
    }
    if spec.kind() == BoxKind::Numbered {
        line.push_str(&format!("{{{}}}", spec.title().unwrap_or_default()));
    }
    line
}

fn write_box(
    w: &mut Writer,
    spec: &BoxSpec,
    id: &BoxId,
    numbers: &NumberedAssignment,
    doc_mode: Mode,
    style: OptionStyle,
) -> Result<(), GenError> {
    if spec.kind() == BoxKind::Numbered && numbers.get(id).is_none() {
        return Err(GenError::MissingNumber(id.clone()));
    }
    let mode = spec.mode_or(doc_mode);
    w.open(&begin_line(spec, mode, style));
    let mut prev_paragraph = false;
    for (i, block) in spec.body().iter().enumerate() {
        let is_paragraph = matches!(block, Block::Paragraph(_));
        if is_paragraph && prev_paragraph {
            w.blank();
        }
        prev_paragraph = is_paragraph;
        match block {
            Block::Paragraph(text) => {
                for line in text.lines() {
                    w.line(line);
                }
            }
            Block::List(items) => {
                w.open("\\begin{itemize}");
                for item in items {
                    w.line(&format!("\\item {item}"));
                }
                w.close("\\end{itemize}");
            }
            Block::Code(code) => {
                w.open("\\begin{codeblock}");
                for line in code.lines() {
                    w.raw(line);
                }
                w.close("\\end{codeblock}");
            }
            Block::Columns(layout) => {
                let mut base = id.0.clone();
                base.push(i);
                write_columns(w, layout, &base, numbers, doc_mode)?;
            }
        }
    }
    w.close(&format!("\\end{{{}}}", spec.kind().environment()));
    Ok(())
}

fn write_columns(
    w: &mut Writer,
    layout: &ColumnLayout,
    base: &[usize],
    numbers: &NumberedAssignment,
    doc_mode: Mode,
) -> Result<(), GenError> {
    w.open(&format!("\\begin{{tcolorbox}}[{COLUMN_CONTAINER_OPTIONS}]"));
    let width = layout.width_text();
    let last = layout.columns() - 1;
    for (col, spec) in layout.boxes().iter().enumerate() {
        w.open(&format!("\\begin{{minipage}}[t]{{{width}\\textwidth}}"));
        let mut id = base.to_vec();
        id.push(col);
        write_box(w, spec, &BoxId(id), numbers, doc_mode, OptionStyle::Compact)?;
        w.close(if col == last { "\\end{minipage}" } else { "\\end{minipage}\\hfill" });
    }
    w.close("\\end{tcolorbox}");
    Ok(())
}

/// A standalone box. `id` locates it for numbering.
pub fn gen_box(
    spec: &BoxSpec,
    id: &BoxId,
    numbers: &NumberedAssignment,
    doc_mode: Mode,
) -> Result<LatexFragment, GenError> {
    let mut w = Writer::default();
    write_box(&mut w, spec, id, numbers, doc_mode, OptionStyle::Standard)?;
    Ok(LatexFragment::body(w.out))
}

/// A column layout at item level; `item` is its index in the document.
pub fn gen_columns(
    layout: &ColumnLayout,
    item: usize,
    numbers: &NumberedAssignment,
    doc_mode: Mode,
) -> Result<LatexFragment, GenError> {
    let mut w = Writer::default();
    write_columns(&mut w, layout, &[item], numbers, doc_mode)?;
    Ok(LatexFragment::body(w.out))
}

// -------------------------------------------------------------------- trees

/// `0.45`, `0.7`, `1`, `18`
pub(crate) fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn node_label(node: &TreeNode) -> String {
    let mut lines = node.label_lines.clone();
    if !node.citation_keys.is_empty() {
        if let Some(last) = lines.last_mut() {
            last.push_str(&format!("~\\cite{{{}}}", node.citation_keys.join(",")));
        }
    }
    if let Some(note) = &node.sub_annotation {
        // a letter right after \scriptsize would extend the control word
        let sep = if note.starts_with(|c: char| c.is_ascii_alphabetic()) { " " } else { "" };
        lines.push(format!("{{\\color{{{ANNOTATION_COLOR}}}\\scriptsize{sep}{note}}}"));
    }
    lines.join("\\\\")
}

fn write_node(w: &mut Writer, t: &Taxonomy, node: &TreeNode) {
    let mut head = format!(
        "[{}{{{}}}, fill={}",
        node.size.command(),
        node_label(node),
        node.fill.color_name()
    );
    if let Some(a) = &node.anchor {
        head.push_str(&format!(", name={a}"));
    }
    let fusions: Vec<_> = match &node.anchor {
        Some(a) => t.fusions.iter().filter(|f| &f.last == a).collect(),
        None => Vec::new(),
    };
    if node.children.is_empty() && fusions.is_empty() {
        head.push(']');
        w.line(&head);
        return;
    }
    if !fusions.is_empty() {
        head.push(',');
    }
    w.open(&head);
    if !fusions.is_empty() {
        w.open("tikz+={");
        for f in fusions {
            let offset = f.offset_pt.map(|o| format!("[{}pt]", format_number(o))).unwrap_or_default();
            w.open(&format!("\\ktcurl{offset}{{{}}}{{{}}}{{{}}}{{", f.id, f.first, f.last));
            match &f.content {
                FusionContent::Split(s) => {
                    w.open("\\ktfusionboxsplit");
                    w.line(&format!("{{{}}}", s.left));
                    w.line(&format!("{{{}}}", s.right));
                    w.indent -= 1;
                }
                FusionContent::Text(text) => w.line(text),
            }
            w.close("}");
        }
        w.close("}");
    }
    for child in &node.children {
        write_node(w, t, child);
    }
    w.close("]");
}

pub fn gen_tree(t: &Taxonomy, registry: &PaletteRegistry) -> Result<LatexFragment, GenError> {
    let diags = validate_taxonomy(t, registry);
    if has_errors(&diags) {
        return Err(GenError::ValidationFailed(diags));
    }
    let mut w = Writer::default();
    w.open(&format!("\\scalebox{{{}}}{{", format_number(t.scale)));
    w.open(&format!("\\begin{{forest}} {}", t.style.forest_style()));
    write_node(&mut w, t, &t.root);
    w.close("\\end{forest}");
    w.close("}");
    Ok(LatexFragment::body(w.out))
}

pub fn gen_author(author: &AuthorItem) -> LatexFragment {
    LatexFragment::body(format!("\\author{{{}}}\n", render_orcid_latex(&author.meta, author.style)))
}

/// One body fragment per item, in document order.
pub fn gen_items(doc: &DocumentIR, registry: &PaletteRegistry) -> Result<Vec<LatexFragment>, GenError> {
    let numbers = crate::boxmodel::assign_numbers(doc);
    doc.items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Item::Box(spec) => gen_box(spec, &BoxId(vec![i]), &numbers, doc.mode),
            Item::Columns(layout) => gen_columns(layout, i, &numbers, doc.mode),
            Item::Tree(t) => gen_tree(t, registry),
            Item::Author(a) => Ok(gen_author(a)),
        })
        .collect()
}

/// All item fragments joined by blank lines.
pub fn gen_body(doc: &DocumentIR) -> Result<String, GenError> {
    let registry = doc.registry();
    let parts: Vec<String> = gen_items(doc, &registry)?.into_iter().map(|f| f.text).collect();
    Ok(parts.join("\n"))
}

// ------------------------------------------------------------------ checks

/// Per-line whitespace normalization used for golden comparisons: leading
/// and trailing whitespace is stripped from every line and trailing blank
/// lines are dropped.
pub fn normalize_whitespace(text: &str) -> String {
    let mut lines: Vec<&str> = text.lines().map(str::trim).collect();
    while lines.last() == Some(&"") {
        lines.pop();
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Checks that braces and `\begin`/`\end` pairs balance. `codeblock`
/// contents are skipped, as are `%` comments.
pub fn check_balance(text: &str) -> Result<(), String> {
    let bytes = text.as_bytes();
    let mut envs: Vec<String> = Vec::new();
    let mut depth: i64 = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if j == start {
                    // control symbol such as \\ or \{
                    i = start + 1;
                    continue;
                }
                let name = &text[start..j];
                if (name == "begin" || name == "end") && bytes.get(j) == Some(&b'{') {
                    let close = text[j..].find('}').ok_or("unterminated environment name")? + j;
                    let env = &text[j + 1..close];
                    if name == "begin" {
                        if env == "codeblock" {
                            let end = text[close..]
                                .find("\\end{codeblock}")
                                .ok_or("unterminated codeblock")?
                                + close;
                            i = end + "\\end{codeblock}".len();
                            continue;
                        }
                        envs.push(env.to_string());
                    } else {
                        match envs.pop() {
                            Some(open) if open == env => {}
                            Some(open) => return Err(format!("\\end{{{env}}} closes \\begin{{{open}}}")),
                            None => return Err(format!("\\end{{{env}}} without \\begin")),
                        }
                    }
                    i = close + 1;
                } else {
                    i = j;
                }
            }
            b'%' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'{' => {
                depth += 1;
                i += 1;
            }
            b'}' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced `}`".into());
                }
                i += 1;
            }
            _ => i += 1,
        }
    }
    if depth != 0 {
        return Err(format!("{depth} unclosed `{{`"));
    }
    if let Some(open) = envs.pop() {
        return Err(format!("\\begin{{{open}}} is never closed"));
    }
    Ok(())
}
