//! Highlight boxes (standard, numbered, wide), their rich bodies, and
//! multi-column composition. Nothing here knows about LaTeX syntax.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::frontend::DocumentIR;
use crate::palette::{Mode, PaletteRegistry};

pub const DEFAULT_THEME: &str = "blue";

/// Total horizontal budget left for gaps between columns, as a fraction of
/// the text width.
pub const COLUMN_GAP_BUDGET: f64 = 0.04;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoxError {
    #[error("numbered box requires title")]
    NumberedWithoutTitle,
    #[error("wide box cannot have a title")]
    WideWithTitle,
    #[error("unknown theme `{0}`")]
    UnknownTheme(String),
    #[error("expected {expected} boxes for the column layout, got {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("a column layout needs at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("{0} columns leave no room for gaps")]
    TooManyColumns(usize),
    #[error("column layouts nest at most one level deep")]
    NestingTooDeep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxKind {
    Standard,
    Numbered,
    Wide,
}

impl BoxKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoxKind::Standard => "standard",
            BoxKind::Numbered => "numbered",
            BoxKind::Wide => "wide",
        }
    }

    /// LaTeX environment name.
    pub fn environment(&self) -> &'static str {
        match self {
            BoxKind::Standard => "ktbox",
            BoxKind::Numbered => "ktboxnumbered",
            BoxKind::Wide => "ktboxwide",
        }
    }
}

impl FromStr for BoxKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(BoxKind::Standard),
            "numbered" => Ok(BoxKind::Numbered),
            "wide" => Ok(BoxKind::Wide),
            _ => Err(format!("unknown box kind `{s}` (expected standard, numbered or wide)")),
        }
    }
}

/// One element of a box body.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    /// LaTeX source, passed through untouched.
    Paragraph(String),
    /// An `itemize` list; each entry is LaTeX source.
    List(Vec<String>),
    /// Verbatim code, emitted line for line inside `codeblock`.
    Code(String),
    Columns(ColumnLayout),
}

impl Block {
    fn has_columns(&self) -> bool {
        matches!(self, Block::Columns(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxSpec {
    kind: BoxKind,
    title: Option<String>,
    theme: Option<String>,
    mode: Option<Mode>,
    body: Vec<Block>,
}

impl BoxSpec {
    pub fn kind(&self) -> BoxKind {
        self.kind
    }

    pub fn title(&self) -> Option<&str> {
        self.title.as_deref()
    }

    /// The theme as written by the author, `None` when defaulted.
    pub fn explicit_theme(&self) -> Option<&str> {
        self.theme.as_deref()
    }

    pub fn theme(&self) -> &str {
        self.theme.as_deref().unwrap_or(DEFAULT_THEME)
    }

    /// The mode as written by the author, `None` when inherited from the
    /// document.
    pub fn explicit_mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn mode_or(&self, document_mode: Mode) -> Mode {
        self.mode.unwrap_or(document_mode)
    }

    pub fn body(&self) -> &[Block] {
        &self.body
    }

    /// Only the wide variant may break across pages.
    pub fn breakable(&self) -> bool {
        self.kind == BoxKind::Wide
    }

    pub(crate) fn nested_layouts(&self) -> impl Iterator<Item = (usize, &ColumnLayout)> {
        self.body.iter().enumerate().filter_map(|(i, b)| match b {
            Block::Columns(layout) => Some((i, layout)),
            _ => None,
        })
    }
}

/// Builds a box, enforcing the kind/title rules and theme existence.
/// An empty title counts as absent.
pub fn make_box(
    kind: BoxKind,
    title: Option<String>,
    theme: Option<String>,
    mode: Option<Mode>,
    body: Vec<Block>,
    registry: &PaletteRegistry,
) -> Result<BoxSpec, BoxError> {
    let title = title.filter(|t| !t.trim().is_empty());
    match (kind, &title) {
        (BoxKind::Numbered, None) => return Err(BoxError::NumberedWithoutTitle),
        (BoxKind::Wide, Some(_)) => return Err(BoxError::WideWithTitle),
        _ => {}
    }
    let theme_name = theme.as_deref().unwrap_or(DEFAULT_THEME);
    if !registry.contains(theme_name) {
        return Err(BoxError::UnknownTheme(theme_name.to_string()));
    }
    Ok(BoxSpec {
        kind,
        title,
        theme,
        mode,
        body,
    })
}

/// Equal-width columns. Widths are stored in hundredths of `\textwidth`
/// so they print exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnLayout {
    boxes: Vec<BoxSpec>,
    width_hundredths: u32,
}

impl ColumnLayout {
    pub fn boxes(&self) -> &[BoxSpec] {
        &self.boxes
    }

    pub fn columns(&self) -> usize {
        self.boxes.len()
    }

    pub fn width_fraction(&self) -> f64 {
        f64::from(self.width_hundredths) / 100.0
    }

    /// `0.48`, `0.32`, ...
    pub fn width_text(&self) -> String {
        format!("{}.{:02}", self.width_hundredths / 100, self.width_hundredths % 100)
    }
}

/// round((1 - gap budget) / n, 2), in hundredths, rounding half up.
pub fn column_width_hundredths(n: usize) -> u32 {
    let budget = ((1.0 - COLUMN_GAP_BUDGET) * 100.0).round() as u64;
    let n = n as u64;
    ((2 * budget + n) / (2 * n)) as u32
}

pub fn make_columns(boxes: Vec<BoxSpec>, n: usize) -> Result<ColumnLayout, BoxError> {
    if n < 2 {
        return Err(BoxError::TooFewColumns(n));
    }
    if boxes.len() != n {
        return Err(BoxError::CountMismatch {
            expected: n,
            actual: boxes.len(),
        });
    }
    let width_hundredths = column_width_hundredths(n);
    if width_hundredths as usize * n >= 100 {
        return Err(BoxError::TooManyColumns(n));
    }
    if boxes.iter().any(|b| b.body.iter().any(Block::has_columns)) {
        return Err(BoxError::NestingTooDeep);
    }
    Ok(ColumnLayout {
        boxes,
        width_hundredths,
    })
}

/// Location of a box inside a document: item index, then column / block
/// indices down to the box.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxId(pub Vec<usize>);

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "box@{}", s.join("."))
    }
}

/// Numbers handed to numbered boxes, 1..n in document order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NumberedAssignment(pub BTreeMap<BoxId, u32>);

impl NumberedAssignment {
    pub fn get(&self, id: &BoxId) -> Option<u32> {
        self.0.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Pre-order walk over every box, including boxes inside columns.
pub fn assign_numbers(doc: &DocumentIR) -> NumberedAssignment {
    let mut next = 0;
    let mut map = BTreeMap::new();
    for (id, spec) in doc.boxes() {
        if spec.kind() == BoxKind::Numbered {
            next += 1;
            map.insert(id, next);
        }
    }
    NumberedAssignment(map)
}
