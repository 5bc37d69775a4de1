use std::str::FromStr;

use serde_json::{Map, Value};
use thiserror::Error;

use super::{AuthorItem, DocumentIR, Item};
use crate::boxmodel::{make_box, make_columns, Block, BoxError, BoxKind, BoxSpec, ColumnLayout};
use crate::diagnostic::{has_errors, Diagnostic};
use crate::orcid::{parse_orcid, AuthorMeta, OrcidError, OrcidStyle};
use crate::palette::{builtin_registry, Mode, PaletteRegistry, Role};
use crate::treemodel::{Fill, FusionAnnotation, FusionContent, LinkStyle, SizeTag, SplitBox, Taxonomy, TreeNode};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document does not match the schema ({} errors)", .0.iter().filter(|d| d.is_error()).count())]
    Schema(Vec<Diagnostic>),
}

impl ParseError {
    /// All diagnostics, with syntax errors converted to one `Error`.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            ParseError::Syntax { line, column, message } => {
                vec![Diagnostic::error("syntax", "", format!("column {column}: {message}")).with_line(*line)]
            }
            ParseError::Schema(diags) => diags.clone(),
        }
    }
}

/// A successfully parsed document plus any warnings (unknown fields).
#[derive(Debug)]
pub struct Parsed {
    pub doc: DocumentIR,
    pub warnings: Vec<Diagnostic>,
}

/// Reads a JSON document. Unknown fields are warnings; missing or
/// mistyped fields and box/column rule violations are errors, collected
/// across the whole document before failing.
pub fn parse_document(input: &str) -> Result<Parsed, ParseError> {
    let value: Value = serde_json::from_str(input).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut reader = Reader {
        diags: Vec::new(),
        registry: builtin_registry(),
    };
    let doc = reader.document(&value);
    if has_errors(&reader.diags) {
        return Err(ParseError::Schema(reader.diags));
    }
    match doc {
        Some(doc) => Ok(Parsed {
            doc,
            warnings: reader.diags,
        }),
        None => Err(ParseError::Schema(reader.diags)),
    }
}

struct Reader {
    diags: Vec<Diagnostic>,
    /// Builtin palette plus the document's overrides, used to resolve box
    /// themes while parsing.
    registry: PaletteRegistry,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

impl Reader {
    fn error(&mut self, code: &'static str, path: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic::error(code, path, message));
    }

    fn mismatch(&mut self, path: &str, expected: &str, found: &Value) {
        self.error(
            "type-mismatch",
            path,
            format!("expected {expected}, found {}", type_name(found)),
        );
    }

    fn object<'v>(&mut self, v: &'v Value, path: &str, known: &[&str]) -> Option<&'v Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.mismatch(path, "an object", v);
            return None;
        };
        for key in map.keys().filter(|k| !known.contains(&k.as_str())) {
            self.diags.push(Diagnostic::warn(
                "unknown-field",
                join(path, key),
                format!("unknown field `{key}` ignored"),
            ));
        }
        Some(map)
    }

    fn field<'v>(&mut self, map: &'v Map<String, Value>, key: &str, path: &str, required: bool) -> Option<&'v Value> {
        let v = map.get(key);
        if v.is_none() && required {
            self.error("missing-field", join(path, key), format!("missing required field `{key}`"));
        }
        v
    }

    fn string(&mut self, map: &Map<String, Value>, key: &str, path: &str, required: bool) -> Option<String> {
        let v = self.field(map, key, path, required)?;
        match v.as_str() {
            Some(s) => Some(s.to_string()),
            None => {
                self.mismatch(&join(path, key), "a string", v);
                None
            }
        }
    }

    fn string_list(&mut self, v: &Value, path: &str) -> Option<Vec<String>> {
        let Some(arr) = v.as_array() else {
            self.mismatch(path, "an array of strings", v);
            return None;
        };
        let mut out = Vec::with_capacity(arr.len());
        for (i, item) in arr.iter().enumerate() {
            match item.as_str() {
                Some(s) => out.push(s.to_string()),
                None => self.mismatch(&format!("{path}[{i}]"), "a string", item),
            }
        }
        (out.len() == arr.len()).then_some(out)
    }

    fn number(&mut self, map: &Map<String, Value>, key: &str, path: &str) -> Option<f64> {
        let v = self.field(map, key, path, false)?;
        match v.as_f64() {
            Some(n) => Some(n),
            None => {
                self.mismatch(&join(path, key), "a number", v);
                None
            }
        }
    }

    fn parsed<T: FromStr<Err = String>>(
        &mut self,
        map: &Map<String, Value>,
        key: &str,
        path: &str,
        required: bool,
    ) -> Option<T> {
        let s = self.string(map, key, path, required)?;
        match s.parse() {
            Ok(v) => Some(v),
            Err(e) => {
                self.error("bad-value", join(path, key), e);
                None
            }
        }
    }

    fn array<'v>(&mut self, map: &'v Map<String, Value>, key: &str, path: &str, required: bool) -> Option<&'v Vec<Value>> {
        let v = self.field(map, key, path, required)?;
        match v.as_array() {
            Some(a) => Some(a),
            None => {
                self.mismatch(&join(path, key), "an array", v);
                None
            }
        }
    }

    fn document(&mut self, v: &Value) -> Option<DocumentIR> {
        let map = self.object(v, "", &["$schema", "mode", "palette", "items"])?;
        let mode = self.parsed::<Mode>(map, "mode", "", false).unwrap_or_default();
        let palette_overrides = map.get("palette").map(|p| {
            let (patch, diags) = PaletteRegistry::from_json(p);
            self.diags.extend(diags.into_iter().map(|d| d.nested("palette")));
            self.registry.merge(&patch);
            patch
        });
        let items_v = self.array(map, "items", "", true)?;
        let mut items = Vec::with_capacity(items_v.len());
        for (i, item) in items_v.iter().enumerate() {
            if let Some(item) = self.item(item, &format!("items[{i}]")) {
                items.push(item);
            }
        }
        Some(DocumentIR {
            mode,
            palette_overrides,
            items,
        })
    }

    fn item(&mut self, v: &Value, path: &str) -> Option<Item> {
        const KINDS: [&str; 4] = ["box", "columns", "tree", "author"];
        let map = self.object(v, path, &KINDS)?;
        let present: Vec<&str> = KINDS.into_iter().filter(|k| map.contains_key(*k)).collect();
        match present.as_slice() {
            [] => {
                self.error("missing-field", path, "item needs one of `box`, `columns`, `tree` or `author`");
                None
            }
            [kind] => {
                let inner = &map[*kind];
                let p = join(path, kind);
                match *kind {
                    "box" => self.box_spec(inner, &p).map(Item::Box),
                    "columns" => self.columns(inner, &p).map(Item::Columns),
                    "tree" => self.tree(inner, &p).map(Item::Tree),
                    _ => self.author(inner, &p).map(Item::Author),
                }
            }
            many => {
                self.error("ambiguous-item", path, format!("item has several kinds: {}", many.join(", ")));
                None
            }
        }
    }

    fn box_spec(&mut self, v: &Value, path: &str) -> Option<BoxSpec> {
        let map = self.object(v, path, &["kind", "title", "theme", "mode", "body"])?;
        let kind = self.parsed::<BoxKind>(map, "kind", path, true);
        let title = self.string(map, "title", path, false);
        let theme = self.string(map, "theme", path, false);
        let mode = self.parsed::<Mode>(map, "mode", path, false);
        let body = self.array(map, "body", path, true).and_then(|blocks| {
            let body_path = join(path, "body");
            let parsed: Vec<Option<Block>> = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| self.block(b, &format!("{body_path}[{i}]")))
                .collect();
            parsed.into_iter().collect::<Option<Vec<_>>>()
        });
        let (kind, body) = (kind?, body?);
        match make_box(kind, title, theme, mode, body, &self.registry) {
            Ok(spec) => Some(spec),
            Err(e) => {
                let (code, at) = match &e {
                    BoxError::NumberedWithoutTitle => ("numbered-without-title", join(path, "title")),
                    BoxError::WideWithTitle => ("wide-with-title", join(path, "title")),
                    BoxError::UnknownTheme(_) => ("unknown-theme", join(path, "theme")),
                    _ => ("invalid-box", path.to_string()),
                };
                self.error(code, at, e.to_string());
                None
            }
        }
    }

    fn block(&mut self, v: &Value, path: &str) -> Option<Block> {
        if let Some(s) = v.as_str() {
            return Some(Block::Paragraph(s.to_string()));
        }
        const KINDS: [&str; 3] = ["list", "code", "columns"];
        let map = self.object(v, path, &KINDS)?;
        let present: Vec<&str> = KINDS.into_iter().filter(|k| map.contains_key(*k)).collect();
        match present.as_slice() {
            ["list"] => self.string_list(&map["list"], &join(path, "list")).map(Block::List),
            ["code"] => self.string(map, "code", path, true).map(Block::Code),
            ["columns"] => self.columns(&map["columns"], &join(path, "columns")).map(Block::Columns),
            [] => {
                self.error("missing-field", path, "block must be a string or have one of `list`, `code`, `columns`");
                None
            }
            many => {
                self.error("ambiguous-item", path, format!("block has several kinds: {}", many.join(", ")));
                None
            }
        }
    }

    fn columns(&mut self, v: &Value, path: &str) -> Option<ColumnLayout> {
        let map = self.object(v, path, &["boxes"])?;
        let boxes_v = self.array(map, "boxes", path, true)?;
        let boxes_path = join(path, "boxes");
        let boxes: Vec<Option<BoxSpec>> = boxes_v
            .iter()
            .enumerate()
            .map(|(i, b)| self.box_spec(b, &format!("{boxes_path}[{i}]")))
            .collect();
        let boxes: Vec<BoxSpec> = boxes.into_iter().collect::<Option<_>>()?;
        let n = boxes.len();
        match make_columns(boxes, n) {
            Ok(layout) => Some(layout),
            Err(e) => {
                let code = match e {
                    BoxError::TooFewColumns(_) => "too-few-columns",
                    BoxError::TooManyColumns(_) => "too-many-columns",
                    BoxError::NestingTooDeep => "nesting-too-deep",
                    _ => "invalid-columns",
                };
                self.error(code, path, e.to_string());
                None
            }
        }
    }

    fn tree(&mut self, v: &Value, path: &str) -> Option<Taxonomy> {
        let map = self.object(v, path, &["style", "scale", "root", "fusions"])?;
        let style = self.parsed::<LinkStyle>(map, "style", path, false).unwrap_or_default();
        let scale = self.number(map, "scale", path).unwrap_or(1.0);
        let root = self.field(map, "root", path, true).map(|r| self.node(r, &join(path, "root")));
        let fusions = match self.array(map, "fusions", path, false) {
            Some(list) => {
                let fpath = join(path, "fusions");
                let parsed: Vec<Option<FusionAnnotation>> = list
                    .iter()
                    .enumerate()
                    .map(|(i, f)| self.fusion(f, &format!("{fpath}[{i}]")))
                    .collect();
                parsed.into_iter().collect::<Option<Vec<_>>>()
            }
            None => Some(Vec::new()),
        };
        Some(Taxonomy {
            root: root??,
            style,
            fusions: fusions?,
            scale,
        })
    }

    fn node(&mut self, v: &Value, path: &str) -> Option<TreeNode> {
        let map = self.object(v, path, &["label", "annotation", "cite", "size", "fill", "anchor", "children"])?;
        let label_lines = match self.field(map, "label", path, true) {
            Some(Value::String(s)) => Some(vec![s.clone()]),
            Some(v) => self.string_list(v, &join(path, "label")),
            None => None,
        };
        let sub_annotation = self.string(map, "annotation", path, false);
        let citation_keys = match map.get("cite") {
            Some(v) => self.string_list(v, &join(path, "cite")).unwrap_or_default(),
            None => Vec::new(),
        };
        let size = self.parsed::<SizeTag>(map, "size", path, false).unwrap_or_default();
        let fill = match map.get("fill") {
            None => Some(Fill::default()),
            Some(f) => self.fill(f, &join(path, "fill")),
        };
        let anchor = self.string(map, "anchor", path, false);
        let mut children = Vec::new();
        let mut children_ok = true;
        if let Some(list) = self.array(map, "children", path, false) {
            for (i, c) in list.iter().enumerate() {
                match self.node(c, &format!("{path}.children[{i}]")) {
                    Some(n) => children.push(n),
                    None => children_ok = false,
                }
            }
        }
        if !children_ok {
            return None;
        }
        Some(TreeNode {
            label_lines: label_lines?,
            sub_annotation,
            citation_keys,
            size,
            fill: fill?,
            anchor,
            children,
        })
    }

    fn fill(&mut self, v: &Value, path: &str) -> Option<Fill> {
        if let Some(name) = v.as_str() {
            return Some(Fill::Named(name.to_string()));
        }
        let map = self.object(v, path, &["theme", "role", "mode"])?;
        let theme = self.string(map, "theme", path, true);
        let role = self.parsed::<Role>(map, "role", path, false).unwrap_or(Role::Bg);
        let mode = self.parsed::<Mode>(map, "mode", path, false).unwrap_or_default();
        Some(Fill::Themed { theme: theme?, role, mode })
    }

    fn fusion(&mut self, v: &Value, path: &str) -> Option<FusionAnnotation> {
        let map = self.object(v, path, &["id", "first", "last", "offset", "split", "text"])?;
        let id = self.string(map, "id", path, true);
        let first = self.string(map, "first", path, true);
        let last = self.string(map, "last", path, true);
        let offset_pt = self.number(map, "offset", path);
        let content = match (map.get("split"), map.get("text")) {
            (Some(split), None) => {
                let spath = join(path, "split");
                self.object(split, &spath, &["left", "right"]).and_then(|m| {
                    let left = self.string(m, "left", &spath, true);
                    let right = self.string(m, "right", &spath, true);
                    Some(FusionContent::Split(SplitBox { left: left?, right: right? }))
                })
            }
            (None, Some(_)) => self.string(map, "text", path, true).map(FusionContent::Text),
            (None, None) => {
                self.error("missing-field", path, "fusion needs `split` or `text`");
                None
            }
            (Some(_), Some(_)) => {
                self.error("ambiguous-item", path, "fusion has both `split` and `text`");
                None
            }
        };
        Some(FusionAnnotation {
            id: id?,
            first: first?,
            last: last?,
            offset_pt,
            content: content?,
        })
    }

    fn author(&mut self, v: &Value, path: &str) -> Option<AuthorItem> {
        let map = self.object(v, path, &["name", "orcid", "style"])?;
        let name = self.string(map, "name", path, true);
        let style = self.parsed::<OrcidStyle>(map, "style", path, false).unwrap_or_default();
        let orcid = match self.string(map, "orcid", path, false) {
            None => Some(None),
            Some(raw) => match parse_orcid(&raw) {
                Ok(id) => Some(Some(id)),
                Err(e) => {
                    let code = match e {
                        OrcidError::BadChecksum { .. } => "bad-orcid-checksum",
                        _ => "bad-orcid-format",
                    };
                    self.error(code, join(path, "orcid"), e.to_string());
                    None
                }
            },
        };
        let meta = match AuthorMeta::new(name?, orcid?) {
            Ok(m) => m,
            Err(e) => {
                self.error("empty-name", join(path, "name"), e.to_string());
                return None;
            }
        };
        Some(AuthorItem { meta, style })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(err: ParseError) -> Vec<&'static str> {
        err.diagnostics().iter().map(|d| d.code).collect()
    }

    #[test]
    fn minimal_document() {
        let parsed = parse_document(
            r#"{"items":[{"box":{"kind":"standard","title":"Key Insight","body":["This is an example of a highlighted message."]}}]}"#,
        )
        .unwrap();
        assert!(parsed.warnings.is_empty());
        let Item::Box(b) = &parsed.doc.items[0] else { panic!() };
        assert_eq!(b.kind(), BoxKind::Standard);
        assert_eq!(b.title(), Some("Key Insight"));
        assert_eq!(b.theme(), "blue");
    }

    #[test]
    fn numbered_without_title() {
        let err = parse_document(r#"{"items":[{"box":{"kind":"numbered","theme":"red","body":["x"]}}]}"#).unwrap_err();
        let diags = err.diagnostics();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].message, "numbered box requires title");
        assert_eq!(diags[0].path, "items[0].box.title");
    }

    #[test]
    fn empty_items() {
        let parsed = parse_document(r#"{"items":[]}"#).unwrap();
        assert!(parsed.doc.items.is_empty());
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_document("{\n  \"items\": [,]\n}") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_warn() {
        let parsed = parse_document(
            r#"{"version": 2, "items":[{"box":{"kind":"wide","body":["x"],"shadow":true}}]}"#,
        )
        .unwrap();
        let paths: Vec<_> = parsed.warnings.iter().map(|d| (d.code, d.path.as_str())).collect();
        assert_eq!(paths, [("unknown-field", "version"), ("unknown-field", "items[0].box.shadow")]);
    }

    #[test]
    fn errors_are_aggregated() {
        let err = parse_document(
            r#"{"items":[
                {"box":{"kind":"boxy","body":["x"]}},
                {"box":{"kind":"standard"}},
                {"tree":{"root":{"label":["a"],"size":"huge"}}},
                {"author":{"name":"A","orcid":"0000-0002-8126-3527"}},
                {"box":{"kind":"standard","theme":"teal","body":[]}},
                {}
            ]}"#,
        )
        .unwrap_err();
        assert_eq!(
            codes(err),
            ["bad-value", "missing-field", "bad-value", "bad-orcid-checksum", "unknown-theme", "missing-field"]
        );
    }

    #[test]
    fn missing_items_and_wrong_types() {
        assert_eq!(codes(parse_document("{}").unwrap_err()), ["missing-field"]);
        assert_eq!(codes(parse_document("[]").unwrap_err()), ["type-mismatch"]);
        assert_eq!(
            codes(parse_document(r#"{"items":[{"box":{"kind":"standard","title":3,"body":[1]}}]}"#).unwrap_err()),
            ["type-mismatch", "type-mismatch"]
        );
    }

    #[test]
    fn palette_overrides_enable_new_themes() {
        let doc = r#"{
            "palette": {"teal": {"light": {"bg": "E0F2F1", "title": "004D40", "border": "80CBC4", "titlebox": "B2DFDB"}}},
            "items": [{"box": {"kind": "standard", "theme": "teal", "body": ["x"]}}]
        }"#;
        let parsed = parse_document(doc).unwrap();
        assert!(parsed.doc.palette_overrides.unwrap().contains("teal"));
    }

    #[test]
    fn ambiguous_items() {
        let err = parse_document(r#"{"items":[{"box":{"kind":"wide","body":[]},"tree":{}}]}"#).unwrap_err();
        assert_eq!(codes(err), ["ambiguous-item"]);
    }

    #[test]
    fn column_rules() {
        let err = parse_document(
            r#"{"items":[{"columns":{"boxes":[{"kind":"standard","body":["x"]}]}}]}"#,
        )
        .unwrap_err();
        assert_eq!(codes(err), ["too-few-columns"]);
        let inner = r#"{"columns":{"boxes":[{"kind":"standard","body":["a"]},{"kind":"standard","body":["b"]}]}}"#;
        let doc = format!(
            r#"{{"items":[{{"columns":{{"boxes":[{{"kind":"standard","body":[{inner}]}},{{"kind":"standard","body":["c"]}}]}}}}]}}"#
        );
        assert_eq!(codes(parse_document(&doc).unwrap_err()), ["nesting-too-deep"]);
    }
}
