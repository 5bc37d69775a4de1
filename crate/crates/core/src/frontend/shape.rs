//! Recovers box structure from emitted LaTeX: environment kind, title,
//! theme and mode. Used to check that generated code says what the IR said.

use crate::boxmodel::BoxKind;
use crate::palette::Mode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxShape {
    pub kind: BoxKind,
    pub title: Option<String>,
    pub theme: Option<String>,
    pub mode: Mode,
}

/// Scans `text` for `ktbox`, `ktboxnumbered` and `ktboxwide` openings in
/// source order. Content of `codeblock` environments is skipped.
pub fn box_shapes(text: &str) -> Vec<BoxShape> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(pos) = rest.find("\\begin{") {
        rest = &rest[pos + "\\begin{".len()..];
        let Some(close) = rest.find('}') else { break };
        let env = &rest[..close];
        rest = &rest[close + 1..];
        let kind = match env {
            "ktbox" => BoxKind::Standard,
            "ktboxnumbered" => BoxKind::Numbered,
            "ktboxwide" => BoxKind::Wide,
            "codeblock" => {
                match rest.find("\\end{codeblock}") {
                    Some(end) => rest = &rest[end..],
                    None => break,
                }
                continue;
            }
            _ => continue,
        };
        let mut opts = Vec::new();
        if rest.starts_with('[') {
            if let Some((inner, after)) = delimited(rest, '[', ']') {
                opts = split_options(inner);
                rest = after;
            }
        }
        let mut title = None;
        let mut theme = None;
        let mut mode = Mode::Light;
        for (key, value) in opts {
            match key.as_str() {
                "title" => title = Some(value),
                "theme" => {
                    let (name, m) = match value.strip_suffix("-dark") {
                        Some(name) => (name.to_string(), Mode::Dark),
                        None => (value, Mode::Light),
                    };
                    theme = Some(name);
                    mode = m;
                }
                _ => {}
            }
        }
        if kind == BoxKind::Numbered && rest.starts_with('{') {
            if let Some((inner, after)) = delimited(rest, '{', '}') {
                title = Some(inner.to_string());
                rest = after;
            }
        }
        out.push(BoxShape { kind, title, theme, mode });
    }
    out
}

/// Splits `open ... close` with nesting of braces; returns the inside and
/// what follows the closing delimiter.
fn delimited(s: &str, open: char, close: char) -> Option<(&str, &str)> {
    debug_assert!(s.starts_with(open));
    let mut depth = 0i32;
    let mut braces = 0i32;
    for (i, c) in s.char_indices() {
        if c == '{' && open != '{' {
            braces += 1;
        } else if c == '}' && close != '}' {
            braces -= 1;
        } else if c == open {
            depth += 1;
        } else if c == close && braces == 0 {
            depth -= 1;
            if depth == 0 {
                return Some((&s[open.len_utf8()..i], &s[i + close.len_utf8()..]));
            }
        }
    }
    None
}

fn split_options(s: &str) -> Vec<(String, String)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
        .into_iter()
        .filter_map(|p| {
            let (k, v) = p.split_once('=')?;
            let v = v.trim();
            let v = v
                .strip_prefix('{')
                .and_then(|x| x.strip_suffix('}'))
                .unwrap_or(v);
            Some((k.trim().to_string(), v.to_string()))
        })
        .collect()
}
