//! Whole-document compilation to an output directory with a digest
//! manifest. Files are staged in a sibling temp directory and moved into
//! place only after everything rendered, so a failed run leaves `out`
//! untouched.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::frontend::{check_ok, DocumentIR, Item};
use crate::latexgen::{gen_items, gen_preamble, GenError, PreambleOptions};
use crate::palette::Mode;
use crate::svgrender::{render_svg, LayoutConfig, SvgError};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Target {
    Latex,
    Svg,
    #[default]
    Both,
}

impl Target {
    fn latex(self) -> bool {
        matches!(self, Target::Latex | Target::Both)
    }

    fn svg(self) -> bool {
        matches!(self, Target::Svg | Target::Both)
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "latex" => Ok(Target::Latex),
            "svg" => Ok(Target::Svg),
            "both" => Ok(Target::Both),
            _ => Err(format!("unknown target `{s}` (expected latex, svg or both)")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CompileOptions {
    pub target: Target,
    /// Overrides the document's mode.
    pub mode: Option<Mode>,
    pub link_packages: bool,
    pub layout: LayoutConfig,
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("validation failed ({} diagnostics)", .0.len())]
    ValidationFailed(Vec<Diagnostic>),
    #[error("bad layout config: {0}")]
    BadConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CompileError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            CompileError::ValidationFailed(d) => d,
            _ => &[],
        }
    }
}

impl From<GenError> for CompileError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::ValidationFailed(d) => CompileError::ValidationFailed(d),
            other => CompileError::ValidationFailed(vec![Diagnostic::error("internal", "", other.to_string())]),
        }
    }
}

impl From<SvgError> for CompileError {
    fn from(e: SvgError) -> Self {
        match e {
            SvgError::ValidationFailed(d) => CompileError::ValidationFailed(d),
            SvgError::BadConfig(m) => CompileError::BadConfig(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| json!({ "path": e.path, "sha256": e.sha256 }))
            .collect();
        let mut s = serde_json::to_string_pretty(&entries).expect("manifest serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders every output file in memory, in manifest order.
pub fn render_outputs(doc: &DocumentIR, opts: &CompileOptions) -> Result<Vec<(String, String)>, CompileError> {
    let mut doc = doc.clone();
    if let Some(mode) = opts.mode {
        doc.mode = mode;
    }
    let doc = &doc;
    check_ok(doc).map_err(CompileError::ValidationFailed)?;
    opts.layout.validate()?;
    let registry = doc.registry();
    let mut files = Vec::new();
    if opts.target.latex() {
        let preamble = gen_preamble(
            &registry,
            PreambleOptions {
                link_packages: opts.link_packages,
            },
        )?;
        files.push(("preamble.tex".to_string(), preamble.text));
        for (i, fragment) in gen_items(doc, &registry)?.into_iter().enumerate() {
            let name = format!("body-{:02}-{}.tex", i, doc.items[i].kind());
            files.push((name, fragment.text));
        }
    }
    if opts.target.svg() {
        for (i, item) in doc.items.iter().enumerate() {
            if let Item::Tree(t) = item {
                files.push((format!("tree-{i:02}.svg"), render_svg(t, &registry, &opts.layout)?));
            }
        }
    }
    Ok(files)
}

pub fn manifest_for(files: &[(String, String)]) -> Manifest {
    Manifest {
        entries: files
            .iter()
            .map(|(path, text)| ManifestEntry {
                path: path.clone(),
                sha256: sha256_hex(text.as_bytes()),
            })
            .collect(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CompileError + '_ {
    move |source| CompileError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Compiles `doc` into `out`. On any failure `out` is left as it was.
/// An existing `out` is replaced as a whole.
pub fn compile(doc: &DocumentIR, opts: &CompileOptions, out: &Path) -> Result<Manifest, CompileError> {
    let files = render_outputs(doc, opts)?;
    let manifest = manifest_for(&files);

    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(io_err(&parent))?;
    let staging = tempfile::Builder::new()
        .prefix(".ktc-stage-")
        .tempdir_in(&parent)
        .map_err(io_err(&parent))?;
    for (name, text) in &files {
        let path = staging.path().join(name);
        fs::write(&path, text).map_err(io_err(&path))?;
    }
    let path = staging.path().join(MANIFEST_FILE);
    fs::write(&path, manifest.to_json()).map_err(io_err(&path))?;

    let staged = staging.keep();
    let backup = if out.exists() {
        let backup = parent.join(format!(
            ".ktc-old-{}",
            staged.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ));
        fs::rename(out, &backup).map_err(io_err(out))?;
        Some(backup)
    } else {
        None
    };
    if let Err(e) = fs::rename(&staged, out) {
        if let Some(b) = &backup {
            let _ = fs::rename(b, out);
        }
        let _ = fs::remove_dir_all(&staged);
        return Err(io_err(out)(e));
    }
    if let Some(b) = backup {
        let _ = fs::remove_dir_all(b);
    }
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxmodel::{make_box, Block, BoxKind};
    use crate::palette::builtin_registry;
    use crate::treemodel::{Taxonomy, TreeNode};

    fn doc() -> DocumentIR {
        let b = make_box(
            BoxKind::Standard,
            Some("Key Insight".into()),
            None,
            None,
            vec![Block::Paragraph("x".into())],
            &builtin_registry(),
        )
        .unwrap();
        let t = Taxonomy::new(TreeNode::new("r").child(TreeNode::new("c")));
        DocumentIR {
            items: vec![Item::Box(b), Item::Tree(t)],
            ..Default::default()
        }
    }

    #[test]
    fn writes_manifest_and_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let m = compile(&doc(), &CompileOptions::default(), &out).unwrap();
        let names: Vec<_> = m.entries.iter().map(|e| e.path.as_str()).collect();
        assert_eq!(names, ["preamble.tex", "body-00-box.tex", "body-01-tree.tex", "tree-01.svg"]);
        for e in &m.entries {
            let bytes = fs::read(out.join(&e.path)).unwrap();
            assert_eq!(sha256_hex(&bytes), e.sha256);
        }
        let again = compile(&doc(), &CompileOptions::default(), &out).unwrap();
        assert_eq!(m, again);
        let stray: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(stray.len(), 1);
    }

    #[test]
    fn targets() {
        let svg = render_outputs(&doc(), &CompileOptions { target: Target::Svg, ..Default::default() }).unwrap();
        assert_eq!(svg.len(), 1);
        let tex = render_outputs(&doc(), &CompileOptions { target: Target::Latex, ..Default::default() }).unwrap();
        assert_eq!(tex.len(), 3);
    }

    #[test]
    fn failure_leaves_out_untouched() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        fs::create_dir(&out).unwrap();
        fs::write(out.join("keep.txt"), "old").unwrap();
        let mut bad = doc();
        if let Item::Tree(t) = &mut bad.items[1] {
            t.scale = -1.0;
        }
        assert!(matches!(
            compile(&bad, &CompileOptions::default(), &out),
            Err(CompileError::ValidationFailed(_))
        ));
        assert_eq!(fs::read_to_string(out.join("keep.txt")).unwrap(), "old");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn mode_override_reaches_boxes() {
        let opts = CompileOptions {
            target: Target::Latex,
            mode: Some(Mode::Dark),
            ..Default::default()
        };
        let files = render_outputs(&doc(), &opts).unwrap();
        assert!(files[1].1.starts_with("\\begin{ktbox}[title={Key Insight}, theme=blue-dark]"));
    }
}
