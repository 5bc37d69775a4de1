//! Compiler for highlight boxes, semantic color themes, taxonomy trees and
//! ORCID author metadata. Reads a JSON document, validates it, and emits
//! LaTeX for the `ktbox` conventions plus SVG renderings of trees.
//!
//! ```
//! use ktc::palette::{builtin_registry, emit_palette_definitions};
//!
//! let tex = emit_palette_definitions(&builtin_registry()).unwrap();
//! assert!(tex.contains("\\definecolor{ktred-bg}{HTML}{FFEBEE}"));
//! ```

pub mod boxmodel;
pub mod compile;
pub mod diagnostic;
pub mod frontend;
pub mod latexgen;
pub mod orcid;
pub mod palette;
pub mod svgrender;
pub mod treemodel;

pub use compile::{compile, CompileError, CompileOptions, Manifest, Target};
pub use diagnostic::{Diagnostic, Severity};
pub use frontend::{check, parse_document, serialize_document, DocumentIR, Item};
