use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ktc::compile::{compile, CompileError, CompileOptions, Target};
use ktc::diagnostic::{Diagnostic, Severity};
use ktc::frontend::{check, parse_document, DocumentIR, Item};
use ktc::orcid::parse_orcid;
use ktc::palette::{builtin_registry, emit_palette_definitions, Mode};
use ktc::svgrender::{render_svg, LayoutConfig};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;

#[derive(Parser)]
#[command(name = "ktc", version, about = "Compile highlight boxes, palettes and taxonomy trees to LaTeX and SVG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Latex,
    Svg,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Light,
    Dark,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportArg {
    Latex,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a document into an output directory.
    Compile {
        doc: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        target: TargetArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Reference the ktcolor/ktbox/ktlrtree/ktorcid packages instead of inlining them.
        #[arg(long)]
        link_packages: bool,
    },
    /// Validate a document and print diagnostics.
    Check { doc: PathBuf },
    /// Export the builtin palette.
    Palette {
        #[arg(long, value_enum)]
        export: ExportArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one tree item of a document to SVG.
    Tree {
        doc: PathBuf,
        /// Item index of the tree in the document.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        em_px: Option<f64>,
        #[arg(long)]
        h_gap: Option<f64>,
        #[arg(long)]
        v_gap: Option<f64>,
    },
    /// Validate an ORCID iD and print its canonical form.
    Orcid { id: String },
}

struct Reporter {
    color: bool,
}

impl Reporter {
    fn new() -> Self {
        Reporter {
            color: std::env::var_os("KTC_NO_COLOR").is_none() && io::stderr().is_terminal(),
        }
    }

    fn diagnostic(&self, d: &Diagnostic) {
        let line = d.to_string();
        if self.color {
            let code = match d.severity {
                Severity::Error => "31",
                Severity::Warn => "33",
            };
            let sev = d.severity.to_string();
            eprintln!("\x1b[1;{code}m{sev}\x1b[0m{}", &line[sev.len()..]);
        } else {
            eprintln!("{line}");
        }
    }

    fn all(&self, diags: &[Diagnostic]) {
        for d in diags {
            self.diagnostic(d);
        }
    }

    fn error(&self, msg: impl std::fmt::Display) {
        if self.color {
            eprintln!("\x1b[1;31merror\x1b[0m {msg}");
        } else {
            eprintln!("error {msg}");
        }
    }
}

enum Failure {
    Validation,
    Io,
}

impl From<Failure> for ExitCode {
    fn from(f: Failure) -> Self {
        ExitCode::from(match f {
            Failure::Validation => EXIT_VALIDATION,
            Failure::Io => EXIT_IO,
        })
    }
}

fn load(path: &Path, r: &Reporter) -> Result<DocumentIR, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        r.error(format!("{}: {e}", path.display()));
        Failure::Io
    })?;
    match parse_document(&text) {
        Ok(parsed) => {
            r.all(&parsed.warnings);
            Ok(parsed.doc)
        }
        Err(e) => {
            r.all(&e.diagnostics());
            Err(Failure::Validation)
        }
    }
}

fn write_output(path: &Path, text: &str, r: &Reporter) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| {
        r.error(format!("{}: {e}", path.display()));
        Failure::Io
    })
}

fn run(cli: Cli, r: &Reporter) -> Result<(), Failure> {
    match cli.command {
        Command::Compile {
            doc,
            target,
            out,
            mode,
            link_packages,
        } => {
            let ir = load(&doc, r)?;
            let opts = CompileOptions {
                target: match target {
                    TargetArg::Latex => Target::Latex,
                    TargetArg::Svg => Target::Svg,
                    TargetArg::Both => Target::Both,
                },
                mode: mode.map(|m| match m {
                    ModeArg::Light => Mode::Light,
                    ModeArg::Dark => Mode::Dark,
                }),
                link_packages,
                layout: LayoutConfig::default(),
            };
            match compile(&ir, &opts, &out) {
                Ok(manifest) => {
                    let mut ir = ir;
                    if let Some(m) = opts.mode {
                        ir.mode = m;
                    }
                    r.all(&check(&ir));
                    for e in &manifest.entries {
                        println!("{}  {}", e.sha256, e.path);
                    }
                    Ok(())
                }
                Err(CompileError::ValidationFailed(d)) => {
                    r.all(&d);
                    Err(Failure::Validation)
                }
                Err(e @ CompileError::BadConfig(_)) => {
                    r.error(e);
                    Err(Failure::Validation)
                }
                Err(e @ CompileError::Io { .. }) => {
                    r.error(e);
                    Err(Failure::Io)
                }
            }
        }
        Command::Check { doc } => {
            let ir = load(&doc, r)?;
            let diags = check(&ir);
            r.all(&diags);
            if diags.iter().any(Diagnostic::is_error) {
                Err(Failure::Validation)
            } else {
                Ok(())
            }
        }
        Command::Palette { export, out } => {
            let registry = builtin_registry();
            let text = match export {
                ExportArg::Latex => emit_palette_definitions(&registry).map_err(|e| {
                    r.error(e);
                    Failure::Validation
                })?,
                ExportArg::Json => {
                    let mut s = serde_json::to_string_pretty(&registry.to_json()).expect("palette serializes");
                    s.push('\n');
                    s
                }
            };
            match out {
                Some(path) => write_output(&path, &text, r),
                None => io::stdout().write_all(text.as_bytes()).map_err(|_| Failure::Io),
            }
        }
        Command::Tree {
            doc,
            index,
            out,
            em_px,
            h_gap,
            v_gap,
        } => {
            let ir = load(&doc, r)?;
            let tree = match ir.items.get(index) {
                Some(Item::Tree(t)) => t,
                Some(other) => {
                    r.error(format!("item {index} is a {}, not a tree", other.kind()));
                    return Err(Failure::Validation);
                }
                None => {
                    r.error(format!("document has {} items; index {index} is out of range", ir.items.len()));
                    return Err(Failure::Validation);
                }
            };
            let defaults = LayoutConfig::default();
            let cfg = LayoutConfig {
                em_px: em_px.unwrap_or(defaults.em_px),
                h_gap: h_gap.unwrap_or(defaults.h_gap),
                v_gap: v_gap.unwrap_or(defaults.v_gap),
                ..defaults
            };
            match render_svg(tree, &ir.registry(), &cfg) {
                Ok(svg) => write_output(&out, &svg, r),
                Err(ktc::svgrender::SvgError::ValidationFailed(d)) => {
                    r.all(&d);
                    Err(Failure::Validation)
                }
                Err(e) => {
                    r.error(e);
                    Err(Failure::Validation)
                }
            }
        }
        Command::Orcid { id } => match parse_orcid(&id) {
            Ok(id) => {
                println!("{id}");
                Ok(())
            }
            Err(e) => {
                r.diagnostic(&Diagnostic::error("bad-orcid", "", e.to_string()));
                Err(Failure::Validation)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reporter = Reporter::new();
    match run(cli, &reporter) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.into(),
    }
}
