//! Semantic color model: themes, roles, light/dark modes and the `kt`
//! color naming convention.
//!
//! A theme maps each [`Role`] to a concrete [`ColorValue`] once per
//! [`Mode`]. Light sets carry the four box roles; dark sets add a `text`
//! role because dark backgrounds need an explicit foreground. Every color is
//! addressed in LaTeX as `kt<theme>-<role>` with a `-dark` suffix in dark
//! mode.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PaletteError {
    #[error("unknown theme `{0}`")]
    UnknownTheme(String),
    #[error("role `{role}` is not available for theme `{theme}` in {mode} mode")]
    RoleUnavailable { theme: String, role: Role, mode: Mode },
    #[error("`{0}` is not a kt color name")]
    BadColorName(String),
    #[error("invalid color value `{0}`: expected 6 hex digits")]
    BadColorValue(String),
    #[error("palette failed validation ({} diagnostics)", .0.len())]
    ValidationFailed(Vec<Diagnostic>),
}

/// An sRGB color. Its canonical text form is six uppercase hex digits with
/// no leading `#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColorValue {
    pub red: u8,
    pub green: u8,
    pub blue: u8,
}

impl ColorValue {
    pub const fn new(red: u8, green: u8, blue: u8) -> Self {
        ColorValue { red, green, blue }
    }

    const fn from_u32(rgb: u32) -> Self {
        ColorValue::new((rgb >> 16) as u8, (rgb >> 8) as u8, rgb as u8)
    }

    /// `#RRGGBB`, as used in SVG attributes.
    pub fn css(&self) -> String {
        format!("#{self}")
    }

    /// WCAG 2.x relative luminance in [0, 1].
    pub fn relative_luminance(&self) -> f64 {
        fn linear(channel: u8) -> f64 {
            let c = f64::from(channel) / 255.0;
            if c <= 0.03928 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        }
        0.2126 * linear(self.red) + 0.7152 * linear(self.green) + 0.0722 * linear(self.blue)
    }
}

impl fmt::Display for ColorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02X}{:02X}{:02X}", self.red, self.green, self.blue)
    }
}

impl FromStr for ColorValue {
    type Err = PaletteError;

    /// Accepts `FFEBEE`, `ffebee` or `#FFEBEE`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix('#').unwrap_or(s);
        if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(PaletteError::BadColorValue(s.to_string()));
        }
        let rgb = u32::from_str_radix(digits, 16).map_err(|_| PaletteError::BadColorValue(s.to_string()))?;
        Ok(ColorValue::from_u32(rgb))
    }
}

/// Declaration order is the canonical role order used for emission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Bg,
    Title,
    Border,
    Titlebox,
    Text,
}

impl Role {
    pub const ALL: [Role; 5] = [Role::Bg, Role::Title, Role::Border, Role::Titlebox, Role::Text];

    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Bg => "bg",
            Role::Title => "title",
            Role::Border => "border",
            Role::Titlebox => "titlebox",
            Role::Text => "text",
        }
    }

    /// Roles a complete set must define in the given mode.
    pub fn required(mode: Mode) -> &'static [Role] {
        match mode {
            Mode::Light => &Role::ALL[..4],
            Mode::Dark => &Role::ALL,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    #[default]
    Light,
    Dark,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Light, Mode::Dark];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Light => "light",
            Mode::Dark => "dark",
        }
    }

    /// Suffix appended to color names and theme keys.
    pub fn suffix(&self) -> &'static str {
        match self {
            Mode::Light => "",
            Mode::Dark => "-dark",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "light" => Ok(Mode::Light),
            "dark" => Ok(Mode::Dark),
            _ => Err(format!("unknown mode `{s}` (expected light or dark)")),
        }
    }
}

pub type RoleSet = BTreeMap<Role, ColorValue>;

#[derive(Clone, Debug, PartialEq)]
pub struct Theme {
    pub name: String,
    pub light: Option<RoleSet>,
    pub dark: Option<RoleSet>,
}

impl Theme {
    pub fn new(name: impl Into<String>) -> Self {
        Theme {
            name: name.into(),
            light: None,
            dark: None,
        }
    }

    pub fn colors(&self, mode: Mode) -> Option<&RoleSet> {
        match mode {
            Mode::Light => self.light.as_ref(),
            Mode::Dark => self.dark.as_ref(),
        }
    }

    fn colors_mut(&mut self, mode: Mode) -> &mut Option<RoleSet> {
        match mode {
            Mode::Light => &mut self.light,
            Mode::Dark => &mut self.dark,
        }
    }
}

/// Themes in registration order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PaletteRegistry {
    themes: IndexMap<String, Theme>,
}

impl PaletteRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a theme, replacing (in place) any theme of the same name.
    pub fn insert(&mut self, theme: Theme) {
        self.themes.insert(theme.name.clone(), theme);
    }

    pub fn get(&self, name: &str) -> Option<&Theme> {
        self.themes.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.themes.contains_key(name)
    }

    pub fn themes(&self) -> impl Iterator<Item = &Theme> {
        self.themes.values()
    }

    pub fn len(&self) -> usize {
        self.themes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.themes.is_empty()
    }

    pub fn resolve(&self, theme: &str, role: Role, mode: Mode) -> Result<ColorValue, PaletteError> {
        let t = self
            .get(theme)
            .ok_or_else(|| PaletteError::UnknownTheme(theme.to_string()))?;
        t.colors(mode)
            .and_then(|set| set.get(&role))
            .copied()
            .ok_or_else(|| PaletteError::RoleUnavailable {
                theme: theme.to_string(),
                role,
                mode,
            })
    }

    /// Resolves a full color name such as `ktorange-bg-dark`.
    pub fn resolve_name(&self, name: &str) -> Result<ColorValue, PaletteError> {
        let (theme, role, mode) = parse_color_name(name)?;
        self.resolve(&theme, role, mode)
    }

    /// Role-level overlay: colors in `patch` replace or extend ours, new
    /// themes are appended after the existing ones.
    pub fn merge(&mut self, patch: &PaletteRegistry) {
        for theme in patch.themes() {
            let target = self
                .themes
                .entry(theme.name.clone())
                .or_insert_with(|| Theme::new(theme.name.clone()));
            for mode in Mode::ALL {
                if let Some(set) = theme.colors(mode) {
                    target
                        .colors_mut(mode)
                        .get_or_insert_with(RoleSet::new)
                        .extend(set.iter().map(|(r, c)| (*r, *c)));
                }
            }
        }
    }

    /// JSON export: `{"<theme>": {"light": {"bg": "FFEBEE", ...}, "dark": {...}}}`.
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        for theme in self.themes() {
            let mut modes = Map::new();
            for mode in Mode::ALL {
                if let Some(set) = theme.colors(mode) {
                    let roles: Map<String, Value> = set
                        .iter()
                        .map(|(r, c)| (r.as_str().to_string(), Value::String(c.to_string())))
                        .collect();
                    modes.insert(mode.as_str().to_string(), Value::Object(roles));
                }
            }
            out.insert(theme.name.clone(), Value::Object(modes));
        }
        Value::Object(out)
    }

    /// Reads the export format back. Structural problems are reported as
    /// diagnostics with paths relative to the object; unknown mode keys are
    /// warnings. Completeness is *not* checked here, see
    /// [`validate_registry`].
    pub fn from_json(value: &Value) -> (PaletteRegistry, Vec<Diagnostic>) {
        let mut reg = PaletteRegistry::new();
        let mut diags = Vec::new();
        let Some(obj) = value.as_object() else {
            diags.push(Diagnostic::error("type-mismatch", "", "palette must be an object keyed by theme name"));
            return (reg, diags);
        };
        for (name, modes) in obj {
            let mut theme = Theme::new(name.clone());
            let Some(modes) = modes.as_object() else {
                diags.push(Diagnostic::error("type-mismatch", name.clone(), "theme must be an object"));
                continue;
            };
            for (key, roles) in modes {
                let path = format!("{name}.{key}");
                let mode = match key.parse::<Mode>() {
                    Ok(m) => m,
                    Err(_) => {
                        diags.push(Diagnostic::warn("unknown-field", path, format!("unknown field `{key}`")));
                        continue;
                    }
                };
                let Some(roles) = roles.as_object() else {
                    diags.push(Diagnostic::error("type-mismatch", path, "role set must be an object"));
                    continue;
                };
                let mut set = RoleSet::new();
                for (role_key, color) in roles {
                    let rpath = format!("{path}.{role_key}");
                    let role = match role_key.parse::<Role>() {
                        Ok(r) => r,
                        Err(e) => {
                            diags.push(Diagnostic::error("unknown-role", rpath, e));
                            continue;
                        }
                    };
                    match color.as_str().map(str::parse::<ColorValue>) {
                        Some(Ok(c)) => {
                            set.insert(role, c);
                        }
                        Some(Err(e)) => diags.push(Diagnostic::error("bad-color", rpath, e.to_string())),
                        None => diags.push(Diagnostic::error("type-mismatch", rpath, "color must be a hex string")),
                    }
                }
                *theme.colors_mut(mode) = Some(set);
            }
            reg.insert(theme);
        }
        (reg, diags)
    }
}

/// `kt<theme>-<role>` in light mode, `kt<theme>-<role>-dark` in dark mode.
pub fn color_name(theme: &str, role: Role, mode: Mode) -> String {
    format!("kt{theme}-{role}{}", mode.suffix())
}

/// Inverse of [`color_name`].
pub fn parse_color_name(name: &str) -> Result<(String, Role, Mode), PaletteError> {
    let bad = || PaletteError::BadColorName(name.to_string());
    let rest = name.strip_prefix("kt").ok_or_else(bad)?;
    let mut parts = rest.split('-');
    let theme = parts.next().filter(|t| is_theme_name(t)).ok_or_else(bad)?;
    let role = parts.next().and_then(|r| r.parse::<Role>().ok()).ok_or_else(bad)?;
    let mode = match parts.next() {
        None => Mode::Light,
        Some("dark") => Mode::Dark,
        Some(_) => return Err(bad()),
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((theme.to_string(), role, mode))
}

pub fn is_theme_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase())
}

/// WCAG 2.x contrast ratio, symmetric, in [1, 21].
pub fn contrast_ratio(a: ColorValue, b: ColorValue) -> f64 {
    let (la, lb) = (a.relative_luminance(), b.relative_luminance());
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    (hi + 0.05) / (lo + 0.05)
}

/// Minimum title (and dark-mode text) contrast against the theme background.
pub fn contrast_floor(theme: &str) -> f64 {
    if theme == "white" {
        3.0
    } else {
        4.5
    }
}

pub fn validate_registry(registry: &PaletteRegistry) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for theme in registry.themes() {
        let name = &theme.name;
        if !is_theme_name(name) {
            diags.push(Diagnostic::error(
                "bad-theme-name",
                name.clone(),
                format!("theme name `{name}` must match [a-z]+"),
            ));
        }
        if theme.light.is_none() && theme.dark.is_none() {
            diags.push(Diagnostic::error("empty-theme", name.clone(), "theme defines no colors"));
            continue;
        }
        for mode in Mode::ALL {
            let Some(set) = theme.colors(mode) else { continue };
            let required = Role::required(mode);
            for role in required {
                if !set.contains_key(role) {
                    diags.push(Diagnostic::error(
                        "missing-role",
                        format!("{name}.{mode}.{role}"),
                        format!("theme `{name}` {mode} set lacks role `{role}`"),
                    ));
                }
            }
            for role in set.keys().filter(|r| !required.contains(r)) {
                diags.push(Diagnostic::error(
                    "role-not-allowed",
                    format!("{name}.{mode}.{role}"),
                    format!("role `{role}` is only defined in dark mode"),
                ));
            }
            let Some(bg) = set.get(&Role::Bg) else { continue };
            let floor = contrast_floor(name);
            let fg_roles: &[Role] = match mode {
                Mode::Light => &[Role::Title],
                Mode::Dark => &[Role::Title, Role::Text],
            };
            for role in fg_roles {
                if let Some(fg) = set.get(role) {
                    let ratio = contrast_ratio(*fg, *bg);
                    if ratio < floor {
                        diags.push(Diagnostic::error(
                            "low-contrast",
                            format!("{name}.{mode}.{role}"),
                            format!(
                                "contrast of {} on {} is {ratio:.2}, below {floor}",
                                color_name(name, *role, mode),
                                color_name(name, Role::Bg, mode)
                            ),
                        ));
                    }
                }
            }
        }
    }
    diags
}

/// One `\definecolor{<name>}{HTML}{<hex>}` line per color, in theme
/// registration order, light before dark, then role order.
pub fn emit_palette_definitions(registry: &PaletteRegistry) -> Result<String, PaletteError> {
    let diags = validate_registry(registry);
    if has_errors(&diags) {
        return Err(PaletteError::ValidationFailed(diags));
    }
    let mut out = String::new();
    for theme in registry.themes() {
        for mode in Mode::ALL {
            if let Some(set) = theme.colors(mode) {
                for (role, color) in set {
                    out.push_str(&definecolor(&theme.name, *role, mode, *color));
                    out.push('\n');
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn definecolor(theme: &str, role: Role, mode: Mode, color: ColorValue) -> String {
    format!("\\definecolor{{{}}}{{HTML}}{{{color}}}", color_name(theme, role, mode))
}

// bg, title, border, titlebox
const LIGHT: &[(&str, [u32; 4])] = &[
    ("gray", [0xF5F5F5, 0x424242, 0xBDBDBD, 0xE0E0E0]),
    ("blue", [0xE3F2FD, 0x0D47A1, 0x90CAF9, 0xBBDEFB]),
    ("green", [0xE8F5E9, 0x1B5E20, 0xA5D6A7, 0xC8E6C9]),
    ("yellow", [0xFFFDE7, 0x6D5200, 0xFFE082, 0xFFF59D]),
    ("orange", [0xFFF3E0, 0xBF360C, 0xFFCC80, 0xFFE0B2]),
    ("red", [0xFFEBEE, 0xB71C1C, 0xEF9A9A, 0xFFCDD2]),
    ("cyan", [0xE0F7FA, 0x006064, 0x80DEEA, 0xB2EBF2]),
    ("purple", [0xF3E5F5, 0x4A148C, 0xCE93D8, 0xE1BEE7]),
    ("magenta", [0xFCE4EC, 0x880E4F, 0xF48FB1, 0xF8BBD0]),
    ("white", [0xFFFFFF, 0x616161, 0xE0E0E0, 0xF5F5F5]),
];

// bg, title, border, titlebox, text. Dark borders sit below the background
// in luminance, like their light counterparts.
const DARK: &[(&str, [u32; 5])] = &[
    ("gray", [0x2B2B2B, 0xE0E0E0, 0x1E1E1E, 0x3C3C3C, 0xEEEEEE]),
    ("blue", [0x1F2A36, 0x90CAF9, 0x16202A, 0x2C3E50, 0xE3F2FD]),
    ("green", [0x1E2B22, 0xA5D6A7, 0x151F18, 0x2E4034, 0xE8F5E9]),
    ("yellow", [0x2E2A1C, 0xFFE082, 0x221F14, 0x453F2A, 0xFFFDE7]),
    ("orange", [0x2F2419, 0xFFCC80, 0x231A12, 0x4A3726, 0xFFF3E0]),
    ("red", [0x2F1F22, 0xEF9A9A, 0x231618, 0x4A2C31, 0xFFEBEE]),
];

/// The shipped palette: six dual-mode themes plus light-only cyan, purple,
/// magenta and white.
pub fn builtin_registry() -> PaletteRegistry {
    let mut reg = PaletteRegistry::new();
    for (name, colors) in LIGHT {
        let mut theme = Theme::new(*name);
        theme.light = Some(Role::ALL[..4].iter().copied().zip(colors.map(ColorValue::from_u32)).collect());
        if let Some((_, dark)) = DARK.iter().find(|(n, _)| n == name) {
            theme.dark = Some(Role::ALL.iter().copied().zip(dark.map(ColorValue::from_u32)).collect());
        }
        reg.insert(theme);
    }
    reg
}
