//! ORCID iDs and the `\orcid` / `\orcidicon` author commands.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const ORCID_URL_PREFIX: &str = "https://orcid.org/";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrcidError {
    #[error("`{0}` is not an ORCID iD (expected 0000-0000-0000-000X or 16 unhyphenated characters)")]
    BadFormat(String),
    #[error("checksum mismatch in `{id}`: check character should be `{expected}`")]
    BadChecksum { id: String, expected: char },
    #[error("author name must not be empty")]
    EmptyName,
}

/// A checksum-verified iD in canonical `dddd-dddd-dddd-dddC` form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrcidId(String);

impl OrcidId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for OrcidId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for OrcidId {
    type Err = OrcidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_orcid(s)
    }
}

/// ISO 7064 MOD 11-2 check character over the 15 base digits.
pub fn check_character(base: &[u8; 15]) -> char {
    let total = base
        .iter()
        .fold(0u32, |acc, d| ((acc + u32::from(d - b'0')) * 2) % 11);
    match (12 - total) % 11 {
        10 => 'X',
        r => char::from(b'0' + r as u8),
    }
}

/// Accepts the hyphenated form or the bare 16 characters; a lowercase `x`
/// check character is uppercased. Partial hyphenation is rejected.
pub fn parse_orcid(raw: &str) -> Result<OrcidId, OrcidError> {
    let bad = || OrcidError::BadFormat(raw.to_string());
    let bytes = raw.as_bytes();
    let compact: Vec<u8> = match bytes.len() {
        16 => bytes.to_vec(),
        19 => {
            if [4, 9, 14].iter().any(|&i| bytes[i] != b'-') {
                return Err(bad());
            }
            bytes.iter().copied().filter(|&b| b != b'-').collect()
        }
        _ => return Err(bad()),
    };
    if compact.len() != 16 {
        return Err(bad());
    }
    let (base, check) = compact.split_at(15);
    if !base.iter().all(u8::is_ascii_digit) {
        return Err(bad());
    }
    let check = match check[0] {
        b'x' | b'X' => 'X',
        d if d.is_ascii_digit() => char::from(d),
        _ => return Err(bad()),
    };
    let base: &[u8; 15] = base.try_into().expect("split at 15");
    let expected = check_character(base);
    let digits = std::str::from_utf8(base).expect("ascii digits");
    let canonical = format!(
        "{}-{}-{}-{}{}",
        &digits[0..4],
        &digits[4..8],
        &digits[8..12],
        &digits[12..15],
        check
    );
    if expected != check {
        return Err(OrcidError::BadChecksum { id: canonical, expected });
    }
    Ok(OrcidId(canonical))
}

pub fn orcid_url(id: &OrcidId) -> String {
    format!("{ORCID_URL_PREFIX}{id}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthorMeta {
    display_name: String,
    orcid: Option<OrcidId>,
}

impl AuthorMeta {
    pub fn new(display_name: impl Into<String>, orcid: Option<OrcidId>) -> Result<Self, OrcidError> {
        let display_name = display_name.into();
        if display_name.trim().is_empty() {
            return Err(OrcidError::EmptyName);
        }
        Ok(AuthorMeta { display_name, orcid })
    }

    pub fn display_name(&self) -> &str {
        &self.display_name
    }

    pub fn orcid(&self) -> Option<&OrcidId> {
        self.orcid.as_ref()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrcidStyle {
    /// Compact superscript icon.
    #[default]
    Icon,
    /// Full linked identifier.
    Full,
}

impl OrcidStyle {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrcidStyle::Icon => "icon",
            OrcidStyle::Full => "full",
        }
    }
}

impl FromStr for OrcidStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "icon" => Ok(OrcidStyle::Icon),
            "full" => Ok(OrcidStyle::Full),
            _ => Err(format!("unknown orcid style `{s}` (expected icon or full)")),
        }
    }
}

pub fn render_orcid_latex(author: &AuthorMeta, style: OrcidStyle) -> String {
    match (&author.orcid, style) {
        (None, _) => author.display_name.clone(),
        (Some(id), OrcidStyle::Icon) => format!("{}\\orcidicon{{{id}}}", author.display_name),
        (Some(id), OrcidStyle::Full) => format!("{}\\orcid{{{id}}}", author.display_name),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_ids_parse() {
        for raw in ["0000-0002-8126-3528", "0000-0002-3576-0275"] {
            assert_eq!(parse_orcid(raw).unwrap().as_str(), raw);
        }
    }

    #[test]
    fn x_check_character() {
        let id = parse_orcid("0000-0002-1694-233x").unwrap();
        assert_eq!(id.as_str(), "0000-0002-1694-233X");
        assert_eq!(check_character(b"000000021694233"), 'X');
    }

    #[test]
    fn formats() {
        assert!(matches!(parse_orcid("0000-0002-8126-352"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid("0000-00028126-3528"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid("0000-0002-8126-35-28"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid("000-00002-8126-3528"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid("0000-000X-8126-3528"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid(" 0000-0002-8126-3528"), Err(OrcidError::BadFormat(_))));
        assert!(matches!(parse_orcid("0000-0002-8126-352Y"), Err(OrcidError::BadFormat(_))));
        assert_eq!(parse_orcid("0000000281263528").unwrap().as_str(), "0000-0002-8126-3528");
    }

    #[test]
    fn checksum_reports_expected_character() {
        assert_eq!(
            parse_orcid("0000-0002-8126-3527"),
            Err(OrcidError::BadChecksum {
                id: "0000-0002-8126-3527".into(),
                expected: '8'
            })
        );
    }

    #[test]
    fn urls() {
        let id = parse_orcid("0000000235760275").unwrap();
        assert_eq!(orcid_url(&id), "https://orcid.org/0000-0002-3576-0275");
        let id = parse_orcid("0000-0002-8126-3528").unwrap();
        assert_eq!(orcid_url(&id), "https://orcid.org/0000-0002-8126-3528");
    }

    #[test]
    fn latex_rendering() {
        let bm = AuthorMeta::new("Bhaskar Mangal", Some(parse_orcid("0000-0002-8126-3528").unwrap())).unwrap();
        assert_eq!(
            render_orcid_latex(&bm, OrcidStyle::Icon),
            "Bhaskar Mangal\\orcidicon{0000-0002-8126-3528}"
        );
        let ab = AuthorMeta::new("A. Bhatia", Some(parse_orcid("0000-0002-3576-0275").unwrap())).unwrap();
        assert_eq!(render_orcid_latex(&ab, OrcidStyle::Full), "A. Bhatia\\orcid{0000-0002-3576-0275}");
        let plain = AuthorMeta::new("name", None).unwrap();
        assert_eq!(render_orcid_latex(&plain, OrcidStyle::Icon), "name");
        assert_eq!(AuthorMeta::new(" ", None), Err(OrcidError::EmptyName));
    }
}
