//! Validates ORCID iDs and prints the LaTeX for each author.

use ktc::orcid::{orcid_url, parse_orcid, render_orcid_latex, AuthorMeta, OrcidStyle};

fn main() {
    let candidates = [
        ("Ada Example", "0000-0002-8126-3528"),
        ("Grace Example", "0000000235760275"),
        ("Typo Example", "0000-0002-8126-3527"),
    ];
    for (name, raw) in candidates {
        match parse_orcid(raw) {
            Ok(id) => {
                println!("% {name}: {}", orcid_url(&id));
                let author = AuthorMeta::new(name, Some(id)).unwrap();
                println!("{}", render_orcid_latex(&author, OrcidStyle::Icon));
                println!("{}", render_orcid_latex(&author, OrcidStyle::Full));
            }
            Err(e) => println!("% {name}: {e}"),
        }
    }
}
