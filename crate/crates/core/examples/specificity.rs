//! Match spans and the more-specific-than relation between patterns.

use axplr::corpus::Document;
use axplr::pattern::{find_spans, more_specific_or_equal, strictly_more_specific, Pattern};

pub fn run_example() -> axplr::Result<()> {
    let doc = Document::from_words("d", "the soup was not very good at all", None)?;
    let pats = [
        Pattern::simple(&["TEXT:not"], 1)?,
        Pattern::simple(&["TEXT:not", "TEXT:good"], 1)?,
        Pattern::simple(&["TEXT:not", "TEXT:good"], 0)?,
        Pattern::simple(&["TEXT:not", "TEXT:very", "TEXT:good"], 0)?,
    ];
    for p in &pats {
        let spans: Vec<String> = find_spans(p, &doc).iter().map(|s| format!("\"{}\"", s.text(&doc))).collect();
        println!("{:<45} spans [{}]", p.encode(), spans.join(", "));
    }
    println!();
    for (i, a) in pats.iter().enumerate() {
        for (j, b) in pats.iter().enumerate() {
            if i != j && more_specific_or_equal(a, b) {
                let strict = if strictly_more_specific(a, b) { "strictly " } else { "" };
                println!("p{i} is {strict}more specific than p{j}");
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
