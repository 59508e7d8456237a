//! Generate the synthetic review corpus and its lexicons.
//!
//! `cargo run --example make_synthetic_corpus -- <dir> [docs] [seed]`

use axplr::corpus::save_corpus;
use axplr::synthetic::synthetic_corpus;

pub fn run_example() -> axplr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(400);
    let seed = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(13);
    let syn = synthetic_corpus(n, seed)?;
    for d in syn.dataset.documents.iter().take(4) {
        println!("{} [{}] {}", d.id, d.label.unwrap_or(0), d.text());
    }
    if let Some(dir) = args.first() {
        let dir = std::path::Path::new(dir);
        std::fs::create_dir_all(dir).map_err(|e| axplr::Error::Io { path: dir.to_path_buf(), source: e })?;
        save_corpus(&syn.dataset, dir.join("corpus.jsonl"))?;
        for lex in &syn.lexicons {
            let name = format!("{}.lex", lex.attribute().value());
            std::fs::write(dir.join(&name), lex.to_file_string())
                .map_err(|e| axplr::Error::Io { path: dir.join(&name), source: e })?;
        }
        println!("wrote {n} documents to {}", dir.display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
