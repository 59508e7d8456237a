//! The four-pattern review model: prediction, FLX, both frameworks and the
//! post-processed strengths.
//!
//! `cargo run --example running_example -- <dir>` also writes the model and
//! the sentence to `<dir>`.

use axplr::corpus::{save_corpus, Dataset};
use axplr::fixtures::running_example;
use axplr::plr::{flx, save_model};
use axplr::qbaf::{build_qbafc, compute_strengths, framework_to_dot, postprocess, Variant};

pub fn run_example() -> axplr::Result<()> {
    let (model, doc) = running_example();
    let pred = model.predict(&doc);
    println!("\"{}\"", doc.text());
    println!("predicted class {} with probability {:.4}", pred.class, pred.probability);

    println!("\nFLX:");
    for it in flx(&model, &doc, 4) {
        println!("  {:+.1}  {}  \"{}\"", it.contribution, it.pattern, it.span_text);
    }

    for variant in Variant::ALL {
        let fw = build_qbafc(&model, &doc, variant);
        let s = compute_strengths(&fw)?;
        let (post, s2) = postprocess(&fw, &s)?;
        println!("\n{}:", variant.name());
        for id in fw.ids() {
            println!("  {id:<6} tau {:>4.1}  sigma {:>6.3}  post sigma {:>6.3}", fw.arguments()[&id].tau, s[&id], s2[&id]);
        }
        if variant == Variant::BottomUp {
            print!("\n{}", framework_to_dot(&post, Some(&s2)));
        }
    }

    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::Path::new(&dir);
        std::fs::create_dir_all(dir).map_err(|e| axplr::Error::Io { path: dir.to_path_buf(), source: e })?;
        save_model(&model, dir.join("model.json"))?;
        save_corpus(&Dataset::new(vec![doc])?, dir.join("sentence.jsonl"))?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
