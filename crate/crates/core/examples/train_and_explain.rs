//! Mine patterns from a synthetic corpus, train, and explain one document
//! with FLX, shallow and deep explanations.

use axplr::explain::{explain_document, render, Format, Method};
use axplr::miner::{mine_patterns, MinerConfig};
use axplr::plr::{train, TrainConfig};
use axplr::qbaf::Variant;
use axplr::synthetic::synthetic_corpus;

pub fn run_example() -> axplr::Result<()> {
    let syn = synthetic_corpus(200, 7)?;
    let data = syn.dataset.annotate(&syn.lexicons);
    let patterns = mine_patterns(&data, &MinerConfig { num_patterns: 25, ..MinerConfig::default() })?;
    let trained = train(&data, &patterns, &TrainConfig::default())?;
    let model = trained.model;
    let correct = data
        .documents
        .iter()
        .filter(|d| Some(model.predict(d).class) == d.label)
        .count();
    println!("{} patterns, final loss {:.4}, training accuracy {:.3}", model.len(), trained.final_loss, correct as f64 / data.len() as f64);

    let doc = &data.documents[3];
    for method in [Method::Flx, Method::Shallow, Method::Deep] {
        let e = explain_document(&model, doc, method, Variant::BottomUp, 3);
        println!("\n--- {method:?} ---");
        print!("{}", String::from_utf8_lossy(&render(&e, Format::Text)));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
