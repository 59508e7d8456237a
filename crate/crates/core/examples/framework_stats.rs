//! Framework size statistics grouped by confusion cell, and test metrics.

use axplr::analysis::{aggregate_stats, framework_stats, metrics};
use axplr::miner::{mine_patterns, MinerConfig};
use axplr::plr::{train, TrainConfig};
use axplr::qbaf::{build_qbafc, compute_strengths, postprocess, Variant};
use axplr::synthetic::synthetic_corpus;

pub fn run_example() -> axplr::Result<()> {
    let syn = synthetic_corpus(300, 5)?;
    let data = syn.dataset.annotate(&syn.lexicons);
    let (train_docs, test_docs) = data.documents.split_at(200);
    let train_set = axplr::corpus::Dataset::new(train_docs.to_vec())?;
    let patterns = mine_patterns(&train_set, &MinerConfig::default())?;
    let model = train(&train_set, &patterns, &TrainConfig::default())?.model;

    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for doc in test_docs {
        let pre = build_qbafc(&model, doc, Variant::BottomUp);
        let (post, _) = postprocess(&pre, &compute_strengths(&pre)?)?;
        let truth = doc.label.unwrap_or(0);
        let pred = model.predict(doc).class;
        rows.push((framework_stats(&post), truth, pred));
        pairs.push((truth, pred));
    }
    print!("{}", aggregate_stats(&rows).to_table());
    let m = metrics(&pairs)?;
    println!("\naccuracy {:.3}  macro F1 {:.3}  micro F1 {:.3}", m.accuracy, m.macro_f1, m.micro_f1);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
