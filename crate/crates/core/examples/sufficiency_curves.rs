//! Sufficiency curves over a trained synthetic model, printed as CSV.

use axplr::analysis::{curve_to_csv, sufficiency_curve, FlipFilter, FrameworkPair, TargetKind};
use axplr::miner::{mine_patterns, MinerConfig};
use axplr::plr::{train, TrainConfig};
use axplr::qbaf::{build_qbafc, compute_strengths, postprocess, Variant};
use axplr::synthetic::synthetic_corpus;

pub fn run_example() -> axplr::Result<()> {
    let syn = synthetic_corpus(120, 11)?;
    let data = syn.dataset.annotate(&syn.lexicons);
    let patterns = mine_patterns(&data, &MinerConfig { num_patterns: 20, ..MinerConfig::default() })?;
    let model = train(&data, &patterns, &TrainConfig::default())?.model;
    let mut pairs = Vec::new();
    for doc in &data.documents {
        let pre = build_qbafc(&model, doc, Variant::TopDown);
        let s = compute_strengths(&pre)?;
        let (post, post_strengths) = postprocess(&pre, &s)?;
        pairs.push(FrameworkPair { pre, post, post_strengths });
    }
    for target in TargetKind::ALL {
        println!("# top_down {} {}", target.name(), FlipFilter::All.name());
        print!("{}", curve_to_csv(&sufficiency_curve(&pairs, target, FlipFilter::All)));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
