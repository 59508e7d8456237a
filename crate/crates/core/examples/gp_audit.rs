//! Group property audit: the summary table over random frameworks, the
//! worked counterexample, and a searched witness for GP10.

use axplr::fixtures::appendix_counterexample;
use axplr::gp::{check_all, counterexample_search, gp_summary, RandomFrameworkSpec, Stage, Verdict};
use axplr::qbaf::postprocess;

pub fn run_example() -> axplr::Result<()> {
    let spec = RandomFrameworkSpec::default();
    let summary = gp_summary(&spec, 1000)?;
    print!("{}", summary.to_table());

    let (fw, s) = appendix_counterexample();
    let (post, s2) = postprocess(&fw, &s)?;
    for (name, f, st) in [("before", &fw, &s), ("after", &post, &s2)] {
        let broken: Vec<String> = check_all(f, st)
            .into_iter()
            .filter(|r| r.verdict() == Verdict::Violated)
            .map(|r| {
                let w = &r.violations[0];
                match &w.beta {
                    Some(b) => format!("GP{} at ({}, {})", r.property, w.alpha.id, b.id),
                    None => format!("GP{} at {}", r.property, w.alpha.id),
                }
            })
            .collect();
        println!("\ncounterexample {name} post-processing violates: {}", broken.join(", "));
    }

    if let Some(c) = counterexample_search(10, Stage::Post, &spec, 5000)? {
        println!("\nGP10 witness at trial {} on {} arguments", c.trial, c.framework.len());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
