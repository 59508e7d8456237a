//! Small hand-built inputs with known answers.

use std::collections::BTreeMap;

use crate::corpus::{Attribute, Dataset, Document};
use crate::pattern::Pattern;
use crate::plr::PlrModel;
use crate::qbaf::{compute_strengths, ArgId, Argument, Qbafc, StrengthMap, Variant};

pub const RUNNING_SENTENCE: &str = "There is nothing better than hot sausages of this restaurant .";

/// Four patterns with weights -0.9, -0.4, 1.2, 0.5 and bias -0.1, plus a
/// review sentence matching all of them.
pub fn running_example() -> (PlrModel, Document) {
    let patterns = vec![
        Pattern::simple(&["TEXT:nothing", "SENTIMENT:pos"], 2).expect("valid pattern"),
        Pattern::simple(&["TEXT:nothing"], 2).expect("valid pattern"),
        Pattern::simple(&["SENTIMENT:pos"], 2).expect("valid pattern"),
        Pattern::simple(&["TEXT:hot", "TEXT:sausages"], 2).expect("valid pattern"),
    ];
    let model = PlrModel::new(patterns, vec![-0.9, -0.4, 1.2, 0.5], -0.1).expect("valid model");
    let mut doc = Document::from_words("running", RUNNING_SENTENCE, Some(1)).expect("valid words");
    doc.tag(3, Attribute::new("SENTIMENT", "pos").expect("valid attribute"))
        .expect("token exists");
    (model, doc)
}

/// Class 1 documents contain `spamword`, class 0 documents do not.
pub fn toy_separable() -> Dataset {
    let pos = [
        "buy spamword now",
        "spamword deals today",
        "cheap spamword offer",
        "get your spamword here",
        "spamword spamword",
        "limited spamword sale",
    ];
    let neg = [
        "meeting moved to friday",
        "lunch at noon",
        "the report is attached",
        "see you tomorrow",
        "notes from the call",
        "project update",
    ];
    let mut docs = Vec::new();
    for (i, t) in pos.iter().enumerate() {
        docs.push(Document::from_words(format!("p{i}"), t, Some(1)).expect("valid words"));
    }
    for (i, t) in neg.iter().enumerate() {
        docs.push(Document::from_words(format!("n{i}"), t, Some(0)).expect("valid words"));
    }
    Dataset::new(docs).expect("unique ids")
}

/// A twelve-argument framework whose strengths violate several group
/// properties before post-processing and GP10, GP11 after. Argument `a<i>`
/// has base score and class as listed; `delta` is class 1.
pub fn appendix_counterexample() -> (Qbafc, StrengthMap) {
    let spec: [(usize, f64, u8); 12] = [
        (1, 0.4, 0),
        (2, 0.4, 1),
        (3, 0.4, 0),
        (4, 0.8, 1),
        (5, 0.8, 1),
        (6, 0.2, 0),
        (7, 0.2, 1),
        (8, 0.3, 0),
        (9, 0.5, 1),
        (10, 0.4, 0),
        (11, 0.6, 0),
        (12, 0.4, 1),
    ];
    let mut args = BTreeMap::new();
    args.insert(ArgId::Default, Argument::new(0.1, 1));
    for (i, tau, class) in spec {
        args.insert(ArgId::Pattern(i), Argument::new(tau, class));
    }
    let a = ArgId::Pattern;
    let mut edges: Vec<(ArgId, ArgId)> = (1..=7).map(|i| (a(i), ArgId::Default)).collect();
    edges.extend([
        (a(8), a(1)),
        (a(8), a(2)),
        (a(9), a(8)),
        (a(10), a(4)),
        (a(11), a(5)),
        (a(11), a(6)),
        (a(12), a(7)),
    ]);
    let fw = Qbafc::from_parts(Variant::TopDown, args, edges).expect("valid framework");
    let s = compute_strengths(&fw).expect("acyclic");
    (fw, s)
}
