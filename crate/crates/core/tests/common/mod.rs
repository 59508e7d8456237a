//! Generators and brute-force oracles shared by the integration tests and
//! the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeSet;

use axplr::corpus::{Attribute, Document, Token};
use axplr::pattern::{MatchSpan, Pattern, Slot};
use axplr::plr::PlrModel;
use axplr::qbaf::{ArgId, Qbafc, StrengthMap};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
use rand::Rng;

pub const SYMBOLS: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tokens `a` and `e` also carry `TAG:v`, so multi-attribute slots can match.
pub fn token(symbol: &str) -> Token {
    let mut attrs = vec![Attribute::text(symbol).unwrap()];
    if symbol == "a" || symbol == "e" {
        attrs.push(Attribute::new("TAG", "v").unwrap());
    }
    Token::new(symbol, attrs).unwrap()
}

pub fn doc_from(symbols: &[usize]) -> Document {
    Document::new("d", symbols.iter().map(|&i| token(SYMBOLS[i])).collect(), None)
}

/// Every document of length at most `max_len` over the five symbols.
pub fn all_documents(max_len: usize) -> Vec<Document> {
    let mut out = vec![doc_from(&[])];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..SYMBOLS.len() {
                let mut v = w.clone();
                v.push(s);
                out.push(doc_from(&v));
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

pub fn random_doc(rng: &mut impl Rng, max_len: usize) -> Document {
    let n = rng.gen_range(0..=max_len);
    let v: Vec<usize> = (0..n).map(|_| rng.gen_range(0..SYMBOLS.len())).collect();
    doc_from(&v)
}

fn attribute_pool() -> Vec<Attribute> {
    let mut pool: Vec<Attribute> = SYMBOLS.iter().map(|s| Attribute::text(s).unwrap()).collect();
    pool.push(Attribute::new("TAG", "v").unwrap());
    pool
}

pub fn random_slot(rng: &mut impl Rng) -> Slot {
    let pool = attribute_pool();
    let k = if rng.gen_bool(0.2) { 2 } else { 1 };
    Slot::new(pool.choose_multiple(rng, k).cloned()).unwrap()
}

pub fn random_pattern(rng: &mut impl Rng) -> Pattern {
    let m = rng.gen_range(1..=3);
    let slots = (0..m).map(|_| random_slot(rng)).collect();
    Pattern::new(slots, rng.gen_range(0..=2)).unwrap()
}

/// A pattern at least as specific as `p`: adds an attribute, tightens the
/// gap, or adds a slot at either end.
pub fn specialize(rng: &mut impl Rng, p: &Pattern) -> Pattern {
    let mut slots: Vec<Slot> = p.slots().to_vec();
    let mut gap = p.gap_budget();
    match rng.gen_range(0..4) {
        0 => {
            let j = rng.gen_range(0..slots.len());
            let mut attrs: BTreeSet<Attribute> = slots[j].attributes().clone();
            attrs.insert(attribute_pool().choose(rng).unwrap().clone());
            slots[j] = Slot::new(attrs).unwrap();
        }
        1 => gap = gap.saturating_sub(1),
        2 => slots.insert(0, random_slot(rng)),
        _ => slots.push(random_slot(rng)),
    }
    Pattern::new(slots, gap).unwrap()
}

/// Leftmost-minimal spans by enumerating every increasing index tuple.
pub fn brute_force_spans(p: &Pattern, doc: &Document) -> Vec<MatchSpan> {
    fn extend(p: &Pattern, doc: &Document, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = acc.len();
        if j == p.slots().len() {
            out.push(acc.clone());
            return;
        }
        for i in 0..doc.len() {
            if let Some(&prev) = acc.last() {
                if i <= prev || i - prev - 1 > p.gap_budget() {
                    continue;
                }
            }
            if p.slots()[j].accepts(&doc.tokens[i]) {
                acc.push(i);
                extend(p, doc, acc, out);
                acc.pop();
            }
        }
    }
    let mut all = Vec::new();
    extend(p, doc, &mut Vec::new(), &mut all);
    all.sort();
    let mut out: Vec<MatchSpan> = Vec::new();
    for t in all {
        if out.last().map(|s| s.token_indices[0]) != Some(t[0]) {
            out.push(MatchSpan { token_indices: t });
        }
    }
    out
}

/// A model over random patterns with weights on a 1/8 grid, some of them 0.
pub fn random_model(rng: &mut impl Rng, max_patterns: usize) -> PlrModel {
    let n = rng.gen_range(1..=max_patterns);
    let mut patterns: Vec<Pattern> = Vec::new();
    while patterns.len() < n {
        let p = if !patterns.is_empty() && rng.gen_bool(0.5) {
            let base = patterns.choose(rng).unwrap().clone();
            specialize(rng, &base)
        } else {
            random_pattern(rng)
        };
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    }
    let w = |rng: &mut ChaCha8Rng| rng.gen_range(-16i32..=16) as f64 / 8.0;
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let weights = (0..n).map(|_| w(&mut r)).collect();
    PlrModel::new(patterns, weights, w(&mut r)).unwrap()
}

/// Fewest supporters of `target` keeping its strength positive, by trying
/// every subset.
pub fn exhaustive_min_k(target: ArgId, fw: &Qbafc, s: &StrengthMap) -> Option<usize> {
    let share = |b: ArgId| s[&b] / fw.out_degree(b) as f64;
    let base = fw.argument(target).unwrap().tau - fw.attackers(target).into_iter().map(share).sum::<f64>();
    let sup: Vec<f64> = fw.supporters(target).into_iter().map(share).collect();
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << sup.len()) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| b <= size) {
            continue;
        }
        let total: f64 = base + (0..sup.len()).filter(|i| mask >> i & 1 == 1).map(|i| sup[i]).sum::<f64>();
        if total > 0.0 {
            best = Some(size);
        }
    }
    best
}
