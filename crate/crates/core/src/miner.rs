//! A deterministic greedy beam miner producing candidate patterns.
//!
//! Growth starts from single-attribute patterns over the most frequent
//! attributes and repeatedly specializes the best candidates, either by
//! appending a slot or by adding an attribute to an existing slot. Candidates
//! are scored by the information gain of their match / non-match split of the
//! labeled documents. Externally mined patterns can be used instead through
//! the pattern file format.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Attribute, Dataset, Document};
use crate::error::{Error, Result};
use crate::pattern::{matches, Pattern, Slot};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    /// Number of most frequent attributes patterns are built from.
    pub alphabet_size: usize,
    pub gap_budget: usize,
    pub max_slots: usize,
    /// Total attributes over all slots of a pattern.
    pub max_attrs_per_pattern: usize,
    pub num_patterns: usize,
    /// Candidates kept per growth level.
    pub beam_width: usize,
    /// Candidates must match at least this many documents.
    pub min_support: usize,
    /// Skip candidates matching exactly the same documents as a selected one.
    pub distinct_coverage: bool,
    /// When set, mine on a seeded random sample of this many documents.
    pub max_docs: Option<usize>,
    pub seed: u64,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            alphabet_size: 60,
            gap_budget: 2,
            max_slots: 2,
            max_attrs_per_pattern: 2,
            num_patterns: 40,
            beam_width: 40,
            min_support: 2,
            distinct_coverage: true,
            max_docs: None,
            seed: 13,
        }
    }
}

fn entropy(pos: usize, total: usize) -> f64 {
    if total == 0 || pos == 0 || pos == total {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Information gain of splitting `labels` by `mask` (true = matched).
pub fn information_gain(mask: &[bool], labels: &[u8]) -> f64 {
    let n = labels.len();
    let pos_total = labels.iter().filter(|&&l| l == 1).count();
    let (mut in_n, mut in_pos) = (0usize, 0usize);
    for (&m, &l) in mask.iter().zip(labels) {
        if m {
            in_n += 1;
            in_pos += usize::from(l == 1);
        }
    }
    let out_n = n - in_n;
    let out_pos = pos_total - in_pos;
    let nf = n as f64;
    entropy(pos_total, n)
        - (in_n as f64 / nf) * entropy(in_pos, in_n)
        - (out_n as f64 / nf) * entropy(out_pos, out_n)
}

#[derive(Debug, Clone)]
struct Scored {
    pattern: Pattern,
    encoding: String,
    gain: f64,
    mask: Vec<bool>,
}

fn rank(a: &Scored, b: &Scored) -> Ordering {
    b.gain
        .partial_cmp(&a.gain)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.encoding.cmp(&b.encoding))
}

/// The `size` attributes occurring in the most documents, ties by attribute order.
pub fn frequent_attributes(docs: &[&Document], size: usize) -> Vec<Attribute> {
    let mut freq: BTreeMap<&Attribute, usize> = BTreeMap::new();
    for doc in docs {
        let uniq: HashSet<&Attribute> = doc.tokens.iter().flat_map(|t| t.attributes()).collect();
        for a in uniq {
            *freq.entry(a).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&Attribute, usize)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().take(size).map(|(a, _)| a.clone()).collect()
}

fn children(p: &Pattern, alphabet: &[Attribute], config: &MinerConfig) -> Vec<Pattern> {
    let mut out = Vec::new();
    if p.attribute_count() >= config.max_attrs_per_pattern {
        return out;
    }
    if p.slots().len() < config.max_slots {
        for a in alphabet {
            let mut slots = p.slots().to_vec();
            slots.push(Slot::single(a.clone()));
            out.push(p.with_slots(slots));
        }
    }
    for j in 0..p.slots().len() {
        for a in alphabet {
            if p.slots()[j].attributes().contains(a) {
                continue;
            }
            let mut slots = p.slots().to_vec();
            slots[j] = slots[j].with(a.clone());
            out.push(p.with_slots(slots));
        }
    }
    out
}

/// Mines up to `config.num_patterns` distinct patterns from a labeled dataset.
pub fn mine_patterns(data: &Dataset, config: &MinerConfig) -> Result<Vec<Pattern>> {
    if config.num_patterns == 0 {
        return Ok(Vec::new());
    }
    let (pos, neg) = data.partition()?;
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClass);
    }
    if config.max_slots == 0 || config.max_attrs_per_pattern == 0 {
        return Err(Error::InvalidHyperparameter(
            "max_slots and max_attrs_per_pattern must be positive".into(),
        ));
    }

    let mut docs: Vec<&Document> = data.documents.iter().collect();
    if let Some(limit) = config.max_docs {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        docs.shuffle(&mut rng);
        docs.truncate(limit);
        docs.sort_by(|a, b| a.id.cmp(&b.id));
    }
    let labels: Vec<u8> = docs.iter().map(|d| d.label.unwrap_or(0)).collect();
    let alphabet = frequent_attributes(&docs, config.alphabet_size);

    let evaluate = |cands: Vec<Pattern>| -> Vec<Scored> {
        let mut scored: Vec<Scored> = cands
            .into_par_iter()
            .map(|pattern| {
                let mask: Vec<bool> = docs.iter().map(|d| matches(&pattern, d)).collect();
                let gain = information_gain(&mask, &labels);
                Scored {
                    encoding: pattern.encode(),
                    pattern,
                    gain,
                    mask,
                }
            })
            .filter(|s| s.mask.iter().filter(|&&m| m).count() >= config.min_support.max(1))
            .collect();
        scored.sort_by(rank);
        scored
    };

    let mut pool: HashMap<String, Scored> = HashMap::new();
    let seeds: Vec<Pattern> = alphabet
        .iter()
        .map(|a| {
            Pattern::new(vec![Slot::single(a.clone())], config.gap_budget)
                .expect("single-slot patterns are valid")
        })
        .collect();
    let mut beam = evaluate(seeds);
    loop {
        for s in &beam {
            pool.entry(s.encoding.clone()).or_insert_with(|| s.clone());
        }
        let mut next: Vec<Pattern> = Vec::new();
        let mut seen: HashSet<Pattern> = HashSet::new();
        for s in beam.iter().take(config.beam_width) {
            for child in children(&s.pattern, &alphabet, config) {
                if !pool.contains_key(&child.encode()) && seen.insert(child.clone()) {
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        beam = evaluate(next);
        beam.truncate(config.beam_width);
        if beam.is_empty() {
            break;
        }
    }

    let mut ranked: Vec<Scored> = pool.into_values().collect();
    ranked.sort_by(rank);
    let mut chosen = Vec::new();
    let mut coverages: HashSet<Vec<bool>> = HashSet::new();
    for s in ranked {
        if chosen.len() == config.num_patterns {
            break;
        }
        if config.distinct_coverage && !coverages.insert(s.mask.clone()) {
            continue;
        }
        chosen.push(s.pattern);
    }
    Ok(chosen)
}
