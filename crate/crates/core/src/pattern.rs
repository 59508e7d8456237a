//! Gap-tolerant sequential patterns over token attributes.
//!
//! A pattern is an ordered list of slots. A token fills a slot when it carries
//! every attribute of the slot. Consecutive filled slots may be separated by
//! at most `gap_budget` unmatched tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Attribute, Document, Token};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    attributes: BTreeSet<Attribute>,
}

impl Slot {
    pub fn new(attributes: impl IntoIterator<Item = Attribute>) -> Result<Self> {
        let attributes: BTreeSet<Attribute> = attributes.into_iter().collect();
        if attributes.is_empty() {
            return Err(Error::Format("a pattern slot needs at least one attribute".into()));
        }
        Ok(Slot { attributes })
    }

    pub fn single(attr: Attribute) -> Self {
        Slot {
            attributes: BTreeSet::from([attr]),
        }
    }

    pub fn attributes(&self) -> &BTreeSet<Attribute> {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn accepts(&self, token: &Token) -> bool {
        self.attributes.iter().all(|a| token.has(a))
    }

    /// True when every token accepted by `self` is accepted by `other`.
    pub fn refines(&self, other: &Slot) -> bool {
        other.attributes.is_subset(&self.attributes)
    }

    pub(crate) fn with(&self, attr: Attribute) -> Slot {
        let mut attributes = self.attributes.clone();
        attributes.insert(attr);
        Slot { attributes }
    }

    fn encode(&self) -> String {
        let parts: Vec<String> = self.attributes.iter().map(Attribute::to_string).collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap_or_default()
        } else {
            format!("({})", parts.join("&"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    slots: Vec<Slot>,
    gap_budget: usize,
}

impl Pattern {
    pub fn new(slots: Vec<Slot>, gap_budget: usize) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Format("a pattern needs at least one slot".into()));
        }
        Ok(Pattern { slots, gap_budget })
    }

    /// One single-attribute slot per entry, e.g. `&["TEXT:nothing", "SENTIMENT:pos"]`.
    pub fn simple(attrs: &[&str], gap_budget: usize) -> Result<Self> {
        let slots = attrs
            .iter()
            .map(|a| a.parse().map(Slot::single))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(slots, gap_budget)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn gap_budget(&self) -> usize {
        self.gap_budget
    }

    pub fn attribute_count(&self) -> usize {
        self.slots.iter().map(Slot::len).sum()
    }

    /// Canonical encoding, e.g. `[TEXT:nothing,SENTIMENT:pos]|g=2`. A slot
    /// with several attributes is written `(A&B)`.
    pub fn encode(&self) -> String {
        let slots: Vec<String> = self.slots.iter().map(Slot::encode).collect();
        format!("[{}]|g={}", slots.join(","), self.gap_budget)
    }

    pub(crate) fn with_slots(&self, slots: Vec<Slot>) -> Pattern {
        Pattern {
            slots,
            gap_budget: self.gap_budget,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Token positions of one occurrence, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatchSpan {
    pub token_indices: Vec<usize>,
}

impl MatchSpan {
    pub fn first(&self) -> usize {
        self.token_indices[0]
    }

    pub fn last(&self) -> usize {
        *self.token_indices.last().expect("spans are never empty")
    }

    pub fn covers(&self, index: usize) -> bool {
        self.token_indices.contains(&index)
    }

    /// Matched surfaces joined by spaces, with `...` marking skipped tokens.
    pub fn text(&self, doc: &Document) -> String {
        let mut out = String::new();
        let mut prev: Option<usize> = None;
        for &i in &self.token_indices {
            if let Some(p) = prev {
                out.push_str(if i == p + 1 { " " } else { " ... " });
            }
            if let Some(tok) = doc.tokens.get(i) {
                out.push_str(tok.surface());
            }
            prev = Some(i);
        }
        out
    }

    /// Checks slot acceptance and the gap bound directly.
    pub fn is_valid_for(&self, pattern: &Pattern, doc: &Document) -> bool {
        if self.token_indices.len() != pattern.slots.len() {
            return false;
        }
        for (slot, &i) in pattern.slots.iter().zip(&self.token_indices) {
            match doc.tokens.get(i) {
                Some(tok) if slot.accepts(tok) => {}
                _ => return false,
            }
        }
        self.token_indices
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] - 1 <= pattern.gap_budget)
    }
}

/// `feasible[j][i]`: the slots `j..` can be matched starting with token `i`
/// filling slot `j`.
fn feasibility(pattern: &Pattern, doc: &Document) -> Vec<Vec<bool>> {
    let n = doc.tokens.len();
    let m = pattern.slots.len();
    let g = pattern.gap_budget;
    let mut feasible = vec![vec![false; n]; m];
    for j in (0..m).rev() {
        for i in 0..n {
            if !pattern.slots[j].accepts(&doc.tokens[i]) {
                continue;
            }
            feasible[j][i] = if j + 1 == m {
                true
            } else {
                let hi = (i + g + 1).min(n.saturating_sub(1));
                (i + 1..=hi).any(|k| feasible[j + 1][k])
            };
        }
    }
    feasible
}

/// Every leftmost-minimal occurrence, one per feasible start position, in
/// order of first token.
pub fn find_spans(pattern: &Pattern, doc: &Document) -> Vec<MatchSpan> {
    let n = doc.tokens.len();
    if n == 0 {
        return Vec::new();
    }
    let feasible = feasibility(pattern, doc);
    let g = pattern.gap_budget;
    let mut spans = Vec::new();
    for start in 0..n {
        if !feasible[0][start] {
            continue;
        }
        let mut indices = vec![start];
        let mut cur = start;
        for row in feasible.iter().skip(1) {
            let hi = (cur + g + 1).min(n - 1);
            cur = (cur + 1..=hi)
                .find(|&k| row[k])
                .expect("feasibility guarantees a continuation");
            indices.push(cur);
        }
        spans.push(MatchSpan {
            token_indices: indices,
        });
    }
    spans
}

pub fn first_span(pattern: &Pattern, doc: &Document) -> Option<MatchSpan> {
    find_spans(pattern, doc).into_iter().next()
}

pub fn matches(pattern: &Pattern, doc: &Document) -> bool {
    if doc.tokens.is_empty() {
        return false;
    }
    feasibility(pattern, doc)[0].iter().any(|&f| f)
}

/// Sound syntactic test for "every text matched by `p1` is matched by `p2`".
///
/// Looks for an order-preserving injection of `p2`'s slots into `p1`'s slots
/// such that each image slot refines its source slot and, for consecutive
/// images `j < j'`, the widest gap `p1` allows between them,
/// `(j' - j - 1) + (j' - j) * g1`, stays within `p2`'s budget.
pub fn more_specific_or_equal(p1: &Pattern, p2: &Pattern) -> bool {
    let m1 = p1.slots.len();
    let m2 = p2.slots.len();
    if m2 > m1 {
        return false;
    }
    let g1 = p1.gap_budget;
    let g2 = p2.gap_budget;
    let gap_ok = |d: usize| (d - 1) + d * g1 <= g2;
    let mut reach: Vec<bool> = (0..m1).map(|j| p1.slots[j].refines(&p2.slots[0])).collect();
    for k in 1..m2 {
        let next: Vec<bool> = (0..m1)
            .map(|j| {
                p1.slots[j].refines(&p2.slots[k]) && (0..j).any(|jp| reach[jp] && gap_ok(j - jp))
            })
            .collect();
        reach = next;
    }
    reach.into_iter().any(|r| r)
}

pub fn strictly_more_specific(p1: &Pattern, p2: &Pattern) -> bool {
    more_specific_or_equal(p1, p2) && !more_specific_or_equal(p2, p1)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct PatternRecord {
    slots: Vec<Vec<Attribute>>,
    gaps: usize,
}

impl From<&Pattern> for PatternRecord {
    fn from(p: &Pattern) -> Self {
        PatternRecord {
            slots: p
                .slots
                .iter()
                .map(|s| s.attributes.iter().cloned().collect())
                .collect(),
            gaps: p.gap_budget,
        }
    }
}

impl TryFrom<PatternRecord> for Pattern {
    type Error = Error;

    fn try_from(r: PatternRecord) -> Result<Self> {
        let slots = r.slots.into_iter().map(Slot::new).collect::<Result<Vec<_>>>()?;
        Pattern::new(slots, r.gaps)
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PatternRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = PatternRecord::deserialize(d)?;
        Pattern::try_from(record).map_err(serde::de::Error::custom)
    }
}

pub fn patterns_to_json(patterns: &[Pattern]) -> String {
    serde_json::to_string_pretty(patterns).expect("patterns always serialize")
}

pub fn parse_patterns(text: &str) -> Result<Vec<Pattern>> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("pattern file: {e}")))
}

pub fn load_patterns(path: impl AsRef<Path>) -> Result<Vec<Pattern>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text)
}

pub fn save_patterns(patterns: &[Pattern], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, patterns_to_json(patterns) + "\n").map_err(|e| Error::io(path, e))
}
