//! A seeded generator of small review-like corpora with sentiment lexicons.
//!
//! Each document mixes filler words with sentiment cues. A cue is either a
//! sentiment word or a negated word of the opposite polarity ("not bad").
//! Class 1 documents carry positive cues and class 0 negative ones; about one
//! document in seven also has a cue of the other polarity.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Attribute, Dataset, Document, Lexicon, Token};
use crate::error::Result;

const POSITIVE: &[&str] = &[
    "good", "great", "delicious", "friendly", "excellent", "tasty", "lovely", "amazing", "fresh", "perfect",
];
const NEGATIVE: &[&str] = &[
    "bad", "awful", "bland", "rude", "terrible", "stale", "dirty", "slow", "greasy", "disappointing",
];
const NEGATORS: &[&str] = &["not", "never"];
const FILLER: &[&str] = &[
    "the", "food", "was", "and", "service", "staff", "we", "had", "a", "table", "for", "two", "it", "felt", "very",
    "place", "menu", "dinner", "our", "waiter", "today", "really", "quite", "with", "of",
];

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    /// Documents with TEXT attributes only.
    pub dataset: Dataset,
    pub lexicons: Vec<Lexicon>,
}

pub fn sentiment_lexicons() -> Vec<Lexicon> {
    let lex = |value: &str, words: &[&str]| {
        Lexicon::new(Attribute::new("SENTIMENT", value).expect("valid attribute"), words.iter().copied())
            .expect("non-empty lexicon")
    };
    vec![lex("pos", POSITIVE), lex("neg", NEGATIVE)]
}

fn cue(rng: &mut ChaCha8Rng, positive: bool) -> Vec<&'static str> {
    let (same, other) = if positive { (POSITIVE, NEGATIVE) } else { (NEGATIVE, POSITIVE) };
    if rng.gen_bool(0.25) {
        vec![*NEGATORS.choose(rng).expect("non-empty"), *other.choose(rng).expect("non-empty")]
    } else {
        vec![*same.choose(rng).expect("non-empty")]
    }
}

/// `documents` labeled documents, alternating classes, reproducible from `seed`.
pub fn synthetic_corpus(documents: usize, seed: u64) -> Result<SyntheticCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(documents);
    for i in 0..documents {
        let label = (i % 2) as u8;
        let positive = label == 1;
        let mut cues = vec![cue(&mut rng, positive), cue(&mut rng, positive)];
        if rng.gen_bool(0.15) {
            cues.push(cue(&mut rng, !positive));
        }
        cues.shuffle(&mut rng);
        let mut words: Vec<&str> = Vec::new();
        for c in cues {
            for _ in 0..rng.gen_range(1..=3) {
                words.push(FILLER.choose(&mut rng).expect("non-empty"));
            }
            words.extend(c);
        }
        for _ in 0..rng.gen_range(0..=3) {
            words.push(FILLER.choose(&mut rng).expect("non-empty"));
        }
        words.push(".");
        let tokens = words.iter().map(|w| Token::plain(*w)).collect::<Result<Vec<_>>>()?;
        docs.push(Document::new(format!("syn{i:04}"), tokens, Some(label)));
    }
    Ok(SyntheticCorpus {
        dataset: Dataset::new(docs)?,
        lexicons: sentiment_lexicons(),
    })
}
