//! Tokenized corpora, token attributes and word lexicons.
//!
//! Corpus files are JSON lines, one document per line:
//!
//! ```text
//! {"id": "d1", "label": 1, "tokens": [{"surface": "nothing"}, {"surface": "better", "attrs": ["SENTIMENT:pos"]}]}
//! ```
//!
//! Every token carries exactly one `TEXT` attribute holding its lowercased
//! surface form; it is added on construction and never needs to be listed in
//! the file. Lexicon files hold a `KIND:value` header line followed by one
//! word per line.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TEXT_KIND: &str = "TEXT";

/// A `KIND:value` pair attached to a token.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Attribute {
    kind: String,
    value: String,
}

impl Attribute {
    pub fn new(kind: impl Into<String>, value: impl Into<String>) -> Result<Self> {
        let kind = kind.into();
        let value = value.into();
        if kind.is_empty() || value.is_empty() {
            return Err(Error::Format(format!(
                "attribute `{kind}:{value}` needs a non-empty kind and value"
            )));
        }
        if kind.contains(':') {
            return Err(Error::Format(format!("attribute kind `{kind}` contains ':'")));
        }
        Ok(Attribute { kind, value })
    }

    pub fn text(word: &str) -> Result<Self> {
        Attribute::new(TEXT_KIND, word.to_lowercase())
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn is_text(&self) -> bool {
        self.kind == TEXT_KIND
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.value)
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((kind, value)) => Attribute::new(kind, value),
            None => Err(Error::Format(format!("attribute `{s}` is not of the form KIND:value"))),
        }
    }
}

impl TryFrom<String> for Attribute {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Attribute> for String {
    fn from(a: Attribute) -> String {
        a.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    surface: String,
    attributes: BTreeSet<Attribute>,
}

impl Token {
    /// Builds a token, adding its `TEXT` attribute. Extra `TEXT` attributes
    /// must agree with the lowercased surface.
    pub fn new(surface: impl Into<String>, attributes: impl IntoIterator<Item = Attribute>) -> Result<Self> {
        let surface = surface.into();
        let text = Attribute::text(&surface)?;
        let mut set = BTreeSet::new();
        for attr in attributes {
            if attr.is_text() && attr != text {
                return Err(Error::Format(format!(
                    "token `{surface}` carries conflicting attribute {attr}"
                )));
            }
            set.insert(attr);
        }
        set.insert(text);
        Ok(Token {
            surface,
            attributes: set,
        })
    }

    pub fn plain(surface: impl Into<String>) -> Result<Self> {
        Token::new(surface, std::iter::empty())
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn attributes(&self) -> &BTreeSet<Attribute> {
        &self.attributes
    }

    pub fn has(&self, attr: &Attribute) -> bool {
        self.attributes.contains(attr)
    }

    pub fn text_value(&self) -> &str {
        self.attributes
            .iter()
            .find(|a| a.is_text())
            .map(|a| a.value())
            .unwrap_or_default()
    }

    fn insert(&mut self, attr: Attribute) {
        self.attributes.insert(attr);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<Token>,
    pub label: Option<u8>,
}

impl Document {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>, label: Option<u8>) -> Self {
        Document {
            id: id.into(),
            tokens,
            label,
        }
    }

    /// Builds a document from whitespace-separated words with no extra
    /// attributes.
    pub fn from_words(id: impl Into<String>, text: &str, label: Option<u8>) -> Result<Self> {
        let tokens = text.split_whitespace().map(Token::plain).collect::<Result<Vec<_>>>()?;
        Ok(Document::new(id, tokens, label))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn text(&self) -> String {
        self.tokens
            .iter()
            .map(Token::surface)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Adds `attr` to the token at `index`. Used to build pre-annotated
    /// fixtures in code.
    pub fn tag(&mut self, index: usize, attr: Attribute) -> Result<()> {
        if attr.is_text() {
            return Err(Error::Format("TEXT attributes are derived from the surface".into()));
        }
        let len = self.tokens.len();
        let token = self
            .tokens
            .get_mut(index)
            .ok_or_else(|| Error::Format(format!("token index {index} out of range ({len})")))?;
        token.insert(attr);
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub documents: Vec<Document>,
}

impl Dataset {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Dataset { documents })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Labels of every document, failing on the first unlabeled one.
    pub fn labels(&self) -> Result<Vec<u8>> {
        self.documents
            .iter()
            .map(|d| d.label.ok_or_else(|| Error::Unlabeled(d.id.clone())))
            .collect()
    }

    /// Splits into (label 1, label 0) documents.
    pub fn partition(&self) -> Result<(Vec<&Document>, Vec<&Document>)> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for doc in &self.documents {
            match doc.label {
                Some(1) => pos.push(doc),
                Some(_) => neg.push(doc),
                None => return Err(Error::Unlabeled(doc.id.clone())),
            }
        }
        Ok((pos, neg))
    }

    pub fn annotate(&self, lexicons: &[Lexicon]) -> Dataset {
        Dataset {
            documents: self.documents.iter().map(|d| annotate(d, lexicons)).collect(),
        }
    }
}

/// A flat word list emitting one attribute for every member word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    attribute: Attribute,
    entries: HashSet<String>,
}

impl Lexicon {
    pub fn new(attribute: Attribute, words: impl IntoIterator<Item = impl AsRef<str>>) -> Result<Self> {
        if attribute.is_text() {
            return Err(Error::Format("a lexicon cannot emit TEXT attributes".into()));
        }
        let entries: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if entries.is_empty() {
            return Err(Error::Format(format!("lexicon {attribute} has no entries")));
        }
        Ok(Lexicon { attribute, entries })
    }

    pub fn attribute(&self) -> &Attribute {
        &self.attribute
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: "missing KIND:value header".into(),
            })?;
        let attribute: Attribute = header.parse().map_err(|e: Error| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
        Lexicon::new(attribute, lines)
    }

    /// Serialized form with entries sorted.
    pub fn to_file_string(&self) -> String {
        let mut words: Vec<&String> = self.entries.iter().collect();
        words.sort();
        let mut out = format!("{}\n", self.attribute);
        for w in words {
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Lexicon::parse(&text)
}

/// Returns a copy of `doc` where each token additionally carries the
/// attribute of every lexicon containing its lowercased surface.
pub fn annotate(doc: &Document, lexicons: &[Lexicon]) -> Document {
    let mut out = doc.clone();
    for token in &mut out.tokens {
        for lex in lexicons {
            if lex.contains(&token.surface) {
                token.insert(lex.attribute.clone());
            }
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenRecord {
    surface: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    attrs: Vec<Attribute>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRecord {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<i64>,
    tokens: Vec<TokenRecord>,
}

fn parse_line(line: &str, lineno: usize) -> Result<Document> {
    let record: DocumentRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: lineno,
        message: e.to_string(),
    })?;
    let label = match record.label {
        None => None,
        Some(l @ (0 | 1)) => Some(l as u8),
        Some(l) => return Err(Error::InvalidLabel { line: lineno, label: l }),
    };
    let tokens = record
        .tokens
        .into_iter()
        .map(|t| Token::new(t.surface, t.attrs))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
    Ok(Document::new(record.id, tokens, label))
}

/// Parses corpus text. Blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Dataset> {
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc = parse_line(line, i + 1)?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::DuplicateId(doc.id));
        }
        documents.push(doc);
    }
    Ok(Dataset { documents })
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text)
}

pub fn document_to_json_line(doc: &Document) -> String {
    let record = DocumentRecord {
        id: doc.id.clone(),
        label: doc.label.map(i64::from),
        tokens: doc
            .tokens
            .iter()
            .map(|t| TokenRecord {
                surface: t.surface.clone(),
                attrs: t.attributes.iter().filter(|a| !a.is_text()).cloned().collect(),
            })
            .collect(),
    };
    serde_json::to_string(&record).expect("document records always serialize")
}

pub fn corpus_to_string(data: &Dataset) -> String {
    let mut out = String::new();
    for doc in &data.documents {
        out.push_str(&document_to_json_line(doc));
        out.push('\n');
    }
    out
}

pub fn save_corpus(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(corpus_to_string(data).as_bytes())
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentiment() -> Lexicon {
        Lexicon::new("SENTIMENT:pos".parse().unwrap(), ["better", "delicious"]).unwrap()
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        assert_eq!(parse_corpus("").unwrap().len(), 0);
        assert_eq!(parse_corpus("\n  \n").unwrap().len(), 0);
    }

    #[test]
    fn parses_one_record() {
        let data = parse_corpus(
            r#"{"id":"a","label":1,"tokens":[{"surface":"nothing"},{"surface":"better"}]}"#,
        )
        .unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data.documents[0].len(), 2);
        assert_eq!(data.documents[0].label, Some(1));
    }

    #[test]
    fn rejects_label_two_with_line_number() {
        let text = "{\"id\":\"a\",\"label\":0,\"tokens\":[]}\n{\"id\":\"b\",\"label\":2,\"tokens\":[]}";
        match parse_corpus(text) {
            Err(Error::InvalidLabel { line, label }) => assert_eq!((line, label), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_ids_and_malformed_lines() {
        let dup = "{\"id\":\"a\",\"tokens\":[]}\n{\"id\":\"a\",\"tokens\":[]}";
        assert!(matches!(parse_corpus(dup), Err(Error::DuplicateId(id)) if id == "a"));
        let bad = "{\"id\":\"a\",\"tokens\":[]}\n{not json";
        assert!(matches!(parse_corpus(bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn annotate_adds_lexicon_attribute() {
        let doc = Document::from_words("d", "nothing better", None).unwrap();
        let out = annotate(&doc, &[sentiment()]);
        assert!(out.tokens[1].has(&"SENTIMENT:pos".parse().unwrap()));
        assert!(!out.tokens[0].has(&"SENTIMENT:pos".parse().unwrap()));
    }

    #[test]
    fn text_attribute_is_case_folded() {
        let tok = Token::plain("Nothing").unwrap();
        assert!(tok.has(&"TEXT:nothing".parse().unwrap()));
        assert_eq!(tok.attributes().iter().filter(|a| a.is_text()).count(), 1);
    }

    #[test]
    fn annotate_empty_document() {
        let doc = Document::new("e", vec![], Some(0));
        assert_eq!(annotate(&doc, &[sentiment()]), doc);
    }

    #[test]
    fn annotate_is_idempotent_and_keeps_existing() {
        let mut doc = Document::from_words("d", "Better days DELICIOUS", None).unwrap();
        doc.tag(1, "POS:NNS".parse().unwrap()).unwrap();
        let once = annotate(&doc, &[sentiment()]);
        assert_eq!(annotate(&once, &[sentiment()]), once);
        assert!(once.tokens[1].has(&"POS:NNS".parse().unwrap()));
        assert!(once.tokens[2].has(&"SENTIMENT:pos".parse().unwrap()));
    }

    #[test]
    fn conflicting_text_attribute_rejected() {
        assert!(Token::new("cat", ["TEXT:dog".parse().unwrap()]).is_err());
        assert!(Token::new("Cat", ["TEXT:cat".parse().unwrap()]).is_ok());
    }

    #[test]
    fn lexicon_file_roundtrip() {
        let lex = Lexicon::parse("SENTIMENT:neg\nBad\n\nawful\n").unwrap();
        assert!(lex.contains("BAD"));
        assert_eq!(lex.len(), 2);
        assert_eq!(Lexicon::parse(&lex.to_file_string()).unwrap(), lex);
        assert!(Lexicon::parse("SENTIMENT:neg\n").is_err());
        assert!(Lexicon::parse("").is_err());
    }

    #[test]
    fn save_and_reload_is_identity() {
        let mut doc = Document::from_words("x", "Hot sausages", Some(1)).unwrap();
        doc.tag(0, "SENTIMENT:pos".parse().unwrap()).unwrap();
        let data = Dataset::new(vec![doc, Document::new("y", vec![], None)]).unwrap();
        assert_eq!(parse_corpus(&corpus_to_string(&data)).unwrap(), data);
    }
}
