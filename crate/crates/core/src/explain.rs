//! Shallow and deep argumentative explanations, signed scores, token
//! highlights and rendering as text, JSON or HTML.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::pattern::{first_span, MatchSpan};
use crate::plr::{flx, FlxItem, PlrModel, Prediction};
use crate::qbaf::{build_qbafc, compute_strengths, inferred_prediction, postprocess, ArgId, Qbafc, StrengthMap, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Supporter,
    Attacker,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationItem {
    pub id: ArgId,
    pub pattern: String,
    pub span: Option<MatchSpan>,
    pub span_text: String,
    pub tau: f64,
    pub strength: f64,
    pub class: u8,
    /// Relation to the parent: δ for shallow items and roots.
    pub polarity: Polarity,
}

impl ExplanationItem {
    /// Positive values always favour class 1.
    pub fn adjusted_score(&self) -> f64 {
        adjusted_score(self)
    }
}

pub fn adjusted_score(item: &ExplanationItem) -> f64 {
    if item.class == 1 {
        item.strength
    } else {
        -item.strength
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeepNode {
    pub item: ExplanationItem,
    pub children: Vec<DeepNode>,
}

impl DeepNode {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(DeepNode::node_count).sum::<usize>()
    }

    pub fn expandable_count(&self) -> usize {
        usize::from(!self.children.is_empty())
            + self.children.iter().map(DeepNode::expandable_count).sum::<usize>()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ShallowExplanation {
    pub supporters: Vec<ExplanationItem>,
    pub attackers: Vec<ExplanationItem>,
}

impl ShallowExplanation {
    pub fn items(&self) -> impl Iterator<Item = &ExplanationItem> {
        self.supporters.iter().chain(&self.attackers)
    }

    pub fn is_empty(&self) -> bool {
        self.supporters.is_empty() && self.attackers.is_empty()
    }
}

fn item(fw: &Qbafc, s: &StrengthMap, doc: &Document, id: ArgId, polarity: Polarity) -> ExplanationItem {
    let arg = &fw.arguments()[&id];
    let span = arg.pattern.as_ref().and_then(|p| first_span(p, doc));
    ExplanationItem {
        id,
        pattern: arg.pattern.as_ref().map(|p| p.encode()).unwrap_or_default(),
        span_text: span.as_ref().map(|sp| sp.text(doc)).unwrap_or_default(),
        span,
        tau: arg.tau,
        strength: s[&id],
        class: arg.class,
        polarity,
    }
}

fn ranked(s: &StrengthMap, mut ids: Vec<ArgId>) -> Vec<ArgId> {
    ids.sort_by(|a, b| s[b].total_cmp(&s[a]).then(a.cmp(b)));
    ids
}

fn neighbours(fw: &Qbafc, s: &StrengthMap, doc: &Document, target: ArgId, k: usize) -> ShallowExplanation {
    let pick = |ids: Vec<ArgId>, pol: Polarity| -> Vec<ExplanationItem> {
        ranked(s, ids)
            .into_iter()
            .take(k)
            .map(|id| item(fw, s, doc, id, pol))
            .collect()
    };
    ShallowExplanation {
        supporters: pick(fw.supporters(target), Polarity::Supporter),
        attackers: pick(fw.attackers(target), Polarity::Attacker),
    }
}

/// The `k` strongest supporters of δ, and its `k` strongest attackers when
/// requested.
pub fn shallow_axplr(
    fw: &Qbafc,
    s: &StrengthMap,
    doc: &Document,
    k: usize,
    include_attackers: bool,
) -> ShallowExplanation {
    let mut out = neighbours(fw, s, doc, ArgId::Default, k);
    if !include_attackers {
        out.attackers.clear();
    }
    out
}

fn subtree(fw: &Qbafc, s: &StrengthMap, doc: &Document, item: ExplanationItem) -> DeepNode {
    let level = neighbours(fw, s, doc, item.id, usize::MAX);
    let children = level
        .supporters
        .into_iter()
        .chain(level.attackers)
        .map(|child| subtree(fw, s, doc, child))
        .collect();
    DeepNode { item, children }
}

/// Shallow items as roots, each expanded into its full tree of attackers
/// and supporters. Arguments reaching several parents appear under each.
pub fn deep_axplr(fw: &Qbafc, s: &StrengthMap, doc: &Document, k: usize) -> Vec<DeepNode> {
    let roots = shallow_axplr(fw, s, doc, k, true);
    roots
        .supporters
        .into_iter()
        .chain(roots.attackers)
        .map(|it| subtree(fw, s, doc, it))
        .collect()
}

/// Per-token sum of the signed scores of all items whose span covers it.
pub fn token_highlights<'a>(doc: &Document, items: impl IntoIterator<Item = &'a ExplanationItem>) -> Vec<f64> {
    let mut scores = vec![0.0; doc.len()];
    for it in items {
        if let Some(span) = &it.span {
            for &i in &span.token_indices {
                if let Some(v) = scores.get_mut(i) {
                    *v += it.adjusted_score();
                }
            }
        }
    }
    scores
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Flx,
    Shallow,
    Deep,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flx" => Ok(Method::Flx),
            "shallow" => Ok(Method::Shallow),
            "deep" => Ok(Method::Deep),
            other => Err(Error::Format(format!("unknown method `{other}` (expected flx, shallow or deep)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub document_id: String,
    pub prediction: Prediction,
    pub method: Method,
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flx: Vec<FlxItem>,
    #[serde(default)]
    pub shallow: Vec<ExplanationItem>,
    #[serde(default)]
    pub deep: Vec<DeepNode>,
    pub tokens: Vec<String>,
    pub highlights: Vec<f64>,
}

/// Explains one document's prediction with the given method.
pub fn explain_document(model: &PlrModel, doc: &Document, method: Method, variant: Variant, k: usize) -> Explanation {
    let tokens: Vec<String> = doc.tokens.iter().map(|t| t.surface().to_string()).collect();
    if method == Method::Flx {
        let prediction = model.predict(doc);
        let items = flx(model, doc, k);
        let mut highlights = vec![0.0; doc.len()];
        for it in &items {
            let toward_one = model.weights()[it.pattern_index];
            for &i in it.span.iter().flat_map(|s| &s.token_indices) {
                highlights[i] += toward_one;
            }
        }
        return Explanation {
            document_id: doc.id.clone(),
            prediction,
            method,
            variant: None,
            flx: items,
            shallow: vec![],
            deep: vec![],
            tokens,
            highlights,
        };
    }
    let fw = build_qbafc(model, doc, variant);
    let s = compute_strengths(&fw).expect("extracted frameworks are acyclic");
    let (post, s2) = postprocess(&fw, &s).expect("strengths cover every argument");
    let prediction = inferred_prediction(&post, &s2);
    let shallow: Vec<ExplanationItem> = shallow_axplr(&post, &s2, doc, k, true).items().cloned().collect();
    let deep = if method == Method::Deep {
        deep_axplr(&post, &s2, doc, k)
    } else {
        vec![]
    };
    let highlights = token_highlights(doc, &shallow);
    Explanation {
        document_id: doc.id.clone(),
        prediction,
        method,
        variant: Some(variant),
        flx: vec![],
        shallow: if method == Method::Shallow { shallow } else { vec![] },
        deep,
        tokens,
        highlights,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Html,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "html" => Ok(Format::Html),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(e: &Explanation, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(e).expect("explanations always serialize");
            out.push('\n');
            out.into_bytes()
        }
        Format::Text => text(e).into_bytes(),
        Format::Html => page(std::slice::from_ref(e)).into_bytes(),
    }
}

/// Several explanations: JSON Lines, concatenated text, or one HTML page.
pub fn render_batch(es: &[Explanation], format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = String::new();
            for e in es {
                out.push_str(&serde_json::to_string(e).expect("explanations always serialize"));
                out.push('\n');
            }
            out.into_bytes()
        }
        Format::Text => es.iter().map(text).collect::<Vec<_>>().join("\n").into_bytes(),
        Format::Html => page(es).into_bytes(),
    }
}

pub fn parse_explanation(text: &str) -> Result<Explanation> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("explanation: {e}")))
}

fn banner(e: &Explanation) -> String {
    format!(
        "document {}: predicted class {} (probability {:.4})",
        e.document_id, e.prediction.class, e.prediction.probability
    )
}

fn item_line(it: &ExplanationItem) -> String {
    format!(
        "{} {} \"{}\" strength {:.4} class {}",
        it.id, it.pattern, it.span_text, it.strength, it.class
    )
}

fn text_tree(out: &mut String, node: &DeepNode, depth: usize) {
    let sign = match node.item.polarity {
        Polarity::Supporter => '+',
        Polarity::Attacker => '-',
    };
    let _ = writeln!(out, "{}{sign} {}", "  ".repeat(depth + 1), item_line(&node.item));
    for c in &node.children {
        text_tree(out, c, depth + 1);
    }
}

fn text(e: &Explanation) -> String {
    let mut out = banner(e);
    out.push('\n');
    match e.method {
        Method::Flx => {
            for (rank, it) in e.flx.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {}. {} \"{}\" {:.4}",
                    rank + 1,
                    it.pattern,
                    it.span_text,
                    it.contribution
                );
            }
        }
        Method::Shallow => {
            for (title, pol) in [("supporters", Polarity::Supporter), ("attackers", Polarity::Attacker)] {
                let _ = writeln!(out, "{title}:");
                for it in e.shallow.iter().filter(|i| i.polarity == pol) {
                    let _ = writeln!(out, "  {}", item_line(it));
                }
            }
        }
        Method::Deep => {
            for root in &e.deep {
                text_tree(&mut out, root, 0);
            }
        }
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn class_colour(score: f64, alpha: f64) -> String {
    if score >= 0.0 {
        format!("rgba(0,160,60,{alpha:.3})")
    } else {
        format!("rgba(210,30,30,{alpha:.3})")
    }
}

fn html_item(it: &ExplanationItem, max: f64) -> String {
    let score = it.adjusted_score();
    let alpha = if max > 0.0 { score.abs() / max } else { 0.0 };
    format!(
        "<span class=\"arg\" style=\"background:{}\">{} <code>{}</code> &ldquo;{}&rdquo; {:.4}</span>",
        class_colour(score, alpha),
        match it.polarity {
            Polarity::Supporter => "+",
            Polarity::Attacker => "&minus;",
        },
        escape(&it.pattern),
        escape(&it.span_text),
        it.strength
    )
}

fn html_tree(out: &mut String, node: &DeepNode, max: f64) {
    if node.children.is_empty() {
        let _ = writeln!(out, "<div class=\"leaf\">{}</div>", html_item(&node.item, max));
        return;
    }
    let _ = writeln!(out, "<details><summary>{}</summary>", html_item(&node.item, max));
    for c in &node.children {
        html_tree(out, c, max);
    }
    out.push_str("</details>\n");
}

fn section(out: &mut String, e: &Explanation) {
    let _ = writeln!(out, "<section>\n<div class=\"banner\">{}</div>", escape(&banner(e)));
    let max = e.highlights.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    out.push_str("<p class=\"text\">");
    for (tok, &score) in e.tokens.iter().zip(&e.highlights) {
        let alpha = if max > 0.0 { score.abs() / max } else { 0.0 };
        let _ = write!(
            out,
            "<span style=\"background:{}\">{}</span> ",
            class_colour(score, alpha),
            escape(tok)
        );
    }
    out.push_str("</p>\n");
    match e.method {
        Method::Flx => {
            let top = e.flx.iter().fold(0.0f64, |m, i| m.max(i.contribution.abs()));
            out.push_str("<ol>\n");
            for it in &e.flx {
                let alpha = if top > 0.0 { it.contribution.abs() / top } else { 0.0 };
                let _ = writeln!(
                    out,
                    "<li style=\"background:{}\"><code>{}</code> &ldquo;{}&rdquo; {:.4}</li>",
                    class_colour(it.contribution, alpha),
                    escape(&it.pattern),
                    escape(&it.span_text),
                    it.contribution
                );
            }
            out.push_str("</ol>\n");
        }
        Method::Shallow => {
            let top = e.shallow.iter().fold(0.0f64, |m, i| m.max(i.strength));
            for it in &e.shallow {
                let _ = writeln!(out, "<div class=\"leaf\">{}</div>", html_item(it, top));
            }
        }
        Method::Deep => {
            fn top(n: &DeepNode) -> f64 {
                n.children.iter().map(top).fold(n.item.strength, f64::max)
            }
            let m = e.deep.iter().map(top).fold(0.0, f64::max);
            for root in &e.deep {
                html_tree(out, root, m);
            }
        }
    }
    out.push_str("</section>\n");
}

fn page(es: &[Explanation]) -> String {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>explanations</title>\n<style>\n\
         body{font-family:sans-serif;margin:2em;}\n.banner{font-weight:bold;margin-bottom:.5em;}\n\
         .leaf,details{margin-left:1.5em;}\nsummary{cursor:pointer;}\nsection{margin-bottom:2em;}\n\
         </style>\n</head>\n<body>\n",
    );
    for e in es {
        section(&mut out, e);
    }
    out.push_str("</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qbaf::Argument;
    use std::collections::BTreeMap;

    fn running_post() -> (Qbafc, StrengthMap, Document) {
        let (model, doc) = fixtures::running_example();
        let fw = build_qbafc(&model, &doc, Variant::BottomUp);
        let (post, s) = postprocess(&fw, &compute_strengths(&fw).unwrap()).unwrap();
        (post, s, doc)
    }

    #[test]
    fn shallow_running_example() {
        let (post, s, doc) = running_post();
        let e = shallow_axplr(&post, &s, &doc, 3, true);
        let ids = |v: &[ExplanationItem]| v.iter().map(|i| i.id).collect::<Vec<_>>();
        assert_eq!(ids(&e.supporters), vec![ArgId::Pattern(3)]);
        assert_eq!(ids(&e.attackers), vec![ArgId::Pattern(0)]);
        assert!((e.supporters[0].strength - 0.5).abs() < 1e-12);
        assert!((e.attackers[0].strength - 0.1).abs() < 1e-12);
        assert_eq!(e.supporters[0].span_text, "hot sausages");
        assert!((e.attackers[0].adjusted_score() + 0.1).abs() < 1e-12);
        assert!(shallow_axplr(&post, &s, &doc, 0, true).is_empty());
        assert!(shallow_axplr(&post, &s, &doc, 3, false).attackers.is_empty());
    }

    #[test]
    fn deep_running_example() {
        let (post, s, doc) = running_post();
        let roots = deep_axplr(&post, &s, &doc, 3);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].item.id, ArgId::Pattern(3));
        assert!(roots[0].children.is_empty());
        let a1 = &roots[1];
        assert_eq!(a1.item.id, ArgId::Pattern(0));
        let kids: Vec<(ArgId, Polarity)> = a1.children.iter().map(|c| (c.item.id, c.item.polarity)).collect();
        assert_eq!(
            kids,
            vec![(ArgId::Pattern(1), Polarity::Supporter), (ArgId::Pattern(2), Polarity::Attacker)]
        );
    }

    #[test]
    fn shared_arguments_are_duplicated() {
        let d = ArgId::Default;
        let (r1, r2, shared) = (ArgId::Pattern(0), ArgId::Pattern(1), ArgId::Pattern(2));
        let mut args = BTreeMap::new();
        args.insert(d, Argument::new(0.25, 1));
        args.insert(r1, Argument::new(0.5, 1));
        args.insert(r2, Argument::new(0.75, 1));
        args.insert(shared, Argument::new(0.5, 1));
        let fw = Qbafc::from_parts(Variant::BottomUp, args, [(r1, d), (r2, d), (shared, r1), (shared, r2)]).unwrap();
        let (post, s) = postprocess(&fw, &compute_strengths(&fw).unwrap()).unwrap();
        let doc = Document::new("x", vec![], None);
        let roots = deep_axplr(&post, &s, &doc, 5);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.children.len(), 1);
            assert_eq!(r.children[0].item.id, shared);
            assert_eq!(r.children[0].item.strength, 0.5);
        }
    }

    #[test]
    fn highlights_sum_overlapping_items() {
        let doc = Document::from_words("h", "a b c", None).unwrap();
        let mk = |idx: Vec<usize>, strength: f64, class: u8| ExplanationItem {
            id: ArgId::Pattern(0),
            pattern: String::new(),
            span: Some(MatchSpan { token_indices: idx }),
            span_text: String::new(),
            tau: strength,
            strength,
            class,
            polarity: Polarity::Supporter,
        };
        let items = [mk(vec![0, 1], 0.5, 1), mk(vec![1], 0.1, 0)];
        let h = token_highlights(&doc, &items);
        assert_eq!(h[0], 0.5);
        assert!((h[1] - 0.4).abs() < 1e-12);
        assert_eq!(h[2], 0.0);
    }

    #[test]
    fn rendering_is_deterministic_and_complete() {
        let (model, doc) = fixtures::running_example();
        let e = explain_document(&model, &doc, Method::Deep, Variant::BottomUp, 3);
        assert_eq!(render(&e, Format::Html), render(&e, Format::Html));
        let html = String::from_utf8(render(&e, Format::Html)).unwrap();
        let expandable: usize = e.deep.iter().map(DeepNode::expandable_count).sum();
        assert_eq!(html.matches("<details>").count(), expandable);
        assert_eq!(expandable, 1);
        let json = String::from_utf8(render(&e, Format::Json)).unwrap();
        assert_eq!(parse_explanation(&json).unwrap(), e);
        assert!("pdf".parse::<Format>().is_err());

        let empty = explain_document(&model, &Document::new("none", vec![], None), Method::Shallow, Variant::BottomUp, 3);
        let html = String::from_utf8(render(&empty, Format::Html)).unwrap();
        assert!(html.contains("class=\"banner\""));
        assert!(html.ends_with("</html>\n"));
    }

    #[test]
    fn explanation_prediction_matches_model() {
        let (model, doc) = fixtures::running_example();
        for method in [Method::Flx, Method::Shallow, Method::Deep] {
            let e = explain_document(&model, &doc, method, Variant::TopDown, 3);
            assert_eq!(e.prediction.class, 1);
            assert!((e.prediction.probability - 0.5744).abs() < 5e-5);
        }
    }
}
