//! Bipolar argumentation frameworks with supported classes, extracted from a
//! pattern-based logistic regression model and a document.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::pattern::{strictly_more_specific, Pattern};
use crate::plr::{real_to_string, sigmoid, PlrModel, Prediction};

/// `a<i>` for the argument of pattern `i`, `delta` for the default argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArgId {
    Pattern(usize),
    Default,
}

impl ArgId {
    pub fn is_default(self) -> bool {
        self == ArgId::Default
    }

    pub fn pattern_index(self) -> Option<usize> {
        match self {
            ArgId::Pattern(i) => Some(i),
            ArgId::Default => None,
        }
    }
}

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgId::Pattern(i) => write!(f, "a{i}"),
            ArgId::Default => f.write_str("delta"),
        }
    }
}

impl FromStr for ArgId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "delta" {
            return Ok(ArgId::Default);
        }
        s.strip_prefix('a')
            .and_then(|n| n.parse().ok())
            .map(ArgId::Pattern)
            .ok_or_else(|| Error::Format(format!("`{s}` is not an argument id")))
    }
}

impl Serialize for ArgId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ArgId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    TopDown,
    BottomUp,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::TopDown, Variant::BottomUp];

    pub fn name(self) -> &'static str {
        match self {
            Variant::TopDown => "top_down",
            Variant::BottomUp => "bottom_up",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top_down" => Ok(Variant::TopDown),
            "bottom_up" => Ok(Variant::BottomUp),
            other => Err(Error::Format(format!(
                "unknown variant `{other}` (expected top_down or bottom_up)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Argument {
    pub tau: f64,
    pub class: u8,
    /// The pattern behind a pattern argument, when known.
    pub pattern: Option<Pattern>,
}

impl Argument {
    pub fn new(tau: f64, class: u8) -> Self {
        Argument {
            tau,
            class,
            pattern: None,
        }
    }
}

pub type StrengthMap = BTreeMap<ArgId, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Qbafc {
    variant: Variant,
    post_processed: bool,
    arguments: BTreeMap<ArgId, Argument>,
    attacks: BTreeSet<(ArgId, ArgId)>,
    supports: BTreeSet<(ArgId, ArgId)>,
}

impl Qbafc {
    /// Builds a framework from arguments and unlabeled edges; each edge
    /// becomes a support when its endpoints share a class and an attack
    /// otherwise. Fails unless the result has a default argument with no
    /// outgoing edges, non-negative base scores and no cycles.
    pub fn from_parts(
        variant: Variant,
        arguments: BTreeMap<ArgId, Argument>,
        edges: impl IntoIterator<Item = (ArgId, ArgId)>,
    ) -> Result<Self> {
        if !arguments.contains_key(&ArgId::Default) {
            return Err(Error::ArgumentNotFound(ArgId::Default.to_string()));
        }
        for (id, a) in &arguments {
            if a.class > 1 {
                return Err(Error::Format(format!("{id}: class {} is not 0 or 1", a.class)));
            }
            if !(a.tau.is_finite() && a.tau >= 0.0) {
                return Err(Error::Format(format!("{id}: base score {} must be non-negative", a.tau)));
            }
        }
        let mut fw = Qbafc {
            variant,
            post_processed: false,
            arguments,
            attacks: BTreeSet::new(),
            supports: BTreeSet::new(),
        };
        for (src, dst) in edges {
            for id in [src, dst] {
                if !fw.arguments.contains_key(&id) {
                    return Err(Error::ArgumentNotFound(id.to_string()));
                }
            }
            if src == ArgId::Default {
                return Err(Error::Format("the default argument cannot have outgoing edges".into()));
            }
            if src == dst {
                return Err(Error::Cycle);
            }
            if fw.arguments[&src].class == fw.arguments[&dst].class {
                fw.supports.insert((src, dst));
            } else {
                fw.attacks.insert((src, dst));
            }
        }
        fw.topological_order()?;
        Ok(fw)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_post_processed(&self) -> bool {
        self.post_processed
    }

    pub fn arguments(&self) -> &BTreeMap<ArgId, Argument> {
        &self.arguments
    }

    pub fn argument(&self, id: ArgId) -> Option<&Argument> {
        self.arguments.get(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> + '_ {
        self.arguments.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn attacks(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.attacks
    }

    pub fn supports(&self) -> &BTreeSet<(ArgId, ArgId)> {
        &self.supports
    }

    /// All edges in id order, flagged `true` for supports.
    pub fn edges(&self) -> Vec<(ArgId, ArgId, bool)> {
        let mut all: Vec<(ArgId, ArgId, bool)> = self
            .attacks
            .iter()
            .map(|&(a, b)| (a, b, false))
            .chain(self.supports.iter().map(|&(a, b)| (a, b, true)))
            .collect();
        all.sort();
        all
    }

    pub fn attackers(&self, target: ArgId) -> Vec<ArgId> {
        self.attacks.iter().filter(|e| e.1 == target).map(|e| e.0).collect()
    }

    pub fn supporters(&self, target: ArgId) -> Vec<ArgId> {
        self.supports.iter().filter(|e| e.1 == target).map(|e| e.0).collect()
    }

    pub fn out_degree(&self, id: ArgId) -> usize {
        self.attacks.iter().filter(|e| e.0 == id).count()
            + self.supports.iter().filter(|e| e.0 == id).count()
    }

    pub fn is_support(&self, src: ArgId, dst: ArgId) -> Option<bool> {
        if self.supports.contains(&(src, dst)) {
            Some(true)
        } else if self.attacks.contains(&(src, dst)) {
            Some(false)
        } else {
            None
        }
    }

    /// Sources before targets; among ready arguments the smallest id first.
    pub fn topological_order(&self) -> Result<Vec<ArgId>> {
        let mut indegree: BTreeMap<ArgId, usize> = self.arguments.keys().map(|&k| (k, 0)).collect();
        let mut out: BTreeMap<ArgId, Vec<ArgId>> = BTreeMap::new();
        for (src, dst, _) in self.edges() {
            *indegree.get_mut(&dst).expect("edge endpoints are arguments") += 1;
            out.entry(src).or_default().push(dst);
        }
        let mut ready: BTreeSet<ArgId> = indegree.iter().filter(|e| *e.1 == 0).map(|e| *e.0).collect();
        let mut order = Vec::with_capacity(self.arguments.len());
        while let Some(next) = ready.pop_first() {
            order.push(next);
            for dst in out.get(&next).into_iter().flatten() {
                let d = indegree.get_mut(dst).expect("edge endpoints are arguments");
                *d -= 1;
                if *d == 0 {
                    ready.insert(*dst);
                }
            }
        }
        if order.len() == self.arguments.len() {
            Ok(order)
        } else {
            Err(Error::Cycle)
        }
    }
}

fn argument_for(model: &PlrModel, i: usize) -> Argument {
    let w = model.weights()[i];
    Argument {
        tau: w.abs(),
        class: u8::from(w >= 0.0),
        pattern: Some(model.patterns()[i].clone()),
    }
}

/// Extracts the top-down or bottom-up framework for `doc`.
pub fn build_qbafc(model: &PlrModel, doc: &Document, variant: Variant) -> Qbafc {
    let present: Vec<usize> = model.extract_features(doc).active().collect();
    build_from_present(model, &present, variant)
}

/// As [`build_qbafc`] for a known set of matched pattern indices.
pub fn build_from_present(model: &PlrModel, present: &[usize], variant: Variant) -> Qbafc {
    let mut arguments = BTreeMap::new();
    let b = model.bias();
    arguments.insert(ArgId::Default, Argument::new(b.abs(), u8::from(b >= 0.0)));
    for &i in present {
        arguments.insert(ArgId::Pattern(i), argument_for(model, i));
    }

    let n = present.len();
    let pats = model.patterns();
    // succ[x][y]: pattern present[x] strictly more specific than present[y]
    let succ: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| x != y && strictly_more_specific(&pats[present[x]], &pats[present[y]]))
                .collect()
        })
        .collect();

    let mut edges = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !succ[x][y] {
                continue;
            }
            let covering = !(0..n).any(|k| succ[x][k] && succ[k][y]);
            if covering {
                let (specific, general) = (ArgId::Pattern(present[x]), ArgId::Pattern(present[y]));
                edges.push(match variant {
                    Variant::TopDown => (specific, general),
                    Variant::BottomUp => (general, specific),
                });
            }
        }
    }
    for x in 0..n {
        let to_default = match variant {
            Variant::TopDown => !(0..n).any(|y| succ[x][y]),
            Variant::BottomUp => !(0..n).any(|y| succ[y][x]),
        };
        if to_default {
            edges.push((ArgId::Pattern(present[x]), ArgId::Default));
        }
    }
    Qbafc::from_parts(variant, arguments, edges)
        .expect("strict specificity is acyclic and the default argument is a sink")
}

/// Logistic regression semantics: base score plus supporter strengths minus
/// attacker strengths, each divided by that source's out-degree.
pub fn compute_strengths(fw: &Qbafc) -> Result<StrengthMap> {
    let order = fw.topological_order()?;
    let mut degree: BTreeMap<ArgId, usize> = BTreeMap::new();
    let mut incoming: BTreeMap<ArgId, Vec<(ArgId, bool)>> = BTreeMap::new();
    for (src, dst, support) in fw.edges() {
        *degree.entry(src).or_default() += 1;
        incoming.entry(dst).or_default().push((src, support));
    }
    let mut sigma = StrengthMap::new();
    for id in order {
        let mut sup = 0.0;
        let mut att = 0.0;
        for &(src, support) in incoming.get(&id).into_iter().flatten() {
            let share = sigma[&src] / degree[&src] as f64;
            if support {
                sup += share;
            } else {
                att += share;
            }
        }
        sigma.insert(id, fw.arguments[&id].tau + sup - att);
    }
    Ok(sigma)
}

/// Flips every negative-strength argument (negated base score, opposite
/// class), relabels edges by the new classes and drops edges leaving
/// zero-strength arguments.
pub fn postprocess(fw: &Qbafc, s: &StrengthMap) -> Result<(Qbafc, StrengthMap)> {
    if fw.post_processed {
        return Err(Error::Format("framework is already post-processed".into()));
    }
    let mut arguments = fw.arguments.clone();
    for (id, a) in arguments.iter_mut() {
        let sigma = *s.get(id).ok_or_else(|| Error::ArgumentNotFound(id.to_string()))?;
        if sigma < 0.0 {
            a.tau = -a.tau;
            a.class = 1 - a.class;
        }
    }
    let mut out = Qbafc {
        variant: fw.variant,
        post_processed: true,
        arguments,
        attacks: BTreeSet::new(),
        supports: BTreeSet::new(),
    };
    for (src, dst, _) in fw.edges() {
        if s[&src] == 0.0 {
            continue;
        }
        if out.arguments[&src].class == out.arguments[&dst].class {
            out.supports.insert((src, dst));
        } else {
            out.attacks.insert((src, dst));
        }
    }
    let strengths = compute_strengths(&out)?;
    Ok((out, strengths))
}

/// The class and probability implied by the default argument's strength.
pub fn inferred_prediction(fw: &Qbafc, s: &StrengthMap) -> Prediction {
    let class = fw.arguments[&ArgId::Default].class;
    let sigma = s[&ArgId::Default];
    if sigma > 0.0 {
        Prediction {
            class,
            probability: sigmoid(sigma),
        }
    } else if sigma < 0.0 {
        Prediction {
            class: 1 - class,
            probability: sigmoid(-sigma),
        }
    } else {
        Prediction {
            class: 1,
            probability: 0.5,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ArgumentRecord {
    id: ArgId,
    origin: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pattern: Option<Pattern>,
    tau: String,
    class: u8,
}

#[derive(Debug, Serialize, Deserialize)]
struct FrameworkRecord {
    variant: Variant,
    post_processed: bool,
    arguments: Vec<ArgumentRecord>,
    attacks: Vec<(ArgId, ArgId)>,
    supports: Vec<(ArgId, ArgId)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sigma: Option<BTreeMap<ArgId, String>>,
}

pub fn framework_to_json(fw: &Qbafc, s: Option<&StrengthMap>) -> String {
    let record = FrameworkRecord {
        variant: fw.variant,
        post_processed: fw.post_processed,
        arguments: fw
            .arguments
            .iter()
            .map(|(&id, a)| ArgumentRecord {
                id,
                origin: match id {
                    ArgId::Pattern(i) => format!("pattern:{i}"),
                    ArgId::Default => "default".into(),
                },
                pattern: a.pattern.clone(),
                tau: real_to_string(a.tau),
                class: a.class,
            })
            .collect(),
        attacks: fw.attacks.iter().copied().collect(),
        supports: fw.supports.iter().copied().collect(),
        sigma: s.map(|s| s.iter().map(|(&k, &v)| (k, real_to_string(v))).collect()),
    };
    serde_json::to_string_pretty(&record).expect("frameworks always serialize")
}

/// Reads a framework written by [`framework_to_json`], with its strengths if present.
pub fn parse_framework(text: &str) -> Result<(Qbafc, Option<StrengthMap>)> {
    let r: FrameworkRecord =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("framework file: {e}")))?;
    let real = |s: &str| -> Result<f64> {
        s.parse().map_err(|_| Error::Format(format!("`{s}` is not a real number")))
    };
    let mut arguments = BTreeMap::new();
    for a in r.arguments {
        arguments.insert(
            a.id,
            Argument {
                tau: real(&a.tau)?,
                class: a.class,
                pattern: a.pattern,
            },
        );
    }
    let fw = Qbafc {
        variant: r.variant,
        post_processed: r.post_processed,
        arguments,
        attacks: r.attacks.into_iter().collect(),
        supports: r.supports.into_iter().collect(),
    };
    for &(a, b) in fw.attacks.iter().chain(&fw.supports) {
        for id in [a, b] {
            if !fw.arguments.contains_key(&id) {
                return Err(Error::ArgumentNotFound(id.to_string()));
            }
        }
    }
    if !fw.arguments.contains_key(&ArgId::Default) {
        return Err(Error::ArgumentNotFound("delta".into()));
    }
    fw.topological_order()?;
    let sigma = match r.sigma {
        Some(m) => Some(
            m.into_iter()
                .map(|(k, v)| real(&v).map(|v| (k, v)))
                .collect::<Result<StrengthMap>>()?,
        ),
        None => None,
    };
    Ok((fw, sigma))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: green nodes support class 1, red nodes class 0.
pub fn framework_to_dot(fw: &Qbafc, s: Option<&StrengthMap>) -> String {
    let mut out = String::from("digraph qbafc {\n  rankdir=BT;\n  node [shape=box, style=filled];\n");
    for (&id, a) in &fw.arguments {
        let mut label = id.to_string();
        if let Some(p) = &a.pattern {
            label.push_str(&format!("\\n{}", dot_escape(&p.encode())));
        }
        label.push_str(&format!("\\ntau={}", real_to_string(a.tau)));
        if let Some(sigma) = s.and_then(|s| s.get(&id)) {
            label.push_str(&format!("\\nsigma={}", real_to_string(*sigma)));
        }
        let color = if a.class == 1 { "palegreen" } else { "lightpink" };
        out.push_str(&format!("  \"{id}\" [label=\"{label}\", fillcolor={color}];\n"));
    }
    for (src, dst, support) in fw.edges() {
        let sign = if support { "+" } else { "−" };
        out.push_str(&format!("  \"{src}\" -> \"{dst}\" [label=\"{sign}\"];\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const A1: ArgId = ArgId::Pattern(0);
    const A2: ArgId = ArgId::Pattern(1);
    const A3: ArgId = ArgId::Pattern(2);
    const A4: ArgId = ArgId::Pattern(3);
    const D: ArgId = ArgId::Default;

    fn set(edges: &[(ArgId, ArgId)]) -> BTreeSet<(ArgId, ArgId)> {
        edges.iter().copied().collect()
    }

    #[test]
    fn arg_ids_order_and_parse() {
        assert!(ArgId::Pattern(10) > ArgId::Pattern(2));
        assert!(ArgId::Default > ArgId::Pattern(usize::MAX));
        assert_eq!("a12".parse::<ArgId>().unwrap(), ArgId::Pattern(12));
        assert_eq!(ArgId::Default.to_string(), "delta");
        assert!("b1".parse::<ArgId>().is_err());
    }

    #[test]
    fn top_down_running_example() {
        let (model, doc) = fixtures::running_example();
        let fw = build_qbafc(&model, &doc, Variant::TopDown);
        assert_eq!(fw.supports(), &set(&[(A1, A2), (A2, D)]));
        assert_eq!(fw.attacks(), &set(&[(A1, A3), (A3, D), (A4, D)]));
        assert_eq!(fw.argument(D).unwrap().class, 0);
        assert_eq!(fw.argument(D).unwrap().tau, 0.1);
        let s = compute_strengths(&fw).unwrap();
        assert!((s[&A2] - 0.85).abs() < 1e-12);
        assert!((s[&A3] - 0.75).abs() < 1e-12);
        assert!((s[&D] + 0.3).abs() < 1e-12);
        assert_eq!(s[&A1], 0.9);
    }

    #[test]
    fn bottom_up_running_example() {
        let (model, doc) = fixtures::running_example();
        let fw = build_qbafc(&model, &doc, Variant::BottomUp);
        assert_eq!(fw.supports(), &set(&[(A2, A1), (A1, D)]));
        assert_eq!(fw.attacks(), &set(&[(A3, A1), (A4, D)]));
        let s = compute_strengths(&fw).unwrap();
        assert!((s[&A1] - 0.1).abs() < 1e-12);
        assert!((s[&D] + 0.3).abs() < 1e-12);
    }

    #[test]
    fn post_processing_running_example() {
        let (model, doc) = fixtures::running_example();
        let td = build_qbafc(&model, &doc, Variant::TopDown);
        let (post, s) = postprocess(&td, &compute_strengths(&td).unwrap()).unwrap();
        let d = post.argument(D).unwrap();
        assert_eq!((d.class, d.tau), (1, -0.1));
        assert!((s[&D] - 0.3).abs() < 1e-12);
        assert_eq!(post.attacks(), &set(&[(A1, A3), (A2, D)]));
        assert_eq!(post.supports(), &set(&[(A1, A2), (A3, D), (A4, D)]));
        let p = inferred_prediction(&post, &s);
        assert_eq!(p.class, 1);
        assert!((p.probability - 0.5744).abs() < 5e-5);

        let bu = build_qbafc(&model, &doc, Variant::BottomUp);
        let (post, _) = postprocess(&bu, &compute_strengths(&bu).unwrap()).unwrap();
        assert_eq!(post.attacks(), &set(&[(A1, D), (A3, A1)]));
        assert_eq!(post.supports(), &set(&[(A2, A1), (A4, D)]));
    }

    #[test]
    fn inferred_prediction_pre_stage() {
        let (model, doc) = fixtures::running_example();
        let fw = build_qbafc(&model, &doc, Variant::TopDown);
        let p = inferred_prediction(&fw, &compute_strengths(&fw).unwrap());
        assert_eq!(p.class, 1);
        assert!((p.probability - 0.5744).abs() < 5e-5);

        let mut args = BTreeMap::new();
        args.insert(D, Argument::new(0.0, 0));
        let tie = Qbafc::from_parts(Variant::TopDown, args, []).unwrap();
        let p = inferred_prediction(&tie, &compute_strengths(&tie).unwrap());
        assert_eq!(p, Prediction { class: 1, probability: 0.5 });
    }

    #[test]
    fn degenerate_frameworks() {
        let (model, _) = fixtures::running_example();
        let empty = Document::new("e", vec![], None);
        let fw = build_qbafc(&model, &empty, Variant::BottomUp);
        assert_eq!(fw.len(), 1);
        assert!(fw.edges().is_empty());

        let mut args = BTreeMap::new();
        args.insert(D, Argument::new(0.7, 1));
        let single = Qbafc::from_parts(Variant::TopDown, args, []).unwrap();
        let s = compute_strengths(&single).unwrap();
        assert_eq!(s[&D], 0.7);
        let (post, s2) = postprocess(&single, &s).unwrap();
        assert_eq!(s2, s);
        assert_eq!(post.arguments(), single.arguments());
    }

    #[test]
    fn zero_strength_sources_are_dropped() {
        let mut args = BTreeMap::new();
        args.insert(D, Argument::new(0.5, 1));
        args.insert(A1, Argument::new(0.0, 0));
        args.insert(A2, Argument::new(0.25, 1));
        let fw = Qbafc::from_parts(Variant::TopDown, args, [(A1, D), (A2, D)]).unwrap();
        let s = compute_strengths(&fw).unwrap();
        let (post, s2) = postprocess(&fw, &s).unwrap();
        assert!(post.attacks().is_empty());
        assert_eq!(post.supports(), &set(&[(A2, D)]));
        assert_eq!(s2[&D], s[&D]);
    }

    #[test]
    fn invalid_parts_rejected() {
        let mut args = BTreeMap::new();
        args.insert(D, Argument::new(0.5, 1));
        args.insert(A1, Argument::new(0.5, 1));
        args.insert(A2, Argument::new(0.5, 1));
        assert!(matches!(
            Qbafc::from_parts(Variant::TopDown, args.clone(), [(A1, A2), (A2, A1)]),
            Err(Error::Cycle)
        ));
        assert!(Qbafc::from_parts(Variant::TopDown, args.clone(), [(D, A1)]).is_err());
        assert!(Qbafc::from_parts(Variant::TopDown, args, [(A3, D)]).is_err());
    }

    #[test]
    fn json_roundtrip_and_dot() {
        let (model, doc) = fixtures::running_example();
        let fw = build_qbafc(&model, &doc, Variant::BottomUp);
        let s = compute_strengths(&fw).unwrap();
        let text = framework_to_json(&fw, Some(&s));
        let (back, s2) = parse_framework(&text).unwrap();
        assert_eq!(back, fw);
        assert_eq!(s2.unwrap(), s);
        let dot = framework_to_dot(&fw, Some(&s));
        assert!(dot.contains("\"a2\" -> \"a0\" [label=\"−\"]"));
        assert!(dot.contains("\"a1\" -> \"a0\" [label=\"+\"]"));
        assert!(dot.contains("\"delta\" [label=\"delta\\ntau=0.1"));
    }
}
