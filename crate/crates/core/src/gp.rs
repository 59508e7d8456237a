//! Group properties GP1 to GP11 of gradual semantics, checked on concrete
//! frameworks, summarized over random frameworks and searched for
//! counterexamples.
//!
//! Cost: GP1 to GP5 visit every argument, GP6 to GP11 every ordered pair of
//! distinct arguments, so a check is quadratic in the framework size.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qbaf::{compute_strengths, postprocess, ArgId, Argument, Qbafc, StrengthMap, Variant};

pub const PROPERTIES: std::ops::RangeInclusive<u8> = 1..=11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Pre,
    Post,
}

impl Stage {
    pub fn of(fw: &Qbafc) -> Stage {
        if fw.is_post_processed() {
            Stage::Post
        } else {
            Stage::Pre
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Vacuous,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Holds => "✓",
            Verdict::Violated => "✗",
            Verdict::Vacuous => "-",
        }
    }
}

/// Strength-dominance between argument sets: an injection from `p` into `q`
/// never decreasing strength. Sorting both sides descending and pairing
/// position by position decides it.
pub fn set_leq(p: &[ArgId], q: &[ArgId], s: &StrengthMap) -> bool {
    if p.len() > q.len() {
        return false;
    }
    let sorted = |xs: &[ArgId]| {
        let mut v: Vec<f64> = xs.iter().map(|a| s[a]).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (sp, sq) = (sorted(p), sorted(q));
    sp.iter().zip(&sq).all(|(a, b)| a <= b)
}

pub fn set_lt(p: &[ArgId], q: &[ArgId], s: &StrengthMap) -> bool {
    set_leq(p, q, s) && !set_leq(q, p, s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentView {
    pub id: ArgId,
    pub tau: f64,
    pub sigma: f64,
    pub attackers: Vec<ArgId>,
    pub supporters: Vec<ArgId>,
}

/// An argument (GP1 to GP5) or ordered pair (GP6 to GP11) violating a property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub property: u8,
    pub alpha: ArgumentView,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<ArgumentView>,
}

impl Witness {
    /// Re-evaluates the property on this instance of `fw`.
    pub fn revalidates(&self, fw: &Qbafc, s: &StrengthMap) -> bool {
        let ctx = Context::new(fw, s);
        let beta = self.beta.as_ref().map(|b| b.id);
        ctx.instance(self.property, self.alpha.id, beta) == Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpReport {
    pub property: u8,
    pub stage: Stage,
    /// Arguments or pairs whose antecedent holds.
    pub instances: usize,
    pub violation_count: usize,
    /// Witnesses, possibly truncated to a limit.
    pub violations: Vec<Witness>,
}

impl GpReport {
    pub fn verdict(&self) -> Verdict {
        if self.violation_count > 0 {
            Verdict::Violated
        } else if self.instances == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        }
    }
}

struct Context<'a> {
    fw: &'a Qbafc,
    s: &'a StrengthMap,
    attackers: BTreeMap<ArgId, Vec<ArgId>>,
    supporters: BTreeMap<ArgId, Vec<ArgId>>,
}

impl<'a> Context<'a> {
    fn new(fw: &'a Qbafc, s: &'a StrengthMap) -> Self {
        let mut attackers: BTreeMap<ArgId, Vec<ArgId>> = fw.ids().map(|a| (a, vec![])).collect();
        let mut supporters = attackers.clone();
        for &(a, b) in fw.attacks() {
            attackers.get_mut(&b).expect("edge targets are arguments").push(a);
        }
        for &(a, b) in fw.supports() {
            supporters.get_mut(&b).expect("edge targets are arguments").push(a);
        }
        Context {
            fw,
            s,
            attackers,
            supporters,
        }
    }

    fn tau(&self, a: ArgId) -> f64 {
        self.fw.arguments()[&a].tau
    }

    fn sigma(&self, a: ArgId) -> f64 {
        self.s[&a]
    }

    fn view(&self, a: ArgId) -> ArgumentView {
        ArgumentView {
            id: a,
            tau: self.tau(a),
            sigma: self.sigma(a),
            attackers: self.attackers[&a].clone(),
            supporters: self.supporters[&a].clone(),
        }
    }

    /// `None` when the antecedent fails, otherwise whether the consequent holds.
    fn instance(&self, gp: u8, a: ArgId, b: Option<ArgId>) -> Option<bool> {
        let (ta, sa) = (self.tau(a), self.sigma(a));
        let (att_a, sup_a) = (&self.attackers[&a], &self.supporters[&a]);
        let single = |cond: bool, consequent: bool| cond.then_some(consequent);
        match (gp, b) {
            (1, None) => single(att_a.is_empty() && sup_a.is_empty(), sa == ta),
            (2, None) => single(!att_a.is_empty() && sup_a.is_empty(), sa < ta),
            (3, None) => single(att_a.is_empty() && !sup_a.is_empty(), sa > ta),
            (4, None) => single(sa < ta, !att_a.is_empty()),
            (5, None) => single(sa > ta, !sup_a.is_empty()),
            (6..=11, Some(b)) if b != a => {
                let (tb, sb) = (self.tau(b), self.sigma(b));
                let (att_b, sup_b) = (&self.attackers[&b], &self.supporters[&b]);
                let att_eq = att_a == att_b;
                let sup_eq = sup_a == sup_b;
                let proper = |x: &Vec<ArgId>, y: &Vec<ArgId>| {
                    let (x, y): (BTreeSet<_>, BTreeSet<_>) = (x.iter().collect(), y.iter().collect());
                    x.len() < y.len() && x.is_subset(&y)
                };
                match gp {
                    6 => single(att_eq && sup_eq && ta == tb, sa == sb),
                    7 => single(proper(att_a, att_b) && sup_eq && ta == tb, sa > sb),
                    8 => single(att_eq && proper(sup_a, sup_b) && ta == tb, sa < sb),
                    9 => single(att_eq && sup_eq && ta < tb, sa < sb),
                    10 => single(
                        sup_eq && ta == tb && set_lt(att_a, att_b, self.s),
                        sa > sb,
                    ),
                    _ => single(
                        att_eq && ta == tb && set_lt(sup_a, sup_b, self.s),
                        sa < sb,
                    ),
                }
            }
            _ => None,
        }
    }

    fn report(&self, gp: u8, limit: usize) -> GpReport {
        let ids: Vec<ArgId> = self.fw.ids().collect();
        let mut instances = 0;
        let mut violation_count = 0;
        let mut violations = Vec::new();
        let mut record = |a: ArgId, b: Option<ArgId>, ok: bool| {
            instances += 1;
            violation_count += usize::from(!ok);
            if !ok && violations.len() < limit {
                violations.push(Witness {
                    property: gp,
                    alpha: self.view(a),
                    beta: b.map(|b| self.view(b)),
                });
            }
        };
        if gp <= 5 {
            for &a in &ids {
                if let Some(ok) = self.instance(gp, a, None) {
                    record(a, None, ok);
                }
            }
        } else {
            for &a in &ids {
                for &b in &ids {
                    if a != b {
                        if let Some(ok) = self.instance(gp, a, Some(b)) {
                            record(a, Some(b), ok);
                        }
                    }
                }
            }
        }
        GpReport {
            property: gp,
            stage: Stage::of(self.fw),
            instances,
            violation_count,
            violations,
        }
    }
}

/// Checks one property on every argument or ordered argument pair of `fw`.
pub fn check_gp(fw: &Qbafc, s: &StrengthMap, gp: u8) -> Result<GpReport> {
    check_gp_limited(fw, s, gp, usize::MAX)
}

/// As [`check_gp`], keeping at most `limit` witnesses.
pub fn check_gp_limited(fw: &Qbafc, s: &StrengthMap, gp: u8, limit: usize) -> Result<GpReport> {
    if !PROPERTIES.contains(&gp) {
        return Err(Error::UnknownProperty(gp));
    }
    for id in fw.ids() {
        if !s.contains_key(&id) {
            return Err(Error::ArgumentNotFound(id.to_string()));
        }
    }
    Ok(Context::new(fw, s).report(gp, limit))
}

pub fn check_all(fw: &Qbafc, s: &StrengthMap) -> Vec<GpReport> {
    PROPERTIES
        .map(|gp| check_gp(fw, s, gp).expect("property ids in range"))
        .collect()
}

/// Random frameworks shaped like extracted ones: class-consistent labels,
/// the default argument as the only sink, and targets of every argument
/// pairwise unrelated by reachability. Base scores are multiples of
/// `1 / tau_denominator` and out-degrees powers of two, so strengths are
/// computed without rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomFrameworkSpec {
    pub seed: u64,
    /// Inclusive range of pattern-argument counts.
    pub min_arguments: usize,
    pub max_arguments: usize,
    /// Probability that a new argument points to earlier arguments rather
    /// than to the default argument.
    pub edge_density: f64,
    pub tau_denominator: u32,
    /// Base scores range over `0..=tau_max_steps / tau_denominator`.
    pub tau_max_steps: u32,
    pub positive_class_probability: f64,
}

impl Default for RandomFrameworkSpec {
    fn default() -> Self {
        RandomFrameworkSpec {
            seed: 2024,
            min_arguments: 2,
            max_arguments: 12,
            edge_density: 0.7,
            tau_denominator: 16,
            tau_max_steps: 16,
            positive_class_probability: 0.5,
        }
    }
}

impl RandomFrameworkSpec {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.min_arguments > self.max_arguments
            || self.tau_denominator == 0
            || !prob(self.edge_density)
            || !prob(self.positive_class_probability)
        {
            return Err(Error::InvalidHyperparameter(format!("{self:?}")));
        }
        Ok(())
    }

    /// The generator for trial `trial`; independent of how trials are scheduled.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    pub fn generate(&self, rng: &mut impl Rng) -> Qbafc {
        let n = rng.gen_range(self.min_arguments..=self.max_arguments);
        let tau = |rng: &mut dyn rand::RngCore| {
            f64::from(rng.gen_range(0..=self.tau_max_steps)) / f64::from(self.tau_denominator)
        };
        let mut arguments = BTreeMap::new();
        let class = |rng: &mut dyn rand::RngCore| u8::from(rng.gen_bool(self.positive_class_probability));
        arguments.insert(ArgId::Default, Argument::new(tau(rng), class(rng)));

        let mut reach: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
        let mut edges = Vec::new();
        for u in 0..n {
            arguments.insert(ArgId::Pattern(u), Argument::new(tau(rng), class(rng)));
            let mut targets: Vec<usize> = Vec::new();
            if u > 0 && rng.gen_bool(self.edge_density) {
                let want = [1usize, 2, 4][rng.gen_range(0..3)];
                let mut pool: Vec<usize> = (0..u).collect();
                pool.shuffle(rng);
                for c in pool {
                    if targets.len() == want {
                        break;
                    }
                    if targets.iter().all(|&t| !reach[t].contains(&c) && !reach[c].contains(&t)) {
                        targets.push(c);
                    }
                }
                while ![1, 2, 4].contains(&targets.len()) {
                    targets.pop();
                }
            }
            let mut r = BTreeSet::new();
            if targets.is_empty() {
                edges.push((ArgId::Pattern(u), ArgId::Default));
            }
            for &t in &targets {
                edges.push((ArgId::Pattern(u), ArgId::Pattern(t)));
                r.insert(t);
                r.extend(reach[t].iter().copied());
            }
            reach.push(r);
        }
        Qbafc::from_parts(Variant::TopDown, arguments, edges).expect("generated frameworks are valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySummary {
    pub property: u8,
    pub verdict: Verdict,
    pub instances: usize,
    pub violations: usize,
    pub frameworks_violating: usize,
    pub first_witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpSummary {
    pub trials: usize,
    pub spec: RandomFrameworkSpec,
    pub pre: Vec<PropertySummary>,
    pub post: Vec<PropertySummary>,
}

fn empty_row() -> Vec<PropertySummary> {
    PROPERTIES
        .map(|p| PropertySummary {
            property: p,
            verdict: Verdict::Vacuous,
            instances: 0,
            violations: 0,
            frameworks_violating: 0,
            first_witness: None,
        })
        .collect()
}

fn merge(row: &mut [PropertySummary], reports: Vec<GpReport>) {
    for (acc, r) in row.iter_mut().zip(reports) {
        acc.instances += r.instances;
        acc.violations += r.violation_count;
        if r.violation_count > 0 {
            acc.frameworks_violating += 1;
            if acc.first_witness.is_none() {
                acc.first_witness = r.violations.into_iter().next();
            }
        }
    }
}

fn finish(row: &mut [PropertySummary]) {
    for acc in row {
        acc.verdict = if acc.violations > 0 {
            Verdict::Violated
        } else if acc.instances == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
    }
}

/// One random framework per trial, checked before and after post-processing.
pub fn gp_summary(spec: &RandomFrameworkSpec, trials: usize) -> Result<GpSummary> {
    spec.validate()?;
    let per_trial: Vec<(Vec<GpReport>, Vec<GpReport>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let fw = spec.generate(&mut spec.rng(t));
            let s = compute_strengths(&fw).expect("generated frameworks are acyclic");
            let (post, s2) = postprocess(&fw, &s).expect("strengths cover every argument");
            let run = |fw: &Qbafc, s: &StrengthMap| -> Vec<GpReport> {
                PROPERTIES
                    .map(|gp| check_gp_limited(fw, s, gp, 1).expect("property ids in range"))
                    .collect()
            };
            (run(&fw, &s), run(&post, &s2))
        })
        .collect();
    let mut pre = empty_row();
    let mut post = empty_row();
    for (a, b) in per_trial {
        merge(&mut pre, a);
        merge(&mut post, b);
    }
    finish(&mut pre);
    finish(&mut post);
    Ok(GpSummary {
        trials,
        spec: spec.clone(),
        pre,
        post,
    })
}

impl GpSummary {
    pub fn violated(&self, stage: Stage) -> Vec<u8> {
        let row = match stage {
            Stage::Pre => &self.pre,
            Stage::Post => &self.post,
        };
        row.iter()
            .filter(|p| p.verdict == Verdict::Violated)
            .map(|p| p.property)
            .collect()
    }

    /// `✓` no violation found, `✗` violated, `-` never applicable.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<12}", "");
        for p in PROPERTIES {
            let _ = write!(out, " {:>5}", format!("GP{p}"));
        }
        out.push('\n');
        for (name, row) in [("<QBAFc, s>", &self.pre), ("<QBAFc', s>", &self.post)] {
            let _ = write!(out, "{name:<12}");
            for p in row {
                let _ = write!(out, " {:>5}", p.verdict.symbol());
            }
            out.push('\n');
        }
        let _ = writeln!(out, "trials: {}", self.trials);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summaries always serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// The framework before post-processing.
    pub framework: Qbafc,
    /// The framework the violation was found in.
    pub checked: Qbafc,
    pub strengths: StrengthMap,
    pub witness: Witness,
    pub trial: u64,
}

fn staged(fw: &Qbafc, stage: Stage) -> (Qbafc, StrengthMap) {
    let s = compute_strengths(fw).expect("frameworks are acyclic");
    match stage {
        Stage::Pre => (fw.clone(), s),
        Stage::Post => postprocess(fw, &s).expect("strengths cover every argument"),
    }
}

fn violation(fw: &Qbafc, gp: u8, stage: Stage) -> Option<(Qbafc, StrengthMap, Witness)> {
    let (checked, s) = staged(fw, stage);
    let report = check_gp_limited(&checked, &s, gp, 1).expect("property ids in range");
    let w = report.violations.into_iter().next()?;
    Some((checked, s, w))
}

fn without(fw: &Qbafc, drop: ArgId) -> Qbafc {
    let args = fw
        .arguments()
        .iter()
        .filter(|(&id, _)| id != drop)
        .map(|(&id, a)| (id, a.clone()))
        .collect();
    let edges: Vec<_> = fw
        .edges()
        .into_iter()
        .filter(|e| e.0 != drop && e.1 != drop)
        .map(|e| (e.0, e.1))
        .collect();
    Qbafc::from_parts(fw.variant(), args, edges).expect("removing a source keeps a valid framework")
}

/// Searches random frameworks for a violation of `gp` at `stage`, then
/// removes source arguments one at a time while the violation persists.
pub fn counterexample_search(
    gp: u8,
    stage: Stage,
    spec: &RandomFrameworkSpec,
    budget: usize,
) -> Result<Option<Counterexample>> {
    if !PROPERTIES.contains(&gp) {
        return Err(Error::UnknownProperty(gp));
    }
    spec.validate()?;
    for trial in 0..budget as u64 {
        let mut fw = spec.generate(&mut spec.rng(trial));
        if violation(&fw, gp, stage).is_none() {
            continue;
        }
        loop {
            let sources: Vec<ArgId> = fw
                .ids()
                .filter(|&a| !a.is_default() && fw.attackers(a).is_empty() && fw.supporters(a).is_empty())
                .collect();
            let smaller = sources
                .into_iter()
                .map(|a| without(&fw, a))
                .find(|cand| violation(cand, gp, stage).is_some());
            match smaller {
                Some(next) => fw = next,
                None => break,
            }
        }
        let (checked, strengths, witness) = violation(&fw, gp, stage).expect("pruning keeps a violation");
        return Ok(Some(Counterexample {
            framework: fw,
            checked,
            strengths,
            witness,
            trial,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn strengths(pairs: &[(usize, f64)]) -> StrengthMap {
        pairs.iter().map(|&(i, v)| (ArgId::Pattern(i), v)).collect()
    }

    #[test]
    fn set_order() {
        let s = strengths(&[(0, 0.4), (1, 0.6), (2, 0.5)]);
        let (a, b, c) = (ArgId::Pattern(0), ArgId::Pattern(1), ArgId::Pattern(2));
        assert!(set_leq(&[], &[a], &s));
        assert!(set_leq(&[], &[], &s));
        assert!(set_lt(&[a], &[b], &s));
        assert!(!set_leq(&[b], &[a], &s));
        assert!(set_leq(&[a, c], &[a, c], &s) && !set_lt(&[a, c], &[c, a], &s));
        assert!(!set_leq(&[a, c], &[b], &s));
        assert!(set_lt(&[a], &[a, c], &s));
    }

    #[test]
    fn running_example_gp1_holds() {
        let (model, doc) = fixtures::running_example();
        let fw = crate::qbaf::build_qbafc(&model, &doc, Variant::TopDown);
        let s = compute_strengths(&fw).unwrap();
        let r = check_gp(&fw, &s, 1).unwrap();
        assert_eq!(r.verdict(), Verdict::Holds);
        assert_eq!(r.instances, 2);
        assert!(matches!(check_gp(&fw, &s, 12), Err(Error::UnknownProperty(12))));
    }

    #[test]
    fn appendix_counterexamples() {
        let (fw, s) = fixtures::appendix_counterexample();
        let r2 = check_gp(&fw, &s, 2).unwrap();
        assert!(r2.violations.iter().any(|w| w.alpha.id == ArgId::Pattern(2)));
        for w in &r2.violations {
            assert!(w.revalidates(&fw, &s));
        }
        let r3 = check_gp(&fw, &s, 3).unwrap();
        assert!(r3.violations.iter().any(|w| w.alpha.id == ArgId::Pattern(1)));

        let (post, s2) = postprocess(&fw, &s).unwrap();
        for gp in 1..=9 {
            assert_eq!(check_gp(&post, &s2, gp).unwrap().violations, vec![], "GP{gp}");
        }
        let pair = |w: &Witness| (w.alpha.id, w.beta.as_ref().unwrap().id);
        let r10 = check_gp(&post, &s2, 10).unwrap();
        assert!(r10.violations.iter().any(|w| pair(w) == (ArgId::Pattern(4), ArgId::Pattern(5))));
        let r11 = check_gp(&post, &s2, 11).unwrap();
        assert!(r11.violations.iter().any(|w| pair(w) == (ArgId::Pattern(7), ArgId::Pattern(6))));
    }

    #[test]
    fn identical_arguments_satisfy_gp6() {
        let mut args = BTreeMap::new();
        args.insert(ArgId::Default, Argument::new(0.5, 1));
        args.insert(ArgId::Pattern(0), Argument::new(0.25, 0));
        args.insert(ArgId::Pattern(1), Argument::new(0.25, 0));
        let fw = Qbafc::from_parts(
            Variant::TopDown,
            args,
            [(ArgId::Pattern(0), ArgId::Default), (ArgId::Pattern(1), ArgId::Default)],
        )
        .unwrap();
        let s = compute_strengths(&fw).unwrap();
        let r = check_gp(&fw, &s, 6).unwrap();
        assert_eq!(r.verdict(), Verdict::Holds);
        assert_eq!(r.instances, 2);
    }

    #[test]
    fn zero_trials_are_vacuous() {
        let summary = gp_summary(&RandomFrameworkSpec::default(), 0).unwrap();
        assert!(summary.pre.iter().chain(&summary.post).all(|p| p.verdict == Verdict::Vacuous));
        assert!(summary.to_table().contains("GP11"));
    }

    #[test]
    fn generated_frameworks_are_well_formed() {
        let spec = RandomFrameworkSpec::default();
        for t in 0..200 {
            let fw = spec.generate(&mut spec.rng(t));
            assert_eq!(fw.out_degree(ArgId::Default), 0);
            for id in fw.ids().filter(|a| !a.is_default()) {
                assert!([1, 2, 4].contains(&fw.out_degree(id)));
            }
        }
        assert_eq!(spec.generate(&mut spec.rng(5)), spec.generate(&mut spec.rng(5)));
    }

    #[test]
    fn gp1_has_no_counterexample() {
        let spec = RandomFrameworkSpec::default();
        assert!(counterexample_search(1, Stage::Post, &spec, 200).unwrap().is_none());
        let found = counterexample_search(10, Stage::Post, &spec, 5000).unwrap().unwrap();
        assert!(found.witness.revalidates(&found.checked, &found.strengths));
    }
}
