//! Framework statistics, sufficiency of supporters, classification metrics
//! and Pearson correlation.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qbaf::{ArgId, Qbafc, StrengthMap};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkStats {
    pub arguments: usize,
    /// Arguments supporting class 1.
    pub positive: usize,
    pub negative: usize,
    pub relations: usize,
    /// Relations whose target is not the default argument.
    pub relations_without_default: usize,
    pub attacks: usize,
    pub supports: usize,
}

impl FrameworkStats {
    pub const MEASURES: [&'static str; 7] = ["|A|", "|A+|", "|A-|", "|R|", "|R\\d|", "|R-|", "|R+|"];

    pub fn values(&self) -> [usize; 7] {
        [
            self.arguments,
            self.positive,
            self.negative,
            self.relations,
            self.relations_without_default,
            self.attacks,
            self.supports,
        ]
    }
}

pub fn framework_stats(fw: &Qbafc) -> FrameworkStats {
    let positive = fw.arguments().values().filter(|a| a.class == 1).count();
    let edges = fw.edges();
    FrameworkStats {
        arguments: fw.len(),
        positive,
        negative: fw.len() - positive,
        relations: edges.len(),
        relations_without_default: edges.iter().filter(|e| !e.1.is_default()).count(),
        attacks: fw.attacks().len(),
        supports: fw.supports().len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConfusionCell {
    TP,
    TN,
    FP,
    FN,
}

impl ConfusionCell {
    pub const ALL: [ConfusionCell; 4] = [ConfusionCell::TP, ConfusionCell::TN, ConfusionCell::FP, ConfusionCell::FN];

    pub fn new(truth: u8, predicted: u8) -> Self {
        match (truth, predicted) {
            (1, 1) => ConfusionCell::TP,
            (0, 0) => ConfusionCell::TN,
            (0, _) => ConfusionCell::FP,
            _ => ConfusionCell::FN,
        }
    }
}

impl fmt::Display for ConfusionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub count: usize,
    pub mean: [f64; 7],
    /// Sample standard deviation; 0 for a single member.
    pub sd: [f64; 7],
}

fn group(members: &[FrameworkStats]) -> GroupStats {
    let n = members.len() as f64;
    let mut mean = [0.0; 7];
    for m in members {
        for (acc, v) in mean.iter_mut().zip(m.values()) {
            *acc += v as f64;
        }
    }
    for v in &mut mean {
        *v /= n;
    }
    let mut sd = [0.0; 7];
    if members.len() > 1 {
        for m in members {
            for ((acc, v), mu) in sd.iter_mut().zip(m.values()).zip(mean) {
                *acc += (v as f64 - mu).powi(2);
            }
        }
        for v in &mut sd {
            *v = (*v / (n - 1.0)).sqrt();
        }
    }
    GroupStats {
        count: members.len(),
        mean,
        sd,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub all: Option<GroupStats>,
    /// Only cells with members are present.
    pub cells: BTreeMap<ConfusionCell, GroupStats>,
}

/// Means and standard deviations of each measure, overall and per confusion cell.
pub fn aggregate_stats(items: &[(FrameworkStats, u8, u8)]) -> StatsReport {
    if items.is_empty() {
        return StatsReport::default();
    }
    let all: Vec<FrameworkStats> = items.iter().map(|i| i.0).collect();
    let mut by_cell: BTreeMap<ConfusionCell, Vec<FrameworkStats>> = BTreeMap::new();
    for &(st, truth, pred) in items {
        by_cell.entry(ConfusionCell::new(truth, pred)).or_default().push(st);
    }
    StatsReport {
        all: Some(group(&all)),
        cells: by_cell.into_iter().map(|(c, m)| (c, group(&m))).collect(),
    }
}

impl StatsReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<8}", "measure");
        let mut cols: Vec<(String, Option<&GroupStats>)> = vec![("All".into(), self.all.as_ref())];
        for c in ConfusionCell::ALL {
            cols.push((c.to_string(), self.cells.get(&c)));
        }
        for (name, g) in &cols {
            let head = match g {
                Some(g) => format!("{name} (n={})", g.count),
                None => name.clone(),
            };
            let _ = write!(out, " {head:>16}");
        }
        out.push('\n');
        for (m, label) in FrameworkStats::MEASURES.iter().enumerate() {
            let _ = write!(out, "{label:<8}");
            for (_, g) in &cols {
                let cell = match g {
                    Some(g) => format!("{:.2} ± {:.2}", g.mean[m], g.sd[m]),
                    None => "-".into(),
                };
                let _ = write!(out, " {cell:>16}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinK {
    K(usize),
    Unreachable,
}

impl MinK {
    pub fn within(self, k: usize) -> bool {
        matches!(self, MinK::K(m) if m <= k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficiencyResult {
    pub id: ArgId,
    pub min_k: MinK,
}

/// Fewest supporters of `target` that, with all its attackers, keep its
/// strength strictly positive. Supporters are taken in decreasing order of
/// strength over out-degree.
pub fn sufficiency_min_k(target: ArgId, fw: &Qbafc, s: &StrengthMap) -> Result<SufficiencyResult> {
    let arg = fw.argument(target).ok_or_else(|| Error::ArgumentNotFound(target.to_string()))?;
    let share = |b: ArgId| s[&b] / fw.out_degree(b) as f64;
    let attack: f64 = fw.attackers(target).into_iter().map(share).sum();
    let mut total = arg.tau - attack;
    let mut gains: Vec<f64> = fw.supporters(target).into_iter().map(share).collect();
    gains.sort_by(|a, b| b.total_cmp(a));
    let mut min_k = MinK::Unreachable;
    if total > 0.0 {
        min_k = MinK::K(0);
    } else {
        for (i, g) in gains.iter().enumerate() {
            total += g;
            if total > 0.0 {
                min_k = MinK::K(i + 1);
                break;
            }
        }
    }
    Ok(SufficiencyResult { id: target, min_k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Default,
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipFilter {
    All,
    Flipped,
    NotFlipped,
}

impl TargetKind {
    pub const ALL: [TargetKind; 2] = [TargetKind::Default, TargetKind::Intermediate];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Default => "default",
            TargetKind::Intermediate => "intermediate",
        }
    }
}

impl FlipFilter {
    pub const ALL: [FlipFilter; 3] = [FlipFilter::All, FlipFilter::Flipped, FlipFilter::NotFlipped];

    pub fn name(self) -> &'static str {
        match self {
            FlipFilter::All => "all",
            FlipFilter::Flipped => "flipped",
            FlipFilter::NotFlipped => "not_flipped",
        }
    }
}

/// A framework before and after post-processing.
#[derive(Debug, Clone)]
pub struct FrameworkPair {
    pub pre: Qbafc,
    pub post: Qbafc,
    pub post_strengths: StrengthMap,
}

/// Percentage of qualifying arguments sufficiently explained by at most `k`
/// supporters, for `k` from 0 to the largest supporter count involved. The
/// percentage is over the arguments passing `flip`.
pub fn sufficiency_curve(frameworks: &[FrameworkPair], target: TargetKind, flip: FlipFilter) -> Vec<(usize, f64)> {
    let mut results: Vec<MinK> = Vec::new();
    let mut widest = 0;
    for f in frameworks {
        for id in f.post.ids() {
            let qualifies = match target {
                TargetKind::Default => id.is_default(),
                TargetKind::Intermediate => {
                    !id.is_default() && (!f.post.attackers(id).is_empty() || !f.post.supporters(id).is_empty())
                }
            };
            if !qualifies {
                continue;
            }
            let flipped = f.pre.arguments()[&id].class != f.post.arguments()[&id].class;
            let keep = match flip {
                FlipFilter::All => true,
                FlipFilter::Flipped => flipped,
                FlipFilter::NotFlipped => !flipped,
            };
            if keep {
                widest = widest.max(f.post.supporters(id).len());
                let r = sufficiency_min_k(id, &f.post, &f.post_strengths).expect("id taken from the framework");
                results.push(r.min_k);
            }
        }
    }
    if results.is_empty() {
        return Vec::new();
    }
    let total = results.len() as f64;
    (0..=widest)
        .map(|k| {
            let ok = results.iter().filter(|m| m.within(k)).count();
            (k, 100.0 * ok as f64 / total)
        })
        .collect()
}

pub fn curve_to_csv(curve: &[(usize, f64)]) -> String {
    let mut out = String::from("k,percentage\n");
    for (k, p) in curve {
        let _ = writeln!(out, "{k},{p}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    pub accuracy: f64,
    /// Indexed by class.
    pub per_class: [ClassMetrics; 2],
    pub macro_precision: f64,
    pub macro_recall: f64,
    /// Harmonic mean of macro precision and macro recall.
    pub macro_f1: f64,
    /// Plain average of the two per-class F1 scores.
    pub mean_class_f1: f64,
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    /// Quantities whose denominator was zero and were reported as 0.
    pub zero_division: Vec<String>,
}

pub fn metrics(pairs: &[(u8, u8)]) -> Result<Metrics> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut flags = Vec::new();
    let mut ratio = |num: f64, den: f64, what: String| {
        if den == 0.0 {
            flags.push(what);
            0.0
        } else {
            num / den
        }
    };
    let mut per_class = [ClassMetrics {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        support: 0,
    }; 2];
    let (mut tp_sum, mut fp_sum, mut fn_sum) = (0.0, 0.0, 0.0);
    for c in 0..2u8 {
        let tp = pairs.iter().filter(|&&(t, p)| t == c && p == c).count() as f64;
        let fp = pairs.iter().filter(|&&(t, p)| t != c && p == c).count() as f64;
        let fneg = pairs.iter().filter(|&&(t, p)| t == c && p != c).count() as f64;
        tp_sum += tp;
        fp_sum += fp;
        fn_sum += fneg;
        let precision = ratio(tp, tp + fp, format!("precision_{c}"));
        let recall = ratio(tp, tp + fneg, format!("recall_{c}"));
        let f1 = ratio(2.0 * precision * recall, precision + recall, format!("f1_{c}"));
        per_class[c as usize] = ClassMetrics {
            precision,
            recall,
            f1,
            support: (tp + fneg) as usize,
        };
    }
    let macro_precision = (per_class[0].precision + per_class[1].precision) / 2.0;
    let macro_recall = (per_class[0].recall + per_class[1].recall) / 2.0;
    let macro_f1 = ratio(
        2.0 * macro_precision * macro_recall,
        macro_precision + macro_recall,
        "macro_f1".into(),
    );
    let micro_precision = ratio(tp_sum, tp_sum + fp_sum, "micro_precision".into());
    let micro_recall = ratio(tp_sum, tp_sum + fn_sum, "micro_recall".into());
    let micro_f1 = ratio(
        2.0 * micro_precision * micro_recall,
        micro_precision + micro_recall,
        "micro_f1".into(),
    );
    let correct = pairs.iter().filter(|(t, p)| t == p).count();
    Ok(Metrics {
        n: pairs.len(),
        accuracy: correct as f64 / pairs.len() as f64,
        per_class,
        macro_precision,
        macro_recall,
        macro_f1,
        mean_class_f1: (per_class[0].f1 + per_class[1].f1) / 2.0,
        micro_precision,
        micro_recall,
        micro_f1,
        zero_division: flags,
    })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
