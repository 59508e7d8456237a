//! Pattern-based logistic regression: binary pattern features, full-batch
//! gradient-descent training and flat per-pattern contributions.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Document};
use crate::error::{Error, Result};
use crate::pattern::{first_span, matches, MatchSpan, Pattern};

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `P >= 0.5` predicts class 1.
pub fn class_from_probability(p_positive: f64) -> u8 {
    u8::from(p_positive >= 0.5)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<u8>);

impl FeatureVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Format("feature bits must be 0 or 1".into()));
        }
        Ok(FeatureVector(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlrModel {
    patterns: Vec<Pattern>,
    weights: Vec<f64>,
    bias: f64,
    pub meta: serde_json::Value,
}

impl PlrModel {
    pub fn new(patterns: Vec<Pattern>, weights: Vec<f64>, bias: f64) -> Result<Self> {
        if patterns.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: patterns.len(),
                got: weights.len(),
            });
        }
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Format("model parameters must be finite".into()));
        }
        let mut seen = HashSet::new();
        for p in &patterns {
            if !seen.insert(p) {
                return Err(Error::DuplicatePattern(p.encode()));
            }
        }
        Ok(PlrModel {
            patterns,
            weights,
            bias,
            meta: serde_json::Value::Object(Default::default()),
        })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn extract_features(&self, doc: &Document) -> FeatureVector {
        FeatureVector(self.patterns.iter().map(|p| u8::from(matches(p, doc))).collect())
    }

    pub fn logit(&self, f: &FeatureVector) -> Result<f64> {
        if f.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.weights.len(),
                got: f.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(f.bits())
            .map(|(w, &b)| w * f64::from(b))
            .sum::<f64>()
            + self.bias)
    }

    /// `P(y = 1 | x)`.
    pub fn predict_proba(&self, f: &FeatureVector) -> Result<f64> {
        self.logit(f).map(sigmoid)
    }

    pub fn predict(&self, doc: &Document) -> Prediction {
        let f = self.extract_features(doc);
        let p1 = self
            .predict_proba(&f)
            .expect("features extracted from this model have matching length");
        Prediction::from_positive_probability(p1)
    }
}

pub fn extract_features(model: &PlrModel, doc: &Document) -> FeatureVector {
    model.extract_features(doc)
}

/// A predicted class with the probability assigned to that class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class: u8,
    pub probability: f64,
}

impl Prediction {
    pub fn from_positive_probability(p1: f64) -> Self {
        let class = class_from_probability(p1);
        Prediction {
            class,
            probability: if class == 1 { p1 } else { 1.0 - p1 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub epochs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            l2_lambda: 1e-3,
            epochs: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub model: PlrModel,
    pub final_loss: f64,
}

/// Mean binary cross-entropy plus `lambda / 2 * |w|^2`, with gradients for
/// the weights and the (unregularized) bias.
pub fn loss_and_gradient(
    features: &[FeatureVector],
    labels: &[u8],
    weights: &[f64],
    bias: f64,
    l2_lambda: f64,
) -> (f64, Vec<f64>, f64) {
    let n = features.len() as f64;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    let mut loss = 0.0;
    for (f, &y) in features.iter().zip(labels) {
        let z: f64 = f.active().map(|i| weights[i]).sum::<f64>() + bias;
        let y = f64::from(y);
        // softplus(z) - y z, evaluated stably
        loss += z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z;
        let r = sigmoid(z) - y;
        for i in f.active() {
            grad_w[i] += r;
        }
        grad_b += r;
    }
    loss /= n;
    grad_b /= n;
    let mut reg = 0.0;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2_lambda * w;
        reg += w * w;
    }
    (loss + 0.5 * l2_lambda * reg, grad_w, grad_b)
}

pub fn train(data: &Dataset, patterns: &[Pattern], config: &TrainConfig) -> Result<TrainedModel> {
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::InvalidHyperparameter(format!(
            "learning rate must be positive, got {}",
            config.learning_rate
        )));
    }
    if !(config.l2_lambda.is_finite() && config.l2_lambda >= 0.0) {
        return Err(Error::InvalidHyperparameter(format!(
            "l2 lambda must be non-negative, got {}",
            config.l2_lambda
        )));
    }
    let labels = data.labels()?;
    if !labels.contains(&0) || !labels.contains(&1) {
        return Err(Error::SingleClass);
    }
    let mut model = PlrModel::new(patterns.to_vec(), vec![0.0; patterns.len()], 0.0)?;
    let features: Vec<FeatureVector> = data
        .documents
        .par_iter()
        .map(|d| model.extract_features(d))
        .collect();

    let mut weights = vec![0.0; patterns.len()];
    let mut bias = 0.0;
    for _ in 0..config.epochs {
        let (_, gw, gb) = loss_and_gradient(&features, &labels, &weights, bias, config.l2_lambda);
        for (w, g) in weights.iter_mut().zip(&gw) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * gb;
    }
    let (final_loss, _, _) = loss_and_gradient(&features, &labels, &weights, bias, config.l2_lambda);
    model.weights = weights;
    model.bias = bias;
    model.meta = serde_json::json!({
        "training": config,
        "final_loss": final_loss,
        "documents": data.len(),
    });
    Ok(TrainedModel { model, final_loss })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlxItem {
    pub pattern_index: usize,
    pub pattern: String,
    pub span: Option<MatchSpan>,
    pub span_text: String,
    pub contribution: f64,
}

/// Top-`k` matched patterns by signed contribution to the predicted class.
pub fn flx(model: &PlrModel, doc: &Document, k: usize) -> Vec<FlxItem> {
    let class = model.predict(doc).class;
    flx_for_class(model, doc, k, class)
}

/// As [`flx`], with contributions taken toward `class`.
pub fn flx_for_class(model: &PlrModel, doc: &Document, k: usize, class: u8) -> Vec<FlxItem> {
    let sign = if class == 1 { 1.0 } else { -1.0 };
    let f = model.extract_features(doc);
    let mut items: Vec<FlxItem> = f
        .active()
        .filter(|&i| model.weights[i] != 0.0)
        .map(|i| {
            let pattern = &model.patterns[i];
            let span = first_span(pattern, doc);
            FlxItem {
                pattern_index: i,
                pattern: pattern.encode(),
                span_text: span.as_ref().map(|s| s.text(doc)).unwrap_or_default(),
                span,
                contribution: sign * model.weights[i],
            }
        })
        .collect();
    items.sort_by(|a, b| {
        b.contribution
            .total_cmp(&a.contribution)
            .then(a.pattern_index.cmp(&b.pattern_index))
    });
    items.truncate(k);
    items
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Real {
    Text(String),
    Number(f64),
}

impl Real {
    fn value(&self) -> Result<f64> {
        match self {
            Real::Number(v) => Ok(*v),
            Real::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("`{s}` is not a real number"))),
        }
    }
}

pub(crate) fn real_to_string(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelRecord {
    patterns: Vec<Pattern>,
    weights: Vec<Real>,
    bias: Real,
    #[serde(default)]
    meta: serde_json::Value,
}

pub fn model_to_json(model: &PlrModel) -> String {
    let record = ModelRecord {
        patterns: model.patterns.clone(),
        weights: model.weights.iter().map(|&w| Real::Text(real_to_string(w))).collect(),
        bias: Real::Text(real_to_string(model.bias)),
        meta: model.meta.clone(),
    };
    serde_json::to_string_pretty(&record).expect("models always serialize")
}

pub fn parse_model(text: &str) -> Result<PlrModel> {
    let record: ModelRecord =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("model file: {e}")))?;
    let weights = record.weights.iter().map(Real::value).collect::<Result<Vec<_>>>()?;
    let mut model = PlrModel::new(record.patterns, weights, record.bias.value()?)?;
    model.meta = record.meta;
    Ok(model)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<PlrModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

pub fn save_model(model: &PlrModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model) + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(0.3) - 0.5744).abs() < 5e-5);
        assert!((sigmoid(5.0) + sigmoid(-5.0) - 1.0).abs() < 1e-12);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
    }

    #[test]
    fn running_example_features_and_probability() {
        let (model, doc) = fixtures::running_example();
        let f = model.extract_features(&doc);
        assert_eq!(f.bits(), &[1, 1, 1, 1]);
        let p = model.predict_proba(&f).unwrap();
        assert!((p - 0.5744).abs() < 5e-5);
        assert_eq!(class_from_probability(p), 1);
    }

    #[test]
    fn degenerate_inputs() {
        let (model, _) = fixtures::running_example();
        let empty = Document::new("e", vec![], None);
        assert_eq!(model.extract_features(&empty).bits(), &[0, 0, 0, 0]);
        let f = model.extract_features(&empty);
        assert_eq!(model.predict_proba(&f).unwrap(), sigmoid(-0.1));
        let none = PlrModel::new(vec![], vec![], 0.0).unwrap();
        assert!(none.extract_features(&empty).is_empty());
        assert_eq!(none.predict(&empty), Prediction { class: 1, probability: 0.5 });
        assert!(matches!(
            model.predict_proba(&FeatureVector::new(vec![1]).unwrap()),
            Err(Error::LengthMismatch { expected: 4, got: 1 })
        ));
    }

    #[test]
    fn flx_running_example_order() {
        let (model, doc) = fixtures::running_example();
        let items = flx(&model, &doc, 4);
        let order: Vec<usize> = items.iter().map(|i| i.pattern_index).collect();
        assert_eq!(order, vec![2, 3, 1, 0]);
        let contributions: Vec<f64> = items.iter().map(|i| i.contribution).collect();
        assert_eq!(contributions, vec![1.2, 0.5, -0.4, -0.9]);
        assert_eq!(items[0].span_text, "better");

        let flipped = flx_for_class(&model, &doc, 4, 0);
        let order: Vec<usize> = flipped.iter().map(|i| i.pattern_index).collect();
        assert_eq!(order, vec![0, 1, 3, 2]);
        assert_eq!(flipped[0].contribution, 0.9);
        assert!(flx(&model, &doc, 0).is_empty());
    }

    #[test]
    fn duplicate_patterns_rejected() {
        let p = Pattern::simple(&["TEXT:a"], 1).unwrap();
        assert!(matches!(
            PlrModel::new(vec![p.clone(), p], vec![1.0, 2.0], 0.0),
            Err(Error::DuplicatePattern(_))
        ));
    }

    #[test]
    fn model_file_roundtrip_is_exact() {
        let patterns = vec![Pattern::simple(&["TEXT:a"], 1).unwrap(), Pattern::simple(&["TEXT:b"], 0).unwrap()];
        let model = PlrModel::new(patterns, vec![0.1 + 0.2, -1.0 / 3.0], 1e-300).unwrap();
        let back = parse_model(&model_to_json(&model)).unwrap();
        assert_eq!(back.weights(), model.weights());
        assert_eq!(back.bias(), model.bias());
        let numeric = r#"{"patterns": [{"slots": [["TEXT:a"]], "gaps": 0}], "weights": [0.5], "bias": -1}"#;
        assert_eq!(parse_model(numeric).unwrap().weights(), &[0.5]);
    }

    #[test]
    fn hyperparameters_validated() {
        let data = fixtures::toy_separable();
        let pats = vec![Pattern::simple(&["TEXT:spamword"], 0).unwrap()];
        let bad = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(matches!(train(&data, &pats, &bad), Err(Error::InvalidHyperparameter(_))));
        let one_class = Dataset::new(vec![Document::from_words("a", "x", Some(1)).unwrap()]).unwrap();
        assert!(matches!(
            train(&one_class, &pats, &TrainConfig::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn zero_epochs_returns_initial_model() {
        let data = fixtures::toy_separable();
        let pats = vec![Pattern::simple(&["TEXT:spamword"], 0).unwrap()];
        let cfg = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        let trained = train(&data, &pats, &cfg).unwrap();
        assert_eq!(trained.model.weights(), &[0.0]);
        assert_eq!(trained.model.bias(), 0.0);
        assert!((trained.final_loss - std::f64::consts::LN_2).abs() < 1e-12);
    }
}
