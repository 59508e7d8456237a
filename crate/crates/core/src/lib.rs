//! Pattern-based logistic regression text classifiers with faithful
//! argumentative explanations.
//!
//! A trained model and a document are compiled into a bipolar argumentation
//! framework ([`qbaf`]) whose default argument carries the logit. Strengths,
//! post-processing, group property audits ([`gp`]), shallow and deep
//! explanations ([`explain`]) and statistics ([`analysis`]) build on it.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod explain;
pub mod fixtures;
pub mod gp;
pub mod miner;
pub mod pattern;
pub mod plr;
pub mod qbaf;
pub mod synthetic;

pub use error::{Error, Result};
