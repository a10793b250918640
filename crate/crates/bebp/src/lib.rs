//! Boundary-pattern poisoning attacks against binary intrusion-detection
//! classifiers.
//!
//! The library is organized around a chronic poisoning loop: detect edge
//! pattern points of the normal training data ([`geometry`]), walk them
//! outwards against a black-box label oracle until they hug the decision
//! boundary ([`attack`]), inject the survivors as normal-labelled training
//! samples under a poisoning budget, retrain the victim ([`victims`]) and
//! repeat. [`data`] provides KDD-style ingestion and preprocessing, [`eval`]
//! the metrics and experiment harness, and [`cli`] the command-line front end.

pub mod attack;
pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod victims;

pub use error::{Error, Result};
