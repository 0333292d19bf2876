//! Image-to-graph transformation and graph-level anomaly detection for
//! dermoscopic image corpora.
//!
//! The pipeline turns each image into an attributed graph (segmentation,
//! per-segment color/texture/shape features, edge construction, optional
//! virtual nodes), reduces features with PCA, and scores graphs with a
//! GIN-ensemble one-class detector trained from scratch, under
//! unsupervised, weakly supervised, and fully supervised regimes.

pub mod color;
pub mod dataset;
pub mod error;
pub mod features;
pub mod segmentation;

pub use error::{Error, Result};
