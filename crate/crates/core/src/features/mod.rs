//! Per-segment node features: color statistics, texture (LBP + GLCM) and
//! rotation-invariant shape moments.

mod color_stats;
mod glcm;
mod lbp;
mod moments;

pub use color_stats::{color_statistics, rgb_average};
pub use glcm::glcm_features;
pub use lbp::lbp_histogram;
pub use moments::shape_moments;

use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};
use crate::segmentation::{PixelSet, SegmentMap};
use serde::{Deserialize, Serialize};

/// Which descriptors a node carries. `All` concatenates color, texture and
/// shape in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    RgbAvg,
    Color,
    Texture,
    Shape,
    All,
}

impl FeatureSet {
    pub fn dims(self) -> usize {
        match self {
            FeatureSet::RgbAvg => 3,
            FeatureSet::Color => 27,
            FeatureSet::Texture => 30,
            FeatureSet::Shape => 38,
            FeatureSet::All => 27 + 30 + 38,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::RgbAvg => "rgb_avg",
            FeatureSet::Color => "color",
            FeatureSet::Texture => "texture",
            FeatureSet::Shape => "shape",
            FeatureSet::All => "all",
        }
    }
}

/// Row-major n x d feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFeatureMatrix {
    pub n: usize,
    pub d: usize,
    pub values: Vec<f64>,
}

impl NodeFeatureMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.len());
        let mut values = Vec::with_capacity(n * d);
        for r in &rows {
            assert_eq!(r.len(), d, "ragged feature rows");
            values.extend_from_slice(r);
        }
        NodeFeatureMatrix { n, d, values }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n).map(|i| self.row(i))
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.d);
        self.values.extend_from_slice(row);
        self.n += 1;
    }
}

/// Feature vector of one pixel region under the given spec.
pub fn region_features(image: &ImageBuffer, region: &[(u32, u32)], spec: FeatureSet) -> Result<Vec<f64>> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let mut out = Vec::with_capacity(spec.dims());
    match spec {
        FeatureSet::RgbAvg => out.extend_from_slice(&rgb_average(image, region)?),
        FeatureSet::Color => out.extend_from_slice(&color_statistics(image, region)?),
        FeatureSet::Texture => {
            out.extend_from_slice(&lbp_histogram(image, region)?);
            out.extend_from_slice(&glcm_features(image, region)?);
        }
        FeatureSet::Shape => out.extend_from_slice(&shape_moments(region)?),
        FeatureSet::All => {
            out.extend_from_slice(&color_statistics(image, region)?);
            out.extend_from_slice(&lbp_histogram(image, region)?);
            out.extend_from_slice(&glcm_features(image, region)?);
            out.extend_from_slice(&shape_moments(region)?);
        }
    }
    debug_assert_eq!(out.len(), spec.dims());
    Ok(out)
}

/// Feature matrix over all segments; row i describes segment i.
pub fn extract(image: &ImageBuffer, map: &SegmentMap, spec: FeatureSet) -> Result<NodeFeatureMatrix> {
    let regions = map.regions();
    let mut rows = Vec::with_capacity(regions.len());
    for (i, region) in regions.iter().enumerate() {
        let row = region_features(image, region, spec)
            .map_err(|e| Error::validation(format!("segment {i}: {e}")))?;
        rows.push(row);
    }
    Ok(NodeFeatureMatrix::from_rows(rows))
}

/// Segment features plus the two virtual-node vectors: the lesion region
/// (mask = 1) and the surrounding background.
pub fn extract_with_virtual(
    image: &ImageBuffer,
    map: &SegmentMap,
    spec: FeatureSet,
    lesion: &PixelSet,
    background: &PixelSet,
) -> Result<(NodeFeatureMatrix, Vec<f64>, Vec<f64>)> {
    let matrix = extract(image, map, spec)?;
    let lesion_vec = region_features(image, lesion, spec)
        .map_err(|e| Error::validation(format!("lesion virtual node: {e}")))?;
    let background_vec = region_features(image, background, spec)
        .map_err(|e| Error::validation(format!("background virtual node: {e}")))?;
    Ok((matrix, lesion_vec, background_vec))
}
