//! Image partitioning into segments: patch grids and SLICO superpixels,
//! with optional restriction to a lesion mask.

mod patch;
mod slico;

pub use patch::patch_segment;
pub use slico::slico_segment;

use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Pixel coordinates, (x, y).
pub type PixelSet = Vec<(u32, u32)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentInfo {
    pub size: usize,
    /// Mean pixel coordinate (x, y).
    pub centroid: (f64, f64),
    /// Inclusive bounds (x0, y0, x1, y1).
    pub bbox: (usize, usize, usize, usize),
}

/// Per-pixel segment labels plus per-segment summaries. Label -1 marks
/// excluded pixels; all other labels are dense in 0..n.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMap {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<i32>,
    pub segments: Vec<SegmentInfo>,
}

impl SegmentMap {
    pub fn n(&self) -> usize {
        self.segments.len()
    }

    #[inline]
    pub fn label(&self, x: usize, y: usize) -> i32 {
        self.labels[y * self.width + x]
    }

    /// Build from a raw label raster, compacting labels to 0..n in ascending
    /// order of the original values and dropping empty ones.
    pub fn from_labels(width: usize, height: usize, raw: Vec<i32>) -> Result<SegmentMap> {
        assert_eq!(raw.len(), width * height);
        let max_label = raw.iter().copied().max().unwrap_or(-1);
        if max_label < 0 {
            return Err(Error::validation("segmentation produced no segments"));
        }
        let mut remap = vec![-1i32; (max_label + 1) as usize];
        let mut next = 0;
        for &l in &raw {
            if l >= 0 && remap[l as usize] < 0 {
                remap[l as usize] = -2; // seen
            }
        }
        for slot in remap.iter_mut() {
            if *slot == -2 {
                *slot = next;
                next += 1;
            }
        }
        let n = next as usize;
        let mut labels = raw;
        for l in labels.iter_mut() {
            if *l >= 0 {
                *l = remap[*l as usize];
            }
        }

        let mut sizes = vec![0usize; n];
        let mut sx = vec![0f64; n];
        let mut sy = vec![0f64; n];
        let mut bbox = vec![(usize::MAX, usize::MAX, 0usize, 0usize); n];
        for y in 0..height {
            for x in 0..width {
                let l = labels[y * width + x];
                if l < 0 {
                    continue;
                }
                let k = l as usize;
                sizes[k] += 1;
                sx[k] += x as f64;
                sy[k] += y as f64;
                let b = &mut bbox[k];
                b.0 = b.0.min(x);
                b.1 = b.1.min(y);
                b.2 = b.2.max(x);
                b.3 = b.3.max(y);
            }
        }
        let segments = (0..n)
            .map(|k| SegmentInfo {
                size: sizes[k],
                centroid: (sx[k] / sizes[k] as f64, sy[k] / sizes[k] as f64),
                bbox: bbox[k],
            })
            .collect();
        Ok(SegmentMap {
            width,
            height,
            labels,
            segments,
        })
    }

    /// Pixel lists per segment, one scan.
    pub fn regions(&self) -> Vec<PixelSet> {
        let mut out: Vec<PixelSet> = self
            .segments
            .iter()
            .map(|s| Vec::with_capacity(s.size))
            .collect();
        for y in 0..self.height {
            for x in 0..self.width {
                let l = self.labels[y * self.width + x];
                if l >= 0 {
                    out[l as usize].push((x as u32, y as u32));
                }
            }
        }
        out
    }

    /// Export the labels as a 16-bit PNG (label + 1; 0 marks excluded) plus a
    /// JSON sidecar with sizes and centroids.
    pub fn save(&self, png_path: &Path, json_path: &Path) -> Result<()> {
        if self.n() > u16::MAX as usize - 1 {
            return Err(Error::validation("too many segments for 16-bit export"));
        }
        let raw: Vec<u16> = self.labels.iter().map(|&l| (l + 1) as u16).collect();
        let img =
            image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::from_raw(
                self.width as u32,
                self.height as u32,
                raw,
            )
            .unwrap();
        img.save(png_path).map_err(|e| Error::Image {
            path: png_path.to_path_buf(),
            source: e,
        })?;
        let sidecar = serde_json::to_string_pretty(&self.segments)?;
        std::fs::write(json_path, sidecar).map_err(|e| Error::io(json_path, e))
    }

    pub fn load(png_path: &Path) -> Result<SegmentMap> {
        let img = image::open(png_path)
            .map_err(|e| Error::Image {
                path: png_path.to_path_buf(),
                source: e,
            })?
            .to_luma16();
        let (w, h) = (img.width() as usize, img.height() as usize);
        let labels: Vec<i32> = img.pixels().map(|p| p[0] as i32 - 1).collect();
        SegmentMap::from_labels(w, h, labels)
    }
}

/// Split the image into lesion/background pixel sets and a buffer restricted
/// to the lesion for downstream segmentation and features.
pub fn apply_mask(image: &ImageBuffer, mask: &[u8]) -> Result<(PixelSet, PixelSet, ImageBuffer)> {
    if mask.len() != image.width * image.height {
        return Err(Error::validation("mask dimensions do not match image"));
    }
    let mut lesion = Vec::new();
    let mut background = Vec::new();
    for y in 0..image.height {
        for x in 0..image.width {
            if mask[y * image.width + x] == 1 {
                lesion.push((x as u32, y as u32));
            } else {
                background.push((x as u32, y as u32));
            }
        }
    }
    if lesion.is_empty() {
        return Err(Error::validation("lesion region is empty"));
    }
    let mut restricted = image.clone();
    restricted.set_mask(mask.to_vec());
    restricted.set_restricted();
    Ok((lesion, background, restricted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_mask_keeps_everything() {
        let img = ImageBuffer::filled(8, 6, [10, 20, 30]);
        let mask = vec![1u8; 48];
        let (lesion, background, restricted) = apply_mask(&img, &mask).unwrap();
        assert_eq!(lesion.len(), 48);
        assert!(background.is_empty());
        assert!(restricted.is_included(0, 0));
        assert_eq!(restricted.pixel(3, 3), [10, 20, 30]);
    }

    #[test]
    fn left_half_mask_counts() {
        let (w, h) = (9usize, 4usize);
        let img = ImageBuffer::filled(w, h, [0, 0, 0]);
        let mask: Vec<u8> = (0..w * h)
            .map(|i| u8::from(i % w < w.div_ceil(2)))
            .collect();
        let (lesion, _, restricted) = apply_mask(&img, &mask).unwrap();
        assert_eq!(lesion.len(), w.div_ceil(2) * h);
        assert!(restricted.is_included(0, 0));
        assert!(!restricted.is_included(w - 1, 0));
    }

    #[test]
    fn empty_lesion_rejected() {
        let img = ImageBuffer::filled(4, 4, [0, 0, 0]);
        assert!(apply_mask(&img, &vec![0u8; 16]).is_err());
    }

    #[test]
    fn from_labels_compacts_and_summarizes() {
        // labels 5 and 9 only -> compacted to 0 and 1
        let raw = vec![5, 5, 9, 9, 5, 5, 9, 9, -1, -1, 9, 9];
        let map = SegmentMap::from_labels(4, 3, raw).unwrap();
        assert_eq!(map.n(), 2);
        assert_eq!(map.segments[0].size, 4);
        assert_eq!(map.segments[1].size, 6);
        assert_eq!(map.segments[0].centroid, (0.5, 0.5));
        assert_eq!(map.label(2, 2), 1);
        assert_eq!(map.label(0, 2), -1);
    }

    #[test]
    fn png_roundtrip() {
        let raw = vec![0, 0, 1, 1, -1, -1, 2, 2, 0, 0, 2, 2];
        let map = SegmentMap::from_labels(4, 3, raw).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let png = dir.path().join("seg.png");
        let json = dir.path().join("seg.json");
        map.save(&png, &json).unwrap();
        let loaded = SegmentMap::load(&png).unwrap();
        assert_eq!(loaded, map);
        assert!(json.exists());
    }
}
