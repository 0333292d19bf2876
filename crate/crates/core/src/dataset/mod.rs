//! Corpus loading: image records, decoded buffers, fold assignments.

mod folds;
mod manifest;
mod synth;

pub use folds::{stratified_folds, FoldAssignment};
pub use manifest::{ham10000_manifest, load_manifest, write_manifest};
pub use synth::{synthesize_corpus, SynthOptions, SynthTruth};

use crate::error::{Error, Result};
use std::path::{Path, PathBuf};

/// Diagnosis label treated as the normal class (one-vs-rest).
pub const NORMAL_DX: &str = "nv";

/// One corpus entry: paths plus the diagnosis label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRecord {
    pub id: String,
    pub image_path: PathBuf,
    pub mask_path: Option<PathBuf>,
    pub dx: String,
}

impl ImageRecord {
    /// Ground-truth anomaly flag under the one-vs-rest protocol.
    pub fn is_anomalous(&self) -> bool {
        self.dx != NORMAL_DX
    }

    /// Decode the image (and mask, when present) into an [`ImageBuffer`].
    pub fn load(&self) -> Result<ImageBuffer> {
        let img = image::open(&self.image_path)
            .map_err(|e| Error::Image {
                path: self.image_path.clone(),
                source: e,
            })?
            .to_rgb8();
        let (width, height) = (img.width() as usize, img.height() as usize);
        if width < 2 || height < 2 {
            return Err(Error::validation(format!(
                "image {} is degenerate ({width}x{height})",
                self.id
            )));
        }
        let pixels = img.pixels().map(|p| [p[0], p[1], p[2]]).collect();
        let mask = match &self.mask_path {
            Some(path) => {
                let m = image::open(path)
                    .map_err(|e| Error::Image {
                        path: path.clone(),
                        source: e,
                    })?
                    .to_luma8();
                if (m.width() as usize, m.height() as usize) != (width, height) {
                    return Err(Error::validation(format!(
                        "mask dimensions {}x{} do not match image {}x{} for {}",
                        m.width(),
                        m.height(),
                        width,
                        height,
                        self.id
                    )));
                }
                // grayscale masks threshold at 50% intensity
                Some(m.pixels().map(|p| u8::from(p[0] >= 128)).collect())
            }
            None => None,
        };
        Ok(ImageBuffer {
            width,
            height,
            pixels,
            mask,
            restricted: false,
        })
    }
}

/// Decoded 8-bit RGB raster with an optional binary lesion mask.
///
/// When `restricted` is set (see [`crate::segmentation::apply_mask`]),
/// mask-0 pixels are excluded from segmentation and per-segment features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    pixels: Vec<[u8; 3]>,
    mask: Option<Vec<u8>>,
    restricted: bool,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>, mask: Option<Vec<u8>>) -> Self {
        assert_eq!(pixels.len(), width * height, "pixel buffer size mismatch");
        if let Some(m) = &mask {
            assert_eq!(m.len(), width * height, "mask size mismatch");
            assert!(m.iter().all(|&v| v <= 1), "mask must be binary");
        }
        ImageBuffer {
            width,
            height,
            pixels,
            mask,
            restricted: false,
        }
    }

    /// Uniform-color buffer, handy in tests.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        ImageBuffer::new(width, height, vec![rgb; width * height], None)
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn mask(&self) -> Option<&[u8]> {
        self.mask.as_deref()
    }

    pub fn set_mask(&mut self, mask: Vec<u8>) {
        assert_eq!(mask.len(), self.width * self.height);
        assert!(mask.iter().all(|&v| v <= 1));
        self.mask = Some(mask);
    }

    /// Restrict downstream segmentation/features to mask-1 pixels.
    pub(crate) fn set_restricted(&mut self) {
        self.restricted = true;
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    /// Whether the pixel participates in segmentation and features.
    #[inline]
    pub fn is_included(&self, x: usize, y: usize) -> bool {
        if !self.restricted {
            return true;
        }
        match &self.mask {
            Some(m) => m[y * self.width + x] == 1,
            None => true,
        }
    }
}

pub(crate) fn resolve_relative(base_dir: &Path, path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}
