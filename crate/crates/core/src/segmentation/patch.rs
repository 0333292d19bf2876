//! Non-overlapping rectangular patch grid.

use super::SegmentMap;
use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};

/// Partition into a rows x cols grid. Patch heights are floor(H/rows) with
/// the remainder absorbed by the last row (same for columns); segments are
/// numbered in raster order. On a restricted buffer, excluded pixels stay
/// unlabeled and patches without any included pixel are dropped.
pub fn patch_segment(image: &ImageBuffer, rows: usize, cols: usize) -> Result<SegmentMap> {
    if rows == 0 || cols == 0 {
        return Err(Error::validation("patch grid needs rows >= 1 and cols >= 1"));
    }
    if rows > image.height || cols > image.width {
        return Err(Error::validation(format!(
            "grid {rows}x{cols} exceeds image {}x{}",
            image.height, image.width
        )));
    }
    let base_h = image.height / rows;
    let base_w = image.width / cols;
    let mut labels = vec![-1i32; image.width * image.height];
    for y in 0..image.height {
        let r = (y / base_h).min(rows - 1);
        for x in 0..image.width {
            if !image.is_included(x, y) {
                continue;
            }
            let c = (x / base_w).min(cols - 1);
            labels[y * image.width + x] = (r * cols + c) as i32;
        }
    }
    SegmentMap::from_labels(image.width, image.height, labels)
}
