//! Rotation-invariant uniform local binary patterns (riu2), P=8, R=1.

use crate::color::luma;
use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};

// interpolation rounding must not flip a >= comparison between equal values
const CMP_EPS: f64 = 1e-6;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// (dx, dy) of the 8 neighbors at angles 2*pi*p/8, y axis down. Axis-aligned
/// entries are exact integers so samples never leave the 3x3 window.
const NEIGHBOR_OFFSETS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (SQRT_HALF, -SQRT_HALF),
    (0.0, -1.0),
    (-SQRT_HALF, -SQRT_HALF),
    (-1.0, 0.0),
    (-SQRT_HALF, SQRT_HALF),
    (0.0, 1.0),
    (SQRT_HALF, SQRT_HALF),
];

/// 10-bin riu2 histogram over the region. Codes use bilinear neighbor
/// sampling on the Rec. 601 luma raster and the comparison neighbor >=
/// center; uniform patterns land in their popcount bin (0..=8), everything
/// else in bin 9. Only pixels whose full 3x3 neighborhood lies inside the
/// image are counted; a region with no such pixel gets the uniform fallback
/// histogram.
pub fn lbp_histogram(image: &ImageBuffer, region: &[(u32, u32)]) -> Result<[f64; 10]> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let (w, h) = (image.width, image.height);
    let gray: Vec<f64> = image.pixels().iter().map(|&p| luma(p)).collect();

    let mut hist = [0f64; 10];
    let mut counted = 0usize;
    for &(x, y) in region {
        let (x, y) = (x as usize, y as usize);
        if x < 1 || y < 1 || x >= w - 1 || y >= h - 1 {
            continue;
        }
        let center = gray[y * w + x];
        let mut bits = [false; 8];
        for (p, bit) in bits.iter_mut().enumerate() {
            let (dx, dy) = NEIGHBOR_OFFSETS[p];
            let v = bilinear(&gray, w, x as f64 + dx, y as f64 + dy);
            *bit = v >= center - CMP_EPS;
        }
        hist[riu2_bin(&bits)] += 1.0;
        counted += 1;
    }

    if counted == 0 {
        return Ok([0.1; 10]);
    }
    for b in hist.iter_mut() {
        *b /= counted as f64;
    }
    Ok(hist)
}

fn bilinear(gray: &[f64], w: usize, x: f64, y: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let (x0, y0) = (x0 as usize, y0 as usize);
    let idx = y0 * w + x0;
    if fx == 0.0 && fy == 0.0 {
        return gray[idx];
    }
    let v00 = gray[idx];
    let v10 = gray[idx + 1];
    let v01 = gray[idx + w];
    let v11 = gray[idx + w + 1];
    v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy + v11 * fx * fy
}

/// riu2 mapping: popcount for uniform patterns, 9 otherwise.
fn riu2_bin(bits: &[bool; 8]) -> usize {
    let transitions = (0..8).filter(|&i| bits[i] != bits[(i + 1) % 8]).count();
    if transitions <= 2 {
        bits.iter().filter(|&&b| b).count()
    } else {
        9
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_region(w: u32, h: u32) -> Vec<(u32, u32)> {
        (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect()
    }

    fn rotate90(img: &ImageBuffer) -> ImageBuffer {
        // (x, y) -> (h - 1 - y, x)
        let (w, h) = (img.width, img.height);
        let mut pixels = vec![[0u8; 3]; w * h];
        for y in 0..h {
            for x in 0..w {
                let (nx, ny) = (h - 1 - y, x);
                pixels[ny * h + nx] = img.pixel(x, y);
            }
        }
        ImageBuffer::new(h, w, pixels, None)
    }

    #[test]
    fn constant_image_is_one_hot_at_bin_8() {
        let img = ImageBuffer::filled(8, 8, [77, 77, 77]);
        let hist = lbp_histogram(&img, &full_region(8, 8)).unwrap();
        assert_eq!(hist[8], 1.0);
        assert_eq!(hist.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn rotation_by_90_degrees_preserves_histogram() {
        let (w, h) = (10usize, 10usize);
        let pixels: Vec<[u8; 3]> = (0..w * h)
            .map(|i| {
                let v = ((i * 37 + i * i * 11) % 251) as u8;
                [v, v, v]
            })
            .collect();
        let img = ImageBuffer::new(w, h, pixels, None);
        let rot = rotate90(&img);
        let h1 = lbp_histogram(&img, &full_region(w as u32, h as u32)).unwrap();
        let h2 = lbp_histogram(&rot, &full_region(h as u32, w as u32)).unwrap();
        for (a, b) in h1.iter().zip(&h2) {
            assert!((a - b).abs() < 1e-12, "{h1:?} vs {h2:?}");
        }
    }

    #[test]
    fn border_only_region_gets_uniform_fallback() {
        let img = ImageBuffer::filled(6, 6, [10, 10, 10]);
        let hist = lbp_histogram(&img, &[(0, 0)]).unwrap();
        assert_eq!(hist, [0.1; 10]);
    }

    #[test]
    fn histogram_order_independent_of_region_enumeration() {
        let (w, h) = (9usize, 7usize);
        let pixels: Vec<[u8; 3]> = (0..w * h)
            .map(|i| [(i * 31 % 256) as u8, (i * 17 % 256) as u8, (i * 5 % 256) as u8])
            .collect();
        let img = ImageBuffer::new(w, h, pixels, None);
        let mut region = full_region(w as u32, h as u32);
        let h1 = lbp_histogram(&img, &region).unwrap();
        region.reverse();
        let h2 = lbp_histogram(&img, &region).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn riu2_mapping_cases() {
        assert_eq!(riu2_bin(&[false; 8]), 0);
        assert_eq!(riu2_bin(&[true; 8]), 8);
        // one run of three ones: uniform, popcount 3
        assert_eq!(
            riu2_bin(&[true, true, true, false, false, false, false, false]),
            3
        );
        // alternating: non-uniform
        assert_eq!(
            riu2_bin(&[true, false, true, false, true, false, true, false]),
            9
        );
    }
}
