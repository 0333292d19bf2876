//! Color moments per segment: mean, standard deviation and skewness of the
//! pixel intensities in RGB, HSV and CIELAB.

use crate::color::{rgb_to_hsv, rgb_to_lab};
use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};

/// Below this the channel counts as constant and skewness is 0.
const VAR_EPS: f64 = 1e-24;

/// 27 values: for each space (RGB, HSV, CIELAB) and channel, the population
/// mean, population standard deviation and Fisher-Pearson skewness, in that
/// order. Channels are normalized to [0, 1] first (L by 1/100, a and b by
/// 1/128 then +0.5).
pub fn color_statistics(image: &ImageBuffer, region: &[(u32, u32)]) -> Result<[f64; 27]> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let n = region.len() as f64;
    let channels: Vec<[f64; 9]> = region
        .iter()
        .map(|&(x, y)| {
            let [r, g, b] = image.pixel(x as usize, y as usize);
            let rgb = [r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0];
            let hsv = rgb_to_hsv(rgb);
            let [l, a, bb] = rgb_to_lab(rgb);
            [
                rgb[0],
                rgb[1],
                rgb[2],
                hsv[0],
                hsv[1],
                hsv[2],
                l / 100.0,
                a / 128.0 + 0.5,
                bb / 128.0 + 0.5,
            ]
        })
        .collect();

    let mut out = [0f64; 27];
    for ch in 0..9 {
        let mean = channels.iter().map(|c| c[ch]).sum::<f64>() / n;
        let lo = channels.iter().map(|c| c[ch]).fold(f64::INFINITY, f64::min);
        let hi = channels.iter().map(|c| c[ch]).fold(f64::NEG_INFINITY, f64::max);
        let (std, skew) = if lo == hi {
            (0.0, 0.0)
        } else {
            let m2 = channels.iter().map(|c| (c[ch] - mean).powi(2)).sum::<f64>() / n;
            let skew = if m2 <= VAR_EPS {
                0.0
            } else {
                let m3 =
                    channels.iter().map(|c| (c[ch] - mean).powi(3)).sum::<f64>() / n;
                m3 / m2.powf(1.5)
            };
            (m2.sqrt(), skew)
        };
        out[ch * 3] = mean;
        out[ch * 3 + 1] = std;
        out[ch * 3 + 2] = skew;
    }
    Ok(out)
}

/// Per-channel RGB mean in [0, 1].
pub fn rgb_average(image: &ImageBuffer, region: &[(u32, u32)]) -> Result<[f64; 3]> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let n = region.len() as f64;
    let mut sums = [0f64; 3];
    for &(x, y) in region {
        let px = image.pixel(x as usize, y as usize);
        for c in 0..3 {
            sums[c] += px[c] as f64 / 255.0;
        }
    }
    Ok([sums[0] / n, sums[1] / n, sums[2] / n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn full_region(w: u32, h: u32) -> Vec<(u32, u32)> {
        (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect()
    }

    #[test]
    fn constant_region_has_zero_spread() {
        let img = ImageBuffer::filled(4, 4, [128, 128, 128]);
        let stats = color_statistics(&img, &full_region(4, 4)).unwrap();
        for ch in 0..9 {
            assert_eq!(stats[ch * 3 + 1], 0.0, "std channel {ch}");
            assert_eq!(stats[ch * 3 + 2], 0.0, "skew channel {ch}");
        }
    }

    #[test]
    fn two_pixel_red_channel_moments() {
        let img = ImageBuffer::new(2, 1, vec![[0, 0, 0], [255, 0, 0]], None);
        let stats = color_statistics(&img, &[(0, 0), (1, 0)]).unwrap();
        assert!((stats[0] - 0.5).abs() < 1e-12, "R mean");
        assert!((stats[1] - 0.5).abs() < 1e-12, "R std");
        assert!(stats[2].abs() < 1e-12, "R skew");
    }

    #[test]
    fn three_pixel_skew_closed_form() {
        let img = ImageBuffer::new(3, 1, vec![[0, 0, 0], [0, 0, 0], [255, 0, 0]], None);
        let stats = color_statistics(&img, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!((stats[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((stats[1] - 2f64.sqrt() / 3.0).abs() < 1e-12);
        assert!((stats[2] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rgb_average_examples() {
        let img = ImageBuffer::filled(5, 5, [51, 102, 153]);
        let avg = rgb_average(&img, &full_region(5, 5)).unwrap();
        assert!((avg[0] - 0.2).abs() < 1e-12);
        assert!((avg[1] - 0.4).abs() < 1e-12);
        assert!((avg[2] - 0.6).abs() < 1e-12);

        let img = ImageBuffer::new(2, 1, vec![[0, 0, 0], [255, 255, 255]], None);
        let avg = rgb_average(&img, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(avg, [0.5, 0.5, 0.5]);
    }

    #[test]
    fn checkerboard_red_matches_brute_force() {
        let (w, h) = (8u32, 8u32);
        let pixels: Vec<[u8; 3]> = (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                let r = if (x + y) % 2 == 0 { 255 } else { 0 };
                [r, 40, 70]
            })
            .collect();
        let img = ImageBuffer::new(w as usize, h as usize, pixels, None);
        let region = full_region(w, h);
        let avg = rgb_average(&img, &region).unwrap();
        let mut brute = [0f64; 3];
        for &(x, y) in &region {
            let p = img.pixel(x as usize, y as usize);
            for c in 0..3 {
                brute[c] += p[c] as f64 / 255.0;
            }
        }
        for c in 0..3 {
            assert!((avg[c] - brute[c] / region.len() as f64).abs() < 1e-15);
        }
        assert_eq!(avg[0], 0.5);
    }

    #[test]
    fn random_regions_match_naive_moment_loops() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let (w, h) = (12usize, 9usize);
            let pixels: Vec<[u8; 3]> = (0..w * h)
                .map(|_| [rng.gen(), rng.gen(), rng.gen()])
                .collect();
            let img = ImageBuffer::new(w, h, pixels, None);
            let region: Vec<(u32, u32)> = (0..w * h)
                .filter(|_| rng.gen_bool(0.6))
                .map(|i| ((i % w) as u32, (i / w) as u32))
                .collect();
            if region.is_empty() {
                continue;
            }
            let stats = color_statistics(&img, &region).unwrap();

            // naive oracle, channel by channel
            let n = region.len() as f64;
            let vals: Vec<[f64; 9]> = region
                .iter()
                .map(|&(x, y)| {
                    let [r, g, b] = img.pixel(x as usize, y as usize);
                    let rgb = [r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0];
                    let hsv = crate::color::rgb_to_hsv(rgb);
                    let lab = crate::color::rgb_to_lab(rgb);
                    [
                        rgb[0], rgb[1], rgb[2], hsv[0], hsv[1], hsv[2],
                        lab[0] / 100.0,
                        lab[1] / 128.0 + 0.5,
                        lab[2] / 128.0 + 0.5,
                    ]
                })
                .collect();
            for ch in 0..9 {
                let mut mean = 0.0;
                for v in &vals {
                    mean += v[ch];
                }
                mean /= n;
                let mut m2 = 0.0;
                let mut m3 = 0.0;
                for v in &vals {
                    m2 += (v[ch] - mean).powi(2);
                    m3 += (v[ch] - mean).powi(3);
                }
                m2 /= n;
                m3 /= n;
                let std = m2.sqrt();
                let skew = if std > 0.0 { m3 / std.powi(3) } else { 0.0 };
                assert!((stats[ch * 3] - mean).abs() < 1e-12);
                assert!((stats[ch * 3 + 1] - std).abs() < 1e-12);
                assert!((stats[ch * 3 + 2] - skew).abs() < 1e-12, "ch {ch}");
            }
        }
    }
}
