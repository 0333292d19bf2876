//! Gray-level co-occurrence texture properties at four angles.

use crate::color::luma;
use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};

const LEVELS: usize = 32;
/// Pixel offsets for 0, 45, 90 and 135 degrees at distance 1 (y axis points
/// down, so 45 degrees is up-right).
const OFFSETS: [(i64, i64); 4] = [(1, 0), (1, -1), (0, -1), (-1, -1)];

/// 20 values, angle-major: contrast, dissimilarity, energy, correlation and
/// homogeneity per angle. Luma is quantized to 32 levels; each GLCM counts
/// only pixel pairs lying entirely inside the region and is symmetric and
/// normalized. Angles without a single valid pair take the degenerate values
/// (0, 0, 1, 0, 1); correlation is 0 whenever a marginal is constant.
pub fn glcm_features(image: &ImageBuffer, region: &[(u32, u32)]) -> Result<[f64; 20]> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let (w, h) = (image.width, image.height);
    let mut in_region = vec![false; w * h];
    for &(x, y) in region {
        in_region[y as usize * w + x as usize] = true;
    }
    let level = |x: usize, y: usize| -> usize {
        ((luma(image.pixel(x, y)) / 256.0 * LEVELS as f64) as usize).min(LEVELS - 1)
    };

    let mut out = [0f64; 20];
    for (a, &(dx, dy)) in OFFSETS.iter().enumerate() {
        let mut counts = vec![0f64; LEVELS * LEVELS];
        let mut total = 0f64;
        for &(x, y) in region {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if !in_region[ny * w + nx] {
                continue;
            }
            let (i, j) = (level(x as usize, y as usize), level(nx, ny));
            counts[i * LEVELS + j] += 1.0;
            counts[j * LEVELS + i] += 1.0;
            total += 2.0;
        }
        let props = if total == 0.0 {
            [0.0, 0.0, 1.0, 0.0, 1.0]
        } else {
            for c in counts.iter_mut() {
                *c /= total;
            }
            haralick_props(&counts)
        };
        out[a * 5..a * 5 + 5].copy_from_slice(&props);
    }
    Ok(out)
}

/// contrast, dissimilarity, energy (angular second moment), correlation,
/// homogeneity of a normalized GLCM.
fn haralick_props(p: &[f64]) -> [f64; 5] {
    let mut contrast = 0.0;
    let mut dissimilarity = 0.0;
    let mut energy = 0.0;
    let mut homogeneity = 0.0;
    let mut mean_i = 0.0;
    let mut mean_j = 0.0;
    for i in 0..LEVELS {
        for j in 0..LEVELS {
            let v = p[i * LEVELS + j];
            let d = i as f64 - j as f64;
            contrast += v * d * d;
            dissimilarity += v * d.abs();
            energy += v * v;
            homogeneity += v / (1.0 + d * d);
            mean_i += i as f64 * v;
            mean_j += j as f64 * v;
        }
    }
    let mut var_i = 0.0;
    let mut var_j = 0.0;
    let mut cov = 0.0;
    for i in 0..LEVELS {
        for j in 0..LEVELS {
            let v = p[i * LEVELS + j];
            var_i += (i as f64 - mean_i).powi(2) * v;
            var_j += (j as f64 - mean_j).powi(2) * v;
            cov += (i as f64 - mean_i) * (j as f64 - mean_j) * v;
        }
    }
    let correlation = if var_i > 1e-24 && var_j > 1e-24 {
        cov / (var_i.sqrt() * var_j.sqrt())
    } else {
        0.0
    };
    [contrast, dissimilarity, energy, correlation, homogeneity]
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
    fn checkerboard_2x2_at_angle_0() {
        // luma 0 -> level 0, luma 10 -> level 1
        let img = ImageBuffer::new(
            2,
            2,
            vec![[0, 0, 0], [10, 10, 10], [10, 10, 10], [0, 0, 0]],
            None,
        );
        let f = glcm_features(&img, &full_region(2, 2)).unwrap();
        let (contrast, dissim, energy, corr, homog) = (f[0], f[1], f[2], f[3], f[4]);
        assert!((contrast - 1.0).abs() < 1e-12);
        assert!((dissim - 1.0).abs() < 1e-12);
        assert!((energy - 0.5).abs() < 1e-12);
        assert!((corr + 1.0).abs() < 1e-12);
        assert!((homog - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_region_degenerates_per_convention() {
        let img = ImageBuffer::filled(5, 5, [200, 200, 200]);
        let f = glcm_features(&img, &full_region(5, 5)).unwrap();
        for a in 0..4 {
            assert_eq!(f[a * 5], 0.0, "contrast");
            assert_eq!(f[a * 5 + 2], 1.0, "energy");
            assert_eq!(f[a * 5 + 3], 0.0, "correlation");
            assert_eq!(f[a * 5 + 4], 1.0, "homogeneity");
        }
    }

    #[test]
    fn single_pixel_region_has_no_pairs() {
        let img = ImageBuffer::filled(4, 4, [10, 10, 10]);
        let f = glcm_features(&img, &[(2, 2)]).unwrap();
        for a in 0..4 {
            assert_eq!(
                &f[a * 5..a * 5 + 5],
                &[0.0, 0.0, 1.0, 0.0, 1.0],
                "angle {a}"
            );
        }
    }

    #[test]
    fn random_region_matches_brute_force_pair_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..10 {
            let (w, h) = (8usize, 8usize);
            let pixels: Vec<[u8; 3]> = (0..w * h)
                .map(|_| {
                    let v: u8 = rng.gen();
                    [v, v, v]
                })
                .collect();
            let img = ImageBuffer::new(w, h, pixels, None);
            let region: Vec<(u32, u32)> = (0..w * h)
                .filter(|_| rng.gen_bool(0.7))
                .map(|i| ((i % w) as u32, (i / w) as u32))
                .collect();
            if region.len() < 2 {
                continue;
            }
            let got = glcm_features(&img, &region).unwrap();

            // oracle: enumerate every ordered pixel pair per angle
            let region_set: std::collections::HashSet<(u32, u32)> =
                region.iter().copied().collect();
            let level = |(x, y): (u32, u32)| -> usize {
                ((crate::color::luma(img.pixel(x as usize, y as usize)) / 256.0 * 32.0) as usize)
                    .min(31)
            };
            for (a, &(dx, dy)) in OFFSETS.iter().enumerate() {
                let mut counts = vec![0f64; 32 * 32];
                let mut total = 0f64;
                for &p in &region {
                    for &q in &region {
                        let fwd = q.0 as i64 - p.0 as i64 == dx && q.1 as i64 - p.1 as i64 == dy;
                        if fwd && region_set.contains(&q) {
                            counts[level(p) * 32 + level(q)] += 1.0;
                            counts[level(q) * 32 + level(p)] += 1.0;
                            total += 2.0;
                        }
                    }
                }
                let want = if total == 0.0 {
                    [0.0, 0.0, 1.0, 0.0, 1.0]
                } else {
                    for c in counts.iter_mut() {
                        *c /= total;
                    }
                    haralick_props(&counts)
                };
                for (g, e) in got[a * 5..a * 5 + 5].iter().zip(&want) {
                    assert!((g - e).abs() < 1e-12, "angle {a}: {g} vs {e}");
                }
            }
        }
    }

    #[test]
    fn independent_of_region_order() {
        let (w, h) = (6usize, 6usize);
        let pixels: Vec<[u8; 3]> = (0..w * h)
            .map(|i| {
                let v = (i * 29 % 256) as u8;
                [v, v, v]
            })
            .collect();
        let img = ImageBuffer::new(w, h, pixels, None);
        let mut region = full_region(w as u32, h as u32);
        let f1 = glcm_features(&img, &region).unwrap();
        region.reverse();
        let f2 = glcm_features(&img, &region).unwrap();
        assert_eq!(f1, f2);
    }
}
