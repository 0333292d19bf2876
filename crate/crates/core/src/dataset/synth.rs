//! Deterministic synthetic corpus: skin-tone backgrounds with elliptical
//! lesions, plus three anomaly generators perturbing color variance, border
//! shape, and intra-lesion texture.

use super::{ImageRecord, NORMAL_DX};
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy)]
pub struct SynthOptions {
    pub n_normal: usize,
    pub n_anomalous: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

/// Ground truth recorded by the generator, one entry per image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthTruth {
    pub id: String,
    pub kind: String,
    pub lesion_pixels: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Normal,
    ColorVariance,
    BorderIrregular,
    MultiBlob,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Normal => "normal",
            Kind::ColorVariance => "color_variance",
            Kind::BorderIrregular => "border_irregular",
            Kind::MultiBlob => "multi_blob",
        }
    }

    fn dx(self) -> &'static str {
        match self {
            Kind::Normal => NORMAL_DX,
            Kind::ColorVariance => "mel",
            Kind::BorderIrregular => "bcc",
            Kind::MultiBlob => "bkl",
        }
    }
}

/// Generate the corpus under `out_dir` (images/, masks/, manifest.csv,
/// truth.json). Output is byte-identical for identical options.
pub fn synthesize_corpus(
    opts: &SynthOptions,
    out_dir: &Path,
) -> Result<(Vec<ImageRecord>, Vec<SynthTruth>)> {
    if opts.n_normal + opts.n_anomalous > 0 && (opts.width < 32 || opts.height < 32) {
        return Err(Error::validation("synthetic images must be at least 32x32"));
    }
    let images_dir = out_dir.join("images");
    let masks_dir = out_dir.join("masks");
    std::fs::create_dir_all(&images_dir).map_err(|e| Error::io(&images_dir, e))?;
    std::fs::create_dir_all(&masks_dir).map_err(|e| Error::io(&masks_dir, e))?;

    let mut records = Vec::new();
    let mut truths = Vec::new();
    for i in 0..opts.n_normal {
        let id = format!("n{i:04}");
        let rng = ChaCha8Rng::seed_from_u64(mix(opts.seed, i as u64));
        emit(opts, out_dir, &id, Kind::Normal, rng, &mut records, &mut truths)?;
    }
    let anomaly_kinds = [Kind::ColorVariance, Kind::BorderIrregular, Kind::MultiBlob];
    for i in 0..opts.n_anomalous {
        let id = format!("a{i:04}");
        let rng = ChaCha8Rng::seed_from_u64(mix(opts.seed, (1 << 32) | i as u64));
        let kind = anomaly_kinds[i % anomaly_kinds.len()];
        emit(opts, out_dir, &id, kind, rng, &mut records, &mut truths)?;
    }

    super::write_manifest(&relative_records(&records, out_dir), &out_dir.join("manifest.csv"))?;
    let truth_json = serde_json::to_string_pretty(&truths)?;
    let truth_path = out_dir.join("truth.json");
    std::fs::write(&truth_path, truth_json).map_err(|e| Error::io(&truth_path, e))?;
    Ok((records, truths))
}

fn relative_records(records: &[ImageRecord], out_dir: &Path) -> Vec<ImageRecord> {
    records
        .iter()
        .map(|r| ImageRecord {
            id: r.id.clone(),
            image_path: r.image_path.strip_prefix(out_dir).unwrap().to_path_buf(),
            mask_path: r
                .mask_path
                .as_ref()
                .map(|p| p.strip_prefix(out_dir).unwrap().to_path_buf()),
            dx: r.dx.clone(),
        })
        .collect()
}

fn emit(
    opts: &SynthOptions,
    out_dir: &Path,
    id: &str,
    kind: Kind,
    mut rng: ChaCha8Rng,
    records: &mut Vec<ImageRecord>,
    truths: &mut Vec<SynthTruth>,
) -> Result<()> {
    let (pixels, mask) = render(opts.width, opts.height, kind, &mut rng);
    let lesion_pixels = mask.iter().filter(|&&m| m == 1).count();

    let image_path = out_dir.join("images").join(format!("{id}.png"));
    let mask_path = out_dir.join("masks").join(format!("{id}.png"));
    save_rgb(&pixels, opts.width, opts.height, &image_path)?;
    save_mask(&mask, opts.width, opts.height, &mask_path)?;

    records.push(ImageRecord {
        id: id.to_string(),
        image_path,
        mask_path: Some(mask_path),
        dx: kind.dx().to_string(),
    });
    truths.push(SynthTruth {
        id: id.to_string(),
        kind: kind.name().to_string(),
        lesion_pixels,
    });
    Ok(())
}

struct Lesion {
    cx: f64,
    cy: f64,
    a: f64,
    b: f64,
    theta: f64,
    // radial boundary perturbation, zero for smooth ellipses
    wobble: Vec<(f64, f64, f64)>, // (amplitude, frequency, phase)
}

impl Lesion {
    /// Signed radial coordinate: <= 1 means inside.
    fn radial(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.cx;
        let dy = y - self.cy;
        let u = dx * self.theta.cos() + dy * self.theta.sin();
        let v = -dx * self.theta.sin() + dy * self.theta.cos();
        let r = ((u / self.a).powi(2) + (v / self.b).powi(2)).sqrt();
        if self.wobble.is_empty() {
            return r;
        }
        let ang = v.atan2(u);
        let mut boundary = 1.0;
        for &(amp, freq, phase) in &self.wobble {
            boundary += amp * (freq * ang + phase).sin();
        }
        r / boundary.max(0.3)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.radial(x, y) <= 1.0
    }
}

fn render(width: usize, height: usize, kind: Kind, rng: &mut ChaCha8Rng) -> (Vec<[u8; 3]>, Vec<u8>) {
    let (w, h) = (width as f64, height as f64);
    let background = [
        208 + rng.gen_range(-12..=12i32),
        160 + rng.gen_range(-12..=12i32),
        132 + rng.gen_range(-10..=10i32),
    ];
    let lesion = Lesion {
        cx: w / 2.0 + rng.gen_range(-w / 10.0..w / 10.0),
        cy: h / 2.0 + rng.gen_range(-h / 10.0..h / 10.0),
        a: rng.gen_range(w / 6.0..w / 4.5),
        b: rng.gen_range(h / 6.0..h / 4.5),
        theta: rng.gen_range(0.0..std::f64::consts::PI),
        wobble: if kind == Kind::BorderIrregular {
            vec![
                (
                    rng.gen_range(0.2..0.32),
                    rng.gen_range(5.0..9.0f64).round(),
                    rng.gen_range(0.0..6.28),
                ),
                (
                    rng.gen_range(0.08..0.16),
                    rng.gen_range(10.0..14.0f64).round(),
                    rng.gen_range(0.0..6.28),
                ),
            ]
        } else {
            Vec::new()
        },
    };

    let base_lesion = [
        150 + rng.gen_range(-14..=14i32),
        110 + rng.gen_range(-12..=12i32),
        90 + rng.gen_range(-10..=10i32),
    ];

    // low-frequency fields driving the color-variance mottling
    let field = |x: f64, y: f64, fx: f64, fy: f64, phase: f64| (fx * x + fy * y + phase).sin();
    let mottle_params: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.25..0.55),
                rng.gen_range(0.25..0.55),
                rng.gen_range(0.0..6.28),
            )
        })
        .collect();
    let palette = [[92, 58, 48], [176, 84, 66], [104, 112, 156]];

    // speckle blobs for the multi-blob generator
    let speckles: Vec<(f64, f64, f64, [i32; 3])> = if kind == Kind::MultiBlob {
        (0..10)
            .map(|_| {
                let ang = rng.gen_range(0.0..6.28f64);
                let rad = rng.gen_range(0.0..0.75f64);
                let sx = lesion.cx + rad.sqrt() * lesion.a * ang.cos();
                let sy = lesion.cy + rad.sqrt() * lesion.b * ang.sin();
                let sr = rng.gen_range(1.8..3.6);
                let color = if rng.gen_bool(0.5) {
                    [52, 36, 32]
                } else {
                    [88, 92, 148]
                };
                (sx, sy, sr, color)
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut pixels = vec![[0u8; 3]; width * height];
    let mut mask = vec![0u8; width * height];
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (x as f64, y as f64);
            let inside = lesion.contains(fx, fy);
            let mut color = if inside {
                match kind {
                    Kind::Normal => {
                        // slight radial darkening toward the core
                        let r = lesion.radial(fx, fy);
                        let shade = (8.0 * (1.0 - r)) as i32;
                        [
                            base_lesion[0] - shade,
                            base_lesion[1] - shade,
                            base_lesion[2] - shade,
                        ]
                    }
                    Kind::ColorVariance => {
                        let mut best = 0;
                        let mut best_val = f64::NEG_INFINITY;
                        for (i, &(fxp, fyp, ph)) in mottle_params.iter().enumerate() {
                            let v = field(fx, fy, fxp, fyp, ph + i as f64);
                            if v > best_val {
                                best_val = v;
                                best = i;
                            }
                        }
                        palette[best]
                    }
                    Kind::BorderIrregular => {
                        // dark ragged rim around a lighter core
                        let r = lesion.radial(fx, fy);
                        if r > 0.62 {
                            [58, 40, 34]
                        } else {
                            [
                                base_lesion[0] + 12,
                                base_lesion[1] + 10,
                                base_lesion[2] + 8,
                            ]
                        }
                    }
                    Kind::MultiBlob => base_lesion,
                }
            } else {
                background
            };
            if inside && kind == Kind::MultiBlob {
                for &(sx, sy, sr, sc) in &speckles {
                    if (fx - sx).powi(2) + (fy - sy).powi(2) <= sr * sr {
                        color = sc;
                        break;
                    }
                }
            }
            let noise_amp = if inside { 4 } else { 5 };
            let px = [
                clamp_u8(color[0] + rng.gen_range(-noise_amp..=noise_amp)),
                clamp_u8(color[1] + rng.gen_range(-noise_amp..=noise_amp)),
                clamp_u8(color[2] + rng.gen_range(-noise_amp..=noise_amp)),
            ];
            let idx = y * width + x;
            pixels[idx] = px;
            mask[idx] = u8::from(inside);
        }
    }
    (pixels, mask)
}

fn clamp_u8(v: i32) -> u8 {
    v.clamp(0, 255) as u8
}

fn save_rgb(pixels: &[[u8; 3]], width: usize, height: usize, path: &Path) -> Result<()> {
    let raw: Vec<u8> = pixels.iter().flatten().copied().collect();
    let img = image::RgbImage::from_raw(width as u32, height as u32, raw).unwrap();
    img.save(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

fn save_mask(mask: &[u8], width: usize, height: usize, path: &Path) -> Result<()> {
    let raw: Vec<u8> = mask.iter().map(|&m| if m == 1 { 255 } else { 0 }).collect();
    let img = image::GrayImage::from_raw(width as u32, height as u32, raw).unwrap();
    img.save(path).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        source: e,
    })
}

fn mix(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
