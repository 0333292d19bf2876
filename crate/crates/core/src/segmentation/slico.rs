//! SLIC-zero superpixels: local k-means over CIELAB+xy with a per-cluster
//! adaptive compactness weight.

use super::SegmentMap;
use crate::color::rgb_to_lab;
use crate::dataset::ImageBuffer;
use crate::error::{Error, Result};

const INITIAL_COMPACTNESS: f64 = 10.0;
// keeps the metric spatial on flat regions where the observed max color
// distance would collapse to zero
const COMPACTNESS_FLOOR: f64 = 1.0;

struct Center {
    x: f64,
    y: f64,
    lab: [f64; 3],
    m: f64,
}

/// Segment into roughly `n_target` superpixels. Deterministic: grid
/// initialization, fixed scan order, no randomness. The resulting segment
/// count may drift from `n_target` after connectivity enforcement.
///
/// On a restricted buffer the grid spacing derives from the included pixel
/// count and centers land inside the mask, so `n_target` refers to segments
/// of the lesion region.
pub fn slico_segment(
    image: &ImageBuffer,
    n_target: usize,
    max_iters: usize,
) -> Result<SegmentMap> {
    if n_target == 0 {
        return Err(Error::validation("n_target must be at least 1"));
    }
    let (w, h) = (image.width, image.height);
    let included: Vec<bool> = (0..w * h)
        .map(|i| image.is_included(i % w, i / w))
        .collect();
    let n_included = included.iter().filter(|&&b| b).count();
    if n_included == 0 {
        return Err(Error::validation("no included pixels to segment"));
    }

    let lab: Vec<[f64; 3]> = image
        .pixels()
        .iter()
        .map(|&[r, g, b]| rgb_to_lab([r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0]))
        .collect();

    if n_target == 1 {
        let labels: Vec<i32> = included.iter().map(|&b| if b { 0 } else { -1 }).collect();
        return SegmentMap::from_labels(w, h, labels);
    }

    let spacing = (n_included as f64 / n_target as f64).sqrt();
    let mut centers = init_centers(image, &lab, &included, spacing);
    if centers.is_empty() {
        // sparse masks can miss every grid point; seed evenly along the scan order
        let pixels: Vec<usize> = (0..w * h).filter(|&i| included[i]).collect();
        for j in 0..n_target.min(pixels.len()) {
            let idx = pixels[j * pixels.len() / n_target.min(pixels.len())];
            centers.push(Center {
                x: (idx % w) as f64,
                y: (idx / w) as f64,
                lab: lab[idx],
                m: INITIAL_COMPACTNESS,
            });
        }
    }

    let mut labels = vec![-1i32; w * h];
    let mut best_dc = vec![0f64; w * h];
    for _ in 0..max_iters {
        let mut dist = vec![f64::INFINITY; w * h];
        for (k, c) in centers.iter().enumerate() {
            let x_lo = ((c.x - spacing).floor().max(0.0)) as usize;
            let x_hi = ((c.x + spacing).ceil() as usize).min(w - 1);
            let y_lo = ((c.y - spacing).floor().max(0.0)) as usize;
            let y_hi = ((c.y + spacing).ceil() as usize).min(h - 1);
            for y in y_lo..=y_hi {
                for x in x_lo..=x_hi {
                    let idx = y * w + x;
                    if !included[idx] {
                        continue;
                    }
                    let dc = lab_dist(lab[idx], c.lab);
                    let ds = ((x as f64 - c.x).powi(2) + (y as f64 - c.y).powi(2)).sqrt();
                    let d = (dc * dc + (ds / spacing).powi(2) * c.m * c.m).sqrt();
                    if d < dist[idx] {
                        dist[idx] = d;
                        labels[idx] = k as i32;
                        best_dc[idx] = dc;
                    }
                }
            }
        }
        update_centers(&mut centers, &labels, &best_dc, &lab, w, h, &included);
    }

    // pixels outside every window (possible with scattered masks)
    for idx in 0..w * h {
        if included[idx] && labels[idx] < 0 {
            let (x, y) = ((idx % w) as f64, (idx / w) as f64);
            let mut best = (f64::INFINITY, 0);
            for (k, c) in centers.iter().enumerate() {
                let dc = lab_dist(lab[idx], c.lab);
                let ds = ((x - c.x).powi(2) + (y - c.y).powi(2)).sqrt();
                let d = (dc * dc + (ds / spacing).powi(2) * c.m * c.m).sqrt();
                if d < best.0 {
                    best = (d, k);
                }
            }
            labels[idx] = best.1 as i32;
        }
    }

    enforce_connectivity(&mut labels, w, h, centers.len(), spacing);
    SegmentMap::from_labels(w, h, labels)
}

fn lab_dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn init_centers(
    image: &ImageBuffer,
    lab: &[[f64; 3]],
    included: &[bool],
    spacing: f64,
) -> Vec<Center> {
    let (w, h) = (image.width, image.height);
    // bounding box of the included region
    let (mut x0, mut y0, mut x1, mut y1) = (w, h, 0usize, 0usize);
    for y in 0..h {
        for x in 0..w {
            if included[y * w + x] {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
        }
    }

    let mut centers = Vec::new();
    let mut cy = y0 as f64 + spacing / 2.0;
    while cy <= y1 as f64 + 0.5 {
        let mut cx = x0 as f64 + spacing / 2.0;
        while cx <= x1 as f64 + 0.5 {
            let px = (cx.round() as usize).min(w - 1);
            let py = (cy.round() as usize).min(h - 1);
            if included[py * w + px] {
                let (gx, gy) = perturb_to_lowest_gradient(lab, included, w, h, px, py);
                centers.push(Center {
                    x: gx as f64,
                    y: gy as f64,
                    lab: lab[gy * w + gx],
                    m: INITIAL_COMPACTNESS,
                });
            }
            cx += spacing;
        }
        cy += spacing;
    }
    centers
}

/// Move to the 3x3 neighbor with the smallest color gradient so centers
/// avoid edges. Positions on the image border or outside the mask are skipped.
fn perturb_to_lowest_gradient(
    lab: &[[f64; 3]],
    included: &[bool],
    w: usize,
    h: usize,
    px: usize,
    py: usize,
) -> (usize, usize) {
    let mut best = (px, py);
    let mut best_grad = f64::INFINITY;
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            let x = px as i64 + dx;
            let y = py as i64 + dy;
            if x < 1 || y < 1 || x as usize >= w - 1 || y as usize >= h - 1 {
                continue;
            }
            let (x, y) = (x as usize, y as usize);
            if !included[y * w + x] {
                continue;
            }
            let gx = sq_lab_diff(lab[y * w + x + 1], lab[y * w + x - 1]);
            let gy = sq_lab_diff(lab[(y + 1) * w + x], lab[(y - 1) * w + x]);
            let grad = gx + gy;
            if grad < best_grad {
                best_grad = grad;
                best = (x, y);
            }
        }
    }
    best
}

fn sq_lab_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn update_centers(
    centers: &mut [Center],
    labels: &[i32],
    best_dc: &[f64],
    lab: &[[f64; 3]],
    w: usize,
    h: usize,
    included: &[bool],
) {
    let k = centers.len();
    let mut count = vec![0usize; k];
    let mut sx = vec![0f64; k];
    let mut sy = vec![0f64; k];
    let mut slab = vec![[0f64; 3]; k];
    let mut max_dc = vec![0f64; k];
    for y in 0..h {
        for x in 0..w {
            let idx = y * w + x;
            if !included[idx] || labels[idx] < 0 {
                continue;
            }
            let c = labels[idx] as usize;
            count[c] += 1;
            sx[c] += x as f64;
            sy[c] += y as f64;
            for ch in 0..3 {
                slab[c][ch] += lab[idx][ch];
            }
            max_dc[c] = max_dc[c].max(best_dc[idx]);
        }
    }
    for (c, center) in centers.iter_mut().enumerate() {
        if count[c] == 0 {
            continue;
        }
        let n = count[c] as f64;
        center.x = sx[c] / n;
        center.y = sy[c] / n;
        center.lab = [slab[c][0] / n, slab[c][1] / n, slab[c][2] / n];
        center.m = max_dc[c].max(COMPACTNESS_FLOOR);
    }
}

/// Make every label one connected region: keep each label's largest
/// component, fold orphan components into the neighbor sharing the longest
/// boundary (or give isolated ones a fresh label), then absorb segments
/// smaller than spacing^2/4 the same way.
fn enforce_connectivity(labels: &mut [i32], w: usize, h: usize, n_centers: usize, spacing: f64) {
    let components = find_components(labels, w, h);
    let mut largest: Vec<(usize, usize)> = Vec::new(); // (size, comp idx) per label
    let max_label = components.iter().map(|c| c.label).max().unwrap_or(0);
    largest.resize(max_label as usize + 1, (0, usize::MAX));
    for (i, comp) in components.iter().enumerate() {
        let slot = &mut largest[comp.label as usize];
        if comp.pixels.len() > slot.0 {
            *slot = (comp.pixels.len(), i);
        }
    }

    // resolved raster: canonical components keep their label, orphan pixels
    // start unset so boundary counts never follow a label that moves away
    let mut resolved = vec![-1i32; w * h];
    let mut orphans = Vec::new();
    for (i, comp) in components.iter().enumerate() {
        if largest[comp.label as usize].1 == i {
            for &idx in &comp.pixels {
                resolved[idx] = comp.label;
            }
        } else {
            orphans.push(comp);
        }
    }

    let mut next_label = n_centers as i32;
    while !orphans.is_empty() {
        let mut remaining = Vec::new();
        let mut progressed = false;
        for comp in orphans {
            match longest_boundary_neighbor(&comp.pixels, &resolved, w, h, -1) {
                Some(target) => {
                    for &idx in &comp.pixels {
                        resolved[idx] = target;
                    }
                    progressed = true;
                }
                None => remaining.push(comp),
            }
        }
        if !progressed && !remaining.is_empty() {
            // isolated island: becomes its own segment; the rest retry since
            // they may border it
            let first = remaining.remove(0);
            for &idx in &first.pixels {
                resolved[idx] = next_label;
            }
            next_label += 1;
        }
        orphans = remaining;
    }
    labels.copy_from_slice(&resolved);

    // absorb undersized segments, smallest first
    let min_size = (spacing * spacing / 4.0) as usize;
    loop {
        let mut sizes: std::collections::BTreeMap<i32, usize> = std::collections::BTreeMap::new();
        for &l in labels.iter() {
            if l >= 0 {
                *sizes.entry(l).or_insert(0) += 1;
            }
        }
        if sizes.len() <= 1 {
            break;
        }
        let candidate = sizes
            .iter()
            .filter(|(_, &s)| s < min_size)
            .min_by_key(|(&l, &s)| (s, l))
            .map(|(&l, _)| l);
        let Some(small) = candidate else { break };
        let pixels: Vec<usize> = (0..w * h).filter(|&i| labels[i] == small).collect();
        match longest_boundary_neighbor(&pixels, labels, w, h, small) {
            Some(target) => {
                for idx in pixels {
                    labels[idx] = target;
                }
            }
            None => break, // isolated island below min size stays
        }
    }
}

struct Component {
    label: i32,
    pixels: Vec<usize>,
}

fn find_components(labels: &[i32], w: usize, h: usize) -> Vec<Component> {
    let mut seen = vec![false; w * h];
    let mut components = Vec::new();
    for start in 0..w * h {
        if seen[start] || labels[start] < 0 {
            continue;
        }
        let label = labels[start];
        let mut pixels = vec![start];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            for (nx, ny) in neighbors4(x, y, w, h) {
                let nidx = ny * w + nx;
                if !seen[nidx] && labels[nidx] == label {
                    seen[nidx] = true;
                    stack.push(nidx);
                    pixels.push(nidx);
                }
            }
        }
        components.push(Component { label, pixels });
    }
    components
}

fn neighbors4(x: usize, y: usize, w: usize, h: usize) -> impl Iterator<Item = (usize, usize)> {
    [
        (x.wrapping_sub(1), y),
        (x + 1, y),
        (x, y.wrapping_sub(1)),
        (x, y + 1),
    ]
    .into_iter()
    .filter(move |&(nx, ny)| nx < w && ny < h)
}

fn longest_boundary_neighbor(
    pixels: &[usize],
    labels: &[i32],
    w: usize,
    h: usize,
    own: i32,
) -> Option<i32> {
    let mut counts: std::collections::BTreeMap<i32, usize> = std::collections::BTreeMap::new();
    for &idx in pixels {
        let (x, y) = (idx % w, idx / w);
        for (nx, ny) in neighbors4(x, y, w, h) {
            let l = labels[ny * w + nx];
            if l >= 0 && l != own {
                *counts.entry(l).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(l, _)| l)
}
