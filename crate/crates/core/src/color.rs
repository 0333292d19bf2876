//! Color space conversions: sRGB to HSV, CIELAB (D65 white point) and Rec. 601 luma.

/// Rec. 601 luma of an 8-bit RGB pixel, in [0, 255].
#[inline]
pub fn luma(rgb: [u8; 3]) -> f64 {
    0.299 * rgb[0] as f64 + 0.587 * rgb[1] as f64 + 0.114 * rgb[2] as f64
}

/// RGB in [0,1] to HSV, all channels in [0,1] (hue wraps at 1).
pub fn rgb_to_hsv(rgb: [f64; 3]) -> [f64; 3] {
    let [r, g, b] = rgb;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        ((g - b) / delta).rem_euclid(6.0) / 6.0
    } else if max == g {
        ((b - r) / delta + 2.0) / 6.0
    } else {
        ((r - g) / delta + 4.0) / 6.0
    };
    [h, s, v]
}

/// sRGB in [0,1] to CIELAB under the D65 white point.
/// L in [0,100], a and b roughly in [-128, 127].
pub fn rgb_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = rgb_to_xyz(rgb);
    // D65 reference white
    let (xn, yn, zn) = (0.95047, 1.0, 1.08883);
    let fx = lab_f(x / xn);
    let fy = lab_f(y / yn);
    let fz = lab_f(z / zn);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

fn rgb_to_xyz(rgb: [f64; 3]) -> [f64; 3] {
    let lin = rgb.map(srgb_inverse_gamma);
    [
        0.4124564 * lin[0] + 0.3575761 * lin[1] + 0.1804375 * lin[2],
        0.2126729 * lin[0] + 0.7151522 * lin[1] + 0.0721750 * lin[2],
        0.0193339 * lin[0] + 0.1191920 * lin[1] + 0.9503041 * lin[2],
    ]
}

fn srgb_inverse_gamma(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luma_weights_sum_to_one() {
        assert!((luma([255, 255, 255]) - 255.0).abs() < 1e-9);
        assert_eq!(luma([0, 0, 0]), 0.0);
    }

    #[test]
    fn hsv_known_values() {
        // pure red: h=0, s=1, v=1
        let [h, s, v] = rgb_to_hsv([1.0, 0.0, 0.0]);
        assert!((h - 0.0).abs() < 1e-12 && (s - 1.0).abs() < 1e-12 && (v - 1.0).abs() < 1e-12);
        // pure green: h=1/3
        let [h, _, _] = rgb_to_hsv([0.0, 1.0, 0.0]);
        assert!((h - 1.0 / 3.0).abs() < 1e-12);
        // gray: s=0
        let [_, s, _] = rgb_to_hsv([0.5, 0.5, 0.5]);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn lab_white_and_black() {
        let [l, a, b] = rgb_to_lab([1.0, 1.0, 1.0]);
        assert!((l - 100.0).abs() < 1e-3, "white L={l}");
        assert!(a.abs() < 1e-2 && b.abs() < 1e-2, "white a={a} b={b}");
        let [l, a, b] = rgb_to_lab([0.0, 0.0, 0.0]);
        assert!(l.abs() < 1e-9 && a.abs() < 1e-9 && b.abs() < 1e-9);
    }

    #[test]
    fn lab_mid_gray_is_neutral() {
        let [_, a, b] = rgb_to_lab([0.5, 0.5, 0.5]);
        assert!(a.abs() < 1e-2 && b.abs() < 1e-2);
    }
}
