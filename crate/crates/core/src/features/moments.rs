//! Translation-, scale- and rotation-invariant shape moments of a binary
//! region.
//!
//! The 38-value basis is fixed as:
//! - 0..7:  Hu's seven invariants from normalized central moments;
//! - 7..21: magnitudes of scale-normalized complex moments c_pq for
//!   (p,q) in {(2,0),(1,1),(3,0),(2,1),(4,0),(3,1),(2,2),(5,0),(4,1),
//!   (3,2),(6,0),(5,1),(4,2),(3,3)};
//! - 21..38: real/imaginary parts of phase-cancelled products of those
//!   moments (each product's rotation phases sum to zero), ending with
//!   Re(c51 * conj(c40)).
//!
//! Every entry is exactly invariant under continuous rotation in exact
//! arithmetic; on the pixel grid, translation is bit-exact, 90-degree
//! rotation is exact up to summation order, and x2 replication matches to
//! discretization error.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cpx {
    re: f64,
    im: f64,
}

impl Cpx {
    const ZERO: Cpx = Cpx { re: 0.0, im: 0.0 };
    const ONE: Cpx = Cpx { re: 1.0, im: 0.0 };

    fn mul(self, o: Cpx) -> Cpx {
        Cpx {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn conj(self) -> Cpx {
        Cpx {
            re: self.re,
            im: -self.im,
        }
    }

    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn scale(self, s: f64) -> Cpx {
        Cpx {
            re: self.re * s,
            im: self.im * s,
        }
    }
}

const MAG_ORDERS: [(usize, usize); 14] = [
    (2, 0),
    (1, 1),
    (3, 0),
    (2, 1),
    (4, 0),
    (3, 1),
    (2, 2),
    (5, 0),
    (4, 1),
    (3, 2),
    (6, 0),
    (5, 1),
    (4, 2),
    (3, 3),
];

pub fn shape_moments(region: &[(u32, u32)]) -> Result<[f64; 38]> {
    if region.is_empty() {
        return Err(Error::validation("empty region"));
    }
    let n = region.len() as f64;
    let cx = region.iter().map(|&(x, _)| x as f64).sum::<f64>() / n;
    let cy = region.iter().map(|&(_, y)| y as f64).sum::<f64>() / n;

    // complex moments c_pq = sum z^p conj(z)^q with z centered
    let mut c = [[Cpx::ZERO; 7]; 7];
    // real central moments up to order 3 for the Hu set
    let mut mu = [[0f64; 4]; 4];
    for &(x, y) in region {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        let z = Cpx { re: dx, im: dy };
        let zc = z.conj();
        let mut zp = [Cpx::ONE; 7];
        let mut zq = [Cpx::ONE; 7];
        for i in 1..7 {
            zp[i] = zp[i - 1].mul(z);
            zq[i] = zq[i - 1].mul(zc);
        }
        for &(p, q) in &MAG_ORDERS {
            let t = zp[p].mul(zq[q]);
            c[p][q].re += t.re;
            c[p][q].im += t.im;
        }
        let mut xp = [1f64; 4];
        let mut yp = [1f64; 4];
        for i in 1..4 {
            xp[i] = xp[i - 1] * dx;
            yp[i] = yp[i - 1] * dy;
        }
        for p in 0..4 {
            for q in 0..4 {
                if p + q <= 3 {
                    mu[p][q] += xp[p] * yp[q];
                }
            }
        }
    }

    // scale normalization: c_pq / mu00^((p+q+2)/2), eta_pq likewise
    let mut ch = [[Cpx::ZERO; 7]; 7];
    for &(p, q) in &MAG_ORDERS {
        ch[p][q] = c[p][q].scale(1.0 / n.powf((p + q) as f64 / 2.0 + 1.0));
    }
    let eta = |p: usize, q: usize| mu[p][q] / n.powf((p + q) as f64 / 2.0 + 1.0);

    let mut out = [0f64; 38];
    hu_invariants(&eta, &mut out[0..7]);
    for (i, &(p, q)) in MAG_ORDERS.iter().enumerate() {
        out[7 + i] = ch[p][q].abs();
    }

    let c20 = ch[2][0];
    let c21 = ch[2][1];
    let c30 = ch[3][0];
    let c31 = ch[3][1];
    let c40 = ch[4][0];
    let c41 = ch[4][1];
    let c32 = ch[3][2];
    let c50 = ch[5][0];
    let c42 = ch[4][2];
    let c51 = ch[5][1];
    let products = [
        c21.mul(c21).mul(c20.conj()),
        c30.mul(c20.conj()).mul(c21.conj()),
        c31.mul(c20.conj()),
        c40.mul(c20.conj()).mul(c20.conj()),
        c41.mul(c30.conj()),
        c32.mul(c21.conj()),
        c50.mul(c30.conj()).mul(c20.conj()),
        c42.mul(c20.conj()),
    ];
    for (i, p) in products.iter().enumerate() {
        out[21 + 2 * i] = p.re;
        out[21 + 2 * i + 1] = p.im;
    }
    out[37] = c51.mul(c40.conj()).re;
    Ok(out)
}

fn hu_invariants(eta: &dyn Fn(usize, usize) -> f64, out: &mut [f64]) {
    let (n20, n02, n11) = (eta(2, 0), eta(0, 2), eta(1, 1));
    let (n30, n03, n21, n12) = (eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2));
    let a = n30 + n12;
    let b = n21 + n03;
    out[0] = n20 + n02;
    out[1] = (n20 - n02).powi(2) + 4.0 * n11 * n11;
    out[2] = (n30 - 3.0 * n12).powi(2) + (3.0 * n21 - n03).powi(2);
    out[3] = a * a + b * b;
    out[4] = (n30 - 3.0 * n12) * a * (a * a - 3.0 * b * b)
        + (3.0 * n21 - n03) * b * (3.0 * a * a - b * b);
    out[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    out[6] = (3.0 * n21 - n03) * a * (a * a - 3.0 * b * b)
        - (n30 - 3.0 * n12) * b * (3.0 * a * a - b * b);
}
