//! Standard bivariate normal probabilities (Drezner–Wesolowsky with Genz's
//! refinements), accurate to about 1e-15 absolute.

use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

// Half of the symmetric Gauss–Legendre rules on [-1, 1] with 6, 12 and 20 points.
const GL6: ([f64; 3], [f64; 3]) = (
    [-0.932469514203152, -0.6612093864662645, -0.23861918608319693],
    [0.17132449237916975, 0.36076157304813894, 0.46791393457269137],
);
const GL12: ([f64; 6], [f64; 6]) = (
    [
        -0.9815606342467192,
        -0.9041172563704748,
        -0.7699026741943047,
        -0.5873179542866175,
        -0.3678314989981802,
        -0.1252334085114689,
    ],
    [
        0.04717533638651202,
        0.10693932599531888,
        0.1600783285433461,
        0.20316742672306565,
        0.23349253653835464,
        0.2491470458134027,
    ],
);
const GL20: ([f64; 10], [f64; 10]) = (
    [
        -0.9931285991850949,
        -0.9639719272779138,
        -0.9122344282513258,
        -0.8391169718222188,
        -0.7463319064601508,
        -0.636053680726515,
        -0.5108670019508271,
        -0.37370608871541955,
        -0.2277858511416451,
        -0.07652652113349734,
    ],
    [
        0.017614007139153273,
        0.04060142980038622,
        0.06267204833410944,
        0.08327674157670467,
        0.10193011981724026,
        0.11819453196151825,
        0.13168863844917653,
        0.14209610931838187,
        0.14917298647260366,
        0.15275338713072578,
    ],
);

fn phi(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

fn rule(r: f64) -> (&'static [f64], &'static [f64]) {
    let a = r.abs();
    if a < 0.3 {
        (&GL6.0, &GL6.1)
    } else if a < 0.75 {
        (&GL12.0, &GL12.1)
    } else {
        (&GL20.0, &GL20.1)
    }
}

/// `P(X > h, Y > k)` for a standard bivariate normal with correlation `r`.
/// Inputs must be finite.
pub fn upper(h: f64, k: f64, r: f64) -> f64 {
    let (x, w) = rule(r);
    if r.abs() < 0.925 {
        let hk = h * k;
        let hs = (h * h + k * k) / 2.0;
        let asr = r.asin();
        let mut bvn = 0.0;
        for (&xi, &wi) in x.iter().zip(w) {
            for sign in [1.0, -1.0] {
                let sn = (asr * (sign * xi + 1.0) / 2.0).sin();
                bvn += wi * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
        }
        return bvn * asr / (2.0 * TWO_PI) + phi(-h) * phi(-k);
    }

    // |r| >= 0.925: expand around the degenerate perfectly correlated case.
    let k = if r < 0.0 { -k } else { k };
    let hk = h * k;
    let mut bvn = 0.0;
    if r.abs() < 1.0 {
        let as_ = (1.0 - r) * (1.0 + r);
        let mut a = as_.sqrt();
        let bs = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        bvn = a
            * (-(bs / as_ + hk) / 2.0).exp()
            * (1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0);
        if hk > -160.0 {
            let b = bs.sqrt();
            bvn -= (-hk / 2.0).exp()
                * TWO_PI.sqrt()
                * phi(-b / a)
                * b
                * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (&xi, &wi) in x.iter().zip(w) {
            let xs = (a * (xi + 1.0)).powi(2);
            let rs = (1.0 - xs).sqrt();
            bvn += a
                * wi
                * ((-bs / (2.0 * xs) - hk / (1.0 + rs)).exp() / rs
                    - (-(bs / xs + hk) / 2.0).exp() * (1.0 + c * xs * (1.0 + d * xs)));
            let xs = as_ * (1.0 - xi).powi(2) / 4.0;
            let rs = (1.0 - xs).sqrt();
            bvn += a
                * wi
                * (-(bs / xs + hk) / 2.0).exp()
                * ((-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs - (1.0 + c * xs * (1.0 + d * xs)));
        }
        bvn = -bvn / TWO_PI;
    }
    if r > 0.0 {
        bvn + phi(-h.max(k))
    } else {
        -bvn + (phi(-h) - phi(-k)).max(0.0)
    }
}

/// `P(X <= h, Y <= k)`; either bound may be infinite.
pub fn cdf(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return 0.0;
    }
    match (h == f64::INFINITY, k == f64::INFINITY) {
        (true, true) => 1.0,
        (true, false) => phi(k),
        (false, true) => phi(h),
        (false, false) => upper(-h, -k, r).clamp(0.0, 1.0),
    }
}

/// Mass of the rectangle `(h0, h1] × (k0, k1]`.
pub fn rect(h0: f64, h1: f64, k0: f64, k1: f64, r: f64) -> f64 {
    let m = cdf(h1, k1, r) - cdf(h0, k1, r) - cdf(h1, k0, r) + cdf(h0, k0, r);
    m.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `P(X <= h, Y <= k)` as a 1-D integral over x of φ(x)·Φ((k − r x)/√(1−r²)),
    /// by composite Simpson on a fine grid.
    fn quad(h: f64, k: f64, r: f64) -> f64 {
        let lo = -10.0_f64;
        let hi = h.min(10.0);
        if hi <= lo {
            return 0.0;
        }
        let n = 20_000;
        let step = (hi - lo) / n as f64;
        let s = (1.0 - r * r).sqrt();
        let f = |x: f64| (-x * x / 2.0).exp() / TWO_PI.sqrt() * phi((k - r * x) / s);
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            let x = lo + i as f64 * step;
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        acc * step / 3.0
    }

    #[test]
    fn against_quadrature() {
        let pts = [-2.5, -1.0, -0.3, 0.0, 0.4, 1.2, 2.7];
        let rs = [-0.999, -0.97, -0.93, -0.9, -0.6, -0.2, 0.0, 0.1, 0.5, 0.8, 0.92, 0.95, 0.999];
        for &h in &pts {
            for &k in &pts {
                for &r in &rs {
                    let a = cdf(h, k, r);
                    let b = quad(h, k, r);
                    assert!((a - b).abs() < 1e-9, "h={h} k={k} r={r}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        // P(X<=0, Y<=0) = 1/4 + asin(r)/(2π)
        for r in [-0.95, -0.5, 0.0, 0.3, 0.93, 0.99] {
            let want = 0.25 + f64::asin(r) / TWO_PI;
            assert!((cdf(0.0, 0.0, r) - want).abs() < 1e-14, "r={r}");
        }
        assert!((cdf(0.7, -0.4, 0.0) - phi(0.7) * phi(-0.4)).abs() < 1e-15);
    }

    #[test]
    fn infinite_bounds() {
        assert_eq!(cdf(f64::NEG_INFINITY, 1.0, 0.5), 0.0);
        assert_eq!(cdf(f64::INFINITY, f64::INFINITY, 0.5), 1.0);
        assert!((cdf(f64::INFINITY, 0.3, 0.5) - phi(0.3)).abs() < 1e-15);
        let inf = f64::INFINITY;
        assert!((rect(-inf, inf, -inf, inf, 0.4) - 1.0).abs() < 1e-15);
    }
}
