//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets the tolerance, so integrable endpoint singularities are
//! resolved by repeated splitting towards the endpoint. Nodes never touch the
//! endpoints themselves.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    pub converged: bool,
}

const MAX_INTERVALS: usize = 4000;

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Integral {
    if a == b {
        return Integral { value: 0.0, abs_error: 0.0, intervals: 0, converged: true };
    }
    let (value, err) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, err });
    let (mut total, mut total_err) = (value, err);

    while total_err > tol.abs.max(tol.rel * total.abs()) && heap.len() < MAX_INTERVALS {
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision
            heap.push(Piece { err: 0.0, ..worst });
            total_err = heap.iter().map(|p| p.err).sum();
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
    }

    // re-sum to shed accumulated update rounding
    let value = heap.iter().map(|p| p.value).sum();
    let abs_error: f64 = heap.iter().map(|p| p.err).sum();
    Integral {
        value,
        abs_error,
        intervals: heap.len(),
        converged: abs_error <= tol.abs.max(tol.rel * f64::abs(value)),
    }
}

/// Integrates over `[a, b]` after the substitution `x = a + (b - a) sin^2(t)`.
///
/// The Jacobian `2 (b - a) sin t cos t` cancels inverse square-root
/// singularities at either endpoint, leaving a smooth integrand.
pub fn integrate_sine_map(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Integral {
    integrate_sine_map_split(|x, _| f(x), a, b, tol)
}

/// As [`integrate_sine_map`], but calls `f(x, b - x)` with the distance to
/// the right endpoint computed as `(b - a) cos^2(t)` rather than by
/// subtraction, so integrands singular in `b - x` stay accurate next to `b`.
pub fn integrate_sine_map_split(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Integral {
    let width = b - a;
    integrate(
        |t| {
            let (s, c) = t.sin_cos();
            let jac = 2.0 * width * s * c;
            if jac == 0.0 {
                0.0
            } else {
                f(a + width * s * s, width * c * c) * jac
            }
        },
        0.0,
        FRAC_PI_2,
        tol,
    )
}

/// Integrates `f(l1, l2, l3)` over the probability 2-simplex with respect to
/// `dl1 dl2` (`l3 = 1 - l1 - l2`), using the sine map on both levels.
pub fn integrate_simplex3(f: impl Fn(f64, f64, f64) -> f64, tol: Tolerance) -> Integral {
    let inner_tol = Tolerance::new(tol.abs * 0.1, tol.rel * 0.1);
    integrate_sine_map_split(
        |l1, rest| {
            if rest <= 0.0 {
                return 0.0;
            }
            integrate_sine_map_split(|l2, l3| f(l1, l2, l3), 0.0, rest, inner_tol).value
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 1.0, Tolerance::default());
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        // int_0^1 r^2 / sqrt(1 - r^2) dr = pi / 4
        let f = |r: f64| r * r / (1.0 - r * r).sqrt();
        let mapped = integrate_sine_map(f, 0.0, 1.0, Tolerance::default());
        assert!((mapped.value - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
    }

    #[test]
    fn simplex_area_and_moment() {
        let area = integrate_simplex3(|_, _, _| 1.0, Tolerance::default());
        assert!((area.value - 0.5).abs() < 1e-13);
        // int l1 l2 l3 over the simplex = 1/5! = 1/120
        let m = integrate_simplex3(|a, b, c| a * b * c, Tolerance::default());
        assert!((m.value - 1.0 / 120.0).abs() < 1e-14);
    }

    #[test]
    fn log_singularity() {
        let r = integrate(|x| -x.ln(), 0.0, 1.0, Tolerance::new(1e-12, 1e-12));
        assert!((r.value - 1.0).abs() < 1e-10);
    }
}
