//! Average entanglement entropy of the induced ensemble.
//!
//! Both closed forms are rational numbers in natural units and are written
//! generically over any field supporting `Num + FromPrimitive`, so the same
//! code runs in `f64` and in exact [`BigRational`] arithmetic. The conversion
//! to bits happens once, at the `f64` boundary.

use std::f64::consts::LOG2_E;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

/// Largest `n` evaluated through the binomial alternating sum; beyond this
/// the Page sum is used.
pub const ALTERNATING_SUM_MAX_N: usize = 60;

fn lit<T: FromPrimitive>(k: usize) -> T {
    T::from_usize(k).expect("integer representable")
}

/// Average entropy (nats) for `m = 2` via the binomial alternating double
/// sum, with prefactor `(2n-1)! / ((n-2)! (n-1)! 4^(n-1))`.
///
/// In floating point the alternating terms cancel catastrophically for
/// moderate `n`; evaluate in [`BigRational`] for anything beyond a few
/// dozen.
pub fn two_level_entropy_sum<T: Num + FromPrimitive + Clone>(n: usize) -> T {
    assert!(n >= 2, "two-level entropy sum needs n >= 2");
    let mut prefactor = T::one();
    // (2n-1)! / ((n-1)! (n-2)!) = (2n-1)(2n-2)...(n) / (n-2)!
    for k in n..=(2 * n - 1) {
        prefactor = prefactor * lit(k);
    }
    for k in 2..=(n - 2) {
        prefactor = prefactor / lit(k);
    }
    for _ in 0..(n - 1) {
        prefactor = prefactor / lit(4);
    }

    let mut total = T::zero();
    let mut binomial = T::one();
    for s in 0..=(n - 2) {
        if s > 0 {
            binomial = binomial * lit(n - 1 - s) / lit(s);
        }
        let mut odd_harmonic = T::zero();
        for t in 0..=(s + 1) {
            odd_harmonic = odd_harmonic + T::one() / lit(2 * t + 1);
        }
        let term = binomial.clone() * odd_harmonic / (lit::<T>((s + 2) * (2 * s + 3)));
        total = if s % 2 == 0 { total + term } else { total - term };
    }
    prefactor * total
}

/// `sum_{k=n+1}^{mn} 1/k - (m-1)/(2n)` (nats), for `m <= n`.
pub fn page_entropy_sum<T: Num + FromPrimitive + Clone>(m: usize, n: usize) -> T {
    let mut total = T::zero();
    for k in (n + 1)..=(m * n) {
        total = total + T::one() / lit(k);
    }
    total - lit::<T>(m - 1) / lit(2 * n)
}

/// Exact average entropy for `m = 2` in nats.
pub fn two_level_entropy_exact(n: usize) -> BigRational {
    two_level_entropy_sum::<BigRational>(n)
}

/// Exact Page value in nats.
pub fn page_entropy_exact(m: usize, n: usize) -> BigRational {
    page_entropy_sum::<BigRational>(m, n)
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // fall back through a scaled integer division
        let scale = BigInt::from(10u64).pow(18);
        let scaled = (q.numer() * &scale) / q.denom();
        scaled.to_f64().unwrap_or(f64::NAN) / 1e18
    })
}

/// How to treat `m > n` in [`avg_entropy_page`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Reject `m > n`.
    Strict,
    /// Use the `(m, n) <-> (n, m)` symmetry.
    Symmetric,
}

/// Average entanglement entropy in bits for `m = 2` and ancilla dimension `n`.
///
/// For `n <= ALTERNATING_SUM_MAX_N` the alternating sum is evaluated exactly
/// in rational arithmetic; larger `n` use the Page sum.
pub fn avg_entropy_induced_2n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("two-level average entropy needs n >= 2, got {n}")));
    }
    if n <= ALTERNATING_SUM_MAX_N {
        Ok(rational_to_f64(&two_level_entropy_exact(n)) * LOG2_E)
    } else {
        avg_entropy_page(2, n, Orientation::Strict)
    }
}

/// Page average entropy in bits, summed with Neumaier compensation.
pub fn avg_entropy_page(m: usize, n: usize, orientation: Orientation) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("dimensions must be >= 1".into()));
    }
    let (m, n) = match (m > n, orientation) {
        (false, _) => (m, n),
        (true, Orientation::Symmetric) => (n, m),
        (true, Orientation::Strict) => {
            return Err(Error::Domain(format!("Page formula needs m <= n, got m={m}, n={n}")))
        }
    };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in (n + 1)..=(m * n) {
        let x = 1.0 / k as f64;
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    Ok((sum + comp - (m as f64 - 1.0) / (2.0 * n as f64)) * LOG2_E)
}
