use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analytic::EigenDensity;
use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::quadrature::{integrate_sine_map_split, Tolerance};

/// Default KS threshold is `KS_COEFFICIENT / sqrt(n)` (asymptotic, alpha ~ 0.01).
pub const KS_COEFFICIENT: f64 = 1.63;
/// The asymptotic KS threshold is only used from this sample size up.
pub const KS_MIN_SAMPLES: usize = 1000;
pub const CHI_SQUARE_ALPHA: f64 = 0.01;
/// Adjacent cells are merged until each expects at least this many counts.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;

const CDF_GRID: usize = 256;
const QUAD_TOL: Tolerance = Tolerance::new(1e-14, 1e-10);
// nested quadrature: the inner rule is kept well below the outer tolerance
// so its noise does not stall outer refinement
const OUTER_TOL: Tolerance = Tolerance::new(1e-12, 1e-8);
const INNER_TOL: Tolerance = Tolerance::new(1e-15, 1e-12);
const CDF_GRID_3: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GofTest {
    Ks,
    ChiSquare,
}

/// Outcome of a goodness-of-fit test.
///
/// KS passes when `statistic <= threshold`; chi-square passes when
/// `p_value >= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub test: GofTest,
    pub statistic: f64,
    pub n_samples: u64,
    pub threshold: f64,
    pub pass: bool,
    pub p_value: Option<f64>,
    pub degrees_of_freedom: Option<u64>,
}

/// Asymptotic Kolmogorov survival function `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut total = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        total += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * total).clamp(0.0, 1.0)
}

fn checked_cdf(cdf: &impl Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = cdf(x);
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("CDF returned {v} at {x}")));
    }
    Ok(v)
}

/// `sup |F_emp - F|` for any non-empty sample.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Domain("KS test needs samples".into()));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("NaN in KS samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = checked_cdf(&cdf, x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// One-sample KS test with the default threshold `1.63 / sqrt(n)`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<GofReport> {
    let threshold = KS_COEFFICIENT / (samples.len() as f64).sqrt();
    ks_test_with_threshold(samples, cdf, threshold)
}

pub fn ks_test_with_threshold(samples: &[f64], cdf: impl Fn(f64) -> f64, threshold: f64) -> Result<GofReport> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "asymptotic KS test needs at least {KS_MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let statistic = ks_statistic(samples, cdf)?;
    let n = samples.len();
    Ok(GofReport {
        test: GofTest::Ks,
        statistic,
        n_samples: n as u64,
        threshold,
        pass: statistic <= threshold,
        p_value: Some(kolmogorov_sf((n as f64).sqrt() * statistic)),
        degrees_of_freedom: None,
    })
}

/// Two-sample KS test, `sup |F_a - F_b|`; `n_samples` is the combined size.
pub fn ks_two_sample(a: &[f64], b: &[f64], threshold: f64) -> Result<GofReport> {
    if a.len() < KS_MIN_SAMPLES || b.len() < KS_MIN_SAMPLES {
        return Err(Error::Domain(format!("asymptotic KS test needs at least {KS_MIN_SAMPLES} samples per side")));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::Domain("NaN in KS samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let effective = na * nb / (na + nb);
    Ok(GofReport {
        test: GofTest::Ks,
        statistic: d,
        n_samples: (a.len() + b.len()) as u64,
        threshold,
        pass: d <= threshold,
        p_value: Some(kolmogorov_sf(effective.sqrt() * d)),
        degrees_of_freedom: None,
    })
}

/// Pearson test of observed cell counts against cell probabilities (which
/// are rescaled to sum to one). Adjacent cells are merged, in order, until
/// each expects at least [`MIN_EXPECTED_COUNT`].
pub fn chi_square_probabilities(observed: &[u64], probabilities: &[f64]) -> Result<GofReport> {
    if observed.len() != probabilities.len() {
        return Err(Error::Shape("observed and probability vectors differ in length".into()));
    }
    if probabilities.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::Domain("cell probabilities must be non-negative".into()));
    }
    let p_total: f64 = probabilities.iter().sum();
    let n: u64 = observed.iter().sum();
    if n == 0 || !(p_total > 0.0) {
        return Err(Error::Configuration("chi-square test needs samples and positive mass".into()));
    }
    let scale = n as f64 / p_total;
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probabilities) {
        obs += o as f64;
        exp += p * scale;
        if exp >= MIN_EXPECTED_COUNT {
            groups.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => groups.push((obs, exp)),
        }
    }
    if groups.len() < 2 {
        return Err(Error::Configuration(format!(
            "chi-square test needs at least 2 effective bins, got {}",
            groups.len()
        )));
    }
    let statistic: f64 = groups.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = groups.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Configuration(e.to_string()))?;
    let p_value = dist.sf(statistic);
    Ok(GofReport {
        test: GofTest::ChiSquare,
        statistic,
        n_samples: n,
        threshold: CHI_SQUARE_ALPHA,
        pass: p_value >= CHI_SQUARE_ALPHA,
        p_value: Some(p_value),
        degrees_of_freedom: Some(dof as u64),
    })
}

fn invert_monotone(f: impl Fn(f64) -> f64, target: f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn bin_index(edges: &[f64], x: f64) -> usize {
    let bins = edges.len() - 1;
    edges.partition_point(|&e| e <= x).saturating_sub(1).min(bins - 1)
}

/// Chi-square test of 1-D samples on `[lo, hi]` against a CDF, with
/// `bins` equal-probability bins.
pub fn chi_square_1d(samples: &[f64], cdf: impl Fn(f64) -> f64, lo: f64, hi: f64, bins: usize) -> Result<GofReport> {
    if bins < 2 || !(lo < hi) {
        return Err(Error::Configuration("need at least 2 bins on a non-empty interval".into()));
    }
    if samples.iter().any(|&x| !(x >= lo && x <= hi)) {
        return Err(Error::Domain(format!("samples outside [{lo}, {hi}]")));
    }
    let (f_lo, f_hi) = (checked_cdf(&cdf, lo)?, checked_cdf(&cdf, hi)?);
    let mut edges = vec![lo];
    for k in 1..bins {
        let target = f_lo + (f_hi - f_lo) * k as f64 / bins as f64;
        edges.push(invert_monotone(&cdf, target, lo, hi));
    }
    edges.push(hi);
    edges.dedup();
    let mut observed = vec![0u64; edges.len() - 1];
    for &x in samples {
        observed[bin_index(&edges, x)] += 1;
    }
    let probabilities = edges
        .windows(2)
        .map(|w| Ok(checked_cdf(&cdf, w[1])? - checked_cdf(&cdf, w[0])?))
        .collect::<Result<Vec<f64>>>()?;
    chi_square_probabilities(&observed, &probabilities)
}

/// Equal-probability edges on `[lo, hi]` for an unnormalized weight whose
/// mass over a subinterval is given by `mass`, from a tabulated CDF.
fn equal_probability_edges(mass: &impl Fn(f64, f64) -> f64, lo: f64, hi: f64, bins: usize, grid_size: usize) -> Vec<f64> {
    let grid: Vec<f64> = (0..=grid_size).map(|i| lo + (hi - lo) * i as f64 / grid_size as f64).collect();
    let mut cumulative = vec![0.0];
    for w in grid.windows(2) {
        let last = *cumulative.last().unwrap();
        cumulative.push(last + mass(w[0], w[1]).max(0.0));
    }
    let total = *cumulative.last().unwrap();
    let mut edges = vec![lo];
    for k in 1..bins {
        let target = total * k as f64 / bins as f64;
        let i = cumulative.partition_point(|&c| c < target).clamp(1, grid_size);
        let (c0, c1) = (cumulative[i - 1], cumulative[i]);
        let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.5 };
        edges.push(grid[i - 1] + frac * (grid[i] - grid[i - 1]));
    }
    edges.push(hi);
    edges.dedup_by(|a, b| a <= b);
    edges
}

/// Chi-square test of sorted spectra against an eigenvalue density on the
/// ordered region `l_1 >= l_2 >= ...`, for `m = 2` or `m = 3`.
///
/// The largest eigenvalue is split into `bins` equal-probability slabs. For
/// `m = 3` each slab is further split into `bins` equal-width cells in
/// `t = (l_2 - lo) / (hi - lo)`, where `[lo, hi]` is the allowed range of
/// `l_2` given `l_1`. Cell probabilities come from (nested) quadrature of the
/// density and are normalized over the region, so unnormalized densities
/// are accepted.
pub fn chi_square_simplex(spectra: &[Spectrum<f64>], density: &EigenDensity, bins: usize) -> Result<GofReport> {
    let m = density.m();
    if bins < 2 {
        return Err(Error::Configuration("need at least 2 bins".into()));
    }
    if let Some(s) = spectra.iter().find(|s| s.len() != m) {
        return Err(Error::Shape(format!("density has m = {m}, spectrum has {} values", s.len())));
    }
    let f = |l: &[f64]| density.raw_factor(l).unwrap_or(0.0);
    match m {
        2 => {
            let mass = |a: f64, b: f64| integrate_sine_map_split(|x, to_b| f(&[x, (1.0 - b) + to_b]), a, b, QUAD_TOL).value;
            let edges = equal_probability_edges(&mass, 0.5, 1.0, bins, CDF_GRID);
            let probabilities: Vec<f64> = edges.windows(2).map(|w| mass(w[0], w[1])).collect();
            let mut observed = vec![0u64; edges.len() - 1];
            for s in spectra {
                observed[bin_index(&edges, s.values()[0])] += 1;
            }
            chi_square_probabilities(&observed, &probabilities)
        }
        3 => {
            let range = |x: f64, rest: f64| (rest / 2.0, x.min(rest));
            // mass of the slab x in [a, b] with t in [t0, t1]
            let cell = |a: f64, b: f64, t0: f64, t1: f64| {
                let slab = |a: f64, b: f64| {
                    integrate_sine_map_split(
                        |x, to_b| {
                            let rest = (1.0 - b) + to_b;
                            let (lo, hi) = range(x, rest);
                            let w = hi - lo;
                            if w <= 0.0 {
                                return 0.0;
                            }
                            let upper = lo + t1 * w;
                            // l_3 = 1 - x - y, exact zero at the top of the full range
                            let gap = if t1 == 1.0 && x >= 0.5 { 0.0 } else { rest - upper };
                            integrate_sine_map_split(|y, to_upper| f(&[x, y, gap + to_upper]), lo + t0 * w, upper, INNER_TOL)
                                .value
                        },
                        a,
                        b,
                        OUTER_TOL,
                    )
                    .value
                };
                // the l_2 range has a kink at x = 1/2
                if a < 0.5 && b > 0.5 {
                    slab(a, 0.5) + slab(0.5, b)
                } else {
                    slab(a, b)
                }
            };
            let edges = equal_probability_edges(&|a, b| cell(a, b, 0.0, 1.0), 1.0 / 3.0, 1.0, bins, CDF_GRID_3);
            let slabs = edges.len() - 1;
            let mut probabilities = Vec::with_capacity(slabs * bins);
            for w in edges.windows(2) {
                for j in 0..bins {
                    probabilities.push(cell(w[0], w[1], j as f64 / bins as f64, (j + 1) as f64 / bins as f64));
                }
            }
            let mut observed = vec![0u64; slabs * bins];
            for s in spectra {
                let v = s.values();
                let i = bin_index(&edges, v[0]);
                let (lo, hi) = range(v[0], 1.0 - v[0]);
                let t = if hi > lo { ((v[1] - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
                let j = ((t * bins as f64) as usize).min(bins - 1);
                observed[i * bins + j] += 1;
            }
            chi_square_probabilities(&observed, &probabilities)
        }
        _ => Err(Error::Configuration(format!("simplex chi-square supports m = 2 or 3, got {m}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::DensityKind;
    use crate::samplers::{RngStream, SimplexSampler};
    use rand::Rng;

    fn uniform(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| rng.random()).collect()
    }

    #[test]
    fn ks_accepts_matching_uniform() {
        let r = ks_test(&uniform(1, 100_000), |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.statistic < 0.01 && r.pass);
        assert!((r.threshold - 1.63 / 100_000f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ks_constant_samples_fail() {
        let r = ks_test(&vec![0.5; 1000], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.statistic >= 0.5);
        assert!(!r.pass);
    }

    #[test]
    fn ks_deterministic() {
        let a = ks_test(&uniform(9, 1000), |x| x).unwrap();
        let b = ks_test(&uniform(9, 1000), |x| x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ks_errors() {
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::Domain(_))));
        assert!(ks_test(&uniform(1, 999), |x| x).is_err());
        assert!(ks_statistic(&[0.5], |_| 2.0).is_err());
    }

    #[test]
    fn kolmogorov_tail_at_threshold() {
        assert!((kolmogorov_sf(1.63) - 0.01).abs() < 0.001);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn two_sample_same_and_shifted() {
        let a = uniform(1, 20_000);
        let b = uniform(2, 20_000);
        assert!(ks_two_sample(&a, &b, 0.02).unwrap().pass);
        let shifted: Vec<f64> = b.iter().map(|x| x * 0.9).collect();
        assert!(!ks_two_sample(&a, &shifted, 0.02).unwrap().pass);
    }

    #[test]
    fn chi_square_1d_uniform_and_control() {
        let xs = uniform(4, 50_000);
        assert!(chi_square_1d(&xs, |x| x, 0.0, 1.0, 20).unwrap().pass);
        assert!(!chi_square_1d(&xs, |x| x * x, 0.0, 1.0, 20).unwrap().pass);
    }

    #[test]
    fn merging_small_cells() {
        let r = chi_square_probabilities(&[3, 1, 6, 10], &[0.15, 0.05, 0.3, 0.5]).unwrap();
        assert_eq!(r.degrees_of_freedom, Some(1));
        assert!(matches!(chi_square_probabilities(&[2, 2], &[0.5, 0.5]), Err(Error::Configuration(_))));
    }

    #[test]
    fn simplex_bures_against_flat_fails() {
        let sampler = SimplexSampler::new(EigenDensity::new(3, DensityKind::Bures).unwrap()).unwrap();
        let mut rng = RngStream::new(21, 0);
        let spectra: Vec<_> = (0..20_000).map(|_| sampler.sample(&mut rng).unwrap()).collect();
        let right = chi_square_simplex(&spectra, sampler.density(), 6).unwrap();
        let wrong = chi_square_simplex(&spectra, &EigenDensity::new(3, DensityKind::Flat).unwrap(), 6).unwrap();
        assert!(right.pass, "{right:?}");
        assert!(!wrong.pass, "{wrong:?}");
    }

    #[test]
    fn simplex_hs_two_level() {
        let sampler = SimplexSampler::new(EigenDensity::new(2, DensityKind::HilbertSchmidt).unwrap()).unwrap();
        let mut rng = RngStream::new(22, 0);
        let spectra: Vec<_> = (0..20_000).map(|_| sampler.sample(&mut rng).unwrap()).collect();
        assert!(chi_square_simplex(&spectra, sampler.density(), 20).unwrap().pass);
        assert!(chi_square_simplex(&spectra, &EigenDensity::new(4, DensityKind::Flat).unwrap(), 20).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = ks_test(&uniform(5, 1000), |x| x).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<GofReport>(&text).unwrap(), r);
    }
}
