//! Rejection sampling of eigenvalue spectra from a density on the simplex.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::RngStream;
use crate::analytic::{DensityKind, EigenDensity};
use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Largest supported spectrum length.
pub const MAX_SIMPLEX_DIM: usize = 6;
/// Below this acceptance rate the sampler refuses to run.
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-6;

const CALIBRATION_PROPOSALS: u64 = 1_000_000;
const CALIBRATION_TARGET_ACCEPTS: u64 = 2_000;
const CALIBRATION_SEED: u64 = 0x5eed_ca11;
const ENVELOPE_MARGIN: f64 = 1.1;

/// How proposals are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposal {
    /// Uniform on the simplex (symmetric Dirichlet(1)).
    Uniform,
    /// `l = z^2 / |z|^2` with `z` uniform on the sphere, i.e. symmetric
    /// Dirichlet(1/2). Absorbs a `prod l^{-1/2}` factor of the target.
    Sphere,
}

impl Proposal {
    /// Registered proposal for a density kind: the sphere map for Bures,
    /// whose factor is singular on the simplex boundary.
    pub fn for_kind(kind: DensityKind) -> Self {
        match kind {
            DensityKind::Bures => Proposal::Sphere,
            _ => Proposal::Uniform,
        }
    }

    fn draw<R: Rng + ?Sized>(self, m: usize, rng: &mut R, buf: &mut Vec<f64>) {
        buf.clear();
        match self {
            Proposal::Uniform => buf.extend((0..m).map(|_| rng.sample::<f64, _>(Exp1))),
            Proposal::Sphere => buf.extend((0..m).map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                z * z
            })),
        }
        let total: f64 = buf.iter().sum();
        for v in buf.iter_mut() {
            *v /= total;
        }
    }
}

/// Rejection sampler for one registered density.
#[derive(Debug, Clone)]
pub struct SimplexSampler {
    density: EigenDensity,
    proposal: Proposal,
    ln_envelope: f64,
    acceptance_rate: f64,
}

impl SimplexSampler {
    /// Sampler with the registered proposal for the density kind.
    pub fn new(density: EigenDensity) -> Result<Self> {
        let proposal = Proposal::for_kind(density.kind());
        Self::with_proposal(density, proposal)
    }

    /// Builds the envelope and measures the acceptance rate on a fixed
    /// calibration stream.
    pub fn with_proposal(density: EigenDensity, proposal: Proposal) -> Result<Self> {
        let m = density.m();
        if m > MAX_SIMPLEX_DIM {
            return Err(Error::Configuration(format!(
                "simplex rejection supports m <= {MAX_SIMPLEX_DIM}, got {m}"
            )));
        }
        if density.kind() == DensityKind::Bures && proposal == Proposal::Uniform {
            return Err(Error::Configuration(
                "Bures factor has no finite bound on the simplex under uniform proposals".into(),
            ));
        }
        let mut sampler = Self { density, proposal, ln_envelope: 0.0, acceptance_rate: 1.0 };
        sampler.ln_envelope = sampler.find_envelope()?;
        sampler.calibrate()?;
        Ok(sampler)
    }

    pub fn density(&self) -> &EigenDensity {
        &self.density
    }

    pub fn proposal(&self) -> Proposal {
        self.proposal
    }

    /// Log of the envelope constant bounding [`Self::ln_ratio`].
    pub fn ln_envelope(&self) -> f64 {
        self.ln_envelope
    }

    /// Acceptance rate measured during calibration.
    pub fn acceptance_rate(&self) -> f64 {
        self.acceptance_rate
    }

    /// Log of target density over proposal density, up to a constant.
    pub fn ln_ratio(&self, lambda: &[f64]) -> f64 {
        match self.proposal {
            Proposal::Sphere => match self.density.kind() {
                DensityKind::Bures => self.density.ln_bures_regular_part(lambda),
                // divide by the Dirichlet(1/2) density
                _ => self.density.ln_raw_factor(lambda) + 0.5 * lambda.iter().map(|l| l.ln()).sum::<f64>(),
            },
            Proposal::Uniform => self.density.ln_raw_factor(lambda),
        }
    }

    /// Grid search over the simplex followed by local pattern search; the
    /// maximum found is inflated by `ENVELOPE_MARGIN`. Returns the log.
    fn find_envelope(&self) -> Result<f64> {
        let m = self.density.m();
        if m == 1 {
            return Ok(0.0);
        }
        let resolution = match m {
            2 => 2000,
            3 => 200,
            4 => 60,
            5 => 30,
            _ => 20,
        };
        let mut best = (f64::NEG_INFINITY, vec![1.0 / m as f64; m]);
        let mut counts = vec![0usize; m];
        let mut lambda = vec![0.0; m];
        compositions(resolution, m, &mut counts, 0, &mut |c| {
            // small distinct offsets keep grid points off the coincidence
            // hyperplanes where Vandermonde factors vanish
            let denom = resolution as f64 + 0.1 * (m - 1) as f64 / 2.0;
            for (i, (l, &k)) in lambda.iter_mut().zip(c).enumerate() {
                *l = (k as f64 + 0.1 * i as f64 / m as f64) / denom;
            }
            let v = self.ln_ratio(&lambda);
            if v > best.0 {
                best = (v, lambda.clone());
            }
        });
        if !best.0.is_finite() {
            return Err(Error::Configuration(format!(
                "{} density has no finite envelope under {:?} proposals",
                self.density.kind(),
                self.proposal
            )));
        }
        let (mut value, mut point) = best;
        let mut step = 1.0 / resolution as f64;
        while step > 1e-12 {
            let mut improved = false;
            for i in 0..m {
                for j in 0..m {
                    if i == j || point[j] < step {
                        continue;
                    }
                    let mut trial = point.clone();
                    trial[i] += step;
                    trial[j] -= step;
                    let v = self.ln_ratio(&trial);
                    if v.is_finite() && v > value {
                        value = v;
                        point = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if value == f64::NEG_INFINITY {
            return Err(Error::Configuration("density vanishes on the whole simplex".into()));
        }
        Ok(value + ENVELOPE_MARGIN.ln())
    }

    fn calibrate(&mut self) -> Result<()> {
        let mut rng = RngStream::new(CALIBRATION_SEED, 0);
        let m = self.density.m();
        let mut buf = Vec::with_capacity(m);
        let (mut proposals, mut accepted) = (0u64, 0u64);
        while proposals < CALIBRATION_PROPOSALS && accepted < CALIBRATION_TARGET_ACCEPTS {
            proposals += 1;
            self.proposal.draw(m, &mut rng, &mut buf);
            if self.accept(&buf, &mut rng)? {
                accepted += 1;
            }
        }
        let rate = accepted as f64 / proposals as f64;
        if rate < MIN_ACCEPTANCE_RATE {
            return Err(Error::Efficiency { rate, proposals });
        }
        self.acceptance_rate = rate;
        Ok(())
    }

    fn accept<R: Rng + ?Sized>(&self, lambda: &[f64], rng: &mut R) -> Result<bool> {
        let ln_ratio = self.ln_ratio(lambda);
        if ln_ratio > self.ln_envelope {
            return Err(Error::Configuration(format!(
                "log envelope {} violated by log ratio {ln_ratio} at {lambda:?}",
                self.ln_envelope
            )));
        }
        let u: f64 = rng.random();
        Ok(u.ln() + self.ln_envelope < ln_ratio)
    }

    /// Draws one spectrum (sorted descending).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Spectrum<f64>> {
        let m = self.density.m();
        let mut buf = Vec::with_capacity(m);
        loop {
            self.proposal.draw(m, rng, &mut buf);
            if self.accept(&buf, rng)? {
                return Spectrum::new(buf);
            }
        }
    }
}

fn compositions(total: usize, parts: usize, counts: &mut [usize], index: usize, visit: &mut impl FnMut(&[usize])) {
    if index == parts - 1 {
        counts[index] = total;
        visit(counts);
        return;
    }
    for k in 0..=total {
        counts[index] = k;
        compositions(total - k, parts, counts, index + 1, visit);
    }
}

/// One draw from the `m`-level density of the given kind. Builds (and
/// calibrates) a sampler per call; hold a [`SimplexSampler`] for batches.
pub fn sample_simplex_density<R: Rng + ?Sized>(m: usize, kind: DensityKind, rng: &mut R) -> Result<Spectrum<f64>> {
    SimplexSampler::new(EigenDensity::new(m, kind)?)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_proposal_rejected_for_bures() {
        let d = EigenDensity::new(2, DensityKind::Bures).unwrap();
        assert!(matches!(SimplexSampler::with_proposal(d, Proposal::Uniform), Err(Error::Configuration(_))));
    }

    #[test]
    fn dimension_cap() {
        let d = EigenDensity::new(7, DensityKind::Flat).unwrap();
        assert!(matches!(SimplexSampler::new(d), Err(Error::Configuration(_))));
    }

    #[test]
    fn hs_two_level_envelope_is_tight() {
        let s = SimplexSampler::new(EigenDensity::new(2, DensityKind::HilbertSchmidt).unwrap()).unwrap();
        assert!((s.ln_envelope() - ENVELOPE_MARGIN.ln()).abs() < 1e-12);
        // E[(l1 - l2)^2] = 1/3 under uniform proposals
        assert!((s.acceptance_rate() - 1.0 / 3.0 / ENVELOPE_MARGIN).abs() < 0.02);
    }

    #[test]
    fn inefficient_density_is_reported() {
        let d = EigenDensity::new(6, DensityKind::Induced { n: 5000 }).unwrap();
        let r = SimplexSampler::new(d);
        assert!(matches!(r, Err(Error::Efficiency { .. })), "{r:?}");
    }

    #[test]
    fn samples_are_sorted_spectra() {
        let s = SimplexSampler::new(EigenDensity::new(4, DensityKind::Bures).unwrap()).unwrap();
        let mut rng = RngStream::new(5, 0);
        for _ in 0..100 {
            let spec = s.sample(&mut rng).unwrap();
            assert_eq!(spec.len(), 4);
            assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
