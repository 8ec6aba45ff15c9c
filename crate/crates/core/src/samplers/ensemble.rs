use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{haar::lift_to_density, haar::sample_induced, qubit, SimplexSampler};
use crate::analytic::{DensityKind, EigenDensity};
use crate::error::{Error, Result};
use crate::linalg::{bloch_from_density, eig_hermitian, BlochVector, CompositeShape, Spectrum};

/// Which measure to sample.
///
/// Text form: `induced:M,N`, `bures-qubit`, `hs-qubit`, or
/// `simplex:M:KIND` with `KIND` one of `bures`, `hs`, `flat`, `induced=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum EnsembleSpec {
    Induced { m: usize, n: usize },
    BuresQubit,
    HilbertSchmidtQubit,
    SimplexDensity { m: usize, kind: DensityKind },
}

impl EnsembleSpec {
    pub fn induced(m: usize, n: usize) -> Result<Self> {
        CompositeShape::new(m, n)?;
        Ok(Self::Induced { m, n })
    }

    /// Dimension of the sampled density matrices.
    pub fn m(&self) -> usize {
        match *self {
            EnsembleSpec::Induced { m, .. } | EnsembleSpec::SimplexDensity { m, .. } => m,
            EnsembleSpec::BuresQubit | EnsembleSpec::HilbertSchmidtQubit => 2,
        }
    }

    /// Whether samples carry a Bloch vector.
    pub fn has_bloch(&self) -> bool {
        self.m() == 2
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EnsembleSpec::Induced { m, n } => write!(f, "induced:{m},{n}"),
            EnsembleSpec::BuresQubit => f.write_str("bures-qubit"),
            EnsembleSpec::HilbertSchmidtQubit => f.write_str("hs-qubit"),
            EnsembleSpec::SimplexDensity { m, kind } => match kind {
                DensityKind::Induced { n } => write!(f, "simplex:{m}:induced={n}"),
                DensityKind::Bures => write!(f, "simplex:{m}:bures"),
                DensityKind::HilbertSchmidt => write!(f, "simplex:{m}:hs"),
                DensityKind::Flat => write!(f, "simplex:{m}:flat"),
            },
        }
    }
}

fn parse_dim(s: &str, what: &str) -> Result<usize> {
    let v: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::Configuration(format!("invalid {what} '{s}'")))?;
    if v == 0 {
        return Err(Error::Configuration(format!("{what} must be >= 1")));
    }
    Ok(v)
}

impl FromStr for EnsembleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "bures-qubit" => return Ok(Self::BuresQubit),
            "hs-qubit" => return Ok(Self::HilbertSchmidtQubit),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("induced:") {
            let (m, n) = rest
                .split_once(',')
                .ok_or_else(|| Error::Configuration(format!("expected induced:M,N, got '{s}'")))?;
            return Ok(Self::Induced { m: parse_dim(m, "M")?, n: parse_dim(n, "N")? });
        }
        if let Some(rest) = s.strip_prefix("simplex:") {
            let (m, kind) = rest
                .split_once(':')
                .ok_or_else(|| Error::Configuration(format!("expected simplex:M:KIND, got '{s}'")))?;
            let m = parse_dim(m, "M")?;
            let kind = match kind {
                "bures" => DensityKind::Bures,
                "hs" => DensityKind::HilbertSchmidt,
                "flat" => DensityKind::Flat,
                other => match other.strip_prefix("induced=") {
                    Some(n) => {
                        let n = parse_dim(n, "N")?;
                        if n < m {
                            return Err(Error::Configuration(format!("simplex induced density needs N >= M, got {m},{n}")));
                        }
                        DensityKind::Induced { n }
                    }
                    None => return Err(Error::Configuration(format!("unknown simplex density '{other}'"))),
                },
            };
            return Ok(Self::SimplexDensity { m, kind });
        }
        Err(Error::Configuration(format!("unknown ensemble '{s}'")))
    }
}

impl From<EnsembleSpec> for String {
    fn from(spec: EnsembleSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for EnsembleSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One draw: the sorted spectrum, plus the Bloch vector for qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSample {
    pub spectrum: Spectrum<f64>,
    pub bloch: Option<BlochVector<f64>>,
}

/// Prepared sampler for an [`EnsembleSpec`].
#[derive(Debug, Clone)]
pub struct EnsembleSampler {
    spec: EnsembleSpec,
    simplex: Option<SimplexSampler>,
}

impl EnsembleSampler {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        let simplex = match spec {
            EnsembleSpec::Induced { m, n } => {
                CompositeShape::new(m, n)?;
                None
            }
            EnsembleSpec::SimplexDensity { m, kind } => Some(SimplexSampler::new(EigenDensity::new(m, kind)?)?),
            _ => None,
        };
        Ok(Self { spec, simplex })
    }

    pub fn spec(&self) -> EnsembleSpec {
        self.spec
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<EnsembleSample> {
        match self.spec {
            EnsembleSpec::Induced { m, n } => {
                let rho = sample_induced::<f64, _>(CompositeShape::new(m, n)?, rng)?;
                let (spectrum, _) = eig_hermitian(&rho)?;
                let bloch = if m == 2 { Some(bloch_from_density(&rho)?) } else { None };
                Ok(EnsembleSample { spectrum, bloch })
            }
            EnsembleSpec::BuresQubit => Ok(qubit_sample(qubit::sample_bures_qubit(rng))),
            EnsembleSpec::HilbertSchmidtQubit => Ok(qubit_sample(qubit::sample_hs_qubit(rng))),
            EnsembleSpec::SimplexDensity { m, .. } => {
                let sampler = self.simplex.as_ref().expect("simplex sampler prepared in new");
                let spectrum = sampler.sample(rng)?;
                let bloch = if m == 2 { Some(bloch_from_density(&lift_to_density(&spectrum, rng)?)?) } else { None };
                Ok(EnsembleSample { spectrum, bloch })
            }
        }
    }
}

fn qubit_sample(bloch: BlochVector<f64>) -> EnsembleSample {
    let r = bloch.modulus().min(1.0);
    let spectrum = Spectrum::new(vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0]).expect("Bloch radius within [0, 1]");
    EnsembleSample { spectrum, bloch: Some(bloch) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for text in ["induced:2,3", "bures-qubit", "hs-qubit", "simplex:3:bures", "simplex:3:hs", "simplex:4:flat", "simplex:3:induced=5"] {
            let spec: EnsembleSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["induced:0,2", "induced:2", "simplex:3:bogus", "nope", "simplex:3:induced=2"] {
            assert!(bad.parse::<EnsembleSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn qubit_spectra_match_radius() {
        let sampler = EnsembleSampler::new(EnsembleSpec::BuresQubit).unwrap();
        let mut rng = super::super::RngStream::new(1, 0);
        let s = sampler.draw(&mut rng).unwrap();
        let r = s.bloch.unwrap().modulus();
        assert!((s.spectrum.values()[0] - s.spectrum.values()[1] - r).abs() < 1e-15);
    }
}
