use std::fmt::Write as _;
use std::str::FromStr;

use qmeasure_core::analytic::{
    avg_entropy_induced_2n, avg_entropy_page, bures_line_element, radial_cdf_bures, radial_cdf_induced, radial_cdf_uniform_ball,
    DensityKind, EigenDensity, Orientation, SpectralPerturbation,
};
use qmeasure_core::linalg::{eig_hermitian, entanglement_entropy, CompositeShape};
use qmeasure_core::samplers::{sample_induced, EnsembleSample, EnsembleSampler, EnsembleSpec};
use qmeasure_core::stats::{chi_square_simplex, ks_test, mean_with_stderr, GofReport};
use qmeasure_core::{mc, Error as CoreError};
use serde::Serialize;

use crate::args::{Command, CompareArgs, Common, MetricArgs, SampleArgs, ScanArgs};
use crate::config::{parse_list, positive, Format, Resolver, RunConfig};
use crate::error::{exit, CliError, Result};
use crate::output::{emit, float, json, key_value_csv, Metadata};

pub const METRIC_THRESHOLD: f64 = 1e-6;

pub fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Sample(a) => cmd_sample(a),
        Command::EntropyScan(a) => cmd_entropy_scan(a),
        Command::Compare(a) => cmd_compare(a),
        Command::MetricCheck(a) => cmd_metric_check(a),
    }
}

fn parse_ensemble(text: &str) -> Result<EnsembleSpec> {
    text.parse().map_err(|e: CoreError| CliError::Usage(e.to_string()))
}

fn run_config(r: &Resolver, common: &Common, ensemble: Option<String>, n: Option<usize>, default_n: usize) -> Result<RunConfig> {
    let ensemble = parse_ensemble(&r.required(ensemble, "ensemble")?)?;
    Ok(RunConfig {
        ensemble,
        n_samples: positive(r.or_default(n, "n", default_n)?, "n")?,
        seed: r.seed(common.seed)?,
        workers: r.workers(common.workers)?,
        output_path: r.out(common.out.clone())?,
        format: r.or_default(common.format, "format", Format::Csv)?,
    })
}

fn draw_all(config: &RunConfig) -> Result<Vec<EnsembleSample>> {
    let sampler = EnsembleSampler::new(config.ensemble)?;
    Ok(mc::collect(config.seed, config.n_samples, config.workers, |rng| sampler.draw(rng))?)
}

#[derive(Serialize)]
struct SampleRecord {
    spectrum: Vec<f64>,
    entropy_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bloch: Option<[f64; 3]>,
}

#[derive(Serialize)]
struct SampleOutput {
    #[serde(flatten)]
    metadata: Metadata,
    records: Vec<SampleRecord>,
}

pub fn cmd_sample(args: SampleArgs) -> Result<u8> {
    let r = Resolver::new(args.common.config.as_deref())?;
    let config = run_config(&r, &args.common, args.ensemble, args.n, 1000)?;
    let samples = draw_all(&config)?;
    let metadata = Metadata::new("sample", Some(config.ensemble.to_string()), config.n_samples, config.seed);
    let m = config.ensemble.m();
    let content = match config.format {
        Format::Csv => {
            let mut out = metadata.csv_comment();
            out.push('\n');
            let mut header: Vec<String> = (1..=m).map(|i| format!("lambda_{i}")).collect();
            header.push("entropy_bits".into());
            if config.ensemble.has_bloch() {
                header.extend(["bloch_x", "bloch_y", "bloch_z"].map(String::from));
            }
            out.push_str(&header.join(","));
            out.push('\n');
            for s in &samples {
                let mut fields: Vec<String> = s.spectrum.values().iter().map(|&v| float(v)).collect();
                fields.push(float(entanglement_entropy(&s.spectrum)));
                if let Some(b) = &s.bloch {
                    fields.extend(b.as_array().map(float));
                }
                writeln!(out, "{}", fields.join(",")).unwrap();
            }
            out
        }
        Format::Json => json(&SampleOutput {
            metadata,
            records: samples
                .iter()
                .map(|s| SampleRecord {
                    spectrum: s.spectrum.values().to_vec(),
                    entropy_bits: entanglement_entropy(&s.spectrum),
                    bloch: s.bloch.map(|b| b.as_array()),
                })
                .collect(),
        }),
    };
    emit(config.output_path.as_deref(), &content)?;
    Ok(exit::PASS)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub m: usize,
    pub n: usize,
    pub analytic_bits: f64,
    pub analytic_method: &'static str,
    pub mc_mean_bits: f64,
    pub stderr_bits: f64,
    pub z_score: f64,
}

#[derive(Serialize)]
struct ScanOutput {
    #[serde(flatten)]
    metadata: Metadata,
    m: usize,
    rows: Vec<ScanRow>,
}

/// Closed-form average entropy in bits and the formula used.
pub fn analytic_entropy(m: usize, n: usize) -> Result<(f64, &'static str)> {
    if m == 2 && n >= 2 {
        let method = if n <= qmeasure_core::analytic::ALTERNATING_SUM_MAX_N { "two-level-sum" } else { "page" };
        Ok((avg_entropy_induced_2n(n)?, method))
    } else {
        Ok((avg_entropy_page(m, n, Orientation::Symmetric)?, "page"))
    }
}

/// One entropy-scan row; every row uses the same master seed.
pub fn scan_row(m: usize, n: usize, n_samples: usize, seed: u64, workers: usize) -> Result<ScanRow> {
    let shape = CompositeShape::new(m, n)?;
    let (analytic_bits, analytic_method) = analytic_entropy(m, n)?;
    let entropies = mc::collect(seed, n_samples, workers, |rng| {
        let rho = sample_induced::<f64, _>(shape, rng)?;
        Ok(entanglement_entropy(&eig_hermitian(&rho)?.0))
    })?;
    let (mean, stderr) = mean_with_stderr(&entropies)?;
    let z_score = if stderr > 0.0 { (mean - analytic_bits) / stderr } else { 0.0 };
    Ok(ScanRow { m, n, analytic_bits, analytic_method, mc_mean_bits: mean, stderr_bits: stderr, z_score })
}

pub fn cmd_entropy_scan(args: ScanArgs) -> Result<u8> {
    let r = Resolver::new(args.common.config.as_deref())?;
    let m = positive(r.or_default(args.m, "m", 2)?, "m")?;
    let ancilla = parse_list(&r.required(args.ancilla, "ancilla")?)?;
    if ancilla.contains(&0) {
        return Err(CliError::Usage("ancilla dimensions must be >= 1".into()));
    }
    let n_samples = r.or_default(args.n, "n", 10_000)?;
    if n_samples < 2 {
        return Err(CliError::Usage("entropy-scan needs --n >= 2".into()));
    }
    let seed = r.seed(args.common.seed)?;
    let workers = r.workers(args.common.workers)?;
    let format = r.or_default(args.common.format, "format", Format::Csv)?;
    let rows = ancilla
        .iter()
        .map(|&n| scan_row(m, n, n_samples, seed, workers))
        .collect::<Result<Vec<_>>>()?;
    let metadata = Metadata::new("entropy-scan", None, n_samples, seed);
    let content = match format {
        Format::Csv => {
            let mut out = metadata.csv_comment();
            out.push_str("\nm,n,analytic_bits,analytic_method,mc_mean_bits,stderr_bits,z_score\n");
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    row.m,
                    row.n,
                    float(row.analytic_bits),
                    row.analytic_method,
                    float(row.mc_mean_bits),
                    float(row.stderr_bits),
                    float(row.z_score)
                )
                .unwrap();
            }
            out
        }
        Format::Json => json(&ScanOutput { metadata, m, rows }),
    };
    emit(r.out(args.common.out)?.as_deref(), &content)?;
    Ok(exit::PASS)
}

/// Law that `compare` tests an ensemble against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityId {
    /// KS test of the Bloch radius.
    Radial(RadialLaw),
    /// Chi-square test of the spectrum on the ordered simplex.
    Spectrum(DensityKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLaw {
    UniformBall,
    Bures,
    Induced(usize),
}

impl FromStr for DensityId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Usage(format!("unknown density '{s}'"));
        let parse_n = |t: &str| -> Result<usize> { t.parse().ok().filter(|&n| n >= 1).ok_or_else(bad) };
        let (family, law) = s.split_once(':').ok_or_else(bad)?;
        match family {
            "radial" => Ok(DensityId::Radial(match law {
                "uniform-ball" => RadialLaw::UniformBall,
                "bures" => RadialLaw::Bures,
                other => RadialLaw::Induced(parse_n(other.strip_prefix("induced=").ok_or_else(bad)?)?),
            })),
            "spectrum" => Ok(DensityId::Spectrum(match law {
                "bures" => DensityKind::Bures,
                "hs" => DensityKind::HilbertSchmidt,
                "flat" => DensityKind::Flat,
                other => DensityKind::Induced { n: parse_n(other.strip_prefix("induced=").ok_or_else(bad)?)? },
            })),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for DensityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DensityId::Radial(RadialLaw::UniformBall) => f.write_str("radial:uniform-ball"),
            DensityId::Radial(RadialLaw::Bures) => f.write_str("radial:bures"),
            DensityId::Radial(RadialLaw::Induced(n)) => write!(f, "radial:induced={n}"),
            DensityId::Spectrum(kind) => match kind {
                DensityKind::Bures => f.write_str("spectrum:bures"),
                DensityKind::HilbertSchmidt => f.write_str("spectrum:hs"),
                DensityKind::Flat => f.write_str("spectrum:flat"),
                DensityKind::Induced { n } => write!(f, "spectrum:induced={n}"),
            },
        }
    }
}

#[derive(Serialize)]
struct CompareOutput {
    #[serde(flatten)]
    metadata: Metadata,
    density: String,
    report: GofReport,
}

/// Runs the goodness-of-fit test behind `compare`.
pub fn compare(config: &RunConfig, density: DensityId, bins: Option<usize>) -> Result<GofReport> {
    let m = config.ensemble.m();
    match density {
        DensityId::Radial(law) => {
            if m != 2 {
                return Err(CliError::Usage(format!("radial laws need a qubit ensemble, {} has m = {m}", config.ensemble)));
            }
            if let RadialLaw::Induced(n) = law {
                if n < 2 {
                    return Err(CliError::Usage("radial:induced needs N >= 2".into()));
                }
            }
            let radii: Vec<f64> = draw_all(config)?
                .iter()
                .map(|s| s.bloch.expect("qubit samples carry a Bloch vector").modulus().min(1.0))
                .collect();
            let cdf = |r: f64| match law {
                RadialLaw::UniformBall => radial_cdf_uniform_ball(r),
                RadialLaw::Bures => radial_cdf_bures(r),
                RadialLaw::Induced(n) => radial_cdf_induced(r, n).expect("radius within [0, 1]"),
            };
            Ok(ks_test(&radii, cdf)?)
        }
        DensityId::Spectrum(kind) => {
            if !(2..=3).contains(&m) {
                return Err(CliError::Usage(format!("spectrum tests support m = 2 or 3, {} has m = {m}", config.ensemble)));
            }
            let density = EigenDensity::new(m, kind)?;
            let bins = positive(bins.unwrap_or(if m == 2 { 20 } else { 8 }), "bins")?;
            let spectra: Vec<_> = draw_all(config)?.into_iter().map(|s| s.spectrum).collect();
            Ok(chi_square_simplex(&spectra, &density, bins)?)
        }
    }
}

pub fn cmd_compare(args: CompareArgs) -> Result<u8> {
    let r = Resolver::new(args.common.config.as_deref())?;
    let mut config = run_config(&r, &args.common, args.ensemble, args.n, 100_000)?;
    config.format = r.or_default(args.common.format, "format", Format::Json)?;
    let density: DensityId = r.required(args.density, "density")?.parse()?;
    let bins = r.optional(args.bins, "bins")?;
    let report = compare(&config, density, bins)?;
    let pass = report.pass;
    let output = CompareOutput {
        metadata: Metadata::new("compare", Some(config.ensemble.to_string()), config.n_samples, config.seed),
        density: density.to_string(),
        report,
    };
    let content = match config.format {
        Format::Json => json(&output),
        Format::Csv => key_value_csv(&output.metadata.csv_comment(), &output),
    };
    emit(config.output_path.as_deref(), &content)?;
    Ok(if pass { exit::PASS } else { exit::STATISTICAL_FAILURE })
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub dim: usize,
    pub trials: usize,
    pub scale: f64,
    pub max_relative_error: f64,
    pub threshold: f64,
    pub pass: bool,
    pub zero_perturbation_direct: f64,
    pub zero_perturbation_decomposed: f64,
}

#[derive(Serialize)]
struct MetricOutput {
    #[serde(flatten)]
    metadata: Metadata,
    #[serde(flatten)]
    report: MetricReport,
}

fn finite(e: qmeasure_core::analytic::Evaluation) -> Result<f64> {
    e.finite()
        .ok_or_else(|| CliError::Core(CoreError::Domain("line element singular at a full-rank state".into())))
}

/// Relative gap between the direct Bures line element and the eigenbasis
/// quadratic form, over `trials` random full-rank states and perturbations.
pub fn metric_check(dim: usize, trials: usize, scale: f64, seed: u64, workers: usize) -> Result<MetricReport> {
    let shape = CompositeShape::new(dim, dim)?;
    let gaps = mc::collect(seed, trials, workers, |rng| {
        let rho = sample_induced::<f64, _>(shape, rng)?;
        let (spectrum, basis) = eig_hermitian(&rho)?;
        let p = SpectralPerturbation::random(dim, scale, rng);
        let direct = bures_line_element(&rho, &p.to_matrix(spectrum.values(), &basis)?)?;
        let form = p.bures_quadratic_form(spectrum.values())?;
        Ok((direct, form))
    })?;
    let mut worst = 0.0f64;
    for (direct, form) in gaps {
        let (a, b) = (finite(direct)?, finite(form)?);
        worst = worst.max((a - b).abs() / b.abs().max(f64::MIN_POSITIVE));
    }
    let rho = qmeasure_core::linalg::DensityMatrix::maximally_mixed(dim)?;
    let zero = SpectralPerturbation::new(vec![0.0; dim], vec![Default::default(); dim * (dim - 1) / 2])?;
    let lambda = vec![1.0 / dim as f64; dim];
    let zero_direct = finite(bures_line_element(&rho, &zero.to_matrix(&lambda, &qmeasure_core::ComplexMatrix::identity(dim))?)?)?;
    let zero_form = finite(zero.bures_quadratic_form(&lambda)?)?;
    Ok(MetricReport {
        dim,
        trials,
        scale,
        max_relative_error: worst,
        threshold: METRIC_THRESHOLD,
        pass: worst <= METRIC_THRESHOLD && zero_direct == 0.0 && zero_form == 0.0,
        zero_perturbation_direct: zero_direct,
        zero_perturbation_decomposed: zero_form,
    })
}

pub fn cmd_metric_check(args: MetricArgs) -> Result<u8> {
    let r = Resolver::new(args.common.config.as_deref())?;
    let trials = positive(r.or_default(args.trials, "trials", 1000)?, "trials")?;
    let dim = r.or_default(args.dim, "dim", 2)?;
    if !(2..=6).contains(&dim) {
        return Err(CliError::Usage(format!("--dim must be between 2 and 6, got {dim}")));
    }
    let scale = r.or_default(args.scale, "scale", 1e-4)?;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(CliError::Usage("--scale must be positive".into()));
    }
    let seed = r.seed(args.common.seed)?;
    let workers = r.workers(args.common.workers)?;
    let format = r.or_default(args.common.format, "format", Format::Json)?;
    let report = metric_check(dim, trials, scale, seed, workers)?;
    let pass = report.pass;
    let output = MetricOutput { metadata: Metadata::new("metric-check", None, trials, seed), report };
    let content = match format {
        Format::Json => json(&output),
        Format::Csv => key_value_csv(&output.metadata.csv_comment(), &output),
    };
    emit(r.out(args.common.out)?.as_deref(), &content)?;
    Ok(if pass { exit::PASS } else { exit::STATISTICAL_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_ids_round_trip() {
        for text in ["radial:uniform-ball", "radial:bures", "radial:induced=3", "spectrum:bures", "spectrum:hs", "spectrum:flat", "spectrum:induced=4"] {
            assert_eq!(text.parse::<DensityId>().unwrap().to_string(), text);
        }
        for bad in ["radial", "radial:nope", "spectrum:induced=0", "other:hs"] {
            assert!(bad.parse::<DensityId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn metric_zero_and_small_run() {
        let r = metric_check(3, 50, 1e-4, 1, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.zero_perturbation_direct, 0.0);
    }

    #[test]
    fn analytic_methods() {
        assert_eq!(analytic_entropy(2, 100).unwrap().1, "page");
        assert_eq!(analytic_entropy(2, 3).unwrap().1, "two-level-sum");
        let (swapped, method) = analytic_entropy(3, 2).unwrap();
        assert_eq!(method, "page");
        assert!((swapped - analytic_entropy(2, 3).unwrap().0).abs() < 1e-14);
    }
}
