use crate::error::{Error, Result};

/// Compensated (Neumaier) sum.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Sample mean and its standard error `sqrt(s^2 / n)`, where `s^2` uses the
/// `n - 1` denominator.
pub fn mean_with_stderr(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::Domain(format!("standard error needs at least 2 values, got {n}")));
    }
    let mean = neumaier_sum(values.iter().copied()) / n as f64;
    let ss = neumaier_sum(values.iter().map(|&v| (v - mean) * (v - mean)));
    let var = ss / (n - 1) as f64;
    Ok((mean, (var / n as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;
    use rand::Rng;

    #[test]
    fn two_points() {
        assert_eq!(mean_with_stderr(&[0.0, 1.0]).unwrap(), (0.5, 0.5));
    }

    #[test]
    fn constant_has_zero_stderr() {
        let (m, s) = mean_with_stderr(&[0.3; 50]).unwrap();
        assert!((m - 0.3).abs() < 1e-16);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn too_short() {
        assert!(mean_with_stderr(&[]).is_err());
        assert!(mean_with_stderr(&[1.0]).is_err());
    }

    #[test]
    fn uniform_mean() {
        let mut rng = RngStream::new(3, 0);
        let v: Vec<f64> = (0..1_000_000).map(|_| rng.random()).collect();
        let (m, s) = mean_with_stderr(&v).unwrap();
        assert!((m - 0.5).abs() < 0.001);
        assert!((s - (1.0f64 / 12.0 / 1e6).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn compensation() {
        let v = [1e16, 1.0, -1e16];
        assert_eq!(neumaier_sum(v), 1.0);
    }
}
