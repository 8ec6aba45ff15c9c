//! Closed forms checked against independently derived values.

use std::f64::consts::PI;

use qmeasure_core::analytic::{
    avg_entropy_induced_2n, avg_entropy_page, bures_line_element, density_bures_bloch, density_hs_bloch, density_p22_bloch,
    radial_density, radial_density_bures, radial_density_induced, DensityKind, EigenDensity, Evaluation, HermitianPerturbation,
    Orientation,
};
use qmeasure_core::{ComplexMatrix, DensityMatrix};
use qmeasure_core::samplers::{haar_unitary, RngStream};
use rand::Rng;
use statrs::function::gamma::ln_gamma;

/// Normalization of `prod l^(N-M) |Delta|^2` on the unordered simplex, as a
/// ratio of gamma functions: `Gamma(MN) / prod_j Gamma(N-j) Gamma(M-j+1)`.
fn product_gamma_constant(m: usize, n: usize) -> f64 {
    let mut ln_c = ln_gamma((m * n) as f64);
    for j in 0..m {
        ln_c -= ln_gamma((n - j) as f64) + ln_gamma((m - j + 1) as f64);
    }
    ln_c.exp()
}

#[test]
fn product_gamma_constant_small_cases() {
    assert!((product_gamma_constant(2, 2) - 3.0).abs() < 1e-12);
    assert!((product_gamma_constant(2, 3) - 30.0).abs() < 1e-10);
}

#[test]
fn two_level_constants_match_product_gamma() {
    for n in 2..=12 {
        let d = EigenDensity::new(2, DensityKind::Induced { n }).unwrap();
        let c = d.normalization().constant().unwrap();
        let oracle = product_gamma_constant(2, n);
        assert!((c - oracle).abs() < 1e-10 * oracle, "n={n}: {c} vs {oracle}");
    }
}

#[test]
fn three_level_quadrature_matches_product_gamma() {
    for n in 3..=7 {
        let d = EigenDensity::new(3, DensityKind::Induced { n }).unwrap();
        let c = d.normalization().constant().unwrap();
        let oracle = product_gamma_constant(3, n);
        assert!((c - oracle).abs() < 1e-8 * oracle, "n={n}: {c} vs {oracle}");
    }
    let hs = EigenDensity::new(3, DensityKind::HilbertSchmidt).unwrap();
    assert!((hs.normalization().constant().unwrap() - 1680.0).abs() < 1e-7);
}

// p(r) from the spectrum law must equal 4 pi r^2 times the Bloch-ball density
#[test]
fn radial_change_of_variables() {
    let hs = EigenDensity::new(2, DensityKind::HilbertSchmidt).unwrap();
    let p22 = EigenDensity::new(2, DensityKind::Induced { n: 2 }).unwrap();
    let bures = EigenDensity::new(2, DensityKind::Bures).unwrap();
    let n5 = EigenDensity::new(2, DensityKind::Induced { n: 5 }).unwrap();
    for i in 0..100 {
        let r = (i as f64 + 0.5) / 100.0;
        let shell = 4.0 * PI * r * r;
        let from_hs = radial_density(&hs, r).unwrap().finite().unwrap();
        assert!((from_hs - shell * density_hs_bloch(r).unwrap()).abs() < 1e-12);
        let from_p22 = radial_density(&p22, r).unwrap().finite().unwrap();
        assert!((from_p22 - shell * density_p22_bloch(r).unwrap()).abs() < 1e-12);
        let from_bures = radial_density(&bures, r).unwrap().finite().unwrap();
        let bloch = density_bures_bloch(r).unwrap().finite().unwrap();
        assert!((from_bures - shell * bloch).abs() < 1e-8 * from_bures.max(1.0), "r={r}");
        assert!((from_bures - radial_density_bures(r).finite().unwrap()).abs() < 1e-12 * from_bures.max(1.0));
        let from_n5 = radial_density(&n5, r).unwrap().finite().unwrap();
        assert!((from_n5 - radial_density_induced(r, 5).unwrap()).abs() < 1e-11 * from_n5.max(1.0));
    }
    assert_eq!(radial_density(&bures, 1.0).unwrap(), Evaluation::Singular);
}

#[test]
fn alternating_sum_equals_page_in_floats() {
    for n in 2..=50 {
        let a = avg_entropy_induced_2n(n).unwrap();
        let b = avg_entropy_page(2, n, Orientation::Strict).unwrap();
        assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
    }
}

#[test]
fn page_entropy_increases_toward_one_bit() {
    let values: Vec<f64> = (2..=200).map(|n| avg_entropy_page(2, n, Orientation::Strict).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    // H_2n - H_n - 1/(2n) = ln 2 - 3/(4n) + O(1/n^2) nats
    let n = 200.0;
    assert!((values.last().unwrap() - (1.0 - 3.0 / (4.0 * n * 2f64.ln()))).abs() < 1e-5);
}

// the Bures line element does not change under a common unitary rotation
#[test]
fn bures_line_element_is_unitarily_invariant() {
    let mut rng = RngStream::new(808, 0);
    for dim in [2, 3, 4] {
        for _ in 0..20 {
            let w: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 0.05).collect();
            let total: f64 = w.iter().sum();
            let rho = ComplexMatrix::from_diagonal(&w.iter().map(|x| x / total).collect::<Vec<_>>());
            let zero = qmeasure_core::Complex64::new(0.0, 0.0);
            let mut rows = vec![vec![zero; dim]; dim];
            let mut diag_sum = 0.0;
            for j in 0..dim {
                let v = if j + 1 == dim { -diag_sum } else { rng.random::<f64>() - 0.5 };
                diag_sum += v;
                rows[j][j] = qmeasure_core::Complex64::new(v * 1e-4, 0.0);
                for k in (j + 1)..dim {
                    let z = qmeasure_core::Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 1e-4;
                    rows[j][k] = z;
                    rows[k][j] = z.conj();
                }
            }
            let d = ComplexMatrix::from_rows(&rows).unwrap();
            let u = haar_unitary::<f64, _>(dim, &mut rng).unwrap();
            let rot = |m: &ComplexMatrix| {
                let mut r = u.matmul(m).unwrap().matmul(&u.adjoint()).unwrap();
                r.symmetrize();
                r
            };
            let before = bures_line_element(&DensityMatrix::new(rho.clone()).unwrap(), &HermitianPerturbation::new(d.clone()).unwrap())
                .unwrap()
                .finite()
                .unwrap();
            let after = bures_line_element(&DensityMatrix::new(rot(&rho)).unwrap(), &HermitianPerturbation::new(rot(&d)).unwrap())
                .unwrap()
                .finite()
                .unwrap();
            assert!((before - after).abs() <= 1e-9 * before, "dim {dim}: {before} vs {after}");
        }
    }
}

#[test]
fn page_three_by_three_matches_monte_carlo() {
    use qmeasure_core::linalg::{eig_hermitian, entanglement_entropy, CompositeShape};
    use qmeasure_core::samplers::sample_induced;
    use qmeasure_core::{mc, stats::mean_with_stderr};

    let shape = CompositeShape::new(3, 3).unwrap();
    let entropies = mc::collect(33, 100_000, 4, |rng| {
        let rho = sample_induced::<f64, _>(shape, rng)?;
        Ok(entanglement_entropy(&eig_hermitian(&rho)?.0))
    })
    .unwrap();
    let (mean, stderr) = mean_with_stderr(&entropies).unwrap();
    let page = avg_entropy_page(3, 3, Orientation::Strict).unwrap();
    assert!((mean - page).abs() <= 2.0 * stderr, "MC {mean} +- {stderr}, Page {page}");
}
