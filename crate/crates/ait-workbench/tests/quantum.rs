use ait_workbench::quantum::*;
use ait_workbench::rng;
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use rand::Rng;

fn shannon(ps: &[f64]) -> f64 {
    -ps.iter().filter(|p| **p > 1e-15).map(|p| p * p.log2()).sum::<f64>()
}

fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_matches_an_independent_eigensolve(seed in any::<u64>(), d in 1usize..7) {
        let mut r = rng::stream(seed, 0);
        let rank = r.random_range(1..=d);
        let rho = random_density(d, rank, &mut r);
        let want = shannon(&eigenvalues(rho.matrix()));
        prop_assert!((vn_entropy(&rho) - want).abs() < 1e-9);
        prop_assert!(vn_entropy(&rho) <= (d as f64).log2() + 1e-9);
    }

    #[test]
    fn partial_trace_of_a_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng::stream(seed, 1);
        let a = random_density(da, da, &mut r);
        let b = random_density(db, db, &mut r);
        let ab = tensor(a.matrix(), b.matrix());
        let left = partial_trace(&ab, &[da, db], &[0]).unwrap();
        let right = partial_trace(&ab, &[da, db], &[1]).unwrap();
        prop_assert!(frobenius(&(left - a.matrix())) < 1e-12);
        prop_assert!(frobenius(&(right - b.matrix())) < 1e-12);
    }

    #[test]
    fn relative_entropy_is_non_negative(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng::stream(seed, 2);
        let rho = random_density(d, d, &mut r);
        let sigma = random_density(d, d, &mut r);
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= 0.0);
        prop_assert!(relative_entropy(&rho, &rho).unwrap() < 1e-9);
    }

    #[test]
    fn positivity_by_characteristic_polynomial(seed in any::<u64>(), d in 1usize..5, shift in -0.5f64..0.5) {
        let mut r = rng::stream(seed, 3);
        let rho = random_density(d, d, &mut r);
        let h = rho.matrix() + CMatrix::identity(d, d).scale(shift);
        let min = *eigenvalues(&h).last().unwrap();
        // stay clear of the boundary where rounding decides
        prop_assume!(min.abs() > 1e-6);
        prop_assert_eq!(is_positive_charpoly(&h), min > 0.0);
    }

    #[test]
    fn charpoly_roots_are_the_eigenvalues(seed in any::<u64>(), d in 1usize..5) {
        let mut r = rng::stream(seed, 4);
        let rho = random_density(d, d, &mut r);
        let coeffs = charpoly(rho.matrix());
        for l in eigenvalues(rho.matrix()) {
            // coefficients listed from the constant term up or down; try both readings
            let up: C64 = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * l + c);
            let down: C64 = coeffs.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * l + c);
            prop_assert!(up.norm() < 1e-9 || down.norm() < 1e-9);
        }
    }
}

#[test]
fn opu_refinement_is_a_partition_of_unity() {
    for d in [2usize, 3] {
        let z = Opu::matrix_units(d);
        assert!(opu_validate(z.ops()));
        for n in 1..=3 {
            let refined = opu_refine(&z, n);
            assert_eq!(refined.len(), z.len().pow(n as u32));
            let dim = d.pow(n as u32);
            let mut sum = CMatrix::zeros(dim, dim);
            for i in 0..refined.len() {
                let x = refined.element(i);
                sum += x.adjoint() * &x;
            }
            assert!(frobenius(&(sum - CMatrix::identity(dim, dim))) < 1e-12);
        }
    }
    let bad = vec![CMatrix::identity(2, 2), CMatrix::identity(2, 2)];
    assert!(!opu_validate(&bad));
    assert!(Opu::new(bad).is_err());
}

#[test]
fn af_entropy_for_the_trivial_opu() {
    // a one-element OPU gives a 1x1 state, which carries no entropy
    let rho = DensityMatrix::from_diag(&[0.2, 0.8]).unwrap();
    let s = shannon(&[0.2, 0.8]);
    for row in af_entropy_estimate(&rho, &Opu::identity(2), 4).unwrap() {
        assert!(row.entropy.abs() < 1e-12, "{row:?}");
        assert!((row.state_entropy - row.n as f64 * s).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn typical_indices_by_binomial_count() {
    let site = SiteSpectrum::of(&DensityMatrix::from_diag(&[0.1, 0.9]).unwrap());
    let s = shannon(&[0.1, 0.9]);
    for n in 1..=10usize {
        let eps = 0.2;
        let idx = typical_indices(&site, n, eps).unwrap();
        let mut want = 0usize;
        let mut choose = 1usize;
        for k in 0..=n {
            // k draws of 0.1
            let l2 = k as f64 * 0.1f64.log2() + (n - k) as f64 * 0.9f64.log2();
            let r = -l2 / n as f64;
            if r >= s - eps && r <= s + eps {
                want += choose;
            }
            choose = choose * (n - k) / (k + 1);
        }
        assert_eq!(idx.len(), want, "n = {n}");
    }
}

#[test]
fn ensemble_dominates_each_component() {
    let mut r = rng::stream(5, 5);
    let extras = (0..3)
        .map(|_| Extra::dense("x", SemiDensityMatrix::new(random_density(3, 2, &mut r).into_matrix()).unwrap()))
        .collect();
    let ens = build_mu_hat(3, None, extras).unwrap();
    assert!(ens.trace() <= 1.0 + 1e-12);
    let m = ens.to_dense().unwrap();
    for i in 0..ens.components.len() {
        let gap = &m - ens.weighted_dense(i);
        assert!(*eigenvalues(&gap).last().unwrap() > -1e-12);
    }
    assert!(ens.domination_margins().unwrap().iter().all(|g| *g >= -1e-12));
}

#[test]
fn gacs_pair_orders_and_bounds() {
    let mut r = rng::stream(6, 6);
    let ens = build_mu_hat(4, None, vec![]).unwrap();
    for _ in 0..20 {
        let rho = random_density(4, r.random_range(1..=4), &mut r);
        let g = gacs_pair(&rho, &ens).unwrap();
        assert!(g.lower <= g.upper + 1e-9);
        // flat ensemble: both equal log2 D + 1
        assert!((g.lower - 3.0).abs() < 1e-9 && (g.upper - 3.0).abs() < 1e-9);
    }
}

#[test]
fn composite_product_factorizes() {
    use ait_workbench::complexity::{dovetail, m_lower, Mode, Round, UniversalMachine};
    let cache = dovetail(&UniversalMachine::new(Mode::Prefix), &[Round::new(14, 10_000)], None, 2).unwrap();
    let snap = m_lower(&cache).unwrap();
    let rho = DensityMatrix::from_diag(&[0.25, 0.75]).unwrap();
    let cfg = CompositeConfig { n: 3, eps: 0.15, seed: 1, samples: 2, c_lit: 8 };
    let rep = composite_experiment(&rho, &Inputs { snapshot: &snap, cache: Some(&cache) }, &cfg).unwrap();
    for s in &rep.samples {
        if let Some(g) = s.factor_gap {
            assert!(g < 1e-12, "{s:?}");
        }
    }
    assert_ne!(rep.partial_trace_ok, Some(false));
}
