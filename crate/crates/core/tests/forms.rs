//! Slice-level Hermitian forms, symmetrization and the tubal form layer.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tubal::counterexample::{example_slice, example_sphere_minimum, example_tensor};
use tubal::forms::{
    eval_hermitian_form, is_hermitian_tensor, is_hpsym_matrix, is_partially_symmetric, multilinear_matmul,
    outer_product, p_sym, perm_matrix, permutations, psym, psym_slice, HermitianFormCoeffs,
};
use tubal::matricization::{cubically_balanced, cubically_balanced_inv};
use tubal::random;
use tubal::tforms::{
    eval_t_hermitian_form, eval_t_hermitian_form_unsymmetrized, is_t_hps, t_hpd_sample_test, tubal_eval,
    EvaluationPoint,
};
use tubal::{ifft_tubal, CMatrix64, CVector, Hypermatrix64, Shape, TubalTensor64};

fn kron_power(z: &[Complex64], k: usize) -> CVector<f64> {
    let base = CVector::<f64>::from_column_slice(z);
    let mut v = CVector::<f64>::from_element(1, Complex64::new(1.0, 0.0));
    for _ in 0..k {
        v = base.kronecker(&v);
    }
    v
}

fn rand_vec(n: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n).map(|_| random::complex_normal(r)).collect()
}

#[test]
fn counterexample_slice_form_closed_form() {
    let h = HermitianFormCoeffs::new(example_slice(-0.25f64)).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
    let v = eval_hermitian_form(&h, &z).unwrap();
    assert!((v - 0.25).abs() < 1e-15);
    assert_eq!(example_sphere_minimum(-0.25), 0.25);
    assert_eq!(example_sphere_minimum(0.75), 1.0);
    let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    assert!((eval_hermitian_form(&h, &e1).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn counterexample_tensor_evaluates_to_quarter_on_both_slices() {
    let a = example_tensor(-0.25f64).unwrap();
    assert!(is_t_hps(&a, 1e-12).unwrap());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = EvaluationPoint::constant(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)], 2).unwrap();
    let v = eval_t_hermitian_form(&a, &z).unwrap();
    for x in &v.freq_values {
        assert!((x - 0.25).abs() < 1e-15);
    }
    // Equal frequency values give an impulse spatial tube.
    assert!((v.spatial_tube[0] - Complex64::new(0.25, 0.0)).norm() < 1e-15);
    assert!(v.spatial_tube[1].norm() < 1e-15);
}

#[test]
fn counterexample_spatial_slices_are_s_and_zero() {
    let a = example_tensor(0.5f64).unwrap();
    let slices = a.as_hypermatrix().frontal_slices();
    assert!(slices[0].distance(&example_slice(0.5)).unwrap() < 1e-15);
    assert!(slices[1].max_abs() < 1e-15);
}

#[test]
fn sampler_finds_the_counterexample_minimum_and_negative_witness() {
    let a = example_tensor(-0.25f64).unwrap();
    let res = t_hpd_sample_test(&a, 2000, 11).unwrap();
    assert!(res.all_positive());
    assert!((res.overall_min() - 0.25).abs() < 1e-6);

    let b = example_tensor(-0.75f64).unwrap();
    let res = t_hpd_sample_test(&b, 2000, 11).unwrap();
    let (_, min, w) = res.first_nonpositive().expect("c = -3/4 has a negative form value");
    assert!((min - example_sphere_minimum(-0.75)).abs() < 1e-6);
    let h = HermitianFormCoeffs::new(example_slice(-0.75)).unwrap();
    assert!(eval_hermitian_form(&h, w).unwrap() < 0.0);
}

#[test]
fn sampler_rejects_bad_input() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let a = random::tubal::<f64, _>(2, 1, 3, &mut r).unwrap();
    assert!(t_hpd_sample_test(&a, 10, 0).is_err());
    let b = random::t_hps::<f64, _>(2, 1, 3, &mut r).unwrap();
    assert!(t_hpd_sample_test(&b, 0, 0).is_err());
}

#[test]
fn identity_is_partially_symmetric_only_in_degree_one() {
    let proj1 = p_sym::<f64>(3, 1).unwrap();
    assert!(is_hpsym_matrix(&CMatrix64::identity(3, 3), &proj1, 1e-12).unwrap());
    let proj2 = p_sym::<f64>(2, 2).unwrap();
    assert!(!is_hpsym_matrix(&CMatrix64::identity(4, 4), &proj2, 1e-12).unwrap());
    assert!(is_hpsym_matrix(&proj2.complex(), &proj2, 1e-12).unwrap());
}

#[test]
fn permutation_enumeration() {
    assert_eq!(permutations(0).unwrap(), vec![Vec::<usize>::new()]);
    assert_eq!(permutations(3).unwrap().len(), 6);
    assert_eq!(permutations(5).unwrap().len(), 120);
    assert!(permutations(6).is_err());
    assert!(perm_matrix::<f64>(&[0, 0], 2).is_err());
}

#[test]
fn coefficient_validation() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let m = random::matrix::<f64, _>(4, 4, &mut r);
    let a = cubically_balanced_inv(&m, 2, 2).unwrap();
    assert!(HermitianFormCoeffs::new(a.clone()).is_err());
    let herm = cubically_balanced_inv(&random::hermitian::<f64, _>(4, &mut r), 2, 2).unwrap();
    assert!(HermitianFormCoeffs::new(herm.clone()).is_err());
    assert!(HermitianFormCoeffs::hermitian(herm.clone()).is_ok());
    assert!(HermitianFormCoeffs::new(psym_slice(&herm).unwrap()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn form_value_is_quadratic_form_of_tensor_power(n in 1usize..4, k in 1usize..4, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let side = n.pow(k as u32);
        let m = random::hermitian::<f64, _>(side, &mut r);
        let h = HermitianFormCoeffs::new(psym_slice(&cubically_balanced_inv(&m, n, k).unwrap()).unwrap()).unwrap();
        let z = rand_vec(n, &mut r);
        let v = kron_power(&z, k);
        let oracle = (v.adjoint() * h.matrix() * &v)[(0, 0)];
        let got = eval_hermitian_form(&h, &z).unwrap();
        prop_assert!(oracle.im.abs() <= 1e-10 * (1.0 + oracle.re.abs()));
        prop_assert!((got - oracle.re).abs() <= 1e-10 * (1.0 + oracle.re.abs()));
        // Symmetrization does not change the form.
        let raw = HermitianFormCoeffs::hermitian(cubically_balanced_inv(&m, n, k).unwrap()).unwrap();
        let raw_v = eval_hermitian_form(&raw, &z).unwrap();
        prop_assert!((raw_v - got).abs() <= 1e-10 * (1.0 + got.abs()));
    }

    #[test]
    fn form_is_homogeneous_of_degree_2k(n in 1usize..4, k in 1usize..3, t in 0.1f64..3.0, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let slices = random::hps_slices::<f64, _>(n, k, 1, &mut r).unwrap();
        let h = HermitianFormCoeffs::new(slices[0].clone()).unwrap();
        let z = rand_vec(n, &mut r);
        let phase = Complex64::from_polar(t, r.random_range(0.0..6.0));
        let zs: Vec<Complex64> = z.iter().map(|x| x * phase).collect();
        let base = eval_hermitian_form(&h, &z).unwrap();
        let scaled = eval_hermitian_form(&h, &zs).unwrap();
        prop_assert!((scaled - t.powi(2 * k as i32) * base).abs() <= 1e-9 * (1.0 + scaled.abs()));
    }

    #[test]
    fn multilinear_matmul_of_rank_one_factors(n in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let x = Hypermatrix64::from_vec(Shape::new(vec![n]).unwrap(), rand_vec(n, &mut r)).unwrap();
        let y = Hypermatrix64::from_vec(Shape::new(vec![n]).unwrap(), rand_vec(n, &mut r)).unwrap();
        let fx = random::matrix::<f64, _>(n, m, &mut r);
        let fy = random::matrix::<f64, _>(n, m + 1, &mut r);
        let lhs = multilinear_matmul(&outer_product(&[x.clone(), y.clone()]), &[fx.clone(), fy.clone()]).unwrap();
        let vx = fx.transpose() * CVector::<f64>::from_column_slice(x.data());
        let vy = fy.transpose() * CVector::<f64>::from_column_slice(y.data());
        let rhs = outer_product(&[
            Hypermatrix64::from_vec(Shape::new(vec![m]).unwrap(), vx.as_slice().to_vec()).unwrap(),
            Hypermatrix64::from_vec(Shape::new(vec![m + 1]).unwrap(), vy.as_slice().to_vec()).unwrap(),
        ]);
        prop_assert!(lhs.relative_distance(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn multilinear_matmul_composes(n in 1usize..4, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random::hypermatrix::<f64, _>(Shape::cubical(n, 3).unwrap(), &mut r);
        let xs: Vec<CMatrix64> = (0..3).map(|_| random::matrix(n, 2, &mut r)).collect();
        let ys: Vec<CMatrix64> = (0..3).map(|_| random::matrix(2, 3, &mut r)).collect();
        let two_step = multilinear_matmul(&multilinear_matmul(&a, &xs).unwrap(), &ys).unwrap();
        let prods: Vec<CMatrix64> = xs.iter().zip(&ys).map(|(x, y)| x * y).collect();
        let one_step = multilinear_matmul(&a, &prods).unwrap();
        prop_assert!(two_step.relative_distance(&one_step).unwrap() < 1e-12);
    }

    #[test]
    fn perm_matrices_compose_contravariantly(n in 1usize..4, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let perms = permutations(3).unwrap();
        let pi = &perms[r.random_range(0..perms.len())];
        let sigma = &perms[r.random_range(0..perms.len())];
        let comp: Vec<usize> = (0..3).map(|m| sigma[pi[m]]).collect();
        let lhs = perm_matrix::<f64>(pi, n).unwrap() * perm_matrix::<f64>(sigma, n).unwrap();
        prop_assert_eq!(lhs, perm_matrix::<f64>(&comp, n).unwrap());
        let p = perm_matrix::<f64>(pi, n).unwrap();
        let size = n.pow(3);
        prop_assert_eq!(p.transpose() * &p, nalgebra::DMatrix::<f64>::identity(size, size));
    }

    #[test]
    fn symmetry_projector_is_an_orthogonal_projection(n in 1usize..4, k in 1usize..4) {
        let proj = p_sym::<f64>(n, k).unwrap();
        let p = &proj.psym;
        prop_assert!((p * p - p).norm() < 1e-12);
        prop_assert!((p.transpose() - p).norm() < 1e-14);
        // Rank is the dimension of symmetric k-tensors: C(n + k - 1, k).
        let trace: f64 = p.diagonal().sum();
        let binom = (1..=k).fold(1.0, |acc, i| acc * (n + i - 1) as f64 / i as f64);
        prop_assert!((trace - binom).abs() < 1e-10);
    }

    #[test]
    fn psym_is_idempotent_and_symmetrizing(n in 1usize..4, k in 1usize..4, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random::hypermatrix::<f64, _>(Shape::cubical(n, 2 * k).unwrap(), &mut r);
        let s = psym_slice(&a).unwrap();
        prop_assert!(is_partially_symmetric(&s, 1e-12).unwrap());
        prop_assert!(psym_slice(&s).unwrap().relative_distance(&s).unwrap() < 1e-12);
        // psym acts as the sandwich with P_sym.
        let proj = p_sym::<f64>(n, k).unwrap().complex();
        let sandwich = &proj * cubically_balanced(&a).unwrap() * &proj;
        prop_assert!((cubically_balanced(&s).unwrap() - sandwich).norm() < 1e-12 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn hps_tensors_match_hpsym_matrices(n in 1usize..4, k in 1usize..4, kind in 0usize..3, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let side = n.pow(k as u32);
        let m = match kind {
            0 => random::hermitian::<f64, _>(side, &mut r),
            1 => random::matrix::<f64, _>(side, side, &mut r),
            _ => {
                let h = random::hermitian::<f64, _>(side, &mut r);
                let proj = p_sym::<f64>(n, k).unwrap().complex();
                &proj * h * &proj
            }
        };
        let a = cubically_balanced_inv(&m, n, k).unwrap();
        let tensor_side = is_hermitian_tensor(&a, 1e-10).unwrap() && is_partially_symmetric(&a, 1e-10).unwrap();
        let proj = p_sym::<f64>(n, k).unwrap();
        prop_assert_eq!(tensor_side, is_hpsym_matrix(&m, &proj, 1e-10).unwrap());
    }

    #[test]
    fn hps_matrices_are_singular_from_degree_two(n in 2usize..4, k in 2usize..4, seed in any::<u64>()) {
        // The antisymmetric subspace is in the kernel of every partially
        // symmetric matrix, so the smallest eigenvalue is zero.
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let s = &random::hps_slices::<f64, _>(n, k, 1, &mut r).unwrap()[0];
        let m = cubically_balanced(s).unwrap();
        let eig = m.symmetric_eigenvalues();
        let min_abs = eig.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        prop_assert!(min_abs < 1e-10 * m.norm());
    }

    #[test]
    fn t_form_is_real_and_slicewise(n in 1usize..4, k in 1usize..3, p in 1usize..5, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random::t_hps::<f64, _>(n, k, p, &mut r).unwrap();
        let z = EvaluationPoint::new((0..p).map(|_| rand_vec(n, &mut r)).collect()).unwrap();
        let v = eval_t_hermitian_form(&a, &z).unwrap();
        for (l, val) in v.freq_values.iter().enumerate() {
            let h = HermitianFormCoeffs::new(a.freq_slice(l).unwrap()).unwrap();
            let direct = eval_hermitian_form(&h, &z.slices()[l]).unwrap();
            prop_assert!((val - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
        let unsym = eval_t_hermitian_form_unsymmetrized(&a, &z).unwrap();
        for (x, y) in unsym.freq_values.iter().zip(&v.freq_values) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn tubal_eval_inverts_the_frequency_point(n in 1usize..4, p in 1usize..6, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let z = EvaluationPoint::new((0..p).map(|_| rand_vec(n, &mut r)).collect()).unwrap();
        let x = tubal_eval(&z);
        let spatial = ifft_tubal(&Hypermatrix64::from_vec(Shape::new(vec![n, 1, p]).unwrap(), x.freq.as_slice().to_vec()).unwrap());
        prop_assert!(spatial.distance(&x.as_hypermatrix()).unwrap() < 1e-14);
        for l in 0..p {
            for i in 0..n {
                prop_assert_eq!(x.freq[(i, l)], z.slices()[l][i]);
            }
        }
    }

    #[test]
    fn psym_of_a_t_hermitian_tensor_is_t_hps(n in 1usize..4, k in 1usize..3, p in 1usize..5, seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random::t_hermitian::<f64, _>(n, k, p, &mut r).unwrap();
        let s: TubalTensor64 = psym(&a).unwrap();
        prop_assert!(is_t_hps(&s, 1e-10).unwrap());
        if k == 1 {
            prop_assert!(is_t_hps(&a, 1e-10).unwrap());
        }
    }
}
