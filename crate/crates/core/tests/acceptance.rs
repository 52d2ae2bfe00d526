//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tubal::counterexample::{example_sphere_minimum, example_tensor};
use tubal::einstein::{einstein_product, gen_t_conj_transpose, phi, t_einstein, t_identity_k};
use tubal::forms::{is_hermitian_tensor, is_partially_symmetric, HermitianFormCoeffs};
use tubal::matricization::bcirc;
use tubal::random;
use tubal::spectral::{
    algorithm3_positivity, joint_eigendecompose, spectral_power, spectral_reconstruct,
    t_matrix_tensor_eigenvalues, Algorithm3Failure,
};
use tubal::tforms::{
    eval_t_hermitian_form, is_t_hps, psi_lift, t_hpd_sample_test, t_multilinear_product,
    theta_decompose, tubal_eval, EvaluationPoint,
};
use tubal::tprod::{fourier_conjugation, slice_matrix, tprod_fft, tprod_naive};
use tubal::{fft_tubal, CMatrix64, Hypermatrix64, Shape, TubalTensor64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond { Ok(detail) } else { Err(detail) }
}

fn rel(a: &Hypermatrix64, b: &Hypermatrix64) -> f64 {
    a.relative_distance(b).expect("same shape")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let ps = [1, 2, 3, 4, 8];
    let mut worst = 0.0f64;
    for i in 0..100 {
        let (m, n, q) = (r.random_range(1..=6), r.random_range(1..=6), r.random_range(1..=6));
        let p = ps[i % ps.len()];
        let a = random::hypermatrix::<f64, _>(Shape::new(vec![m, n, p]).unwrap(), &mut r);
        let b = random::hypermatrix::<f64, _>(Shape::new(vec![n, q, p]).unwrap(), &mut r);
        let naive = tprod_naive(&a, &b).unwrap();
        worst = worst.max(rel(&tprod_fft(&a, &b).unwrap(), &naive));
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst <= 1e-10 && secs < 10.0, format!("max rel dev {worst:.2e}, {secs:.2}s"))
}

fn unitary_dft(p: usize) -> CMatrix64 {
    let s = 1.0 / (p as f64).sqrt();
    CMatrix64::from_fn(p, p, |i, j| {
        let th = 2.0 * PI * ((i * j) % p) as f64 / p as f64;
        Complex64::new(th.cos(), th.sin()) * s
    })
}

fn criterion_2() -> Outcome {
    let mut r = rng(202);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (m, n, p) = (r.random_range(1..=8), r.random_range(1..=8), r.random_range(1..=8));
        let a = random::hypermatrix::<f64, _>(Shape::new(vec![m, n, p]).unwrap(), &mut r);
        let ah = fft_tubal(&a);
        let f = unitary_dft(p);
        let mut diag = CMatrix64::zeros(m * p, n * p);
        for l in 0..p {
            diag.view_mut((l * m, l * n), (m, n)).copy_from(&slice_matrix(&ah, l).unwrap());
        }
        let left = f.adjoint().kronecker(&CMatrix64::identity(m, m));
        let right = f.kronecker(&CMatrix64::identity(n, n));
        let err = (bcirc(&a).unwrap() - left * diag * right).norm();
        worst = worst.max(err / a.frobenius_norm());
    }
    check(worst <= 1e-10, format!("max rel residual {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a = example_tensor(-0.25f64).unwrap();
    let rows = t_matrix_tensor_eigenvalues(&a).unwrap();
    let want = [1.0, 1.0, 0.0, -0.5];
    let eig_err = rows
        .iter()
        .flat_map(|row| row.iter().zip(want).map(|(g, w)| (g - w).abs()))
        .fold(0.0f64, f64::max);
    let outcome = algorithm3_positivity(&a);
    let chol = matches!(outcome.failure, Some(Algorithm3Failure::CholeskyFailed { .. }));
    let samples = t_hpd_sample_test(&a, 100_000, 3).unwrap();
    let min = samples.overall_min();
    let analytic = example_sphere_minimum(-0.25);
    let secs = start.elapsed().as_secs_f64();
    check(
        eig_err <= 1e-12 && !outcome.verdict && chol && (0.24..=0.26).contains(&min) && secs < 30.0,
        format!(
            "eigenvalue err {eig_err:.1e}, commutant test {} ({}), sampler min {min:.5} (analytic {analytic}), {secs:.2}s",
            if outcome.verdict { "TRUE" } else { "FALSE" },
            outcome.failure.as_ref().map_or("none", |f| f.code()),
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(404);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let inst = random::commutant::<f64, _>(2, 2, 4, &mut r, |_, _, g| g.random_range(-2.0..2.0)).unwrap();
        let s = joint_eigendecompose(&inst.tensor, 1e-10).map_err(|e| e.to_string())?;
        let back = spectral_reconstruct(&s).unwrap();
        worst = worst.max(rel(back.as_hypermatrix(), inst.tensor.as_hypermatrix()));
    }
    check(worst <= 1e-9, format!("max rel reconstruction error {worst:.2e}"))
}

/// Commutant instances for the positivity criteria: half at k = 1 (n = 3),
/// half at k = 2 (n = 2), `p = 4`.
fn positivity_instance(i: usize, r: &mut ChaCha8Rng, negative: bool) -> TubalTensor64 {
    let (n, k): (usize, usize) = if i.is_multiple_of(2) { (3, 1) } else { (2, 2) };
    let p = 4;
    let side = n.pow(k as u32);
    let bad = (r.random_range(0..side), r.random_range(0..p));
    let inst = random::commutant::<f64, _>(n, k, p, r, |ii, l, g| {
        if negative && (ii, l) == bad { -g.random_range(0.2..2.0) } else { g.random_range(0.1..2.0) }
    })
    .unwrap();
    inst.tensor
}

fn criterion_5() -> Outcome {
    let mut r = rng(505);
    let mut pos_ok = 0;
    let mut sampler_ok = 0;
    for i in 0..50 {
        let a = positivity_instance(i, &mut r, false);
        if algorithm3_positivity(&a).verdict {
            pos_ok += 1;
        }
        if t_hpd_sample_test(&a, 500, i as u64).unwrap().all_positive() {
            sampler_ok += 1;
        }
    }
    let mut neg_ok = 0;
    for i in 0..50 {
        let a = positivity_instance(i, &mut r, true);
        if !algorithm3_positivity(&a).verdict {
            neg_ok += 1;
        }
    }
    check(
        pos_ok == 50 && sampler_ok == 50 && neg_ok == 50,
        format!("positive: {pos_ok}/50 TRUE, sampler {sampler_ok}/50 positive; indefinite: {neg_ok}/50 FALSE"),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(606);
    let (mut worst2, mut worst1) = (0.0f64, 0.0f64);
    for i in 0..10 {
        let a = positivity_instance(i, &mut r, false);
        let b = spectral_power(&a, 2.0).map_err(|e| e.to_string())?;
        let bb = t_einstein(&b, &b).unwrap();
        worst2 = worst2.max(rel(bb.as_hypermatrix(), a.as_hypermatrix()));
        let b1 = spectral_power(&a, 1.0).unwrap();
        worst1 = worst1.max(rel(b1.as_hypermatrix(), a.as_hypermatrix()));
    }
    check(worst2 <= 1e-9 && worst1 <= 1e-10, format!("alpha=2 residual {worst2:.2e}, alpha=1 deviation {worst1:.2e}"))
}

fn full_path_values(a: &TubalTensor64, z: &EvaluationPoint<f64>) -> Vec<Complex64> {
    let x = tubal_eval(z).as_hypermatrix();
    let jx = fourier_conjugation(&x).unwrap();
    let mut factors = vec![jx; a.k()];
    factors.extend(std::iter::repeat_n(x, a.k()));
    let h = t_multilinear_product(a.as_hypermatrix(), &factors).unwrap();
    fft_tubal(&h).data().to_vec()
}

fn random_point(n: usize, p: usize, r: &mut ChaCha8Rng) -> EvaluationPoint<f64> {
    EvaluationPoint::new((0..p).map(|_| (0..n).map(|_| random::complex_normal(r)).collect()).collect()).unwrap()
}

fn criterion_7() -> Outcome {
    let mut r = rng(707);
    let (mut theta_psi, mut psi_theta, mut paths) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let comps: Vec<HermitianFormCoeffs<f64>> = random::hps_slices::<f64, _>(2, 2, 4, &mut r)
            .unwrap()
            .into_iter()
            .map(|s| HermitianFormCoeffs::new(s).unwrap())
            .collect();
        let back = theta_decompose(&psi_lift(&comps).unwrap()).unwrap();
        for (c, b) in comps.iter().zip(&back) {
            theta_psi = theta_psi.max(rel(b.coeffs(), c.coeffs()));
        }
        let a = random::t_hps::<f64, _>(2, 2, 4, &mut r).unwrap();
        let lifted = psi_lift(&theta_decompose(&a).unwrap()).unwrap();
        psi_theta = psi_theta.max(rel(lifted.as_hypermatrix(), a.as_hypermatrix()));

        let z = random_point(2, 4, &mut r);
        let slicewise = eval_t_hermitian_form(&a, &z).unwrap();
        for (s, f) in slicewise.freq_values.iter().zip(full_path_values(&a, &z)) {
            paths = paths.max((Complex64::new(*s, 0.0) - f).norm() / (1.0 + s.abs()));
        }
    }
    check(
        theta_psi <= 1e-12 && psi_theta <= 1e-12 && paths <= 1e-11,
        format!("theta.psi {theta_psi:.1e}, psi.theta {psi_theta:.1e}, slicewise vs full path {paths:.1e}"),
    )
}

/// Spatial t-Einstein product as a circular convolution of Einstein products
/// of frontal slices, independent of the Fourier path.
fn t_einstein_spatial(a: &TubalTensor64, b: &TubalTensor64) -> TubalTensor64 {
    let (k, p) = (a.k(), a.p());
    let sa = a.as_hypermatrix().frontal_slices();
    let sb = b.as_hypermatrix().frontal_slices();
    let out: Vec<Hypermatrix64> = (0..p)
        .map(|l| {
            (0..p)
                .map(|j| einstein_product(&sa[j], &sb[(l + p - j) % p], k).unwrap())
                .reduce(|x, y| &x + &y)
                .unwrap()
        })
        .collect();
    TubalTensor64::new(Hypermatrix64::from_frontal_slices(&out).unwrap()).unwrap()
}

fn criterion_8() -> Outcome {
    let mut identity_err = 0.0f64;
    for (n, k, p) in [(2, 1, 4), (3, 1, 5), (2, 2, 3), (3, 2, 4), (2, 3, 2)] {
        let fi = fft_tubal(t_identity_k::<f64>(n, p, k).unwrap().as_hypermatrix());
        let side = n.pow(k as u32);
        for l in 0..p {
            let block = &fi.data()[l * side * side..(l + 1) * side * side];
            let m = CMatrix64::from_column_slice(side, side, block);
            identity_err = identity_err.max((m - CMatrix64::identity(side, side)).norm());
        }
    }
    let mut r = rng(808);
    let (mut hom, mut inv) = (0.0f64, 0.0f64);
    for k in [1, 2] {
        for n in 1..=3 {
            for p in 1..=4 {
                let a = random::tubal::<f64, _>(n, k, p, &mut r).unwrap();
                let b = random::tubal::<f64, _>(n, k, p, &mut r).unwrap();
                let (pa, pb) = (phi(&a).matrices, phi(&b).matrices);
                let pab = phi(&t_einstein_spatial(&a, &b)).matrices;
                let pah = phi(&gen_t_conj_transpose(&a).unwrap()).matrices;
                for l in 0..p {
                    let prod = &pa[l] * &pb[l];
                    hom = hom.max((&pab[l] - &prod).norm() / prod.norm().max(1e-300));
                    inv = inv.max((&pah[l] - pa[l].adjoint()).norm() / pa[l].norm());
                }
            }
        }
    }
    check(
        identity_err <= f64::EPSILON && hom <= 1e-10 && inv <= 1e-10,
        format!("identity slices err {identity_err:.1e}, homomorphism {hom:.1e}, involution {inv:.1e}"),
    )
}

fn median(mut v: Vec<Duration>) -> f64 {
    v.sort();
    v[v.len() / 2].as_secs_f64()
}

fn criterion_9() -> Outcome {
    let mut r = rng(909);
    let a = random::hypermatrix::<f64, _>(Shape::new(vec![8, 8, 512]).unwrap(), &mut r);
    let b = random::hypermatrix::<f64, _>(Shape::new(vec![8, 8, 512]).unwrap(), &mut r);
    let time = |f: &dyn Fn()| {
        let t = Instant::now();
        f();
        t.elapsed()
    };
    let naive = median((0..5).map(|_| time(&|| { tprod_naive(&a, &b).unwrap(); })).collect());
    let fast = median((0..5).map(|_| time(&|| { tprod_fft(&a, &b).unwrap(); })).collect());
    let ratio = naive / fast;

    let ps = [16usize, 64, 256];
    let mut times = Vec::new();
    for &p in &ps {
        let inst = random::commutant::<f64, _>(2, 2, p, &mut r, |_, _, g| g.random_range(0.1..2.0)).unwrap();
        let base = inst.tensor.into_hypermatrix();
        let reps = 4096 / p;
        let samples: Vec<Duration> = (0..7)
            .map(|_| {
                let t = Instant::now();
                for _ in 0..reps {
                    let fresh = TubalTensor64::new(base.clone()).unwrap();
                    assert!(algorithm3_positivity(&fresh).verdict);
                }
                t.elapsed() / reps as u32
            })
            .collect();
        times.push(median(samples));
    }
    // Least-squares fit t = c0 + c1 p.
    let n = ps.len() as f64;
    let (sx, sy) = (ps.iter().map(|&p| p as f64).sum::<f64>(), times.iter().sum::<f64>());
    let sxx = ps.iter().map(|&p| (p * p) as f64).sum::<f64>();
    let sxy = ps.iter().zip(&times).map(|(&p, t)| p as f64 * t).sum::<f64>();
    let c1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let c0 = (sy - c1 * sx) / n;
    let worst_fit = ps
        .iter()
        .zip(&times)
        .map(|(&p, &t)| {
            let model = c0 + c1 * p as f64;
            if model <= 0.0 { f64::INFINITY } else { (t / model).max(model / t) }
        })
        .fold(0.0f64, f64::max);
    let per_slice: Vec<String> = ps.iter().zip(&times).map(|(p, t)| format!("p={p}: {:.1}us", t * 1e6)).collect();
    check(
        ratio >= 5.0 && worst_fit <= 2.0,
        format!(
            "naive {:.1}ms / fft {:.2}ms = {ratio:.1}x; commutant test {} (worst model ratio {worst_fit:.2})",
            naive * 1e3,
            fast * 1e3,
            per_slice.join(", ")
        ),
    )
}

fn frequency_hps_reference(a: &TubalTensor64, tol: f64) -> bool {
    (0..a.p()).all(|l| {
        let s = a.freq_slice(l).unwrap();
        is_hermitian_tensor(&s, tol).unwrap() && is_partially_symmetric(&s, tol).unwrap()
    })
}

fn criterion_10() -> Outcome {
    let mut r = rng(1010);
    let mut worst_imag = 0.0f64;
    for i in 0..1000 {
        let (n, k, p) = [(2, 1, 3), (3, 1, 4), (2, 2, 2), (2, 2, 4), (3, 2, 3)][i % 5];
        let a = random::t_hps::<f64, _>(n, k, p, &mut r).unwrap();
        let z = random_point(n, p, &mut r);
        eval_t_hermitian_form(&a, &z).map_err(|e| e.to_string())?;
        for v in full_path_values(&a, &z) {
            worst_imag = worst_imag.max(v.im.abs() / (1.0 + v.re.abs()));
        }
    }
    let mut agree = 0;
    let mut hps_count = 0;
    let total = 200;
    for i in 0..total {
        let (n, k, p) = [(2, 2, 3), (3, 1, 4), (2, 3, 2), (3, 2, 2)][i % 4];
        let a = match i % 5 {
            0 | 1 => random::t_hps::<f64, _>(n, k, p, &mut r).unwrap(),
            2 => random::t_hermitian::<f64, _>(n, k, p, &mut r).unwrap(),
            3 => {
                // Partially symmetric but not Hermitian.
                let slices = random::hps_slices::<f64, _>(n, k, p, &mut r).unwrap();
                let skewed: Vec<Hypermatrix64> = slices.iter().map(|s| s.scale(Complex64::new(0.0, 1.0))).collect();
                TubalTensor64::from_frequency_slices(&skewed).unwrap()
            }
            _ => random::tubal::<f64, _>(n, k, p, &mut r).unwrap(),
        };
        let got = is_t_hps(&a, 1e-10).unwrap();
        hps_count += usize::from(got);
        if got == frequency_hps_reference(&a, 1e-10) {
            agree += 1;
        }
    }
    check(
        worst_imag <= 1e-10 && agree == total,
        format!("max rel imaginary residue {worst_imag:.1e}; is_t_hps agreement {agree}/{total} ({hps_count} HPS)"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tprod FFT path matches naive path", criterion_1),
        ("bcirc block-diagonalized by the unitary DFT", criterion_2),
        ("counterexample eigenvalues, commutant test and sampler", criterion_3),
        ("spectral reconstruction round trip", criterion_4),
        ("positivity hierarchy on commutant instances", criterion_5),
        ("spectral power equation", criterion_6),
        ("universal property and slicewise evaluation", criterion_7),
        ("identity slices and lift isomorphism laws", criterion_8),
        ("performance of FFT product and commutant test scaling", criterion_9),
        ("realness and HPS predicate agreement", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
