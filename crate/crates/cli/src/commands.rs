use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tubal::counterexample::{example_sphere_minimum, example_tensor};
use tubal::einstein::{t_einstein, t_identity_k};
use tubal::forms::psym;
use tubal::random;
use tubal::spectral::{
    algorithm3_positivity, check_joint_mtu, spectral_power, t_matrix_tensor_eigenvalues, Algorithm3Failure,
};
use tubal::tforms::{
    eval_t_hermitian_form, eval_t_hermitian_form_unsymmetrized, is_t_hermitian_k, is_t_hps, t_hpd_sample_test,
    EvaluationPoint,
};
use tubal::tprod::{tprod_fft, tprod_naive};
use tubal::{ifft_tubal, Hypermatrix64, Shape, TubalTensor64};

use crate::error::CliError;
use crate::report::{CertificateReport, Verdict, Witness};
use crate::{io, Command, Domain, EigKind, GenKind, PosdefMode};

pub struct Output {
    pub json: Value,
    pub code: u8,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, code: 0 }
    }

    fn report(r: CertificateReport) -> Self {
        let code = r.verdict.exit_code();
        Output { json: serde_json::to_value(r).expect("reports serialize"), code }
    }
}

fn read_input(path: &Path, domain: Domain) -> Result<Hypermatrix64, CliError> {
    let a = io::read(path)?;
    Ok(match domain {
        Domain::Spatial => a,
        Domain::Freq => ifft_tubal(&a),
    })
}

fn read_tensor(path: &Path, domain: Domain) -> Result<TubalTensor64, CliError> {
    Ok(TubalTensor64::new(read_input(path, domain)?)?)
}

fn written(path: &Path, a: &Hypermatrix64) -> Result<Output, CliError> {
    io::write(path, a)?;
    Ok(Output::ok(json!({ "output": path.display().to_string(), "shape": a.dims() })))
}

pub fn run(cmd: Command, domain: Domain) -> Result<Output, CliError> {
    match cmd {
        Command::Tprod { a, b, out, naive } => {
            let (a, b) = (read_input(&a, domain)?, read_input(&b, domain)?);
            let c = if naive { tprod_naive(&a, &b)? } else { tprod_fft(&a, &b)? };
            written(&out, &c)
        }
        Command::Teinstein { a, b, out } => {
            let c = t_einstein(&read_tensor(&a, domain)?, &read_tensor(&b, domain)?)?;
            written(&out, c.as_hypermatrix())
        }
        Command::Posdef { a, mode, samples, seed, tol } => posdef(&read_tensor(&a, domain)?, mode, samples, seed, tol),
        Command::Counterexample { c, samples, seed, write } => counterexample(c, samples, seed, write.as_deref()),
        Command::Eigvals { a, kind: EigKind::MatrixTensor } => {
            let table = t_matrix_tensor_eigenvalues(&read_tensor(&a, domain)?)?;
            Ok(Output::ok(json!({ "kind": "matrix-tensor", "eigenvalueTable": table })))
        }
        Command::MtuCheck { a, tol } => {
            let a = read_tensor(&a, domain)?;
            let check = check_joint_mtu(&a, tol)?;
            let table = t_matrix_tensor_eigenvalues(&a)?;
            let r = match check.witness {
                None => CertificateReport::new(Verdict::True, "commuting", table),
                Some((l, m)) => CertificateReport::new(Verdict::False, "not-commuting", table).with("witnessPair", json!([l, m])),
            };
            Ok(Output::report(r))
        }
        Command::Psym { a, out } => written(&out, psym(&read_tensor(&a, domain)?)?.as_hypermatrix()),
        Command::FormEval { a, z, unsymmetrized } => {
            let a = read_tensor(&a, domain)?;
            let point = read_point(&z)?;
            let v = if unsymmetrized {
                eval_t_hermitian_form_unsymmetrized(&a, &point)?
            } else {
                eval_t_hermitian_form(&a, &point)?
            };
            let tube: Vec<[f64; 2]> = v.spatial_tube.iter().map(|z| [z.re, z.im]).collect();
            Ok(Output::ok(json!({ "freqValues": v.freq_values, "spatialTube": tube })))
        }
        Command::Power { a, alpha, out } => written(&out, spectral_power(&read_tensor(&a, domain)?, alpha)?.as_hypermatrix()),
        Command::Bench { n, p, k, reps, seed } => bench(n, &p, k, reps, seed),
        Command::Gen { kind, n, k, p, seed, min_eig, max_eig, out } => {
            let t = generate(kind, n, k, p, seed, min_eig, max_eig)?;
            written(&out, t.as_hypermatrix())
        }
    }
}

/// `n x p` (or `n x 1 x p`) hypermatrix whose column `l` is the point in slice `l`.
fn read_point(path: &Path) -> Result<EvaluationPoint<f64>, CliError> {
    let z = io::read(path)?;
    let dims = z.dims().to_vec();
    let (n, p) = match dims[..] {
        [n, p] | [n, 1, p] => (n, p),
        _ => return Err(CliError::Data(format!("point must be n x p or n x 1 x p, got {}", z.shape()))),
    };
    let slices = (0..p).map(|l| z.data()[l * n..(l + 1) * n].to_vec()).collect();
    Ok(EvaluationPoint::new(slices)?)
}

/// Eigenvector of the smallest eigenvalue of `m` with that eigenvalue.
fn min_eigenpair(m: &DMatrix<Complex64>) -> (Vec<Complex64>, f64) {
    let eig = m.clone().symmetric_eigen();
    let i = eig.eigenvalues.argmin().0;
    (eig.eigenvectors.column(i).iter().copied().collect(), eig.eigenvalues[i])
}

fn posdef(a: &TubalTensor64, mode: PosdefMode, samples: usize, seed: u64, tol: f64) -> Result<Output, CliError> {
    if !is_t_hermitian_k(a, tol)? {
        return Err(CliError::Data("input is not t-Hermitian: some frequency slice is not Hermitian".into()));
    }
    let table = t_matrix_tensor_eigenvalues(a)?;
    let psym_flag = is_t_hps(a, tol)?;
    let mode_name = match mode {
        PosdefMode::ExactK1 => "exact-k1",
        PosdefMode::Commutant => "commutant",
        PosdefMode::Sample => "sample",
    };
    let r = match mode {
        PosdefMode::ExactK1 => {
            if a.k() != 1 {
                return Err(CliError::Usage(format!("no exact test available for k = {}", a.k())));
            }
            let scale = table.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            let bad = table.iter().position(|row| row.last().is_some_and(|&min| min <= tol * scale));
            match bad {
                None => CertificateReport::new(Verdict::True, "all-eigenvalues-positive", table),
                Some(l) => {
                    let (v, val) = min_eigenpair(&a.freq_matrix(l)?);
                    CertificateReport::new(Verdict::False, "nonpositive-eigenvalue", table).witness(Witness::new(l, &v, val))
                }
            }
        }
        PosdefMode::Commutant => {
            let out = algorithm3_positivity(a);
            match out.failure {
                None => CertificateReport::new(Verdict::True, "commutant-certified", table),
                Some(f) => {
                    let mut r = CertificateReport::new(Verdict::False, f.code(), table).with("failureSlice", f.slice());
                    if let Algorithm3Failure::CholeskyFailed { slice, pivot, value } = f {
                        let (v, val) = min_eigenpair(&a.freq_matrix(slice)?);
                        r = r.with("pivot", pivot).with("pivotValue", value).witness(Witness::new(slice, &v, val));
                    }
                    r
                }
            }
        }
        PosdefMode::Sample => {
            let res = t_hpd_sample_test(a, samples, seed)?;
            let r = match res.first_nonpositive() {
                None => CertificateReport::new(Verdict::Indeterminate, "no-negative-sample", table),
                Some((l, val, w)) => {
                    CertificateReport::new(Verdict::False, "negative-sample", table).witness(Witness::new(l, w, val))
                }
            };
            r.with("samplerMinima", res.minima.clone())
                .with("samplerMinimum", res.overall_min())
                .with("samples", samples)
                .with("seed", seed)
        }
    };
    Ok(Output::report(r.with("mode", mode_name).with("partiallySymmetric", psym_flag)))
}

fn counterexample(c: f64, samples: usize, seed: u64, write: Option<&Path>) -> Result<Output, CliError> {
    let a = example_tensor(c)?;
    if let Some(path) = write {
        io::write(path, a.as_hypermatrix())?;
    }
    let table = t_matrix_tensor_eigenvalues(&a)?;
    let alg3 = algorithm3_positivity(&a);
    let sampled = t_hpd_sample_test(&a, samples, seed)?;
    let min_eig = table.iter().flatten().fold(f64::INFINITY, |m, &x| m.min(x));
    let mut r = match &alg3.failure {
        None => CertificateReport::new(Verdict::True, "commutant-certified", table),
        Some(f) => {
            let mut r = CertificateReport::new(Verdict::False, f.code(), table).with("failureSlice", f.slice());
            if let Algorithm3Failure::CholeskyFailed { slice, pivot, value } = *f {
                let (v, val) = min_eigenpair(&a.freq_matrix(slice)?);
                r = r.with("pivot", pivot).with("pivotValue", value).witness(Witness::new(slice, &v, val));
            }
            r
        }
    };
    if let Some((l, val, w)) = sampled.first_nonpositive() {
        r = r.witness(Witness::new(l, w, val));
    }
    let r = r
        .with("c", c)
        .with("samplerMinimum", sampled.overall_min())
        .with("samplerMinima", sampled.minima.clone())
        .with("analyticMinimum", example_sphere_minimum(c))
        .with("samples", samples)
        .with("hierarchySplit", sampled.all_positive() && min_eig < 0.0);
    Ok(Output::report(r))
}

fn generate(
    kind: GenKind,
    n: usize,
    k: usize,
    p: usize,
    seed: u64,
    min_eig: f64,
    max_eig: f64,
) -> Result<TubalTensor64, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        GenKind::General => random::tubal(n, k, p, &mut rng)?,
        GenKind::Hermitian => random::t_hermitian(n, k, p, &mut rng)?,
        GenKind::Hps => random::t_hps(n, k, p, &mut rng)?,
        GenKind::Identity => t_identity_k(n, p, k)?,
        GenKind::Commutant => {
            if min_eig > max_eig {
                return Err(CliError::Usage("--min-eig exceeds --max-eig".into()));
            }
            random::commutant(n, k, p, &mut rng, |_, _, g| {
                if min_eig == max_eig { min_eig } else { g.random_range(min_eig..max_eig) }
            })?
            .tensor
        }
    })
}

fn median_ms(mut v: Vec<Duration>) -> f64 {
    v.sort();
    v[v.len() / 2].as_secs_f64() * 1e3
}

fn time<R>(reps: usize, mut f: impl FnMut() -> R) -> (f64, R) {
    let mut last = None;
    let times = (0..reps)
        .map(|_| {
            let t = Instant::now();
            last = Some(f());
            t.elapsed()
        })
        .collect();
    (median_ms(times), last.expect("at least one repetition"))
}

/// Times both product paths on `n^k x n^k x p` operands. For `k >= 2` the
/// t-Einstein product is compared with the naive t-product of the reshaped operands.
fn bench(n: usize, ps: &[usize], k: usize, reps: usize, seed: u64) -> Result<Output, CliError> {
    if reps == 0 || n == 0 || k == 0 {
        return Err(CliError::Usage("n, k and reps must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = n.pow(k as u32);
    let mut rows = Vec::new();
    for &p in ps {
        let a = random::tubal::<f64, _>(n, k, p, &mut rng)?;
        let b = random::tubal::<f64, _>(n, k, p, &mut rng)?;
        let flat = Shape::new(vec![side, side, p])?;
        let fa = a.as_hypermatrix().clone().reshape(flat.clone())?;
        let fb = b.as_hypermatrix().clone().reshape(flat.clone())?;
        let (naive_ms, naive) = time(reps, || tprod_naive(&fa, &fb));
        let (fft_ms, fast) = if k == 1 {
            time(reps, || tprod_fft(&fa, &fb))
        } else {
            let (ms, c) = time(reps, || t_einstein(&a, &b));
            (ms, c.and_then(|c| c.into_hypermatrix().reshape(flat.clone())))
        };
        let dev = fast?.relative_distance(&naive?)?;
        rows.push(json!({
            "size": format!("{side}x{side}x{p}"),
            "n": n,
            "k": k,
            "p": p,
            "naiveMs": naive_ms,
            "fftMs": fft_ms,
            "ratio": naive_ms / fft_ms,
            "relativeDeviation": dev,
        }));
    }
    Ok(Output::ok(json!({ "reps": reps, "rows": rows })))
}
