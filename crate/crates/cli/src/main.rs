//! `tubal`: command-line front end for the tubal hypermatrix library.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 success or
//! TRUE/INDETERMINATE, 1 FALSE, 2 usage or data error.

mod commands;
mod error;
mod io;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use crate::report::CertificateReport;

#[derive(Parser, Debug)]
#[command(name = "tubal", version, about = "t-product algebra, t-Hermitian forms and positivity tests")]
struct Cli {
    /// Domain of tensor inputs; `freq` applies the inverse tubal FFT after reading.
    #[arg(long, value_enum, global = true, default_value_t = Domain::Spatial)]
    domain: Domain,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Spatial,
    Freq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PosdefMode {
    /// Per-slice eigenvalues; exact for k = 1 only.
    ExactK1,
    /// Cholesky on every slice plus a shared-eigenbasis check.
    Commutant,
    /// Sphere sampling with local descent; can only disprove.
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EigKind {
    MatrixTensor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Independent complex Gaussian entries.
    General,
    /// Random Hermitian frequency slices.
    Hermitian,
    /// Hermitian partially symmetric frequency slices.
    Hps,
    /// `Q diag(lambda_l) Q^H` slices with a shared random unitary `Q`.
    Commutant,
    /// The unit of the t-Einstein product.
    Identity,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// t-product of two order-3 hypermatrices.
    Tprod {
        a: PathBuf,
        b: PathBuf,
        out: PathBuf,
        /// Use the block-circulant path instead of the FFT path.
        #[arg(long)]
        naive: bool,
    },
    /// t-Einstein product of two tubal tensors.
    Teinstein { a: PathBuf, b: PathBuf, out: PathBuf },
    /// Positive definiteness test for a t-Hermitian tensor.
    Posdef {
        a: PathBuf,
        #[arg(long, value_enum, default_value_t = PosdefMode::Commutant)]
        mode: PosdefMode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Builds the two-slice degree-2 example and runs every test on it.
    Counterexample {
        #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the (spatial) tensor to this file.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Per-slice eigenvalue table.
    Eigvals {
        a: PathBuf,
        #[arg(long, value_enum, default_value_t = EigKind::MatrixTensor)]
        kind: EigKind,
    },
    /// Whether the slice matrices commute pairwise.
    MtuCheck {
        a: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Partial symmetrization.
    Psym { a: PathBuf, out: PathBuf },
    /// Evaluates the t-Hermitian form of `a` at the point in `z` (`n x p`, column `l` is slice `l`).
    FormEval {
        a: PathBuf,
        z: PathBuf,
        /// Only require Hermitian slices.
        #[arg(long)]
        unsymmetrized: bool,
    },
    /// `B` with `B^alpha = A` for a positive commuting family.
    Power {
        a: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        out: PathBuf,
    },
    /// Times the naive and FFT product paths.
    Bench {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, num_args = 1.., default_values_t = [512])]
        p: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes a random or structured tubal tensor.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Eigenvalue range for `commutant`.
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        min_eig: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        max_eig: f64,
        out: PathBuf,
    },
}

/// Writes one compact JSON line; a closed stdout is not an error.
fn print_json(value: &impl serde::Serialize) {
    let mut out = std::io::stdout().lock();
    if serde_json::to_writer(&mut out, value).is_ok() {
        let _ = writeln!(out);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let message = e.to_string();
            print_json(&CertificateReport::error("usage-error", message.lines().next().unwrap_or("invalid arguments")));
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command, cli.domain) {
        Ok(out) => {
            print_json(&out.json);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            print_json(&CertificateReport::error(e.code(), &e.to_string()));
            ExitCode::from(2)
        }
    }
}
