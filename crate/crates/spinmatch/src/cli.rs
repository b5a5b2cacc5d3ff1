//! The `spinmatch` command line.
//!
//! Every successful invocation writes one JSON document to stdout. Input and
//! validation problems exit with status 2 and a one-line diagnostic on stderr.
//! `identity-check` exits with status 1 when an identity fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::circuits::{emit, evolution_circuit, phi1_circuit, CircuitFormat};
use crate::error::{Error, Result};
use crate::estimate::{
    default_time, hadamard_test_sample, lhaf_from_overlap, lhaf_from_overlap_value,
    submatrix_distribution,
};
use crate::matfun::{
    hafnian, hafnian_enum, loop_hafnian, loop_hafnian_enum, permanent, permanent_enum,
    HafnianTable, LOOP_HAFNIAN_ENUM_LIMIT,
};
use crate::matrix::{SquareMatrix, SymmetricMatrix};
use crate::spinham::{build_full, build_h1, XXHamiltonian};
use crate::statesim::{apply_h_power, basis_state, factorial, overlap, pair_mask, MAX_SPINS};
use crate::subset::SubsetIndex;
use crate::targetstates::{
    count_nonzero_diagonal, double_factorial, normalization, normalization_truncated, phi1_state,
    phi1_state_truncated, truncation_level,
};

/// Tolerance used by `identity-check` (relative, or absolute for zero targets).
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "spinmatch",
    version,
    about = "Matching sums through commuting-XX spin dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a matrix function.
    Matfun {
        #[arg(value_enum)]
        function: MatFunction,
        #[command(flatten)]
        matrix: MatrixArg,
        /// Also evaluate the brute-force enumeration and report both.
        #[arg(long)]
        oracle: bool,
    },
    /// Transition amplitude ⟨bra|Hᴷ|∅⟩ (2n model) or ⟨S,Sᶜ|Hᴷ|∅,∅⟩ (4n model).
    Amp {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        power: usize,
        /// 1-based comma list, e.g. "1,2".
        #[arg(long, allow_hyphen_values = true)]
        bra: String,
        /// Defaults to 2n for a zero diagonal, 4n otherwise.
        #[arg(long, value_enum)]
        model: Option<Model>,
    },
    /// Check every amplitude identity on the given matrix.
    IdentityCheck {
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Dump the loop-hafnian readout state or its preparation circuit.
    Phi1 {
        #[arg(long = "n")]
        n: usize,
        /// Number of nonzero diagonal entries (state only).
        #[arg(long = "p")]
        p: Option<usize>,
        #[command(flatten)]
        output: Phi1Output,
    },
    /// Estimate the loop-hafnian from a short-time overlap.
    Estimate {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long = "t")]
        t: Option<f64>,
        /// Also simulate a Hadamard test with this many shots.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, requires = "shots")]
        seed: Option<u64>,
    },
    /// Fixed-weight submatrix distribution (zero-diagonal matrices).
    Sample {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Hamming weight 2k of the sector.
        #[arg(long)]
        weight: usize,
        #[arg(long = "t")]
        t: Option<f64>,
    },
    /// Emit the exact time-evolution circuit.
    EvolveCircuit {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long = "t")]
        t: f64,
        #[arg(long, value_enum)]
        emit: FormatArg,
        #[arg(long, value_enum)]
        model: Option<Model>,
    },
}

#[derive(Debug, Args)]
pub struct MatrixArg {
    /// Matrix JSON file: {"n": <int>, "entries": [<row-major reals>]}.
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Phi1Output {
    #[arg(long)]
    state: bool,
    #[arg(long, value_enum)]
    circuit: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MatFunction {
    Perm,
    Haf,
    Lhaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    #[value(name = "2n")]
    TwoN,
    #[value(name = "4n")]
    FourN,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Qasm2,
}

impl From<FormatArg> for CircuitFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => CircuitFormat::Json,
            FormatArg::Qasm2 => CircuitFormat::Qasm2,
        }
    }
}

/// What a command produced: text for stdout and whether it signals failure.
struct Outcome {
    stdout: String,
    failed: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Outcome {
            stdout: v.to_string(),
            failed: false,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.stdout);
            i32::from(outcome.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn infer_model(a: &SymmetricMatrix, model: Option<Model>) -> Model {
    model.unwrap_or(if a.has_zero_diagonal() {
        Model::TwoN
    } else {
        Model::FourN
    })
}

fn model_hamiltonian(a: &SymmetricMatrix, model: Model) -> Result<XXHamiltonian> {
    match model {
        Model::TwoN => build_h1(a),
        Model::FourN => build_full(a),
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Matfun {
            function,
            matrix,
            oracle,
        } => run_matfun(function, &matrix.matrix, oracle),
        Command::Amp {
            matrix,
            power,
            bra,
            model,
        } => {
            let a = SymmetricMatrix::load(&matrix.matrix)?;
            if a.dim() % 2 == 1 {
                return Err(Error::OddDimension(a.dim()));
            }
            let s: SubsetIndex = bra.parse()?;
            s.check_within(a.dim())?;
            let model = infer_model(&a, model);
            let h = model_hamiltonian(&a, model)?;
            let target = match model {
                Model::TwoN => s,
                Model::FourN => pair_mask(s, a.dim()),
            };
            let value =
                crate::statesim::transition_amplitude(&h, power, target, SubsetIndex::EMPTY)?;
            Ok(Outcome::json(json!({ "value": value })))
        }
        Command::IdentityCheck { matrix } => {
            let a = SymmetricMatrix::load(&matrix.matrix)?;
            let checks = identity_checks(&a)?;
            let all_pass = checks.iter().all(|c| c.pass);
            let report = json!({
                "identities": checks.iter().map(IdentityCheck::to_json).collect::<Vec<_>>(),
                "all_pass": all_pass,
            });
            Ok(Outcome {
                stdout: report.to_string(),
                failed: !all_pass,
            })
        }
        Command::Phi1 { n, p, output } => {
            if let Some(format) = output.circuit {
                if p.is_some() {
                    return Err(Error::InvalidArgument(
                        "--p is only available with --state".into(),
                    ));
                }
                let c = phi1_circuit(n)?;
                return Ok(Outcome {
                    stdout: emit(&c, format.into()).trim_end().to_string(),
                    failed: false,
                });
            }
            let state = match p {
                Some(p) => phi1_state_truncated(n, p)?,
                None => phi1_state(n)?,
            };
            let amps: Vec<Value> = state
                .support()
                .map(|m| {
                    let z = state.amplitudes()[m as usize];
                    json!([m, z.re, z.im])
                })
                .collect();
            Ok(Outcome::json(json!({
                "num_qubits": state.num_spins(),
                "amplitudes": amps,
            })))
        }
        Command::Estimate {
            matrix,
            t,
            shots,
            seed,
        } => {
            let a = SymmetricMatrix::load(&matrix.matrix)?;
            let t = match t {
                Some(t) => t,
                None => default_time(&build_full(&a)?),
            };
            let report = lhaf_from_overlap(&a, t)?;
            let mut value = serde_json::to_value(&report)?;
            if let Some(shots) = shots {
                let sample = hadamard_test_sample(&a, t, shots, seed.unwrap_or(0))?;
                let est = lhaf_from_overlap_value(a.dim() / 2, t, sample.value());
                let mut h = serde_json::to_value(&sample)?;
                h["estimate"] = json!(est.re);
                value["hadamard"] = h;
            }
            Ok(Outcome::json(value))
        }
        Command::Sample { matrix, weight, t } => {
            let a = SymmetricMatrix::load(&matrix.matrix)?;
            if weight % 2 == 1 {
                return Err(Error::OddSubset(weight));
            }
            let t = match t {
                Some(t) => t,
                None => default_time(&build_h1(&a)?),
            };
            let d = submatrix_distribution(&a, t, weight / 2)?;
            Ok(Outcome {
                stdout: d.to_json(),
                failed: false,
            })
        }
        Command::EvolveCircuit {
            matrix,
            t,
            emit: format,
            model,
        } => {
            let a = SymmetricMatrix::load(&matrix.matrix)?;
            if !t.is_finite() {
                return Err(Error::NonFinite("evolution time"));
            }
            let h = model_hamiltonian(&a, infer_model(&a, model))?;
            let c = evolution_circuit(&h, t)?;
            Ok(Outcome {
                stdout: emit(&c, format.into()).trim_end().to_string(),
                failed: false,
            })
        }
    }
}

fn run_matfun(function: MatFunction, path: &PathBuf, oracle: bool) -> Result<Outcome> {
    let (value, check) = match function {
        MatFunction::Perm => {
            let b = SquareMatrix::load(path)?;
            (
                permanent(&b)?,
                oracle.then(|| permanent_enum(&b)).transpose()?,
            )
        }
        MatFunction::Haf => {
            let a = SymmetricMatrix::load(path)?;
            (hafnian(&a)?, oracle.then(|| hafnian_enum(&a)).transpose()?)
        }
        MatFunction::Lhaf => {
            let a = SymmetricMatrix::load(path)?;
            (
                loop_hafnian(&a)?,
                oracle.then(|| loop_hafnian_enum(&a)).transpose()?,
            )
        }
    };
    Ok(Outcome::json(match check {
        None => json!({ "value": value }),
        Some(o) => json!({ "value": value, "oracle": o, "rel_diff": rel_diff(value, o) }),
    }))
}

/// `|got - want| / |want|`, or the absolute difference when `want` is 0.
pub fn rel_diff(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        (got - want).abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// Result of one identity in `identity-check`.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, tolerance: f64, residuals: &[f64]) -> Self {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        IdentityCheck {
            name,
            checked: residuals.len(),
            max_residual,
            tolerance,
            pass: residuals.iter().all(|r| *r <= tolerance),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "checked": self.checked,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Runs the amplitude identities on `a`:
///
/// * `hafnian_amplitude`: `⟨S|H₁ᵏ|∅⟩ = k! haf(A_S)` for `|S| = 2k`, `k ≤ N`;
/// * `unreachable_amplitude`: `⟨S|H₁ᵏ|∅⟩ = 0` when `|S| > 2k` or `|S|` is odd;
/// * `factorized_4n_amplitude`: `⟨S,Sᶜ|H^N|∅,∅⟩ = N! (2(N-k)-1)!! Π_{Sᶜ} A_ii haf(A_S)`;
/// * `loop_hafnian_overlap`: `⟨φ₁|H^N|∅,∅⟩ = N!/L_N lhaf(A)`;
/// * `truncated_loop_hafnian_overlap`: the same with the `p`-truncated state.
pub fn identity_checks(a: &SymmetricMatrix) -> Result<Vec<IdentityCheck>> {
    let two_n = a.dim();
    if two_n % 2 == 1 {
        return Err(Error::OddDimension(two_n));
    }
    if two_n == 0 || 2 * two_n > MAX_SPINS {
        return Err(Error::SizeLimit {
            what: "identity-check (4N spins)",
            size: 2 * two_n,
            limit: MAX_SPINS,
        });
    }
    let n = two_n / 2;
    let table = HafnianTable::new(a)?;

    let h1 = build_h1(a)?;
    let mut haf_res = Vec::new();
    let mut zero_res = Vec::new();
    let mut psi = basis_state(two_n, SubsetIndex::EMPTY)?;
    for k in 0..=n {
        if k > 0 {
            psi = apply_h_power(&h1, 1, &psi)?;
        }
        for (m, z) in psi.amplitudes().iter().enumerate() {
            let w = (m as u64).count_ones() as usize;
            if w == 2 * k {
                let want = factorial(k) * table.get(SubsetIndex::from_mask(m as u64));
                haf_res.push(rel_diff(z.re, want).max(z.im.abs()));
            } else if w > 2 * k || w % 2 == 1 {
                zero_res.push(z.norm());
            }
        }
    }

    let h = build_full(a)?;
    let evolved = apply_h_power(&h, n, &basis_state(2 * two_n, SubsetIndex::EMPTY)?)?;
    let diag = a.diagonal();
    let mut fact_res = Vec::new();
    for m in 0..1u64 << two_n {
        let s = SubsetIndex::from_mask(m);
        if s.len() % 2 == 1 {
            continue;
        }
        let k = s.len() / 2;
        let loops: f64 = s.complement(two_n).indices().map(|i| diag[i - 1]).product();
        let want =
            factorial(n) * double_factorial(2 * (n - k) as i64 - 1)? as f64 * loops * table.get(s);
        let z = evolved.amplitude(pair_mask(s, two_n));
        fact_res.push(rel_diff(z.re, want).max(z.im.abs()));
    }

    let lhaf = if two_n <= LOOP_HAFNIAN_ENUM_LIMIT {
        loop_hafnian_enum(a)?
    } else {
        loop_hafnian(a)?
    };
    let full = overlap(&phi1_state(n)?, &evolved)?;
    let want = factorial(n) / normalization(n).value * lhaf;
    let lhaf_res = rel_diff(full.re, want).max(full.im.abs());

    let p = count_nonzero_diagonal(a);
    let truncated = overlap(&phi1_state_truncated(n, p)?, &evolved)?;
    let want = factorial(n) / normalization_truncated(n, truncation_level(p))?.value * lhaf;
    let trunc_res = rel_diff(truncated.re, want).max(truncated.im.abs());

    Ok(vec![
        IdentityCheck::new("hafnian_amplitude", IDENTITY_TOLERANCE, &haf_res),
        IdentityCheck::new("unreachable_amplitude", 1e-12, &zero_res),
        IdentityCheck::new("factorized_4n_amplitude", IDENTITY_TOLERANCE, &fact_res),
        IdentityCheck::new("loop_hafnian_overlap", IDENTITY_TOLERANCE, &[lhaf_res]),
        IdentityCheck::new(
            "truncated_loop_hafnian_overlap",
            IDENTITY_TOLERANCE,
            &[trunc_res],
        ),
    ])
}
