//! Command-line front end.
//!
//! Matrices travel as text: a header line `p n m` followed by `n` lines of
//! `m` space-separated integers in `[0, p)`. Orders travel as one line of
//! space-separated naturals. Every command writes to stdout unless `--out`
//! names a file. Random instances for `selftest` and `bench` come from
//! [`InstanceRng`], a ChaCha8 stream seeded with `--seed`, so the same flags
//! always reproduce the same matrices.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::gf::PrimeModulus;
use crate::krylov::{indices_with, krylov_basis, krylov_matrix_with, naive_krylov_basis, naive_krylov_matrix, AlgoConfig, KrylovSpec, Strategy};
use crate::matf::DenseMatrix;
use crate::opcount;
use crate::poly::Poly;
use crate::spectral;
use crate::testgen::{InstanceRng, MatrixShape, VectorShape};

/// A malformed input line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<u64>, ParseError> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| perr(lineno, format!("'{t}' is not a natural number"))))
        .collect()
}

/// Parses the text matrix format.
pub fn parse_matrix(text: &str) -> Result<DenseMatrix, ParseError> {
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().unwrap_or("");
    let h = numbers(header, 1)?;
    let [p, n, m] = h[..] else {
        return Err(perr(1, format!("header must be 'p n m', found {} fields", h.len())));
    };
    let f = PrimeModulus::new(p).map_err(|e| perr(1, e.to_string()))?;
    let (n, m) = (n as usize, m as usize);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let lineno = i + 2;
        let line = lines
            .next()
            .ok_or_else(|| perr(lineno, format!("missing row {} of {n}", i + 1)))?;
        let row = numbers(line, lineno)?;
        if row.len() != m {
            return Err(perr(lineno, format!("expected {m} entries, found {}", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= p) {
            return Err(perr(lineno, format!("entry {v} is not reduced modulo {p}")));
        }
        rows.push(row);
    }
    for (k, rest) in lines.enumerate() {
        if !rest.trim().is_empty() {
            return Err(perr(n + 2 + k, "unexpected content after the last row"));
        }
    }
    let mut a = DenseMatrix::zeros(f, n, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            a.set(i, j, v);
        }
    }
    Ok(a)
}

/// Prints a matrix in the text format (inverse of [`parse_matrix`]).
pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut s = format!("{} {} {}\n", a.field().value(), a.rows(), a.cols());
    for i in 0..a.rows() {
        s.push_str(&join(a.row(i)));
        s.push('\n');
    }
    s
}

/// Parses a one-line tuple of naturals.
pub fn parse_tuple(text: &str) -> Result<Vec<usize>, ParseError> {
    let mut out = None;
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if out.is_some() {
            return Err(perr(k + 1, "a tuple file holds a single line"));
        }
        out = Some(numbers(line, k + 1)?.into_iter().map(|v| v as usize).collect());
    }
    Ok(out.unwrap_or_default())
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        "0".into()
    } else {
        join(p.coeffs())
    }
}

#[derive(Parser, Debug)]
#[command(name = "krylovium", version, about = "Krylov bases and related invariants over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Square matrix A.
    #[arg(long)]
    matrix: PathBuf,
    /// Matrix U whose columns start the chains.
    #[arg(long)]
    vectors: PathBuf,
}

#[derive(Args, Debug)]
struct Tuning {
    #[arg(long, default_value_t = 3.0)]
    omega: f64,
    #[arg(long, default_value_t = 2.0)]
    c1: f64,
    /// Fix the threshold exponent c in ceil(log2(n)^c).
    #[arg(long)]
    exponent: Option<f64>,
}

impl Tuning {
    fn config(&self, strategy: Strategy) -> AlgoConfig {
        AlgoConfig {
            omega: self.omega,
            c1: self.c1,
            strategy,
            exponent: self.exponent,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the maximal Krylov indices of (A, U).
    Indices {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "hybrid")]
        algo: Strategy,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        out: Output,
    },
    /// Write the Krylov matrix K_d(A, U) for the orders in a tuple file.
    Krylov {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        orders: PathBuf,
        #[arg(long, default_value = "hybrid")]
        algo: Strategy,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        out: Output,
    },
    /// Write the maximal Krylov basis, its indices and column labels.
    Basis {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "hybrid")]
        algo: Strategy,
        #[command(flatten)]
        tuning: Tuning,
        #[command(flatten)]
        out: Output,
    },
    /// Minimal polynomial of A, or of a vector under A (coefficients, constant first).
    Minpoly {
        #[arg(long)]
        matrix: PathBuf,
        /// n x 1 matrix file holding the vector.
        #[arg(long)]
        vector: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant factors of A, one per line, or the block companion form.
    Invfactors {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        block_form: bool,
        #[command(flatten)]
        out: Output,
    },
    /// A^k for a decimal natural k.
    Power {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: BigUint,
        #[command(flatten)]
        out: Output,
    },
    /// Transformation P whose first nu columns span Orb(A, U).
    Kalman {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Cross-check every strategy against the naive one on random instances.
    Selftest {
        #[arg(long, default_value_t = 97)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Time the strategies on dense random instances with m = max(1, n/8).
    Bench {
        #[arg(long, default_value_t = 4611686018427387847)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "hybrid,kg,polmat,naive")]
        algos: Vec<Strategy>,
        #[command(flatten)]
        out: Output,
    },
}

fn read_matrix(path: &Path) -> anyhow::Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    parse_matrix(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_square(path: &Path) -> anyhow::Result<DenseMatrix> {
    let a = read_matrix(path)?;
    if !a.is_square() {
        bail!("{}: line 1: matrix must be square, found {} x {}", path.display(), a.rows(), a.cols());
    }
    Ok(a)
}

fn read_pair(pair: &PairArgs) -> anyhow::Result<KrylovSpec> {
    let a = read_square(&pair.matrix)?;
    let u = read_matrix(&pair.vectors)?;
    if u.field() != a.field() || u.rows() != a.rows() {
        bail!(
            "{}: line 1: expected header '{} {} m' to match the matrix",
            pair.vectors.display(),
            a.field().value(),
            a.rows()
        );
    }
    Ok(KrylovSpec::new(a, u)?)
}

fn emit(out: &Output, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("{}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Indices { pair, algo, tuning, out } => {
            let spec = read_pair(&pair)?;
            let d = indices_with(&spec, &tuning.config(algo)).naturals_or(0);
            emit(&out, &format!("{}\n", join(&d)))?;
        }
        Command::Krylov {
            pair,
            orders,
            algo,
            tuning,
            out,
        } => {
            let spec = read_pair(&pair)?;
            let text = std::fs::read_to_string(&orders).with_context(|| format!("{}", orders.display()))?;
            let d = parse_tuple(&text).map_err(|e| anyhow!("{}: {e}", orders.display()))?;
            if d.len() != spec.m() {
                bail!("{}: line 1: expected {} orders, found {}", orders.display(), spec.m(), d.len());
            }
            let k = krylov_matrix_with(&spec, &d, &tuning.config(algo))?;
            emit(&out, &format_matrix(&k))?;
        }
        Command::Basis { pair, algo, tuning, out } => {
            let spec = read_pair(&pair)?;
            let r = krylov_basis(&spec, &tuning.config(algo));
            let mut s = format_matrix(&r.basis);
            let labels: Vec<String> = r.column_labels.iter().map(|(j, k)| format!("{j}:{k}")).collect();
            writeln!(s, "indices {}", join(&r.indices.naturals_or(0)))?;
            writeln!(s, "labels {}", labels.join(" "))?;
            emit(&out, &s)?;
        }
        Command::Minpoly { matrix, vector, out } => {
            let a = read_square(&matrix)?;
            let p = match vector {
                Some(path) => {
                    let u = read_matrix(&path)?;
                    if u.rows() != a.rows() || u.cols() != 1 || u.field() != a.field() {
                        bail!("{}: line 1: expected header '{} {} 1'", path.display(), a.field().value(), a.rows());
                    }
                    spectral::vector_minpoly(&a, &u.column(0))
                }
                None => spectral::matrix_minpoly(&a),
            };
            emit(&out, &format!("{}\n", format_poly(&p)))?;
        }
        Command::Invfactors { matrix, block_form, out } => {
            let a = read_square(&matrix)?;
            let fr = spectral::invariant_factors(&a);
            let text = if block_form {
                format_matrix(&fr.block_form)
            } else {
                fr.invariant_factors.iter().map(|p| format_poly(p) + "\n").collect()
            };
            emit(&out, &text)?;
        }
        Command::Power { matrix, k, out } => {
            let a = read_square(&matrix)?;
            emit(&out, &format_matrix(&spectral::matrix_power(&a, &k)))?;
        }
        Command::Kalman { pair, out } => {
            let spec = read_pair(&pair)?;
            let kd = spectral::kalman_decomposition(&spec);
            let mut s = format_matrix(&kd.p);
            writeln!(s, "nu {}", kd.nu)?;
            emit(&out, &s)?;
        }
        Command::Selftest {
            prime,
            seed,
            max_n,
            count,
        } => {
            let f = PrimeModulus::new(prime)?;
            let report = selftest(f, seed, max_n.max(1), count);
            for line in &report.failures {
                eprintln!("{line}");
            }
            println!(
                "selftest p={prime} seed={seed} max_n={max_n}: {} instances, {} checks, {} failures",
                report.instances,
                report.checks,
                report.failures.len()
            );
            return Ok(report.failures.is_empty());
        }
        Command::Bench {
            prime,
            seed,
            sizes,
            algos,
            out,
        } => {
            let f = PrimeModulus::new(prime)?;
            emit(&out, &bench(f, seed, &sizes, &algos))?;
        }
    }
    Ok(true)
}

/// Outcome of [`selftest`].
#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Compares every strategy (and two forced threshold exponents of the hybrid
/// one) with vector-by-vector iteration on `count` random instances.
pub fn selftest(f: PrimeModulus, seed: u64, max_n: usize, count: usize) -> SelftestReport {
    let mut rng = InstanceRng::new(seed);
    let mut report = SelftestReport::default();
    let mut configs: Vec<(String, AlgoConfig)> = Strategy::ALL
        .iter()
        .map(|&s| (s.name().to_string(), AlgoConfig::with_strategy(s)))
        .collect();
    for c in [0.0, 1.0] {
        configs.push((
            format!("hybrid(c={c})"),
            AlgoConfig {
                exponent: Some(c),
                ..AlgoConfig::default()
            },
        ));
    }
    for index in 0..count {
        let spec = rng.family_member(f, max_n, index);
        let n = spec.n();
        let d: Vec<usize> = (0..spec.m()).map(|_| rng.below(n as u64 + 2) as usize).collect();
        let want = naive_krylov_basis(&spec);
        let want_k = naive_krylov_matrix(&spec, &d).expect("orders match U");
        let mut check = |ok: bool, what: String| {
            report.checks += 1;
            if !ok {
                report.failures.push(format!("instance {index} (n={n}, m={}): {what}", spec.m()));
            }
        };
        for (name, config) in &configs {
            let got = krylov_basis(&spec, config);
            check(got == want, format!("{name} basis differs"));
            check(indices_with(&spec, config) == want.indices, format!("{name} indices differ"));
            let k = krylov_matrix_with(&spec, &d, config);
            check(k.as_ref() == Ok(&want_k), format!("{name} krylov matrix for orders {d:?} differs"));
        }
        report.instances += 1;
    }
    report
}

/// CSV rows `algo,n,m,seed,wall_time_ns,field_op_estimate`; instance `n`
/// is drawn from a fresh `InstanceRng::new(seed)` for each size.
pub fn bench(f: PrimeModulus, seed: u64, sizes: &[usize], algos: &[Strategy]) -> String {
    let mut s = String::from("algo,n,m,seed,wall_time_ns,field_op_estimate\n");
    for &n in sizes {
        let m = (n / 8).max(1);
        let spec = InstanceRng::new(seed).spec(f, n, m, MatrixShape::Dense, VectorShape::Dense);
        for &algo in algos {
            let config = AlgoConfig::with_strategy(algo);
            let start = Instant::now();
            let (_, ops) = opcount::measure(|| krylov_basis(&spec, &config));
            let ns = start.elapsed().as_nanos();
            let _ = writeln!(s, "{algo},{n},{m},{seed},{ns},{ops}");
        }
    }
    s
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
