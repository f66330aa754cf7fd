use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use falsetheta_core::kloosterman::{bound_ratio_scan, kloosterman_sum};
use falsetheta_core::rademacher::{convergence_table, REFERENCE_ROWS, REFERENCE_TRUNCATIONS};
use falsetheta_core::series_oracle::{coefficient_exact, coefficient_table};
use falsetheta_core::verify::{self, Grid};
use falsetheta_core::{
    BigInt, CoefficientParams, ConvergenceRow, Error, KloostermanKey, Quadrature, ScanKey,
};

#[derive(Parser)]
#[command(
    name = "falsetheta",
    version,
    about = "Coefficients of F_{j,N}/eta: exact values, truncated convergent series, Kloosterman sums"
)]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Gauss-Legendre points per panel
    #[arg(long, global = true, default_value_t = Quadrature::DEFAULT_ORDER)]
    quad_order: usize,
    /// Panels per integration interval
    #[arg(long, global = true, default_value_t = Quadrature::DEFAULT_PANELS)]
    panels: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Level {
    #[arg(long)]
    j: i64,
    #[arg(long = "N")]
    n_level: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Exact coefficient a_{j,N}(n), or CSV `n,a` for 0..=n-max
    Coeff {
        #[command(flatten)]
        level: Level,
        #[arg(long, conflicts_with = "n_max", required_unless_present = "n_max")]
        n: Option<i64>,
        #[arg(long)]
        n_max: Option<i64>,
    },
    /// Truncated series S_J as a JSON record
    Rademacher {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n: i64,
        #[arg(long = "J", default_value_t = 50)]
        truncation: usize,
    },
    /// Convergence table as CSV
    Table {
        #[arg(long, value_enum, conflicts_with_all = ["j", "n_level", "n", "truncations"])]
        preset: Option<Preset>,
        #[arg(long, required_unless_present = "preset")]
        j: Option<i64>,
        #[arg(long = "N", required_unless_present = "preset")]
        n_level: Option<i64>,
        #[arg(long, required_unless_present = "preset")]
        n: Option<i64>,
        #[arg(long = "J", value_delimiter = ',', required_unless_present = "preset")]
        truncations: Vec<usize>,
    },
    /// One Kloosterman sum, printed as `re,im`
    Kloosterman {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        kappa: i64,
    },
    /// Growth scan of |K| / (n k^{1/2+eps}) as JSON
    ScanBound {
        #[command(flatten)]
        level: Level,
        #[arg(long)]
        n_max: i64,
        #[arg(long)]
        k_max: i64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Cross-identity suites; exit 1 if any residual exceeds its tolerance
    Verify {
        #[arg(long, value_enum, default_value_t = GridArg::Default)]
        grid: GridArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Default,
    Large,
}

enum Failure {
    Invalid(String),
    Verification,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidN(n) => Failure::Invalid(format!(
                "N = {n} is excluded by theorem hypothesis sqrt(N/6) integer"
            )),
            Error::ZeroN => {
                Failure::Invalid("n = 0 is outside the series' range; use `coeff` for a(0)".into())
            }
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = std::result::Result<(), Failure>;

/// `x` with 10 significant digits, switching to exponent form outside
/// `[1e-4, 1e10)`.
fn sig10(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !x.is_finite() || !(1e-4..1e10).contains(&a) {
        format!("{x:.9e}")
    } else {
        let decimals = (9 - a.log10().floor() as i32).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn oracle_i128(oracle: &BigInt) -> Result<i128, Failure> {
    oracle.to_i128().ok_or_else(|| {
        Failure::Invalid(format!(
            "exact coefficient {oracle} does not fit in a JSON integer"
        ))
    })
}

#[derive(Serialize)]
struct RademacherRecord {
    j: i64,
    #[serde(rename = "N")]
    n_level: i64,
    n: i64,
    #[serde(rename = "J")]
    truncation: usize,
    value_real: f64,
    value_imag: f64,
    oracle: i128,
    abs_error: f64,
    quad_order: usize,
    panels: usize,
}

#[derive(Serialize)]
struct ArgmaxRecord {
    k: i64,
    n: i64,
    r: i64,
    kappa: i64,
}

impl From<ScanKey> for ArgmaxRecord {
    fn from(s: ScanKey) -> Self {
        ArgmaxRecord {
            k: s.k,
            n: s.n,
            r: s.r,
            kappa: s.kappa,
        }
    }
}

#[derive(Serialize)]
struct PerKRecord {
    k: i64,
    max_ratio: f64,
    max_abs_over_n: f64,
    argmax: ArgmaxRecord,
}

#[derive(Serialize)]
struct ScanRecord {
    j: i64,
    #[serde(rename = "N")]
    n_level: i64,
    eps: f64,
    max_ratio: f64,
    argmax: ArgmaxRecord,
    loglog_slope: f64,
    per_k: Vec<PerKRecord>,
}

fn cmd_coeff(out: &mut impl Write, level: Level, n: Option<i64>, n_max: Option<i64>) -> CliResult {
    match (n, n_max) {
        (Some(n), _) => {
            let params = CoefficientParams::new(level.j, level.n_level, n)?;
            writeln!(out, "{}", coefficient_exact(&params))?;
        }
        (None, Some(n_max)) => {
            writeln!(out, "n,a")?;
            for (n, a) in coefficient_table(level.j, level.n_level, n_max)?
                .iter()
                .enumerate()
            {
                writeln!(out, "{n},{a}")?;
            }
        }
        (None, None) => unreachable!("clap requires one of --n, --n-max"),
    }
    Ok(())
}

fn cmd_rademacher(
    out: &mut impl Write,
    level: Level,
    n: i64,
    truncation: usize,
    quad: &Quadrature,
) -> CliResult {
    let params = CoefficientParams::new(level.j, level.n_level, n)?;
    params.check_convergent()?;
    let row = convergence_table(&params, &[truncation], quad)?.remove(0);
    let record = RademacherRecord {
        j: level.j,
        n_level: level.n_level,
        n,
        truncation,
        value_real: row.value_real,
        value_imag: row.value_imag,
        oracle: oracle_i128(&row.oracle)?,
        abs_error: row.abs_error,
        quad_order: quad.order(),
        panels: quad.panels(),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&record).expect("plain record serializes")
    )?;
    Ok(())
}

fn write_rows(
    out: &mut impl Write,
    params: &CoefficientParams,
    rows: &[ConvergenceRow],
) -> io::Result<()> {
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            params.j,
            params.n_level,
            params.n,
            row.truncation,
            sig10(row.value_real),
            sig10(row.value_imag),
            row.oracle,
            sig10(row.abs_error)
        )?;
    }
    Ok(())
}

fn cmd_table(
    out: &mut impl Write,
    cases: &[(i64, i64, i64)],
    truncations: &[usize],
    quad: &Quadrature,
) -> CliResult {
    let mut sorted = truncations.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut checked = Vec::with_capacity(cases.len());
    for &(j, n_level, n) in cases {
        let params = CoefficientParams::new(j, n_level, n)?;
        params.check_convergent()?;
        checked.push(params);
    }
    writeln!(out, "j,N,n,J,value_real,value_imag,oracle,abs_error")?;
    for params in &checked {
        let rows = convergence_table(params, &sorted, quad)?;
        write_rows(out, params, &rows)?;
    }
    Ok(())
}

fn cmd_kloosterman(
    out: &mut impl Write,
    level: Level,
    k: i64,
    r: i64,
    n: i64,
    kappa: i64,
) -> CliResult {
    let key = KloostermanKey::new(k, level.j, r, level.n_level, n, kappa)?;
    let value = kloosterman_sum(&key)?;
    writeln!(out, "{},{}", sig10(value.re), sig10(value.im))?;
    Ok(())
}

fn cmd_scan(out: &mut impl Write, level: Level, n_max: i64, k_max: i64, eps: f64) -> CliResult {
    if n_max < 1 {
        return Err(Failure::Invalid(format!(
            "--n-max must be >= 1, got {n_max}"
        )));
    }
    let n_set: Vec<i64> = (1..=n_max).collect();
    let report = bound_ratio_scan(level.j, level.n_level, &n_set, k_max, eps)?;
    let record = ScanRecord {
        j: report.j,
        n_level: report.n_level,
        eps: report.eps,
        max_ratio: report.max_ratio,
        argmax: report.argmax.into(),
        loglog_slope: report.loglog_slope(),
        per_k: report
            .per_k
            .iter()
            .map(|p| PerKRecord {
                k: p.k,
                max_ratio: p.max_ratio,
                max_abs_over_n: p.max_scaled,
                argmax: p.argmax.into(),
            })
            .collect(),
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&record).expect("plain record serializes")
    )?;
    Ok(())
}

fn cmd_verify(out: &mut impl Write, grid: GridArg) -> CliResult {
    let grid = match grid {
        GridArg::Default => Grid::Default,
        GridArg::Large => Grid::Large,
    };
    let results = verify::run_all(grid)?;
    writeln!(out, "suite,cases,max_residual,tolerance,status")?;
    for s in &results {
        let status = if s.passed() { "pass" } else { "FAIL" };
        writeln!(
            out,
            "{},{},{:.3e},{:.0e},{status}",
            s.name, s.cases, s.max_residual, s.tolerance
        )?;
    }
    if verify::all_passed(&results) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> CliResult {
    let quad = Quadrature::new(cli.quad_order, cli.panels)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cli.command {
        Command::Coeff { level, n, n_max } => cmd_coeff(&mut out, level, n, n_max)?,
        Command::Rademacher {
            level,
            n,
            truncation,
        } => cmd_rademacher(&mut out, level, n, truncation, &quad)?,
        Command::Table {
            preset,
            j,
            n_level,
            n,
            truncations,
        } => match preset {
            Some(Preset::Paper) => {
                cmd_table(&mut out, &REFERENCE_ROWS, &REFERENCE_TRUNCATIONS, &quad)?
            }
            None => {
                let case = (
                    j.expect("required"),
                    n_level.expect("required"),
                    n.expect("required"),
                );
                cmd_table(&mut out, &[case], &truncations, &quad)?
            }
        },
        Command::Kloosterman {
            level,
            k,
            r,
            n,
            kappa,
        } => cmd_kloosterman(&mut out, level, k, r, n, kappa)?,
        Command::ScanBound {
            level,
            n_max,
            k_max,
            eps,
        } => cmd_scan(&mut out, level, n_max, k_max, eps)?,
        Command::Verify { grid } => {
            let result = cmd_verify(&mut out, grid);
            out.flush()?;
            result?
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
