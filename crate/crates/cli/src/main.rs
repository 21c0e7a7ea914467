use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use approxdeg::lp::{csv_row, extract_dual, CSV_HEADER};
use approxdeg::pipeline::{certify_ed, certify_ed_r, certify_ptp, certify_surj, replay};
use approxdeg::report::{scan, scan_svg};
use approxdeg::sim::{sweep, SWEEP_CSV_HEADER};
use approxdeg::zoo::{make_and, make_and_restricted, make_ed, make_ed_k, make_ptp, make_ptp_star, make_surj};
use approxdeg::{
    approx_degree, format_rational, parse_rational, Bundle, CertifiedBound, Error, LpOptions, Rational, Sided,
    SweepConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

#[derive(Parser)]
#[command(name = "approxdeg", version, about = "Exact approximate-degree bounds for promise functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least degree reaching error eps, as one CSV row.
    Degree(DegreeArgs),
    /// Degrees over a strictly decreasing list of error targets.
    Scan(ScanArgs),
    /// Build a certified lower bound and write it as a JSON bundle.
    Certify(CertifyArgs),
    /// Re-check a bundle with exact arithmetic and no LP solver.
    Verify(VerifyArgs),
    /// Monte-Carlo sweep of the permutation-testing algorithm.
    Simulate(SimulateArgs),
    /// List the supported function families and their flags.
    Families,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    And,
    AndRestricted,
    Ed,
    EdK,
    Surj,
    Ptp,
    PtpStar,
}

#[derive(Clone, Copy, ValueEnum)]
enum SidedArg {
    Two,
    One,
}

impl From<SidedArg> for Sided {
    fn from(s: SidedArg) -> Sided {
        match s {
            SidedArg::Two => Sided::Two,
            SidedArg::One => Sided::One,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|p| rational_arg(p.trim())).collect()
}

/// `a..b` doubles from `a` up to `b`; otherwise a comma list.
fn n_list(s: &str) -> Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad size {t:?}: {e}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (mut n, hi) = (num(lo)?, num(hi)?);
        if n == 0 || n > hi {
            return Err(format!("range {s:?} must satisfy 1 <= lo <= hi"));
        }
        let mut out = Vec::new();
        while n <= hi {
            out.push(n);
            n *= 2;
        }
        Ok(out)
    } else {
        s.split(',').map(num).collect()
    }
}

#[derive(Args)]
struct FunctionArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Rows (for and-restricted: the arity k).
    #[arg(long)]
    n: usize,
    /// Columns for ed and surj; ed defaults to r = n.
    #[arg(long)]
    r: Option<usize>,
    /// Target multiplicity for ed-k.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = rational_arg)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    delta: Option<Rational>,
    #[arg(long, value_enum, default_value = "two")]
    sided: SidedArg,
}

impl FunctionArgs {
    /// The function plus its CSV family and parameter labels.
    fn build(&self) -> Result<(approxdeg::zoo::PromiseFunction, &'static str, String), Failure> {
        let need_rat = |v: &Option<Rational>, name: &str| {
            v.clone().ok_or_else(|| Failure::Usage(format!("--{name} is required for this family")))
        };
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this family")))
        };
        let n = self.n;
        Ok(match self.family {
            FamilyArg::And => (make_and(n)?, "and", "-".into()),
            FamilyArg::AndRestricted => {
                let a = need_rat(&self.alpha, "alpha")?;
                (make_and_restricted(n, &a)?, "and-restricted", format_rational(&a))
            }
            FamilyArg::Ed => (make_ed(n, self.r.unwrap_or(n))?, "ed", "-".into()),
            FamilyArg::EdK => {
                let k = need(self.k, "k")?;
                (make_ed_k(n, k)?, "ed-k", k.to_string())
            }
            FamilyArg::Surj => (make_surj(n, need(self.r, "r")?)?, "surj", "-".into()),
            FamilyArg::Ptp => {
                let a = need_rat(&self.alpha, "alpha")?;
                (make_ptp(n, &a)?, "ptp", format_rational(&a))
            }
            FamilyArg::PtpStar => {
                let d = need_rat(&self.delta, "delta")?;
                (make_ptp_star(n, &d)?, "ptp-star", format_rational(&d))
            }
        })
    }
}

#[derive(Args)]
struct DegreeArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[arg(long, value_parser = rational_arg)]
    eps: Rational,
    /// Also write the optimal dual certifying the degree as JSON.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Comma-separated, strictly decreasing.
    #[arg(long, value_parser = rational_list)]
    eps: Vec<Vec<Rational>>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Ed,
    EdR,
    Surj,
    Ptp,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    pipeline: PipelineArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Multiplicity for ed-r.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Range fraction for surj.
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    c: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    alpha: Rational,
    /// Error target of the base witness.
    #[arg(long, value_parser = rational_arg, default_value = "1/3")]
    eps: Rational,
    /// Bundle path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    bundle: PathBuf,
    /// Also rebuild the witness from the trace and require an exact match.
    #[arg(long)]
    replay: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// `lo..hi` (doubling) or a comma list.
    #[arg(long, value_parser = n_list, default_value = "128..8192")]
    n: Vec<Vec<usize>>,
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    alpha: Rational,
    #[arg(long, value_parser = rational_list, default_value = "1/3")]
    eps: Vec<Vec<Rational>>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Ratio of the geometric sample-size grid.
    #[arg(long, default_value_t = 1.2)]
    grid: f64,
    /// Emit every grid point instead of the optimum per (n, eps).
    #[arg(long)]
    all: bool,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::Unbounded | Error::Infeasible => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_usage(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_usage(path, e))
}

fn degree(args: &DegreeArgs) -> Result<String, Failure> {
    let (f, name, param) = args.function.build()?;
    let res = approx_degree(&f, &args.eps, args.function.sided.into(), &LpOptions::default())?;
    if let Some(path) = &args.witness {
        // The dual one degree below certifies the lower bound; at degree 0
        // there is nothing to certify and the dual at 0 is written instead.
        let witness = match &res.below {
            Some(lp) => {
                let mut w = extract_dual(lp);
                w.claimed_orth = res.degree;
                w.claimed_eps = args.eps.clone();
                w
            }
            None => extract_dual(&res.at),
        };
        let json = serde_json::to_string_pretty(&witness.to_json()).map_err(Error::from)?;
        write_file(path, &(json + "\n"))?;
    }
    Ok(format!("{CSV_HEADER}\n{}\n", csv_row(name, &f, &param, &args.eps, &res)))
}

fn scan_cmd(args: &ScanArgs) -> Result<String, Failure> {
    let eps: Vec<Rational> = args.eps.iter().flatten().cloned().collect();
    let (f, name, param) = args.function.build()?;
    let rows = scan(&f, &eps, args.function.sided.into(), &LpOptions::default())?;
    let mut out = format!("{CSV_HEADER}\n");
    for (e, r) in &rows {
        let _ = writeln!(out, "{}", csv_row(name, &f, &param, e, r));
    }
    if let Some(path) = &args.svg {
        let points: Vec<(Rational, usize)> = rows.iter().map(|(e, r)| (e.clone(), r.degree)).collect();
        write_file(path, &scan_svg(&f.family().to_string(), &points))?;
    }
    Ok(out)
}

fn report_lines(bound: &CertifiedBound) -> (String, bool) {
    let rep = bound.verify();
    let mut out = String::new();
    let _ = writeln!(out, "function={}", bound.function.family());
    let _ = writeln!(out, "degree_lb={}", rep.degree);
    let _ = writeln!(out, "eps={}", format_rational(&rep.eps));
    let _ = writeln!(out, "correlation={}", format_rational(&rep.correlation));
    let _ = writeln!(out, "l1_norm={}", format_rational(&rep.l1_norm));
    if !rep.l1_norm.is_zero() {
        let _ = writeln!(out, "ratio={}", format_rational(&(&rep.correlation / &rep.l1_norm)));
    }
    match &rep.orth {
        Some(o) => {
            let _ = writeln!(out, "orth={o}");
        }
        None => out.push_str("orth=unchecked\n"),
    }
    match &rep.failure {
        None => out.push_str("result=PASS\n"),
        Some(f) => {
            let _ = writeln!(out, "result=FAIL: {f}");
        }
    }
    (out, rep.passed)
}

fn certify(args: &CertifyArgs) -> Result<String, Failure> {
    let opts = LpOptions::default();
    let bound = match args.pipeline {
        PipelineArg::Ed => certify_ed(args.n, args.k, &args.eps, &opts)?,
        PipelineArg::EdR => certify_ed_r(args.n, args.t, args.k, &args.eps, &opts)?,
        PipelineArg::Surj => certify_surj(args.n, &args.c, args.k, &args.eps, &opts)?,
        PipelineArg::Ptp => certify_ptp(args.n, &args.alpha, args.k, &args.eps, &opts)?,
    };
    let (report, passed) = report_lines(&bound);
    eprint!("{report}");
    if !passed {
        return Err(Failure::Verification("constructed bound failed its own check".into()));
    }
    let json = bound.to_json_string()? + "\n";
    match &args.out {
        Some(path) => {
            write_file(path, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn verify(args: &VerifyArgs) -> Result<String, Failure> {
    let text = fs::read_to_string(&args.bundle).map_err(|e| io_usage(&args.bundle, e))?;
    let bound = Bundle::from_json_str(&text)?.load()?;
    let (mut out, passed) = report_lines(&bound);
    if !passed {
        print!("{out}");
        return Err(Failure::Verification("witness check failed".into()));
    }
    if args.replay {
        let (f, w) = replay(&bound.trace).map_err(|e| Failure::Verification(format!("replay failed: {e}")))?;
        if !f.same_function(&bound.function) || w.values() != bound.witness.values() {
            print!("{out}");
            return Err(Failure::Verification("replayed witness differs from the bundle".into()));
        }
        out.push_str("replay=match\n");
    }
    Ok(out)
}

fn simulate(args: &SimulateArgs) -> Result<String, Failure> {
    let cfg = SweepConfig {
        n_list: args.n.iter().flatten().copied().collect(),
        alpha: args.alpha.clone(),
        eps_list: args.eps.iter().flatten().cloned().collect(),
        trials: args.trials,
        seed: args.seed,
        grid_ratio: args.grid,
    };
    let res = sweep(&cfg)?;
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for r in if args.all { &res.grid } else { &res.optimal } {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    match res.fitted_exponent {
        Some(v) => {
            let _ = writeln!(out, "fitted_exponent={v:.6}");
        }
        None => out.push_str("fitted_exponent=NA\n"),
    }
    Ok(out)
}

const FAMILIES: &str = "\
family          flags                  domain   promise
and             --n                    D_{n,2}  all inputs
and-restricted  --n (=k) --alpha       D_{k,2}  weight k or at most floor(alpha k)
ed              --n [--r]              D_{n,r}  all inputs; 1 iff rows hit distinct columns
ed-k            --n --k                D_{n,n}  all inputs; 1 iff no column is hit k or more times
surj            --n --r                D_{n,r}  all inputs; 1 iff every column is hit
ptp             --n --alpha            D_{n,n}  image size n or at most floor(alpha n)
ptp-star        --n --delta (n <= 6)   D_{n,n}  permutations or at least delta n rows from every one
";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Degree(a) => degree(a),
        Command::Scan(a) => scan_cmd(a),
        Command::Certify(a) => certify(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Families => Ok(FAMILIES.to_string()),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
