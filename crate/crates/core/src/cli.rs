//! Command-line front end. Exit codes: 0 pass, 1 verification failure,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::Error;
use crate::expsums::{self, SumKind};
use crate::field::FieldCtx;
use crate::fourier;
use crate::restriction::{
    critical_line_excess, region_conjecture, region_lewko, suf2_check, witness,
    Exponent, ExponentPair, Method, RadialOperator, SearchConfig, SignMode, SIGN_GAP_TOL,
};
use crate::scan::{evaluate_point, format_sig, run_scan, ScanSpec};
use crate::spheres::{
    enumerate_sphere, sphere_count_closed, sphere_ft_closed, sphere_ft_closed_with, sphere_ft_naive,
    verify_closed_form, verify_closed_form_with, LEMMA_TOL,
};
use crate::varieties::{build_variety, zero_sphere_intersection, VarietyKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "FFHARM_THREADS";

const SUM_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "ffharm", version, about = "Finite-field exponential sums, sphere transforms and restriction norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gauss, Kloosterman and Salié sums with their magnitude bounds
    Sum(SumArgs),
    /// Sphere sizes and Fourier transforms
    #[command(subcommand)]
    Sphere(SphereCmd),
    /// Variety sizes and the zero-sphere intersection check
    #[command(subcommand)]
    Variety(VarietyCmd),
    /// Radial restriction norms, scans and exponent regions
    #[command(subcommand)]
    Restrict(RestrictCmd),
    /// Fourier engine checks
    #[command(subcommand)]
    Ft(FtCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SumArg {
    Gauss,
    Kloosterman,
    Salie,
}

impl From<SumArg> for SumKind {
    fn from(k: SumArg) -> Self {
        match k {
            SumArg::Gauss => SumKind::Gauss,
            SumArg::Kloosterman => SumKind::Kloosterman,
            SumArg::Salie => SumKind::Salie,
        }
    }
}

#[derive(Args, Debug)]
struct SumArgs {
    kind: SumArg,
    #[arg(long)]
    q: u64,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    b: i64,
}

#[derive(Subcommand, Debug)]
enum SphereCmd {
    /// Enumerated against closed-form sphere sizes
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        /// Radii to report; all of F_q by default
        #[arg(long, value_delimiter = ',')]
        j: Vec<u32>,
    },
    /// Naive and closed-form transform of one sphere at one point
    Ft {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<i64>,
    },
    /// Exhaustive naive-vs-closed comparison of the sphere transform
    #[command(name = "verify-lemma1")]
    VerifyClosedForm {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        d: Vec<usize>,
        /// Negate the Gauss factor in the closed form
        #[arg(long, hide = true)]
        tamper: bool,
    },
}

#[derive(Subcommand, Debug)]
enum VarietyCmd {
    /// Size, origin membership and intersection with the zero sphere
    Info {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
    },
    /// `|V ∩ S_0| ≤ q^{(d²−d−1)/d}` for each q
    Intersect {
        #[arg(long)]
        variety: String,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Nonneg,
    Signed,
    Both,
}

impl SignArg {
    fn modes(self) -> Vec<SignMode> {
        match self {
            SignArg::Nonneg => vec![SignMode::Nonneg],
            SignArg::Signed => vec![SignMode::Signed],
            SignArg::Both => vec![SignMode::Nonneg, SignMode::Signed],
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Search,
    Exact22,
    Witness,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Search => Method::MultiStart,
            MethodArg::Exact22 => Method::Exact22,
            MethodArg::Witness => Method::Witness,
        }
    }
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Function-side exponent, as `a/b`, an integer or `inf`
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    /// Variety-side exponent
    #[arg(long, value_parser = parse_exponent)]
    r: Exponent,
}

impl PairArgs {
    fn pair(&self) -> ExponentPair {
        ExponentPair::new(self.p, self.r)
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "search")]
    method: MethodArg,
    #[arg(long, default_value_t = SearchConfig::default().starts)]
    starts: usize,
    #[arg(long, default_value_t = SearchConfig::default().steps)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "sign-mode", value_enum, default_value = "nonneg")]
    sign_mode: SignArg,
}

impl SearchArgs {
    fn config(&self, mode: SignMode) -> SearchConfig {
        SearchConfig {
            starts: self.starts,
            steps: self.steps,
            seed: self.seed,
            sign_mode: mode,
            ..SearchConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum RestrictCmd {
    /// Radial restriction norm for one q
    Norm {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// One CSV row per q, plus the log-log slope of the estimates
    Scan {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// CSV destination; standard output by default
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact membership of (1/p, 1/r) in the exponent regions
    Region {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Subcommand, Debug)]
enum FtCmd {
    /// Fast against naive transform, Plancherel and round trip
    Selftest {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        d: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::Io(_) => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

type Out<'a> = &'a mut (dyn Write + Send);

/// Runs the CLI, honouring `FFHARM_THREADS`.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                let _ = writeln!(err, "error: {THREADS_ENV} must be a positive integer, got {v:?}");
                return EXIT_USAGE;
            }
        },
        Err(_) => None,
    };
    run_with_threads(args, threads, out, err)
}

pub fn run_with_threads<I, T>(args: I, threads: Option<usize>, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };

    let outcome = in_pool(threads, || dispatch(cli.command, out, err));
    match outcome {
        Ok(Ok(true)) => EXIT_PASS,
        Ok(Ok(false)) => EXIT_FAIL,
        Ok(Err(Failure::Usage(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Ok(Err(Failure::Compute(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    Ok(f())
}

fn dispatch(cmd: Command, out: Out, err: Out) -> Outcome {
    match cmd {
        Command::Sum(a) => cmd_sum(a, out),
        Command::Sphere(c) => cmd_sphere(c, out),
        Command::Variety(c) => cmd_variety(c, out),
        Command::Restrict(c) => cmd_restrict(c, out, err),
        Command::Ft(c) => cmd_ft(c, out),
    }
}

/// `re±imi` at six decimals, with negative zero printed as zero.
pub fn format_complex(z: Complex64) -> String {
    let part = |v: f64| {
        let s = format!("{v:.6}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    };
    let (re, im) = (part(z.re), part(z.im));
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

fn cmd_sum(a: SumArgs, out: Out) -> Outcome {
    let ctx = FieldCtx::new(a.q, 2)?;
    let kind = SumKind::from(a.kind);
    let sum = expsums::compute(&ctx, kind, ctx.reduce(a.a), ctx.reduce(a.b))?;
    let symbol = match kind {
        SumKind::Gauss => 'G',
        SumKind::Kloosterman => 'K',
        SumKind::Salie => 'S',
    };
    let bound = sum.bound();
    let mag = sum.norm();
    let ok = bound.holds(ctx.q(), mag, SUM_TOL);
    writeln!(
        out,
        "{} |{symbol}|={mag:.3} {} {}",
        format_complex(sum.value),
        bound.describe(ctx.q()),
        verdict(ok)
    )?;
    writeln!(out, "magnitude {mag}")?;
    Ok(ok)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_sphere(cmd: SphereCmd, out: Out) -> Outcome {
    match cmd {
        SphereCmd::Count { q, d, j } => {
            let ctx = FieldCtx::new(q, d)?;
            let radii: Vec<u32> = if j.is_empty() { (0..ctx.q()).collect() } else { j };
            let mut all = true;
            for j in radii {
                let j = j % ctx.q();
                let counted = enumerate_sphere(&ctx, j)?.cardinality() as u64;
                let closed = sphere_count_closed(&ctx, j)?;
                let ok = counted == closed;
                all &= ok;
                writeln!(out, "j={j} enumerated={counted} closed={closed} {}", verdict(ok))?;
            }
            Ok(all)
        }
        SphereCmd::Ft { q, d, j, x } => {
            let ctx = FieldCtx::new(q, d)?;
            let x = ctx.reduce_vector(&x)?;
            let j = j % ctx.q();
            let naive = sphere_ft_naive(&enumerate_sphere(&ctx, j)?, &x)?;
            let closed = sphere_ft_closed(&ctx, j, &x)?;
            let error = (naive - closed).norm();
            let ok = error < LEMMA_TOL;
            writeln!(out, "naive  {}", format_complex(naive))?;
            writeln!(out, "closed {}", format_complex(closed))?;
            writeln!(out, "|naive|={} error={error:.3e} {}", naive.norm(), verdict(ok))?;
            Ok(ok)
        }
        SphereCmd::VerifyClosedForm { q, d, tamper } => {
            let mut all = true;
            for &q in &q {
                for &d in &d {
                    let ctx = FieldCtx::new(q, d)?;
                    let check = if tamper {
                        let g = -expsums::gauss(&ctx, 1)?.value;
                        verify_closed_form_with(&ctx, move |c, j, x| sphere_ft_closed_with(c, g, j, x))?
                    } else {
                        verify_closed_form(&ctx)?
                    };
                    let ok = check.passed();
                    all &= ok;
                    write!(
                        out,
                        "q={q} d={d} max_error={:.3e} evaluations={} {}",
                        check.max_error,
                        check.evaluations,
                        verdict(ok)
                    )?;
                    match &check.first_mismatch {
                        Some((j, x)) => writeln!(out, " first mismatch j={j} x={x:?}")?,
                        None => writeln!(out)?,
                    }
                }
            }
            Ok(all)
        }
    }
}

fn cmd_variety(cmd: VarietyCmd, out: Out) -> Outcome {
    match cmd {
        VarietyCmd::Info { variety, q, d } => {
            let ctx = FieldCtx::new(q, d)?;
            let v = build_variety(&ctx, VarietyKind::parse(&variety, d)?)?;
            let cap = zero_sphere_intersection(&v);
            writeln!(out, "variety {}", v.label())?;
            writeln!(out, "|V|={} q^(d-1)={} size_ok={}", v.cardinality(), u64::from(ctx.q()).pow(d as u32 - 1), v.size_ok())?;
            writeln!(out, "contains_origin={}", v.contains_origin())?;
            writeln!(
                out,
                "|V∩S_0|={} threshold={} {}",
                cap.count,
                format_sig(cap.threshold, 12),
                verdict(cap.passes)
            )?;
            Ok(true)
        }
        VarietyCmd::Intersect { variety, q, d } => {
            let kind = VarietyKind::parse(&variety, d)?;
            let mut all = true;
            for q in q {
                let ctx = FieldCtx::new(q, d)?;
                let v = build_variety(&ctx, kind.clone())?;
                let cap = zero_sphere_intersection(&v);
                all &= cap.passes;
                writeln!(
                    out,
                    "q={q} |V∩S_0|={} threshold={} ratio={} {}",
                    cap.count,
                    format_sig(cap.threshold, 12),
                    format_sig(cap.ratio(), 6),
                    verdict(cap.passes)
                )?;
            }
            Ok(all)
        }
    }
}

fn cmd_restrict(cmd: RestrictCmd, out: Out, err: Out) -> Outcome {
    match cmd {
        RestrictCmd::Norm { variety, q, d, pair, search } => {
            let kind = VarietyKind::parse(&variety, d)?;
            let pair = pair.pair();
            let method = Method::from(search.method);
            let modes = match method {
                Method::MultiStart => search.sign_mode.modes(),
                _ => vec![SignMode::Nonneg],
            };
            let mut estimates = Vec::new();
            for mode in modes {
                let row = evaluate_point(&kind, q, d, &pair, method, &search.config(mode))?;
                let mode_label = row.sign_mode.map_or_else(|| "na".to_string(), |m| m.to_string());
                writeln!(
                    out,
                    "{} q={} d={d} {pair} method={} sign_mode={mode_label} estimate={} iters={} seed={}",
                    row.variety,
                    row.q,
                    method.as_str(),
                    row.estimate,
                    row.iterations,
                    row.seed
                )?;
                estimates.push(row.estimate);
            }
            let ctx = FieldCtx::new(q, d)?;
            let v = build_variety(&ctx, kind)?;
            let w = witness(&RadialOperator::new(&v)?, &pair);
            writeln!(out, "witness lower bound {} (best sphere j={})", w.value(), w.best_sphere)?;
            if let [nonneg, signed] = estimates[..] {
                let gap = signed - nonneg;
                if gap > SIGN_GAP_TOL {
                    writeln!(out, "signed exceeds nonneg by {gap:e}")?;
                }
            }
            Ok(true)
        }
        RestrictCmd::Scan { variety, d, q, pair, search, out: path } => {
            let spec = ScanSpec {
                method: search.method.into(),
                starts: search.starts,
                steps: search.steps,
                seed: search.seed,
                sign_modes: search.sign_mode.modes(),
                output: path,
                ..ScanSpec::new(VarietyKind::parse(&variety, d)?, d, q, pair.pair())
            };
            let outcome = run_scan(&spec)?;
            for (q, e) in &outcome.failures {
                writeln!(err, "q={q}: {e}")?;
            }
            let summary: &mut (dyn Write + Send) = match &spec.output {
                Some(path) => {
                    let mut file = BufWriter::new(File::create(path)?);
                    outcome.write_csv(&mut file)?;
                    file.flush()?;
                    &mut *out
                }
                None => {
                    outcome.write_csv(&mut *out)?;
                    &mut *err
                }
            };
            for mode in outcome.modes() {
                let label = mode.map_or_else(|| spec.method.as_str().to_string(), |m| m.to_string());
                writeln!(summary, "slope[{label}] {}", format_sig(outcome.slope(mode), 6))?;
            }
            if spec.sign_modes.len() == 2 && spec.method == Method::MultiStart {
                for pair in outcome.rows.chunks(2) {
                    if let [a, b] = pair {
                        if b.estimate > a.estimate + SIGN_GAP_TOL {
                            writeln!(summary, "q={}: signed exceeds nonneg by {:e}", a.q, b.estimate - a.estimate)?;
                        }
                    }
                }
            }
            Ok(outcome.failures.is_empty())
        }
        RestrictCmd::Region { d, pair } => {
            let pair = pair.pair();
            let (ip, ir) = pair.point();
            writeln!(out, "{pair} at (1/p, 1/r) = ({ip}, {ir})")?;
            let inside = |b: bool| if b { "inside" } else { "outside" };
            writeln!(out, "necessary region: {}", inside(region_conjecture(d, (ip, ir))))?;
            match region_lewko(d, (ip, ir)) {
                Ok(b) => writeln!(out, "known paraboloid region: {}", inside(b))?,
                Err(e) => writeln!(out, "known paraboloid region: {e}")?,
            }
            match suf2_check(d, &pair) {
                Ok((v, ok)) => writeln!(out, "r·d·(1−1/p) − d + 1 = {v} {}", if ok { "≤ 0" } else { "> 0" })?,
                Err(e) => writeln!(out, "r·d·(1−1/p) − d + 1: {e}")?,
            }
            writeln!(out, "d/p + (d−1)/r − d = {}", critical_line_excess(d, &pair))?;
            Ok(true)
        }
    }
}

fn cmd_ft(cmd: FtCmd, out: Out) -> Outcome {
    match cmd {
        FtCmd::Selftest { q, d, trials, seed, tol } => {
            let mut all = true;
            for &q in &q {
                for &d in &d {
                    let ctx = FieldCtx::new(q, d)?;
                    let t = fourier::selftest(&ctx, trials, seed)?;
                    let ok = t.passed(tol);
                    all &= ok;
                    writeln!(
                        out,
                        "q={q} d={d} trials={trials} fast_vs_naive={:.3e} plancherel={:.3e} round_trip={:.3e} {}",
                        t.fast_vs_naive,
                        t.plancherel,
                        t.round_trip,
                        verdict(ok)
                    )?;
                }
            }
            Ok(all)
        }
    }
}
