//! Restriction-norm scans over a list of primes, with CSV output.

use std::io::Write;
use std::path::PathBuf;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::restriction::{
    loglog_slope, rnorm_exact_22_op, rnorm_search, witness, ExponentPair, Method, RadialOperator,
    SearchConfig, SignMode,
};
use crate::varieties::{build_variety, zero_sphere_intersection, VarietyKind};

pub const CSV_HEADER: [&str; 13] = [
    "q", "d", "variety", "p", "r", "method", "sign_mode", "estimate", "iters", "seed", "v_size",
    "v_cap_s0", "threshold",
];

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub variety: VarietyKind,
    pub d: usize,
    pub qs: Vec<u64>,
    pub pair: ExponentPair,
    pub method: Method,
    pub starts: usize,
    pub steps: usize,
    pub seed: u64,
    /// Only consulted by the search method; one row per mode and prime.
    pub sign_modes: Vec<SignMode>,
    pub output: Option<PathBuf>,
}

impl ScanSpec {
    pub fn new(variety: VarietyKind, d: usize, qs: Vec<u64>, pair: ExponentPair) -> Self {
        let defaults = SearchConfig::default();
        Self {
            variety,
            d,
            qs,
            pair,
            method: Method::MultiStart,
            starts: defaults.starts,
            steps: defaults.steps,
            seed: defaults.seed,
            sign_modes: vec![defaults.sign_mode],
            output: None,
        }
    }

    /// Rejects bad primes, dimensions and method/exponent combinations up
    /// front, so that per-prime failures are genuine computation failures.
    pub fn validate(&self) -> Result<()> {
        for &q in &self.qs {
            FieldCtx::new(q, self.d)?;
        }
        if self.method == Method::Exact22 {
            check_exact22(&self.pair)?;
        }
        Ok(())
    }

    fn modes(&self) -> Vec<Option<SignMode>> {
        match self.method {
            Method::MultiStart => self.sign_modes.iter().copied().map(Some).collect(),
            _ => vec![None],
        }
    }

    fn config(&self, mode: SignMode) -> SearchConfig {
        SearchConfig {
            starts: self.starts,
            steps: self.steps,
            step_size: SearchConfig::default().step_size,
            seed: self.seed,
            sign_mode: mode,
        }
    }
}

fn check_exact22(pair: &ExponentPair) -> Result<()> {
    let two = ExponentPair::parse("2", "2")?;
    if *pair != two {
        return Err(Error::BadExponent(format!("exact22 needs p = r = 2, got {pair}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub q: u32,
    pub d: usize,
    pub variety: String,
    pub pair: ExponentPair,
    pub method: Method,
    pub sign_mode: Option<SignMode>,
    pub estimate: f64,
    pub iterations: usize,
    pub seed: u64,
    pub v_size: usize,
    pub v_cap_s0: usize,
    pub threshold: f64,
}

impl ScanRow {
    pub fn fields(&self) -> [String; 13] {
        [
            self.q.to_string(),
            self.d.to_string(),
            self.variety.clone(),
            self.pair.p.to_string(),
            self.pair.r.to_string(),
            self.method.as_str().to_string(),
            self.sign_mode.map_or_else(|| "na".to_string(), |m| m.to_string()),
            format_sig(self.estimate, 12),
            self.iterations.to_string(),
            self.seed.to_string(),
            self.v_size.to_string(),
            self.v_cap_s0.to_string(),
            format_sig(self.threshold, 12),
        ]
    }
}

/// One restriction estimate; `restrict norm` and every scan row go through
/// here, so a row can always be reproduced on its own.
pub fn evaluate_point(
    variety: &VarietyKind,
    q: u64,
    d: usize,
    pair: &ExponentPair,
    method: Method,
    config: &SearchConfig,
) -> Result<ScanRow> {
    let ctx = FieldCtx::new(q, d)?;
    let v = build_variety(&ctx, variety.clone())?;
    if v.is_empty() {
        return Err(Error::EmptyVariety);
    }
    let cap = zero_sphere_intersection(&v);
    let op = RadialOperator::new(&v)?;
    let (estimate, iterations, sign_mode) = match method {
        Method::Exact22 => {
            check_exact22(pair)?;
            (rnorm_exact_22_op(&op)?, 0, None)
        }
        Method::Witness => (witness(&op, pair).value(), 0, None),
        Method::MultiStart => {
            let rep = rnorm_search(&op, pair, config);
            (rep.estimate, rep.iterations, Some(config.sign_mode))
        }
    };
    Ok(ScanRow {
        q: ctx.q(),
        d,
        variety: v.label(),
        pair: *pair,
        method,
        sign_mode,
        estimate,
        iterations,
        seed: config.seed,
        v_size: v.cardinality(),
        v_cap_s0: cap.count,
        threshold: cap.threshold,
    })
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    /// Successful rows in `q` order, then sign-mode order.
    pub rows: Vec<ScanRow>,
    pub failures: Vec<(u64, Error)>,
}

impl ScanOutcome {
    /// Log-log slope of estimate against `q` for one sign mode (`None` for
    /// methods without one).
    pub fn slope(&self, mode: Option<SignMode>) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.sign_mode == mode)
            .map(|r| (f64::from(r.q), r.estimate))
            .collect();
        loglog_slope(&pts)
    }

    pub fn modes(&self) -> Vec<Option<SignMode>> {
        let mut out: Vec<Option<SignMode>> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.sign_mode) {
                out.push(r.sign_mode);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.rows, out)
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

pub fn run_scan(spec: &ScanSpec) -> Result<ScanOutcome> {
    spec.validate()?;
    let modes = spec.modes();
    let per_q = |&q: &u64| -> Vec<Result<ScanRow>> {
        modes
            .iter()
            .map(|mode| {
                let config = spec.config(mode.unwrap_or(SignMode::Nonneg));
                evaluate_point(&spec.variety, q, spec.d, &spec.pair, spec.method, &config)
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Vec<Result<ScanRow>>> = spec.qs.par_iter().map(per_q).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Vec<Result<ScanRow>>> = spec.qs.iter().map(per_q).collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&q, per_mode) in spec.qs.iter().zip(results) {
        for r in per_mode {
            match r {
                Ok(row) => rows.push(row),
                Err(e) => failures.push((q, e)),
            }
        }
    }
    Ok(ScanOutcome { rows, failures })
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.fields()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// `%.{sig}g`-style formatting: shortest of fixed or scientific notation
/// with `sig` significant digits and trailing zeros removed.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
