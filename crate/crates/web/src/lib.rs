//! WebAssembly bindings behind `www/index.html`.

use ffharm::expsums::{self, SumKind};
use ffharm::restriction::{loglog_slope, ExponentPair, Method, SearchConfig};
use ffharm::scan::evaluate_point;
use ffharm::spheres::sphere_ft_closed;
use ffharm::varieties::VarietyKind;
use ffharm::FieldCtx;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest modulus the interactive views accept.
pub const MAX_Q: u32 = 199;

/// Largest grid `q^d` the trend view will enumerate.
pub const MAX_TREND_GRID: u128 = 2_000_000;

fn field(q: u32, d: usize) -> Result<FieldCtx, String> {
    if q > MAX_Q {
        return Err(format!("q must be at most {MAX_Q}"));
    }
    FieldCtx::new(u64::from(q), d).map_err(|e| e.to_string())
}

/// `|Ŝ_j(x)|` over `F_q²`, row-major in `(x_1, x_2)`.
#[wasm_bindgen]
pub fn sphere_heatmap(q: u32, j: u32) -> Result<Vec<f64>, String> {
    let ctx = field(q, 2)?;
    let j = j % q;
    let mut out = Vec::with_capacity((q * q) as usize);
    for x1 in 0..q {
        for x2 in 0..q {
            let v = sphere_ft_closed(&ctx, j, &[x1, x2]).map_err(|e| e.to_string())?;
            out.push(v.norm());
        }
    }
    Ok(out)
}

/// `[re, im, re, im, …]` of `K(a,b)` or `S(a,b)` over all `a, b ≠ 0`.
#[wasm_bindgen]
pub fn sum_scatter(kind: &str, q: u32) -> Result<Vec<f64>, String> {
    let ctx = field(q, 2)?;
    let kind = match kind {
        "kloosterman" => SumKind::Kloosterman,
        "salie" => SumKind::Salie,
        other => return Err(format!("unknown sum {other:?}")),
    };
    let mut out = Vec::with_capacity(2 * ((q - 1) * (q - 1)) as usize);
    for a in 1..q {
        for b in 1..q {
            let v = expsums::compute(&ctx, kind, a, b).map_err(|e| e.to_string())?.value;
            out.push(v.re);
            out.push(v.im);
        }
    }
    Ok(out)
}

#[derive(Serialize, Debug)]
struct TrendRow {
    q: u32,
    estimate: f64,
    witness: f64,
    v_size: usize,
    v_cap_s0: usize,
    threshold: f64,
}

#[derive(Serialize, Debug)]
struct Trend {
    rows: Vec<TrendRow>,
    slope: f64,
    witness_slope: f64,
}

/// Search estimate and witness bound for each `q`, with log-log slopes, as
/// JSON.
#[wasm_bindgen]
pub fn restriction_trend(
    variety: &str,
    d: usize,
    qs: &[u32],
    p: &str,
    r: &str,
    starts: usize,
) -> Result<String, String> {
    let kind = VarietyKind::parse(variety, d).map_err(|e| e.to_string())?;
    let pair = ExponentPair::parse(p, r).map_err(|e| e.to_string())?;
    let config = SearchConfig { starts, ..SearchConfig::default() };
    let mut rows = Vec::with_capacity(qs.len());
    for &q in qs {
        let ctx = field(q, d)?;
        if ctx.grid_size() > MAX_TREND_GRID {
            return Err(format!("q^d = {} is too large for the browser", ctx.grid_size()));
        }
        let eval = |method| {
            evaluate_point(&kind, u64::from(q), d, &pair, method, &config).map_err(|e| format!("q={q}: {e}"))
        };
        let search = eval(Method::MultiStart)?;
        let witness = eval(Method::Witness)?;
        rows.push(TrendRow {
            q,
            estimate: search.estimate,
            witness: witness.estimate,
            v_size: search.v_size,
            v_cap_s0: search.v_cap_s0,
            threshold: search.threshold,
        });
    }
    let slope_of = |f: fn(&TrendRow) -> f64| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|row| (f64::from(row.q), f(row))).collect();
        let s = loglog_slope(&pts);
        if s.is_finite() {
            s
        } else {
            0.0
        }
    };
    let trend = Trend {
        slope: slope_of(|row| row.estimate),
        witness_slope: slope_of(|row| row.witness),
        rows,
    };
    serde_json::to_string(&trend).map_err(|e| e.to_string())
}
