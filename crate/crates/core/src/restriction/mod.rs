//! Restriction norms for radial functions.
//!
//! A radial function is determined by its profile `(M_j)_{j∈F_q}`, and its
//! Fourier transform is `f̂(x) = Σ_j M_j Ŝ_j(x)`. Restricting to a variety
//! `V` gives the `|V| × q` matrix `A[x, j] = Ŝ_j(x)`; the radial restriction
//! constant for `(p, r)` is the supremum of
//!
//! ```text
//! ‖A M‖_{L^r(V, dσ)} / ‖lift(M)‖_{L^p(F_q^d, dm)}.
//! ```
//!
//! Because `Ŝ_j(x)` depends only on `‖x‖` and on whether `x = 0`, the rows
//! of `A` take at most `q + 1` distinct values. [`RadialOperator`] keeps
//! those rows with their multiplicities, which makes every norm evaluation
//! `O(q²)` regardless of `|V|`.

mod exponent;
mod region;
mod search;

use num_complex::Complex64;

pub use exponent::{Exponent, ExponentPair, Rational};
pub use region::{
    conjecture_vertices, convex_hull, critical_line_excess, hull_contains, lewko_vertices,
    region_conjecture, region_lewko, suf2_check,
};
pub use search::{compare_sign_modes, rnorm_search, SearchConfig, SignComparison, SignMode, SIGN_GAP_TOL};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::fourier::{GridFunction, Side};
use crate::spheres::{sphere_count_closed, SphereFtTable};
use crate::varieties::Variety;

/// Coefficients `(M_j)` of a radial function, indexed by radius.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    q: u32,
    coeffs: Vec<Complex64>,
}

impl RadialProfile {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != ctx.q() as usize {
            return Err(Error::DimensionMismatch {
                expected: ctx.q() as usize,
                got: coeffs.len(),
            });
        }
        Ok(Self { q: ctx.q(), coeffs })
    }

    pub fn from_real(ctx: &FieldCtx, coeffs: &[f64]) -> Result<Self> {
        Self::new(ctx, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Indicator profile of the single sphere `S_j`.
    pub fn delta(ctx: &FieldCtx, j: u32) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); ctx.q() as usize];
        coeffs[(j % ctx.q()) as usize] = Complex64::new(1.0, 0.0);
        Self { q: ctx.q(), coeffs }
    }

    pub fn constant(ctx: &FieldCtx, c: Complex64) -> Self {
        Self {
            q: ctx.q(),
            coeffs: vec![c; ctx.q() as usize],
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        Self {
            q: self.q,
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }
}

/// The radial function `f(m) = M_{‖m‖}` on the primal side.
pub fn lift_radial(ctx: &FieldCtx, profile: &RadialProfile) -> Result<GridFunction> {
    if profile.q != ctx.q() {
        return Err(Error::DimensionMismatch {
            expected: ctx.q() as usize,
            got: profile.q as usize,
        });
    }
    GridFunction::from_fn(ctx, Side::PrimalCounting, |m| {
        profile.coeffs[ctx.norm_unchecked(m) as usize]
    })
}

/// `(Σ_m |f(m)|^p)^{1/p}` under counting measure, or the max for `p = ∞`.
pub fn lp_norm_counting(f: &GridFunction, p: Exponent) -> f64 {
    let values = f.values();
    match p {
        Exponent::Infinite => values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        Exponent::Finite(_) => {
            let p = p.to_f64();
            values.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

/// `((1/|V|) Σ_{x∈V} |g(x)|^r)^{1/r}`, with `g` listed in the variety's
/// point order.
pub fn lr_norm_sigma(g: &[Complex64], v: &Variety, r: Exponent) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyVariety);
    }
    if g.len() != v.cardinality() {
        return Err(Error::DimensionMismatch {
            expected: v.cardinality(),
            got: g.len(),
        });
    }
    Ok(match r {
        Exponent::Infinite => g.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Exponent::Finite(_) => {
            let r = r.to_f64();
            let mean = g.iter().map(|z| z.norm().powf(r)).sum::<f64>() / g.len() as f64;
            mean.powf(1.0 / r)
        }
    })
}

/// Dense `|V| × q` matrix with `A[x, j] = Ŝ_j(x)`, rows in the variety's
/// point order.
#[derive(Clone, Debug)]
pub struct RadialMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl RadialMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn apply(&self, profile: &RadialProfile) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| dot(self.row(i), &profile.coeffs))
            .collect()
    }
}

fn dot(row: &[Complex64], m: &[Complex64]) -> Complex64 {
    row.iter().zip(m).map(|(a, b)| a * b).sum()
}

pub fn radial_matrix(v: &Variety) -> Result<RadialMatrix> {
    let ctx = v.ctx();
    let table = SphereFtTable::new(ctx)?;
    let q = ctx.q() as usize;
    let mut data = Vec::with_capacity(v.cardinality() * q);
    for x in v.points().iter() {
        let norm = ctx.norm_unchecked(x);
        data.extend((0..q as u32).map(|j| table.eval(j, x, norm)));
    }
    Ok(RadialMatrix {
        rows: v.cardinality(),
        cols: q,
        data,
    })
}

/// A row class of the radial matrix.
#[derive(Clone, Debug)]
struct RowClass {
    values: Vec<Complex64>,
    /// Number of points of `V` in this class.
    count: usize,
    origin: bool,
}

/// The radial matrix compressed to its distinct rows, with the sphere sizes
/// needed for the `L^p(dm)` norm of a lifted profile.
#[derive(Clone, Debug)]
pub struct RadialOperator {
    q: u32,
    d: usize,
    variety_size: usize,
    classes: Vec<RowClass>,
    sphere_sizes: Vec<f64>,
    label: String,
    contains_origin: bool,
}

impl RadialOperator {
    pub fn new(v: &Variety) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyVariety);
        }
        let ctx = v.ctx();
        let q = ctx.q();
        let table = SphereFtTable::new(ctx)?;
        let mut per_norm = vec![0usize; q as usize];
        let mut origin = false;
        for x in v.points().iter() {
            if crate::spheres::is_zero_vector(x) {
                origin = true;
            } else {
                per_norm[ctx.norm_unchecked(x) as usize] += 1;
            }
        }
        let mut classes = Vec::new();
        if origin {
            classes.push(RowClass {
                values: table.origin_row().to_vec(),
                count: 1,
                origin: true,
            });
        }
        for (t, &count) in per_norm.iter().enumerate() {
            if count > 0 {
                classes.push(RowClass {
                    values: table.row_for_norm(t as u32).to_vec(),
                    count,
                    origin: false,
                });
            }
        }
        let sphere_sizes = (0..q)
            .map(|j| sphere_count_closed(ctx, j).map(|n| n as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q,
            d: ctx.d(),
            variety_size: v.cardinality(),
            classes,
            sphere_sizes,
            label: v.label(),
            contains_origin: origin,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn variety_size(&self) -> usize {
        self.variety_size
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_origin
    }

    pub fn sphere_sizes(&self) -> &[f64] {
        &self.sphere_sizes
    }

    fn weight(&self, class: &RowClass) -> f64 {
        class.count as f64 / self.variety_size as f64
    }

    /// `‖A M‖_{L^r(V, dσ)}`.
    pub fn image_norm(&self, m: &[Complex64], r: Exponent) -> f64 {
        match r {
            Exponent::Infinite => self
                .classes
                .iter()
                .map(|c| dot(&c.values, m).norm())
                .fold(0.0, f64::max),
            Exponent::Finite(_) => {
                let r = r.to_f64();
                self.classes
                    .iter()
                    .map(|c| self.weight(c) * dot(&c.values, m).norm().powf(r))
                    .sum::<f64>()
                    .powf(1.0 / r)
            }
        }
    }

    /// `‖lift(M)‖_{L^p(dm)} = (Σ_j |M_j|^p |S_j|)^{1/p}`.
    pub fn profile_norm(&self, m: &[Complex64], p: Exponent) -> f64 {
        match p {
            Exponent::Infinite => m
                .iter()
                .zip(&self.sphere_sizes)
                .filter(|(_, &s)| s > 0.0)
                .map(|(c, _)| c.norm())
                .fold(0.0, f64::max),
            Exponent::Finite(_) => {
                let p = p.to_f64();
                m.iter()
                    .zip(&self.sphere_sizes)
                    .map(|(c, s)| s * c.norm().powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
        }
    }

    /// Restriction ratio of a profile; zero for the zero profile.
    pub fn ratio(&self, m: &[Complex64], pair: &ExponentPair) -> f64 {
        let den = self.profile_norm(m, pair.p);
        if den == 0.0 {
            return 0.0;
        }
        self.image_norm(m, pair.r) / den
    }

    /// Gradient of `log ‖A M‖_r` (real gradient packed as complex numbers).
    fn log_image_gradient(&self, m: &[Complex64], r: Exponent, out: &mut [Complex64]) {
        out.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
        let images: Vec<Complex64> = self.classes.iter().map(|c| dot(&c.values, m)).collect();
        match r {
            Exponent::Infinite => {
                let Some((k, y)) = images
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                else {
                    return;
                };
                let n2 = y.norm_sqr();
                if n2 == 0.0 {
                    return;
                }
                for (g, a) in out.iter_mut().zip(&self.classes[k].values) {
                    *g = a.conj() * y / n2;
                }
            }
            Exponent::Finite(_) => {
                let r = r.to_f64();
                let mut total = 0.0;
                for (class, y) in self.classes.iter().zip(&images) {
                    let mag = y.norm();
                    total += self.weight(class) * mag.powf(r);
                    if mag == 0.0 {
                        continue;
                    }
                    let coef = self.weight(class) * mag.powf(r - 2.0);
                    for (g, a) in out.iter_mut().zip(&class.values) {
                        *g += a.conj() * y * coef;
                    }
                }
                if total > 0.0 {
                    out.iter_mut().for_each(|g| *g /= total);
                }
            }
        }
    }

    /// Gradient of `log ‖lift(M)‖_p`; zero for `p = ∞`, where the ball
    /// constraint is enforced by projection instead.
    fn log_profile_gradient(&self, m: &[Complex64], p: Exponent, out: &mut [Complex64]) {
        out.iter_mut().for_each(|g| *g = Complex64::new(0.0, 0.0));
        if let Exponent::Finite(_) = p {
            let p = p.to_f64();
            let total: f64 = m
                .iter()
                .zip(&self.sphere_sizes)
                .map(|(c, s)| s * c.norm().powf(p))
                .sum();
            if total == 0.0 {
                return;
            }
            for ((g, c), s) in out.iter_mut().zip(m).zip(&self.sphere_sizes) {
                let mag = c.norm();
                if mag > 0.0 {
                    *g = c * (s * mag.powf(p - 2.0) / total);
                }
            }
        }
    }

    /// Dense weighted matrix `B = diag(√w) A D^{-1/2}` over row classes,
    /// whose top singular value is the `(2, 2)` restriction constant.
    fn weighted_gram(&self) -> Vec<Complex64> {
        let q = self.q as usize;
        let inv_sqrt: Vec<f64> = self
            .sphere_sizes
            .iter()
            .map(|&s| if s > 0.0 { 1.0 / s.sqrt() } else { 0.0 })
            .collect();
        let mut gram = vec![Complex64::new(0.0, 0.0); q * q];
        for class in &self.classes {
            let w = self.weight(class);
            for a in 0..q {
                let ba = class.values[a] * inv_sqrt[a];
                for b in 0..q {
                    let bb = class.values[b] * inv_sqrt[b];
                    gram[a * q + b] += ba.conj() * bb * w;
                }
            }
        }
        gram
    }
}

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITERS: usize = 100_000;

/// Exact `(2 → 2)` radial restriction constant by power iteration on the
/// weighted Gram matrix.
pub fn rnorm_exact_22(v: &Variety) -> Result<f64> {
    rnorm_exact_22_op(&RadialOperator::new(v)?)
}

pub fn rnorm_exact_22_op(op: &RadialOperator) -> Result<f64> {
    let q = op.q as usize;
    let gram = op.weighted_gram();
    let mut vec: Vec<Complex64> = (0..q)
        .map(|j| Complex64::new(1.0 + j as f64 / (2.0 * q as f64), 0.0))
        .collect();
    normalize(&mut vec);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let next: Vec<Complex64> = (0..q)
            .map(|a| dot(&gram[a * q..(a + 1) * q], &vec))
            .collect();
        let norm = next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let converged = (norm - lambda).abs() <= POWER_TOL * norm;
        lambda = norm;
        vec = next.into_iter().map(|z| z / norm).collect();
        if converged {
            return Ok(lambda.sqrt());
        }
    }
    Err(Error::NoConvergence(POWER_MAX_ITERS))
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact22,
    MultiStart,
    Witness,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact22 => "exact22",
            Method::MultiStart => "search",
            Method::Witness => "witness",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact22" => Ok(Method::Exact22),
            "search" | "multistart" => Ok(Method::MultiStart),
            "witness" => Ok(Method::Witness),
            other => Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown method {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub label: String,
    pub q: u32,
    pub d: usize,
    pub pair: ExponentPair,
    pub method: Method,
    pub sign_mode: Option<SignMode>,
    pub estimate: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Maximizing profile, when the method produces one.
    pub profile: Option<Vec<Complex64>>,
}

/// Constant-function and single-sphere witnesses for a lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    /// `q^{d−d/p} |V|^{−1/r}` when `0 ∈ V`.
    pub constant: Option<f64>,
    pub best_sphere: u32,
    pub sphere_ratio: f64,
}

impl Witness {
    pub fn value(&self) -> f64 {
        self.constant.unwrap_or(0.0).max(self.sphere_ratio)
    }
}

pub fn constant_witness(q: u32, d: usize, variety_size: usize, pair: &ExponentPair) -> f64 {
    let q = f64::from(q);
    let d = d as f64;
    let ip = pair.p.reciprocal();
    let ir = pair.r.reciprocal();
    let ip = *ip.numer() as f64 / *ip.denom() as f64;
    let ir = *ir.numer() as f64 / *ir.denom() as f64;
    q.powf(d - d * ip) * (variety_size as f64).powf(-ir)
}

pub fn witness(op: &RadialOperator, pair: &ExponentPair) -> Witness {
    let constant = op
        .contains_origin
        .then(|| constant_witness(op.q, op.d, op.variety_size, pair));
    let q = op.q as usize;
    let mut best = (0u32, 0.0f64);
    for j in 0..q {
        let mut m = vec![Complex64::new(0.0, 0.0); q];
        m[j] = Complex64::new(1.0, 0.0);
        let ratio = op.ratio(&m, pair);
        if ratio > best.1 {
            best = (j as u32, ratio);
        }
    }
    Witness {
        constant,
        best_sphere: best.0,
        sphere_ratio: best.1,
    }
}

pub fn witness_lower_bound(v: &Variety, pair: &ExponentPair) -> Result<f64> {
    Ok(witness(&RadialOperator::new(v)?, pair).value())
}

/// Pieces of the sufficiency quantity over `V ∖ {0}`:
/// `L` with every sphere, `R` with only `j = 0`, `M` with `j ≠ 0`, each
/// `q^{1−d} Σ |·|^r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Suf1 {
    pub l: f64,
    pub r: f64,
    pub m: f64,
}

/// Rescales a profile so that `Σ_j |M_j|^p |S_j| = 1`.
pub fn normalize_profile(op: &RadialOperator, profile: &RadialProfile, p: Exponent) -> RadialProfile {
    let n = op.profile_norm(&profile.coeffs, p);
    if n == 0.0 {
        return profile.clone();
    }
    profile.scaled(Complex64::new(1.0 / n, 0.0))
}

pub fn suf1_diagnostic(
    op: &RadialOperator,
    profile: &RadialProfile,
    r: f64,
    normalize_with: Option<Exponent>,
) -> Suf1 {
    let profile = match normalize_with {
        Some(p) => normalize_profile(op, profile, p),
        None => profile.clone(),
    };
    let m = &profile.coeffs;
    let scale = f64::from(op.q).powi(1 - op.d as i32);
    let mut out = Suf1 { l: 0.0, r: 0.0, m: 0.0 };
    for class in op.classes.iter().filter(|c| !c.origin) {
        let zero_part = class.values[0] * m[0];
        let rest: Complex64 = dot(&class.values[1..], &m[1..]);
        let n = class.count as f64;
        out.l += n * (zero_part + rest).norm().powf(r);
        out.r += n * zero_part.norm().powf(r);
        out.m += n * rest.norm().powf(r);
    }
    out.l *= scale;
    out.r *= scale;
    out.m *= scale;
    out
}

/// Upper bound `q^{r(1−d/p)}` for `(Σ_j M_j)^r` over nonnegative profiles
/// with `Σ_j M_j^p = q^{1−d}`.
pub fn holder_sum_bound(q: u32, d: usize, p: f64, r: f64) -> f64 {
    f64::from(q).powf(r * (1.0 - d as f64 / p))
}

/// Upper bound `q^{(1−d)/p}` for `M_0` under the same normalization.
pub fn zero_coefficient_bound(q: u32, d: usize, p: f64) -> f64 {
    f64::from(q).powf((1.0 - d as f64) / p)
}

/// Bound for `R` in even dimension: the zero sphere's transform is at most
/// `q^{d/2}` on `‖x‖ = 0` and exactly `q^{(d−2)/2}` elsewhere.
pub fn zero_sphere_term_bound(q: u32, d: usize, m0: f64, r: f64, cap_s0: usize, v_size: usize) -> f64 {
    let q = f64::from(q);
    let d = d as f64;
    let m0r = m0.powf(r);
    let lead = q.powf(d - 1.0);
    q.powf(r * d / 2.0) * m0r * cap_s0 as f64 / lead + q.powf(r * (d - 2.0) / 2.0) * m0r * v_size as f64 / lead
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::ft_fast;
    use crate::spheres::enumerate_sphere;
    use crate::varieties::{build_variety, zero_sphere_intersection, VarietyKind};

    fn ctx(q: u64, d: usize) -> FieldCtx {
        FieldCtx::new(q, d).unwrap()
    }

    fn pair(p: &str, r: &str) -> ExponentPair {
        ExponentPair::parse(p, r).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn lift_examples() {
        let c = ctx(3, 2);
        let f = lift_radial(&c, &RadialProfile::delta(&c, 1)).unwrap();
        assert_eq!(f.values().iter().filter(|v| v.norm() > 0.0).count(), 4);
        let s1 = enumerate_sphere(&c, 1).unwrap();
        assert!(s1.points().iter().all(|m| f.at(m) == one()));
        let ones = lift_radial(&c, &RadialProfile::constant(&c, one())).unwrap();
        assert!(ones.values().iter().all(|v| *v == one()));
        let zeros = lift_radial(&c, &RadialProfile::constant(&c, 0.0.into())).unwrap();
        assert!(zeros.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn lp_examples() {
        let c = ctx(3, 2);
        let f = lift_radial(&c, &RadialProfile::delta(&c, 1)).unwrap();
        assert!((lp_norm_counting(&f, Exponent::integer(2).unwrap()) - 2.0).abs() < 1e-12);
        let c3 = ctx(5, 3);
        let ones = lift_radial(&c3, &RadialProfile::constant(&c3, one())).unwrap();
        assert!((lp_norm_counting(&ones, Exponent::integer(1).unwrap()) - 125.0).abs() < 1e-9);
        assert_eq!(lp_norm_counting(&ones, Exponent::Infinite), 1.0);
    }

    #[test]
    fn ass1_normalization_gives_unit_norm() {
        let c = ctx(5, 3);
        let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let p: Exponent = "3/2".parse().unwrap();
        let prof = RadialProfile::from_real(&c, &[0.3, 1.0, 0.0, 2.0, 0.7]).unwrap();
        let normed = normalize_profile(&op, &prof, p);
        let f = lift_radial(&c, &normed).unwrap();
        assert!((lp_norm_counting(&f, p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_norm_examples() {
        let c = ctx(5, 3);
        let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        let n = v.cardinality();
        let g = vec![Complex64::new(0.0, -3.0); n];
        for r in ["1", "2", "7/3", "inf"] {
            assert!((lr_norm_sigma(&g, &v, r.parse().unwrap()).unwrap() - 3.0).abs() < 1e-12);
        }
        // transform of f ≡ 1 is q^d δ_0
        let ones = lift_radial(&c, &RadialProfile::constant(&c, one())).unwrap();
        let fhat = ft_fast(&ones).unwrap();
        let on_v: Vec<Complex64> = v.points().iter().map(|x| fhat.at(x)).collect();
        for r in [2.0f64, 3.0] {
            let got = lr_norm_sigma(&on_v, &v, Exponent::integer(r as i64).unwrap()).unwrap();
            assert!((got - 125.0 * (n as f64).powf(-1.0 / r)).abs() < 1e-9);
        }
        assert!((lr_norm_sigma(&on_v, &v, Exponent::Infinite).unwrap() - 125.0).abs() < 1e-9);
        assert!(lr_norm_sigma(&on_v[1..], &v, Exponent::Infinite).is_err());
    }

    #[test]
    fn radial_matrix_matches_fourier_engine() {
        let c = ctx(5, 3);
        let v = build_variety(&c, VarietyKind::Plane).unwrap();
        let a = radial_matrix(&v).unwrap();
        let prof = RadialProfile::new(
            &c,
            (0..5).map(|j| Complex64::new(j as f64 - 1.5, 0.25 * j as f64)).collect(),
        )
        .unwrap();
        let fhat = ft_fast(&lift_radial(&c, &prof).unwrap()).unwrap();
        for (got, x) in a.apply(&prof).iter().zip(v.points().iter()) {
            assert!((got - fhat.at(x)).norm() < 1e-9);
        }
    }

    #[test]
    fn radial_matrix_examples() {
        let c = ctx(3, 2);
        let v = Variety::from_points(&c, &[vec![0, 0], vec![1, 1]]).unwrap();
        let a = radial_matrix(&v).unwrap();
        for j in 0..3 {
            let size = enumerate_sphere(&c, j).unwrap().cardinality() as f64;
            assert!((a.entry(0, j as usize) - Complex64::new(size, 0.0)).norm() < 1e-9);
        }
        assert!((a.entry(1, 1) - Complex64::new(-2.0, 0.0)).norm() < 1e-9);
        let col = a.apply(&RadialProfile::delta(&c, 2));
        assert!((col[1] - a.entry(1, 2)).norm() < 1e-12);
    }

    #[test]
    fn exact22_single_point() {
        let c = ctx(5, 3);
        let x0 = vec![1, 2, 0];
        let v = Variety::from_points(&c, std::slice::from_ref(&x0)).unwrap();
        let got = rnorm_exact_22(&v).unwrap();
        let expect: f64 = (0..5)
            .map(|j| {
                let s = enumerate_sphere(&c, j).unwrap();
                let ft = crate::spheres::sphere_ft_naive(&s, &x0).unwrap();
                ft.norm_sqr() / s.cardinality() as f64
            })
            .sum::<f64>()
            .sqrt();
        assert!((got - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn ratio_is_homogeneous() {
        let c = ctx(7, 3);
        let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let m: Vec<Complex64> = (0..7).map(|j| Complex64::new(1.0 / (1.0 + j as f64), j as f64 * 0.1)).collect();
        for pr in [pair("3/2", "2"), pair("2", "2"), pair("1", "inf"), pair("inf", "3")] {
            let base = op.ratio(&m, &pr);
            for alpha in [Complex64::new(-2.5, 0.0), Complex64::new(0.0, 3e-3), Complex64::new(7.0, -1.0)] {
                let scaled: Vec<Complex64> = m.iter().map(|z| z * alpha).collect();
                assert!((op.ratio(&scaled, &pr) - base).abs() < 1e-9 * base);
            }
        }
    }

    #[test]
    fn operator_agrees_with_dense_matrix() {
        let c = ctx(5, 4);
        let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let a = radial_matrix(&v).unwrap();
        let prof = RadialProfile::from_real(&c, &[0.2, -1.0, 0.5, 0.0, 3.0]).unwrap();
        let image = a.apply(&prof);
        for r in ["1", "2", "5/2", "inf"] {
            let r: Exponent = r.parse().unwrap();
            let dense = lr_norm_sigma(&image, &v, r).unwrap();
            assert!((op.image_norm(prof.coeffs(), r) - dense).abs() < 1e-9 * dense);
        }
        let f = lift_radial(&c, &prof).unwrap();
        let p: Exponent = "3/2".parse().unwrap();
        assert!((op.profile_norm(prof.coeffs(), p) - lp_norm_counting(&f, p)).abs() < 1e-9);
    }

    #[test]
    fn witness_examples() {
        let c = ctx(7, 3);
        let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let w = witness(&op, &pair("2", "2"));
        assert!((w.constant.unwrap() - 7f64.sqrt()).abs() < 1e-12);
        assert!(w.value() >= w.constant.unwrap());
        // on the critical line with |V| = q^{d−1} the constant witness is 1
        for pr in [pair("1", "inf"), pair("3/2", "2"), pair("6/5", "4")] {
            assert_eq!(critical_line_excess(3, &pr), Rational::from(0));
            let val = constant_witness(7, 3, 49, &pr);
            assert!((val - 1.0).abs() < 1e-12, "{pr}: {val}");
        }
        let ones = RadialProfile::constant(&c, one());
        assert!((op.ratio(ones.coeffs(), &pair("2", "2")) - 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn suf1_examples() {
        let c = ctx(5, 4);
        let v = build_variety(&c, VarietyKind::Plane).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let zero = RadialProfile::constant(&c, 0.0.into());
        assert_eq!(suf1_diagnostic(&op, &zero, 2.0, None), Suf1 { l: 0.0, r: 0.0, m: 0.0 });

        let p: Exponent = "8/5".parse().unwrap();
        let e0 = normalize_profile(&op, &RadialProfile::delta(&c, 0), p);
        let s = suf1_diagnostic(&op, &e0, 2.0, None);
        assert!(s.m.abs() < 1e-18);
        let cap = zero_sphere_intersection(&v).count;
        let bound = zero_sphere_term_bound(5, 4, e0.coeffs()[0].re, 2.0, cap, v.cardinality());
        assert!(s.r <= bound * (1.0 + 1e-12), "{} vs {}", s.r, bound);

        let mixed = RadialProfile::from_real(&c, &[1.0, 0.5, -0.25, 2.0, 0.1]).unwrap();
        for r in [1.0, 1.5, 2.0, 3.0] {
            let s = suf1_diagnostic(&op, &mixed, r, Some(p));
            assert!(s.l <= 2f64.powf(r) * (s.r + s.m) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [3.0, 5.0, 7.0f64].iter().map(|&q| (q, 2.0 * q.sqrt())).collect();
        assert!((loglog_slope(&pts) - 0.5).abs() < 1e-12);
    }
}
