//! Spheres `S_j = {m : ‖m‖ = j}` in `F_q^d` and their Fourier transforms.
//!
//! The transform is computed two ways: directly from the definition
//! `Σ_{m∈S_j} χ(−m·x)`, and through the closed form
//!
//! ```text
//! Ŝ_j(x) = q^{d-1} δ_0(x) + q^{-1} G_1^d K(−j, −‖x‖/4)   (d even)
//! Ŝ_j(x) = q^{d-1} δ_0(x) + q^{-1} G_1^d S(−j, −‖x‖/4)   (d odd)
//! ```
//!
//! [`verify_closed_form`] compares the two on every `(j, x)`.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expsums;
use crate::field::FieldCtx;
use crate::points::{self, PointSet};

#[derive(Clone, Debug)]
pub struct Sphere {
    ctx: FieldCtx,
    j: u32,
    points: PointSet,
}

impl Sphere {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn radius(&self) -> u32 {
        self.j
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn cardinality(&self) -> usize {
        self.points.len()
    }
}

pub fn is_zero_vector(x: &[u32]) -> bool {
    x.iter().all(|&c| c == 0)
}

pub fn enumerate_sphere(ctx: &FieldCtx, j: u32) -> Result<Sphere> {
    let j = j % ctx.q();
    let points = points::scan(ctx, |m| ctx.norm_unchecked(m) == j)?;
    Ok(Sphere {
        ctx: ctx.clone(),
        j,
        points,
    })
}

/// Sizes `|S_j|` for every radius, from a single pass over the grid.
pub fn sphere_sizes(ctx: &FieldCtx) -> Result<Vec<u64>> {
    let total = ctx.check_budget()?;
    let mut sizes = vec![0u64; ctx.q() as usize];
    let mut m = vec![0u32; ctx.d()];
    for idx in 0..total {
        ctx.decode_into(idx, &mut m);
        sizes[ctx.norm_unchecked(&m) as usize] += 1;
    }
    Ok(sizes)
}

fn check_dim(ctx: &FieldCtx, x: &[u32]) -> Result<()> {
    if x.len() != ctx.d() {
        return Err(Error::DimensionMismatch {
            expected: ctx.d(),
            got: x.len(),
        });
    }
    Ok(())
}

/// `Σ_{m∈S_j} χ(−m·x)` by direct summation.
pub fn sphere_ft_naive(sphere: &Sphere, x: &[u32]) -> Result<Complex64> {
    let ctx = &sphere.ctx;
    check_dim(ctx, x)?;
    let x: Vec<u32> = x.iter().map(|&c| c % ctx.q()).collect();
    let chi = ctx.chars().chi_values();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in sphere.points.iter() {
        acc += chi[ctx.neg(ctx.dot_unchecked(m, &x)) as usize];
    }
    Ok(acc)
}

/// Closed form with an explicit Gauss-sum factor; [`sphere_ft_closed`]
/// passes `G_1`.
pub fn sphere_ft_closed_with(ctx: &FieldCtx, gauss_factor: Complex64, j: u32, x: &[u32]) -> Complex64 {
    let q = ctx.q();
    let d = ctx.d();
    let norm = ctx.norm_unchecked(&x.iter().map(|&c| c % q).collect::<Vec<_>>());
    // 4 is invertible since q is odd
    let quarter = ctx.inv(4 % q).unwrap_or(1);
    let a = ctx.neg(j % q);
    let b = ctx.neg(ctx.mul(quarter, norm));
    let twisted = if d.is_multiple_of(2) {
        expsums::kloosterman(ctx, a, b).value
    } else {
        expsums::salie(ctx, a, b).value
    };
    let mut value = gauss_factor.powu(d as u32) * twisted / f64::from(q);
    if is_zero_vector(x) {
        value += f64::from(q).powi(d as i32 - 1);
    }
    value
}

pub fn sphere_ft_closed(ctx: &FieldCtx, j: u32, x: &[u32]) -> Result<Complex64> {
    check_dim(ctx, x)?;
    let g1 = expsums::gauss(ctx, 1)?.value;
    Ok(sphere_ft_closed_with(ctx, g1, j, x))
}

/// `|S_j|` from the closed form at `x = 0`.
pub fn sphere_count_closed(ctx: &FieldCtx, j: u32) -> Result<u64> {
    let zero = vec![0u32; ctx.d()];
    let value = sphere_ft_closed(ctx, j, &zero)?;
    let rounded = value.re.round();
    if (value - Complex64::new(rounded, 0.0)).norm() > 1e-6 || rounded < 0.0 {
        return Err(Error::RoundingMismatch(value.re));
    }
    Ok(rounded as u64)
}

/// Tabulated closed form. `Ŝ_j(x)` depends on `x` only through `‖x‖` and
/// whether `x = 0`, so a `q × q` table covers every evaluation.
#[derive(Clone, Debug)]
pub struct SphereFtTable {
    q: u32,
    d: usize,
    /// `by_norm[t][j]` is `Ŝ_j(x)` for any nonzero `x` with `‖x‖ = t`.
    by_norm: Vec<Vec<Complex64>>,
    /// `Ŝ_j(0)`.
    at_origin: Vec<Complex64>,
}

impl SphereFtTable {
    pub fn new(ctx: &FieldCtx) -> Result<Self> {
        let q = ctx.q();
        let g1 = expsums::gauss(ctx, 1)?.value;
        let d = ctx.d();
        // One representative of each norm. For t = 0 the origin stands in
        // and its δ term is stripped below.
        let witness = |t: u32| -> Vec<u32> {
            let mut x = vec![0u32; d];
            if t == 0 {
                return x;
            }
            // t is a sum of two squares in any odd prime field
            for a in 0..q {
                let rest = ctx.add(t, ctx.neg(ctx.mul(a, a)));
                if let Some(b) = (0..q).find(|&b| ctx.mul(b, b) == rest) {
                    x[0] = a;
                    x[1] = b;
                    return x;
                }
            }
            unreachable!("every residue is a sum of two squares mod an odd prime")
        };
        let delta = f64::from(q).powi(d as i32 - 1);
        let mut by_norm = Vec::with_capacity(q as usize);
        for t in 0..q {
            let x = witness(t);
            let row: Vec<Complex64> = (0..q)
                .map(|j| {
                    let v = sphere_ft_closed_with(ctx, g1, j, &x);
                    if t == 0 {
                        v - delta
                    } else {
                        v
                    }
                })
                .collect();
            by_norm.push(row);
        }
        let at_origin = by_norm[0].iter().map(|v| v + delta).collect();
        Ok(Self {
            q,
            d,
            by_norm,
            at_origin,
        })
    }

    pub fn row_for_norm(&self, t: u32) -> &[Complex64] {
        &self.by_norm[t as usize]
    }

    pub fn origin_row(&self) -> &[Complex64] {
        &self.at_origin
    }

    /// `Ŝ_j(x)` for the given `x`, where `norm = ‖x‖`.
    pub fn eval(&self, j: u32, x: &[u32], norm: u32) -> Complex64 {
        debug_assert_eq!(x.len(), self.d);
        if is_zero_vector(x) {
            self.at_origin[j as usize]
        } else {
            self.by_norm[norm as usize][j as usize]
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

/// Outcome of an exhaustive naive-vs-closed comparison for one `(q, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormCheck {
    pub q: u32,
    pub d: usize,
    pub max_error: f64,
    pub evaluations: usize,
    /// First `(j, x)` whose error reached the tolerance, in `(j, lex x)` order.
    pub first_mismatch: Option<(u32, Vec<u32>)>,
}

impl ClosedFormCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

pub const LEMMA_TOL: f64 = 1e-6;

/// Compares [`sphere_ft_naive`] against `closed(ctx, j, x)` at every radius
/// `j` and every `x ∈ F_q^d`.
pub fn verify_closed_form_with<F>(ctx: &FieldCtx, closed: F) -> Result<ClosedFormCheck>
where
    F: Fn(&FieldCtx, u32, &[u32]) -> Complex64 + Sync,
{
    let total = ctx.check_budget()?;
    let q = ctx.q();
    let spheres = (0..q)
        .map(|j| enumerate_sphere(ctx, j))
        .collect::<Result<Vec<_>>>()?;

    let per_radius = |sphere: &Sphere| -> (f64, Option<Vec<u32>>) {
        let mut x = vec![0u32; ctx.d()];
        let mut worst = 0.0f64;
        let mut first = None;
        for idx in 0..total {
            ctx.decode_into(idx, &mut x);
            let naive = sphere_ft_naive(sphere, &x).expect("dimension checked");
            let err = (naive - closed(ctx, sphere.radius(), &x)).norm();
            if (err.is_nan() || err >= LEMMA_TOL) && first.is_none() {
                first = Some(x.clone());
            }
            if err.is_nan() {
                worst = f64::INFINITY;
            } else {
                worst = worst.max(err);
            }
        }
        (worst, first)
    };

    #[cfg(feature = "parallel")]
    let results: Vec<_> = spheres.par_iter().map(per_radius).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = spheres.iter().map(per_radius).collect();

    let max_error = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let first_mismatch = results
        .into_iter()
        .enumerate()
        .find_map(|(j, (_, first))| first.map(|x| (j as u32, x)));
    Ok(ClosedFormCheck {
        q,
        d: ctx.d(),
        max_error,
        evaluations: total * q as usize,
        first_mismatch,
    })
}

pub fn verify_closed_form(ctx: &FieldCtx) -> Result<ClosedFormCheck> {
    let g1 = expsums::gauss(ctx, 1)?.value;
    verify_closed_form_with(ctx, move |c, j, x| sphere_ft_closed_with(c, g1, j, x))
}

/// Exponent `e` in the decay bound `|Ŝ_j(x)| ≲ q^e` for `x ≠ 0`:
/// `(d−1)/2`, except `d/2` for the zero sphere in even dimension.
pub fn decay_exponent(d: usize, j: u32) -> f64 {
    if d.is_multiple_of(2) && j == 0 {
        d as f64 / 2.0
    } else {
        (d as f64 - 1.0) / 2.0
    }
}
