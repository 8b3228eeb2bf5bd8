//! Fourier transform on `F_q^d`.
//!
//! Functions on the primal side carry the counting measure `dm`, functions
//! on the dual side the normalized measure `dx = q^{-d}·count`. Under these
//! conventions
//!
//! ```text
//! f̂(x) = Σ_m χ(−m·x) f(m),        f(m) = q^{-d} Σ_x χ(m·x) f̂(x).
//! ```
//!
//! Grid values are stored lexicographically, `m ↦ Σ m_i q^{d−i}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    PrimalCounting,
    DualNormalized,
}

#[derive(Clone, Debug)]
pub struct GridFunction {
    ctx: FieldCtx,
    values: Vec<Complex64>,
    side: Side,
}

impl GridFunction {
    pub fn new(ctx: &FieldCtx, values: Vec<Complex64>, side: Side) -> Result<Self> {
        let n = ctx.check_budget()?;
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        Ok(Self {
            ctx: ctx.clone(),
            values,
            side,
        })
    }

    pub fn zeros(ctx: &FieldCtx, side: Side) -> Result<Self> {
        let n = ctx.check_budget()?;
        Self::new(ctx, vec![Complex64::new(0.0, 0.0); n], side)
    }

    pub fn from_fn<F>(ctx: &FieldCtx, side: Side, mut f: F) -> Result<Self>
    where
        F: FnMut(&[u32]) -> Complex64,
    {
        let n = ctx.check_budget()?;
        let mut m = vec![0u32; ctx.d()];
        let values = (0..n)
            .map(|idx| {
                ctx.decode_into(idx, &mut m);
                f(&m)
            })
            .collect();
        Self::new(ctx, values, side)
    }

    /// Indicator function of a point set.
    pub fn indicator<'a, I>(ctx: &FieldCtx, side: Side, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut f = Self::zeros(ctx, side)?;
        for p in points {
            let idx = ctx.encode(p);
            f.values[idx] = Complex64::new(1.0, 0.0);
        }
        Ok(f)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, m: &[u32]) -> Complex64 {
        self.values[self.ctx.encode(m)]
    }

    /// `L^p` norm under the measure attached to this side; `p = ∞` gives the
    /// max norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let sum: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        let weight = match self.side {
            Side::PrimalCounting => 1.0,
            Side::DualNormalized => 1.0 / self.values.len() as f64,
        };
        (weight * sum).powf(1.0 / p)
    }

    pub fn linear_combination(
        alpha: Complex64,
        f: &GridFunction,
        beta: Complex64,
        g: &GridFunction,
    ) -> Result<GridFunction> {
        if f.side != g.side {
            return Err(Error::SideMismatch {
                expected: f.side,
                got: g.side,
            });
        }
        if f.values.len() != g.values.len() {
            return Err(Error::DimensionMismatch {
                expected: f.values.len(),
                got: g.values.len(),
            });
        }
        let values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(GridFunction {
            ctx: f.ctx.clone(),
            values,
            side: f.side,
        })
    }
}

fn expect_side(f: &GridFunction, side: Side) -> Result<()> {
    if f.side != side {
        return Err(Error::SideMismatch {
            expected: side,
            got: f.side,
        });
    }
    Ok(())
}

/// Direct `O(q^{2d})` evaluation of `f̂(x) = Σ_m χ(−m·x) f(m)`.
pub fn ft_naive(f: &GridFunction) -> Result<GridFunction> {
    expect_side(f, Side::PrimalCounting)?;
    let ctx = &f.ctx;
    let n = f.values.len();
    let d = ctx.d();
    let chi = ctx.chars().chi_values();

    let at = |x_idx: usize| -> Complex64 {
        let mut x = vec![0u32; d];
        let mut m = vec![0u32; d];
        ctx.decode_into(x_idx, &mut x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m_idx, value) in f.values.iter().enumerate() {
            ctx.decode_into(m_idx, &mut m);
            acc += chi[ctx.neg(ctx.dot_unchecked(&m, &x)) as usize] * value;
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let values: Vec<Complex64> = (0..n).into_par_iter().map(at).collect();
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Complex64> = (0..n).map(at).collect();

    Ok(GridFunction {
        ctx: ctx.clone(),
        values,
        side: Side::DualNormalized,
    })
}

/// Applies the size-`q` matrix `W[u][v] = χ(sign·u·v)` along every axis.
fn axis_transform(ctx: &FieldCtx, input: &[Complex64], sign_negative: bool) -> Vec<Complex64> {
    let q = ctx.q() as usize;
    let d = ctx.d();
    let chi = ctx.chars().chi_values();
    let kernel: Vec<Complex64> = (0..q * q)
        .map(|k| {
            let (u, v) = ((k / q) as u32, (k % q) as u32);
            let phase = ctx.mul(u, v);
            chi[if sign_negative { ctx.neg(phase) } else { phase } as usize]
        })
        .collect();

    let mut src = input.to_vec();
    let mut dst = vec![Complex64::new(0.0, 0.0); src.len()];
    let mut stride = src.len() / q;
    for _ in 0..d {
        let block = q * stride;
        let apply = |(out, inp): (&mut [Complex64], &[Complex64])| {
            for inner in 0..stride {
                for u in 0..q {
                    let row = &kernel[u * q..(u + 1) * q];
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (v, w) in row.iter().enumerate() {
                        acc += w * inp[v * stride + inner];
                    }
                    out[u * stride + inner] = acc;
                }
            }
        };
        #[cfg(feature = "parallel")]
        dst.par_chunks_mut(block)
            .zip(src.par_chunks(block))
            .for_each(apply);
        #[cfg(not(feature = "parallel"))]
        dst.chunks_mut(block).zip(src.chunks(block)).for_each(apply);
        std::mem::swap(&mut src, &mut dst);
        stride /= q;
    }
    src
}

/// Same transform as [`ft_naive`], one axis at a time: `O(d·q^{d+1})`.
pub fn ft_fast(f: &GridFunction) -> Result<GridFunction> {
    expect_side(f, Side::PrimalCounting)?;
    Ok(GridFunction {
        ctx: f.ctx.clone(),
        values: axis_transform(&f.ctx, &f.values, true),
        side: Side::DualNormalized,
    })
}

/// Inverse transform `f(m) = q^{-d} Σ_x χ(m·x) g(x)`.
pub fn ift(g: &GridFunction) -> Result<GridFunction> {
    expect_side(g, Side::DualNormalized)?;
    let scale = 1.0 / g.values.len() as f64;
    let values = axis_transform(&g.ctx, &g.values, false)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    Ok(GridFunction {
        ctx: g.ctx.clone(),
        values,
        side: Side::PrimalCounting,
    })
}

/// Largest entrywise deviation relative to the larger sup norm.
pub fn relative_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a
        .iter()
        .chain(b)
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Primal function with entries uniform in the square `[-1,1) + [-1,1)i`.
pub fn random_grid(ctx: &FieldCtx, seed: u64) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::from_fn(ctx, Side::PrimalCounting, |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Worst relative errors seen by [`selftest`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfTest {
    pub trials: usize,
    pub fast_vs_naive: f64,
    pub plancherel: f64,
    pub round_trip: f64,
}

impl SelfTest {
    pub fn passed(&self, tol: f64) -> bool {
        self.fast_vs_naive < tol && self.plancherel < tol && self.round_trip < tol
    }
}

/// Checks `ft_fast` against `ft_naive`, Plancherel and `ift ∘ ft = id` on
/// `trials` random inputs seeded `seed, seed+1, …`.
pub fn selftest(ctx: &FieldCtx, trials: usize, seed: u64) -> Result<SelfTest> {
    let mut out = SelfTest {
        trials,
        fast_vs_naive: 0.0,
        plancherel: 0.0,
        round_trip: 0.0,
    };
    for t in 0..trials as u64 {
        let f = random_grid(ctx, seed.wrapping_add(t))?;
        let fast = ft_fast(&f)?;
        let naive = ft_naive(&f)?;
        out.fast_vs_naive = out.fast_vs_naive.max(relative_deviation(fast.values(), naive.values()));
        let (lhs, rhs) = (fast.lp_norm(2.0), f.lp_norm(2.0));
        out.plancherel = out.plancherel.max((lhs - rhs).abs() / rhs);
        let back = ift(&fast)?;
        out.round_trip = out.round_trip.max(relative_deviation(f.values(), back.values()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres::enumerate_sphere;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn random(ctx: &FieldCtx, seed: u64) -> GridFunction {
        random_grid(ctx, seed).unwrap()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let ctx = FieldCtx::new(5, 2).unwrap();
        let delta = GridFunction::indicator(&ctx, Side::PrimalCounting, [&[0u32, 0][..]]).unwrap();
        for fhat in [ft_naive(&delta).unwrap(), ft_fast(&delta).unwrap()] {
            assert_eq!(fhat.side(), Side::DualNormalized);
            assert!(fhat.values().iter().all(|v| (v - one()).norm() < 1e-12));
        }
    }

    #[test]
    fn constant_transforms_to_scaled_delta() {
        let ctx = FieldCtx::new(3, 3).unwrap();
        let f = GridFunction::from_fn(&ctx, Side::PrimalCounting, |_| one()).unwrap();
        let fhat = ft_naive(&f).unwrap();
        assert!((fhat.values()[0] - Complex64::new(27.0, 0.0)).norm() < 1e-9);
        assert!(fhat.values()[1..].iter().all(|v| v.norm() < 1e-9));
    }

    #[test]
    fn sphere_indicator_matches_sphere_transform() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let s1 = enumerate_sphere(&ctx, 1).unwrap();
        let f = GridFunction::indicator(&ctx, Side::PrimalCounting, s1.points().iter()).unwrap();
        let fhat = ft_naive(&f).unwrap();
        assert!((fhat.at(&[1, 1]) - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn side_is_enforced() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let g = GridFunction::zeros(&ctx, Side::DualNormalized).unwrap();
        assert!(matches!(ft_naive(&g), Err(Error::SideMismatch { .. })));
        assert!(matches!(ft_fast(&g), Err(Error::SideMismatch { .. })));
        let f = GridFunction::zeros(&ctx, Side::PrimalCounting).unwrap();
        assert!(matches!(ift(&f), Err(Error::SideMismatch { .. })));
    }

    #[test]
    fn inverse_of_constant_is_delta() {
        let ctx = FieldCtx::new(5, 2).unwrap();
        let g = GridFunction::from_fn(&ctx, Side::DualNormalized, |_| one()).unwrap();
        let f = ift(&g).unwrap();
        assert!((f.values()[0] - one()).norm() < 1e-12);
        assert!(f.values()[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn round_trip_on_sphere_indicator() {
        let ctx = FieldCtx::new(5, 2).unwrap();
        for j in 0..5 {
            let s = enumerate_sphere(&ctx, j).unwrap();
            let f = GridFunction::indicator(&ctx, Side::PrimalCounting, s.points().iter()).unwrap();
            let back = ift(&ft_naive(&f).unwrap()).unwrap();
            assert!(relative_deviation(f.values(), back.values()) < 1e-9);
        }
    }

    #[test]
    fn fast_matches_naive_q3_d3() {
        let ctx = FieldCtx::new(3, 3).unwrap();
        for seed in 0..10 {
            let f = random(&ctx, seed);
            let a = ft_naive(&f).unwrap();
            let b = ft_fast(&f).unwrap();
            assert!(relative_deviation(a.values(), b.values()) < 1e-9);
        }
    }

    #[test]
    fn linearity() {
        let ctx = FieldCtx::new(5, 2).unwrap();
        let (f, g) = (random(&ctx, 1), random(&ctx, 2));
        let (alpha, beta) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let combo = GridFunction::linear_combination(alpha, &f, beta, &g).unwrap();
        let lhs = ft_fast(&combo).unwrap();
        let rhs = GridFunction::linear_combination(
            alpha,
            &ft_fast(&f).unwrap(),
            beta,
            &ft_fast(&g).unwrap(),
        )
        .unwrap();
        assert!(relative_deviation(lhs.values(), rhs.values()) < 1e-12);
    }

    #[test]
    fn plancherel_small() {
        let ctx = FieldCtx::new(7, 2).unwrap();
        let f = random(&ctx, 9);
        let fhat = ft_fast(&f).unwrap();
        let lhs = fhat.lp_norm(2.0);
        let rhs = f.lp_norm(2.0);
        assert!((lhs - rhs).abs() / rhs < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn ift_inverts_fast_transform(
                q in prop::sample::select(vec![3u64, 5, 7]),
                d in 2usize..4,
                seed in any::<u64>(),
            ) {
                let ctx = FieldCtx::new(q, d).unwrap();
                let f = random(&ctx, seed);
                let back = ift(&ft_fast(&f).unwrap()).unwrap();
                prop_assert!(relative_deviation(f.values(), back.values()) < 1e-9);
            }
        }
    }
}
