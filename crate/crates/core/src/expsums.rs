//! Gauss, Kloosterman and Salié sums by direct summation over `F_q^*`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    Gauss,
    Kloosterman,
    Salie,
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::Gauss => "gauss",
            SumKind::Kloosterman => "kloosterman",
            SumKind::Salie => "salie",
        })
    }
}

/// A computed exponential sum together with what produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumValue {
    pub value: Complex64,
    pub kind: SumKind,
    pub a: u32,
    pub b: u32,
}

impl SumValue {
    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    /// The classical magnitude bound for this sum: `√q` (attained) for
    /// Gauss sums, `2√q` for Salié sums and for Kloosterman sums with
    /// `ab ≠ 0`, and the trivial `q` for degenerate Kloosterman sums.
    pub fn bound(&self) -> Bound {
        match self.kind {
            SumKind::Gauss => Bound::EqualsSqrtQ,
            SumKind::Salie => Bound::TwoSqrtQ,
            SumKind::Kloosterman if self.a != 0 && self.b != 0 => Bound::TwoSqrtQ,
            SumKind::Kloosterman => Bound::Q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    EqualsSqrtQ,
    TwoSqrtQ,
    Q,
}

impl Bound {
    pub fn value(self, q: u32) -> f64 {
        let q = f64::from(q);
        match self {
            Bound::EqualsSqrtQ => q.sqrt(),
            Bound::TwoSqrtQ => 2.0 * q.sqrt(),
            Bound::Q => q,
        }
    }

    /// Whether `magnitude` satisfies the bound within `tol`.
    pub fn holds(self, q: u32, magnitude: f64, tol: f64) -> bool {
        match self {
            Bound::EqualsSqrtQ => (magnitude - self.value(q)).abs() < tol,
            _ => magnitude <= self.value(q) + tol,
        }
    }

    pub fn describe(self, q: u32) -> String {
        match self {
            Bound::EqualsSqrtQ => format!("= √{q}"),
            Bound::TwoSqrtQ => format!("≤ 2√{q}"),
            Bound::Q => format!("≤ {q}"),
        }
    }
}

/// `G_a = Σ_{s≠0} η(s) χ(as)`.
pub fn gauss(ctx: &FieldCtx, a: u32) -> Result<SumValue> {
    let a = a % ctx.q();
    if a == 0 {
        return Err(Error::ZeroParameter("the Gauss sum"));
    }
    let value = (1..ctx.q())
        .map(|s| ctx.chi(ctx.mul(a, s)) * f64::from(ctx.eta(s)))
        .sum();
    Ok(SumValue {
        value,
        kind: SumKind::Gauss,
        a,
        b: 0,
    })
}

fn twisted(ctx: &FieldCtx, a: u32, b: u32, quadratic: bool) -> Complex64 {
    let (a, b) = (a % ctx.q(), b % ctx.q());
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 1..ctx.q() {
        // s is nonzero so the inverse exists
        let s_inv = ctx.inv(s).unwrap_or(0);
        let phase = ctx.add(ctx.mul(a, s), ctx.mul(b, s_inv));
        let term = ctx.chi(phase);
        if quadratic {
            acc += term * f64::from(ctx.eta(s));
        } else {
            acc += term;
        }
    }
    acc
}

/// `K(a,b) = Σ_{s≠0} χ(as + b s⁻¹)`.
pub fn kloosterman(ctx: &FieldCtx, a: u32, b: u32) -> SumValue {
    SumValue {
        value: twisted(ctx, a, b, false),
        kind: SumKind::Kloosterman,
        a: a % ctx.q(),
        b: b % ctx.q(),
    }
}

/// `S(a,b) = Σ_{s≠0} η(s) χ(as + b s⁻¹)`.
pub fn salie(ctx: &FieldCtx, a: u32, b: u32) -> SumValue {
    SumValue {
        value: twisted(ctx, a, b, true),
        kind: SumKind::Salie,
        a: a % ctx.q(),
        b: b % ctx.q(),
    }
}

pub fn compute(ctx: &FieldCtx, kind: SumKind, a: u32, b: u32) -> Result<SumValue> {
    match kind {
        SumKind::Gauss => gauss(ctx, a),
        SumKind::Kloosterman => Ok(kloosterman(ctx, a, b)),
        SumKind::Salie => Ok(salie(ctx, a, b)),
    }
}
