//! Varieties `V` in the dual space, carrying the normalized surface measure
//! `dσ = |V|^{-1}·count`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::points::{self, PointSet};
use crate::poly::{parse_poly, PolyExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyKind {
    /// `x_1² + … + x_{d−1}² = x_d`
    Paraboloid,
    /// `x_1 + … + x_d = 0`
    Plane,
    /// `x_1² + … + x_d² = t`
    SphereT(u32),
    /// Zero set of a single polynomial.
    Custom(PolyExpr),
    /// An explicit list of points.
    Explicit,
}

impl VarietyKind {
    /// Parses `paraboloid`, `plane`, `sphere:<t>` or `poly:<expr>`.
    pub fn parse(src: &str, d: usize) -> Result<Self> {
        let src = src.trim();
        match src {
            "paraboloid" => return Ok(Self::Paraboloid),
            "plane" => return Ok(Self::Plane),
            _ => {}
        }
        if let Some(t) = src.strip_prefix("sphere:") {
            let t = t.trim().parse::<u32>().map_err(|_| Error::Syntax {
                pos: 7,
                msg: format!("bad sphere radius {t:?}"),
            })?;
            return Ok(Self::SphereT(t));
        }
        if let Some(expr) = src.strip_prefix("poly:") {
            return Ok(Self::Custom(parse_poly(expr, d)?));
        }
        Err(Error::Syntax {
            pos: 0,
            msg: format!("unknown variety {src:?}; expected paraboloid, plane, sphere:<t> or poly:<expr>"),
        })
    }
}

impl fmt::Display for VarietyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyKind::Paraboloid => f.write_str("paraboloid"),
            VarietyKind::Plane => f.write_str("plane"),
            VarietyKind::SphereT(t) => write!(f, "sphere:{t}"),
            VarietyKind::Custom(e) => write!(f, "poly:{e}"),
            VarietyKind::Explicit => f.write_str("points"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Variety {
    ctx: FieldCtx,
    kind: VarietyKind,
    points: PointSet,
}

impl Variety {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn kind(&self) -> &VarietyKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.points.contains(&vec![0; self.ctx.d()])
    }

    /// `|V|` within a factor 4 of `q^{d−1}`.
    pub fn size_ok(&self) -> bool {
        let n = self.cardinality() as f64;
        let target = f64::from(self.ctx.q()).powi(self.ctx.d() as i32 - 1);
        n >= target / 4.0 && n <= 4.0 * target
    }

    /// Builds a variety from explicit points; duplicates are dropped.
    pub fn from_points(ctx: &FieldCtx, pts: &[Vec<u32>]) -> Result<Self> {
        let mut sorted: Vec<Vec<u32>> = pts
            .iter()
            .map(|p| {
                if p.len() != ctx.d() {
                    return Err(Error::DimensionMismatch {
                        expected: ctx.d(),
                        got: p.len(),
                    });
                }
                Ok(p.iter().map(|c| c % ctx.q()).collect())
            })
            .collect::<Result<_>>()?;
        sorted.sort();
        sorted.dedup();
        Ok(Self {
            ctx: ctx.clone(),
            kind: VarietyKind::Explicit,
            points: PointSet::from_coords(ctx.d(), sorted.concat()),
        })
    }
}

/// Enumerates the zero set of `kind` over the whole dual grid.
pub fn build_variety(ctx: &FieldCtx, kind: VarietyKind) -> Result<Variety> {
    let d = ctx.d();
    let points = match &kind {
        VarietyKind::Paraboloid => points::scan(ctx, |x| {
            ctx.norm_unchecked(&x[..d - 1]) == x[d - 1]
        })?,
        VarietyKind::Plane => points::scan(ctx, |x| {
            x.iter().map(|&c| u64::from(c)).sum::<u64>() % u64::from(ctx.q()) == 0
        })?,
        VarietyKind::SphereT(t) => {
            let t = t % ctx.q();
            points::scan(ctx, |x| ctx.norm_unchecked(x) == t)?
        }
        VarietyKind::Custom(expr) => {
            let top = expr.max_var();
            if top > d {
                return Err(Error::UnknownVariable { index: top, dim: d });
            }
            points::scan(ctx, |x| expr.eval(ctx, x) == 0)?
        }
        VarietyKind::Explicit => {
            return Err(Error::Syntax {
                pos: 0,
                msg: "explicit varieties are built with Variety::from_points".into(),
            })
        }
    };
    Ok(Variety {
        ctx: ctx.clone(),
        kind,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Intersection {
    pub count: usize,
    /// `q^{(d²−d−1)/d}`
    pub threshold: f64,
    pub passes: bool,
}

impl Intersection {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.threshold
    }
}

pub fn intersection_threshold(q: u32, d: usize) -> f64 {
    let d = d as f64;
    f64::from(q).powf((d * d - d - 1.0) / d)
}

/// `|V ∩ S_0|` against the threshold `q^{(d²−d−1)/d}` at constant 1.
pub fn zero_sphere_intersection(v: &Variety) -> Intersection {
    let count = v
        .points
        .iter()
        .filter(|x| v.ctx.norm_unchecked(x) == 0)
        .count();
    let threshold = intersection_threshold(v.ctx.q(), v.ctx.d());
    Intersection {
        count,
        threshold,
        passes: count as f64 <= threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheres::enumerate_sphere;

    fn ctx(q: u64, d: usize) -> FieldCtx {
        FieldCtx::new(q, d).unwrap()
    }

    #[test]
    fn builtin_sizes() {
        let p = build_variety(&ctx(3, 3), VarietyKind::Paraboloid).unwrap();
        assert_eq!(p.cardinality(), 9);
        assert!(p.size_ok());
        assert!(p.contains_origin());
        assert_eq!(build_variety(&ctx(5, 3), VarietyKind::Plane).unwrap().cardinality(), 25);
        let c = ctx(3, 3);
        assert_eq!(
            build_variety(&c, VarietyKind::SphereT(1)).unwrap().cardinality(),
            enumerate_sphere(&c, 1).unwrap().cardinality()
        );
    }

    #[test]
    fn builtins_have_q_to_d_minus_one_points() {
        for q in [3u64, 5, 7, 11] {
            for d in 2..=4 {
                let c = ctx(q, d);
                let expect = (q as usize).pow(d as u32 - 1);
                for kind in [VarietyKind::Paraboloid, VarietyKind::Plane] {
                    let v = build_variety(&c, kind).unwrap();
                    assert_eq!(v.cardinality(), expect);
                    assert!(v.points().iter().all(|x| match v.kind() {
                        VarietyKind::Paraboloid => c.norm_unchecked(&x[..d - 1]) == x[d - 1],
                        _ => x.iter().sum::<u32>() % q as u32 == 0,
                    }));
                }
            }
        }
    }

    #[test]
    fn custom_matches_builtin() {
        let c = ctx(5, 3);
        let kind = VarietyKind::parse("poly:x1^2 + x2^2 = x3", 3).unwrap();
        let custom = build_variety(&c, kind).unwrap();
        let builtin = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        assert_eq!(custom.points(), builtin.points());
        assert_eq!(custom.label(), "poly:x1^2+x2^2-x3");
    }

    #[test]
    fn empty_and_oversized_custom() {
        let c = ctx(3, 2);
        let v = build_variety(&c, VarietyKind::parse("poly:x1^2 + 1", 2).unwrap()).unwrap();
        assert!(v.is_empty());
        assert!(!v.size_ok());
        let c5 = ctx(5, 2);
        let all = build_variety(&c5, VarietyKind::parse("poly:0", 2).unwrap()).unwrap();
        assert_eq!(all.cardinality(), 25);
        assert!(!all.size_ok());
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(VarietyKind::parse("sphere:2", 3).unwrap(), VarietyKind::SphereT(2));
        assert!(VarietyKind::parse("cone", 3).is_err());
        assert!(matches!(
            VarietyKind::parse("poly:x5", 3),
            Err(Error::UnknownVariable { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let c = ctx(3, 3);
        let plane = build_variety(&c, VarietyKind::Plane).unwrap();
        let r = zero_sphere_intersection(&plane);
        assert_eq!(r.count, 3);
        assert!((r.threshold - 3f64.powf(5.0 / 3.0)).abs() < 1e-12);
        assert!(r.passes);

        let par = build_variety(&c, VarietyKind::Paraboloid).unwrap();
        assert_eq!(zero_sphere_intersection(&par).count, 5);

        let s0 = build_variety(&c, VarietyKind::SphereT(0)).unwrap();
        let r = zero_sphere_intersection(&s0);
        assert_eq!(r.count, 9);
        assert!(!r.passes);
    }

    #[test]
    fn explicit_points_are_sorted_and_deduplicated() {
        let c = ctx(5, 2);
        let v = Variety::from_points(&c, &[vec![3, 1], vec![1, 4], vec![3, 1], vec![6, 0]]).unwrap();
        let pts: Vec<&[u32]> = v.points().iter().collect();
        assert_eq!(pts, vec![&[1, 0][..], &[1, 4], &[3, 1]]);
        assert!(Variety::from_points(&c, &[vec![1, 2, 3]]).is_err());
    }
}
