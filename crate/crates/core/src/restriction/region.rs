//! Exact exponent-region tests in the `(1/p, 1/r)` square.

use num_traits::{One, Zero};

use super::exponent::{ExponentPair, Rational};
use crate::error::{Error, Result};

type Point = (Rational, Rational);

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn cross(o: Point, a: Point, b: Point) -> Rational {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= Rational::zero() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= Rational::zero() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Closed convex hull membership by half-plane tests.
pub fn hull_contains(vertices: &[Point], p: Point) -> bool {
    let hull = convex_hull(vertices);
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            cross(hull[0], hull[1], p).is_zero()
                && p.0 >= hull[0].0.min(hull[1].0)
                && p.0 <= hull[0].0.max(hull[1].0)
                && p.1 >= hull[0].1.min(hull[1].1)
                && p.1 <= hull[0].1.max(hull[1].1)
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= Rational::zero()),
    }
}

/// Vertices of the necessary-condition region:
/// `(1,0), (1,1), ((d+1)/2d, 1), ((d+1)/2d, 1/2)`.
pub fn conjecture_vertices(d: usize) -> Vec<Point> {
    let d = d as i64;
    let edge = r(d + 1, 2 * d);
    vec![
        (Rational::one(), Rational::zero()),
        (Rational::one(), Rational::one()),
        (edge, Rational::one()),
        (edge, r(1, 2)),
    ]
}

pub fn region_conjecture(d: usize, point: Point) -> bool {
    hull_contains(&conjecture_vertices(d), point)
}

/// Vertices of the best known paraboloid region, with the separate
/// three-dimensional hull for `d = 3`.
pub fn lewko_vertices(d: usize) -> Result<Vec<Point>> {
    if d < 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let one = Rational::one();
    let zero = Rational::zero();
    if d == 3 {
        return Ok(vec![
            (one, zero),
            (one, one),
            (r(13, 18), one),
            (r(13, 18), r(1, 2)),
            (r(3, 4), r(3, 8)),
        ]);
    }
    let d = d as i64;
    let edge = r(d * d + 2 * d - 2, 2 * d * d);
    Ok(vec![
        (one, zero),
        (one, one),
        (edge, one),
        (edge, r(1, 2)),
        (r(3, 4), r(d + 2, 4 * d)),
    ])
}

pub fn region_lewko(d: usize, point: Point) -> Result<bool> {
    Ok(hull_contains(&lewko_vertices(d)?, point))
}

/// `r·d·(1 − 1/p) − d + 1` and whether it is `≤ 0`.
pub fn suf2_check(d: usize, pair: &ExponentPair) -> Result<(Rational, bool)> {
    let r_val = match pair.r {
        super::exponent::Exponent::Finite(v) => v,
        super::exponent::Exponent::Infinite => {
            return Err(Error::BadExponent("the sufficiency exponent test needs finite r".into()))
        }
    };
    if !pair.p.is_finite() {
        return Err(Error::BadExponent("the sufficiency exponent test needs finite p".into()));
    }
    let d = Rational::from(d as i64);
    let value = r_val * d * (Rational::one() - pair.p.reciprocal()) - d + Rational::one();
    Ok((value, value <= Rational::zero()))
}

/// `d/p + (d−1)/r − d`; nonnegative on the side of the necessary line.
pub fn critical_line_excess(d: usize, pair: &ExponentPair) -> Rational {
    let (ip, ir) = pair.point();
    let d = Rational::from(d as i64);
    d * ip + (d - Rational::one()) * ir - d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: &str, rr: &str) -> ExponentPair {
        ExponentPair::parse(p, rr).unwrap()
    }

    #[test]
    fn conjecture_examples() {
        assert!(region_conjecture(3, (r(2, 3), r(1, 2))));
        assert!(!region_conjecture(3, (r(1, 2), r(1, 2))));
        assert!(region_conjecture(3, (r(1, 1), r(1, 1))));
        assert!(region_conjecture(3, (r(3, 4), r(3, 4))));
        // below the line d/p + (d−1)/r = d
        assert!(!region_conjecture(3, (r(2, 3), r(1, 3))));
        assert!(region_conjecture(3, (r(1, 1), r(0, 1))));
    }

    #[test]
    fn lewko_examples() {
        assert!(region_lewko(4, (r(11, 16), r(1, 1))).unwrap());
        assert!(region_lewko(3, (r(13, 18), r(1, 2))).unwrap());
        for d in 3..8 {
            assert!(!region_lewko(d, (r(0, 1), r(0, 1))).unwrap());
        }
        assert!(region_lewko(3, (r(3, 4), r(3, 8))).unwrap());
        assert!(!region_lewko(3, (r(2, 3), r(1, 2))).unwrap());
        assert_eq!(region_lewko(2, (r(1, 1), r(1, 1))), Err(Error::UnsupportedDimension(2)));
    }

    #[test]
    fn lewko_region_sits_inside_conjecture() {
        for d in 3..9 {
            for v in lewko_vertices(d).unwrap() {
                assert!(region_conjecture(d, v), "d={d} {v:?}");
            }
        }
    }

    #[test]
    fn suf2_examples() {
        let (v, ok) = suf2_check(3, &pair("3/2", "2")).unwrap();
        assert!(v.is_zero() && ok);
        let (v, ok) = suf2_check(4, &pair("3/2", "9/4")).unwrap();
        assert!(v.is_zero() && ok);
        let (v, ok) = suf2_check(3, &pair("2", "2")).unwrap();
        assert_eq!(v, Rational::one());
        assert!(!ok);
        assert!(suf2_check(3, &pair("2", "inf")).is_err());
    }

    #[test]
    fn theorem_exponents_satisfy_suf2() {
        for d in (3..12).step_by(2) {
            let p = Rational::new(2 * d, d + 1);
            let pr = ExponentPair::new(super::super::Exponent::Finite(p), "2".parse().unwrap());
            assert!(suf2_check(d as usize, &pr).unwrap().0.is_zero());
        }
        for d in (4..12).step_by(2) {
            let p = Rational::new(2 * d - 2, d);
            let rr = Rational::new(2 * (d - 1) * (d - 1), d * d - 2 * d);
            let pr = ExponentPair::new(
                super::super::Exponent::Finite(p),
                super::super::Exponent::Finite(rr),
            );
            assert!(suf2_check(d as usize, &pr).unwrap().0.is_zero());
        }
    }

    #[test]
    fn hull_degenerate_cases() {
        let a = (r(0, 1), r(0, 1));
        let b = (r(1, 1), r(1, 1));
        assert!(hull_contains(&[a, b], (r(1, 2), r(1, 2))));
        assert!(!hull_contains(&[a, b], (r(1, 2), r(1, 3))));
        assert!(hull_contains(&[a], a));
        assert!(!hull_contains(&[], a));
    }
}
