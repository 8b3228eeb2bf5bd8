use ffharm::fourier::ft_fast;
use ffharm::restriction::{
    lift_radial, lp_norm_counting, lr_norm_sigma, radial_matrix, rnorm_exact_22, suf1_diagnostic,
    witness_lower_bound, zero_sphere_term_bound, Exponent, ExponentPair, RadialOperator, RadialProfile,
};
use ffharm::spheres::{enumerate_sphere, sphere_ft_naive};
use ffharm::varieties::{build_variety, zero_sphere_intersection, Variety, VarietyKind};
use ffharm::FieldCtx;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(q: u64, d: usize) -> FieldCtx {
    FieldCtx::new(q, d).unwrap()
}

/// Largest singular value of `|V|^{-1/2} Ŝ_j(x) |S_j|^{-1/2}` over all of `V`,
/// with every entry summed directly over the sphere.
fn dense_svd_norm(v: &Variety) -> f64 {
    let c = v.ctx();
    let q = c.q() as usize;
    let spheres: Vec<_> = (0..q as u32).map(|j| enumerate_sphere(c, j).unwrap()).collect();
    let scale = (v.cardinality() as f64).sqrt();
    let rows: Vec<&[u32]> = v.points().iter().collect();
    let m = DMatrix::from_fn(rows.len(), q, |i, j| {
        let s = &spheres[j];
        sphere_ft_naive(s, rows[i]).unwrap() / (scale * (s.cardinality() as f64).sqrt())
    });
    m.svd(false, false).singular_values.max()
}

#[test]
fn power_iteration_matches_dense_svd() {
    let cases = [
        (3, 3, VarietyKind::Paraboloid),
        (5, 3, VarietyKind::Paraboloid),
        (5, 3, VarietyKind::Plane),
        (5, 2, VarietyKind::SphereT(2)),
        (7, 2, VarietyKind::Plane),
        (3, 4, VarietyKind::Paraboloid),
    ];
    for (q, d, kind) in cases {
        let v = build_variety(&ctx(q, d), kind.clone()).unwrap();
        let exact = rnorm_exact_22(&v).unwrap();
        let svd = dense_svd_norm(&v);
        assert!((exact - svd).abs() < 1e-8, "q={q} d={d} {kind}: {exact} vs {svd}");
    }
}

#[test]
fn single_point_variety_is_cauchy_schwarz() {
    let c = ctx(5, 3);
    let x0 = [1u32, 2, 4];
    let v = Variety::from_points(&c, &[x0.to_vec()]).unwrap();
    let expect: f64 = (0..5)
        .map(|j| {
            let s = enumerate_sphere(&c, j).unwrap();
            sphere_ft_naive(&s, &x0).unwrap().norm_sqr() / s.cardinality() as f64
        })
        .sum::<f64>()
        .sqrt();
    assert!((rnorm_exact_22(&v).unwrap() - expect).abs() < 1e-9);
}

#[test]
fn radial_matrix_entries() {
    let c = ctx(3, 2);
    let v = Variety::from_points(&c, &[vec![0, 0], vec![1, 1]]).unwrap();
    let a = radial_matrix(&v).unwrap();
    assert!((a.entry(1, 1) - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
    for j in 0..3 {
        let size = enumerate_sphere(&c, j).unwrap().cardinality() as f64;
        assert!((a.entry(0, j as usize) - Complex64::new(size, 0.0)).norm() < 1e-9);
    }
}

/// The compressed operator against lifting the profile to the grid, taking
/// the full transform and restricting it to `V`.
#[test]
fn operator_ratio_matches_full_grid_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs = [("1", "2"), ("3/2", "2"), ("2", "4"), ("inf", "3"), ("3/2", "inf")];
    for (q, d, kind) in [(5, 3, VarietyKind::Paraboloid), (3, 4, VarietyKind::Plane), (7, 2, VarietyKind::SphereT(3))] {
        let c = ctx(q, d);
        let v = build_variety(&c, kind).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let coeffs: Vec<Complex64> = (0..q).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let profile = RadialProfile::new(&c, coeffs.clone()).unwrap();
        let f = lift_radial(&c, &profile).unwrap();
        let fhat = ft_fast(&f).unwrap();
        let on_v: Vec<Complex64> = v.points().iter().map(|x| fhat.at(x)).collect();
        let direct = radial_matrix(&v).unwrap().apply(&profile);
        for (a, b) in on_v.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-8);
        }
        for (p, r) in pairs {
            let pair = ExponentPair::parse(p, r).unwrap();
            let full = lr_norm_sigma(&on_v, &v, pair.r).unwrap() / lp_norm_counting(&f, pair.p);
            let fast = op.ratio(&coeffs, &pair);
            assert!((full - fast).abs() <= 1e-9 * full, "q={q} d={d} {pair}: {full} vs {fast}");
        }
    }
}

#[test]
fn norm_examples() {
    let c = ctx(3, 2);
    let s1 = enumerate_sphere(&c, 1).unwrap();
    let f = ffharm::fourier::GridFunction::indicator(&c, ffharm::fourier::Side::PrimalCounting, s1.points().iter()).unwrap();
    assert!((lp_norm_counting(&f, Exponent::integer(2).unwrap()) - 2.0).abs() < 1e-12);

    let c = ctx(5, 3);
    let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
    let ones = RadialProfile::constant(&c, Complex64::new(1.0, 0.0));
    let fhat = ft_fast(&lift_radial(&c, &ones).unwrap()).unwrap();
    let on_v: Vec<Complex64> = v.points().iter().map(|x| fhat.at(x)).collect();
    for r in ["1", "2", "7/2"] {
        let r: Exponent = r.parse().unwrap();
        let expect = 125.0 * 25f64.powf(-1.0 / r.to_f64());
        assert!((lr_norm_sigma(&on_v, &v, r).unwrap() - expect).abs() < 1e-8);
    }
    assert!((lr_norm_sigma(&on_v, &v, Exponent::Infinite).unwrap() - 125.0).abs() < 1e-8);
    let c3 = vec![Complex64::new(0.0, -3.0); v.cardinality()];
    assert!((lr_norm_sigma(&c3, &v, "5/3".parse().unwrap()).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn witness_exponent_arithmetic() {
    let c = ctx(7, 3);
    let v = build_variety(&c, VarietyKind::Paraboloid).unwrap();
    let w = witness_lower_bound(&v, &ExponentPair::parse("2", "2").unwrap()).unwrap();
    assert!((w - 7f64.sqrt()).abs() < 1e-9);
    for (p, r) in [("1", "inf"), ("3/2", "2"), ("6/5", "4")] {
        let w = witness_lower_bound(&v, &ExponentPair::parse(p, r).unwrap()).unwrap();
        assert!(w >= 1.0 - 1e-12, "({p},{r}): {w}");
    }
}

#[test]
fn builtin_intersections_stay_below_three_q_to_d_minus_two() {
    for q in [3u64, 5, 7, 11] {
        for d in 3..=5 {
            let c = ctx(q, d);
            for kind in [VarietyKind::Paraboloid, VarietyKind::Plane] {
                let v = build_variety(&c, kind.clone()).unwrap();
                let count = zero_sphere_intersection(&v).count as f64;
                assert!(count <= 3.0 * (q as f64).powi(d as i32 - 2), "q={q} d={d} {kind}: {count}");
            }
        }
    }
}

#[test]
fn zero_sphere_term_is_bounded_for_the_plane() {
    for q in [3u64, 5, 7] {
        let c = ctx(q, 4);
        let v = build_variety(&c, VarietyKind::Plane).unwrap();
        let op = RadialOperator::new(&v).unwrap();
        let cap = zero_sphere_intersection(&v).count;
        for r in [1.0, 2.0, 2.25] {
            let s = suf1_diagnostic(&op, &RadialProfile::delta(&c, 0), r, None);
            let bound = zero_sphere_term_bound(q as u32, 4, 1.0, r, cap, v.cardinality());
            assert!(s.r <= bound * (1.0 + 1e-12), "q={q} r={r}: {} > {bound}", s.r);
            assert!(s.m.abs() < 1e-12);
        }
    }
}
