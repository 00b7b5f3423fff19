//! Property tests: gauge axioms, enumeration symmetries, minima scaling
//! laws, and the L_p monotonicity facts, checked on randomized bodies.

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use latstab::bhw::{check_bhw, phi_envelope, rhs_floor_product};
use latstab::enumeration::{count_lattice_points, list_lattice_points};
use latstab::geometry::{
    cayley_rotation, random_skew, rotation_2d, transform_body, ConvexBody, SquareMatrix,
};
use latstab::lp::{p0_exact, p0_paper, verify_lp_hull_stability, HullVerdict};
use latstab::minima::{integer_rank, successive_minima};
use latstab::stability::{evaluate_rotation, stability_radius};
use latstab::BoxBody;

const TAU: f64 = 1e-9;

/// Semi-axes kept away from integers and half-integers so floors and
/// memberships are float-robust.
fn alpha() -> impl Strategy<Value = f64> {
    (0.3f64..4.2).prop_filter("away from integer and half-integer", |a| {
        let r = a.fract();
        let to_int = r.min(1.0 - r);
        let to_half = (r - 0.5).abs();
        to_int > 1e-3 && to_half > 1e-3
    })
}

fn alphas(max_d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(alpha(), 1..=max_d)
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-6.0f64..6.0, d)
}

/// Box, L_p ball, or rotated box over the same semi-axes.
fn body(max_d: usize) -> impl Strategy<Value = ConvexBody> {
    (
        alphas(max_d),
        0usize..3,
        -0.5f64..0.5,
        prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY]),
    )
        .prop_map(|(a, kind, theta, p)| match kind {
            0 => ConvexBody::box_body(a).unwrap(),
            1 => ConvexBody::lp_ball(p, a).unwrap(),
            _ => {
                let cube = ConvexBody::box_body(a).unwrap();
                if cube.dim() == 2 {
                    transform_body(&rotation_2d(theta), &cube).unwrap()
                } else {
                    cube
                }
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gauge_is_positively_homogeneous(b in body(4), s in 0.01f64..50.0) {
        let d = b.dim();
        let x: Vec<f64> = (0..d).map(|i| (i as f64 + 1.3) * 0.7 - 2.0).collect();
        let g = b.gauge(&x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        let gs = b.gauge(&scaled).unwrap();
        prop_assert!((gs - s * g).abs() <= 1e-9 * (1.0 + s * g));
    }

    #[test]
    fn gauge_is_symmetric(b in body(4), seed in 0u64..1000) {
        let d = b.dim();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-6.0..6.0)).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let g = b.gauge(&x).unwrap();
        let gn = b.gauge(&neg).unwrap();
        match b {
            ConvexBody::Transformed(_) => prop_assert!((g - gn).abs() <= 1e-12),
            _ => prop_assert_eq!(g, gn),
        }
    }

    #[test]
    fn gauge_satisfies_the_triangle_inequality(b in body(4), seed in 0u64..5000) {
        let d = b.dim();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, c)| a + c).collect();
            let lhs = b.gauge(&sum).unwrap();
            let rhs = b.gauge(&x).unwrap() + b.gauge(&y).unwrap();
            prop_assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn linf_ball_agrees_with_the_box(a in alphas(4), x in point(4)) {
        let d = a.len().min(x.len()).max(1);
        let a = a[..d].to_vec();
        let x = &x[..d];
        let cube = ConvexBody::box_body(a.clone()).unwrap();
        let linf = ConvexBody::lp_ball(f64::INFINITY, a).unwrap();
        prop_assert!((cube.gauge(x).unwrap() - linf.gauge(x).unwrap()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn box_counts_factorize(a in alphas(4)) {
        let body = ConvexBody::box_body(a.clone()).unwrap();
        let report = count_lattice_points(&body, TAU).unwrap();
        let expected: u64 = a.iter().map(|ai| 2 * ai.floor() as u64 + 1).product();
        prop_assert_eq!(report.count, expected);
        prop_assert_eq!(report.ambiguous, 0);
    }

    #[test]
    fn members_are_centrally_symmetric(b in body(3)) {
        let list = list_lattice_points(&b, TAU).unwrap();
        let set: std::collections::BTreeSet<_> = list.iter().cloned().collect();
        for p in &list {
            let neg = latstab::LatticePoint::new(p.coords.iter().map(|c| -c).collect());
            prop_assert!(set.contains(&neg));
        }
    }

    #[test]
    fn shrinking_a_body_never_gains_points(b in body(3), s in 0.5f64..1.0) {
        let shrink = SquareMatrix::identity(b.dim()).scale(s);
        let smaller = transform_body(&shrink, &b).unwrap();
        let big = count_lattice_points(&b, TAU).unwrap().count;
        let small = count_lattice_points(&smaller, TAU).unwrap().count;
        prop_assert!(small <= big);
    }

    #[test]
    fn boundary_gap_brute_force_matches_closed_form(a in alphas(3)) {
        // boundary_gap_box asserts the agreement internally.
        let bx = BoxBody::new(a).unwrap();
        let delta = latstab::boundary_gap_box(&bx).unwrap();
        prop_assert!(delta > 0.0);
    }

    #[test]
    fn box_minima_are_reciprocal_semi_axes_with_basis_witnesses(a in alphas(3)) {
        // Equal semi-axes tie the gauges of basis and mixed vectors, and the
        // lexicographic tie-break may then prefer a mixed witness; the
        // basis-witness guarantee needs distinct semi-axes.
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                prop_assume!((a[i] - a[j]).abs() > 1e-3);
            }
        }
        let bx = BoxBody::new(a).unwrap();
        let m = successive_minima(&ConvexBody::Box(bx.clone())).unwrap();
        // Semi-axes are stored descending, so reciprocals are already the
        // ascending minima.
        for (l, ai) in m.lambdas.iter().zip(bx.alphas().iter()) {
            prop_assert!((l - 1.0 / ai).abs() <= 1e-12);
        }
        for w in &m.witnesses {
            let nonzero: Vec<i64> = w.coords.iter().copied().filter(|c| *c != 0).collect();
            prop_assert_eq!(nonzero.len(), 1);
            prop_assert_eq!(nonzero[0].abs(), 1);
        }
        prop_assert_eq!(integer_rank(&m.witnesses), bx.dim());
    }

    #[test]
    fn minima_scale_inversely(a in alphas(2), s in 0.5f64..2.0) {
        let b = ConvexBody::box_body(a).unwrap();
        let scaled = transform_body(&SquareMatrix::identity(b.dim()).scale(s), &b).unwrap();
        let base = successive_minima(&b).unwrap();
        let stretched = successive_minima(&scaled).unwrap();
        for (l0, l1) in base.lambdas.iter().zip(&stretched.lambdas) {
            prop_assert!((l1 - l0 / s).abs() <= 1e-9);
        }
    }

    #[test]
    fn minima_respect_inclusion(b in body(2), s in 0.5f64..1.0) {
        // s*K is included in K, so each of its minima is at least as large.
        let smaller = transform_body(&SquareMatrix::identity(b.dim()).scale(s), &b).unwrap();
        let inner = successive_minima(&smaller).unwrap();
        let outer = successive_minima(&b).unwrap();
        for (li, lo) in inner.lambdas.iter().zip(&outer.lambdas) {
            prop_assert!(*li >= lo - 1e-9);
        }
    }

    #[test]
    fn floored_product_stays_below_the_envelope(
        lambdas in prop::collection::vec(0.05f64..5.0, 1..=5)
    ) {
        let fp = rhs_floor_product(&lambdas).unwrap();
        let phi = phi_envelope(&lambdas).unwrap();
        prop_assert!(fp.value as f64 <= phi + 1e-9);
    }

    #[test]
    fn the_count_bound_holds_on_lp_balls(a in alphas(3), p in prop::sample::select(
        vec![1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY]
    )) {
        let ball = ConvexBody::lp_ball(p, a).unwrap();
        let report = check_bhw(&ball, TAU).unwrap();
        prop_assert!(report.holds, "count {} > rhs {}", report.count, report.rhs);
    }

    #[test]
    fn the_count_bound_holds_inside_the_stability_radius(
        a in prop::collection::vec(alpha(), 2..=2),
        seed in 0u64..10_000
    ) {
        let bx = BoxBody::new(a).unwrap();
        let radius = stability_radius(&bx).unwrap().radius;
        let rot = latstab::sample_rotation(2, 0.9 * radius, seed).unwrap();
        let rotated = transform_body(&rot, &ConvexBody::Box(bx)).unwrap();
        let report = check_bhw(&rotated, TAU).unwrap();
        prop_assert!(report.holds);
    }
}

/// Exact threshold never exceeds the coarse one (the coarse bound is a
/// sufficient condition), on 200 random non-integral semi-axis vectors.
#[test]
fn exact_threshold_is_never_above_the_coarse_one() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x517);
    for i in 0..200 {
        let d = 1 + (i % 4);
        let a: Vec<f64> = (0..d)
            .map(|_| loop {
                let v: f64 = rng.gen_range(0.3..4.2);
                let r = v.fract();
                if r.min(1.0 - r) > 1e-6 {
                    break v;
                }
            })
            .collect();
        if a.iter().all(|v| *v < 1.0) {
            continue;
        }
        let coarse = p0_paper(&a).unwrap();
        let (exact, _) = p0_exact(&a).unwrap();
        assert!(
            exact <= coarse + 1e-9,
            "alphas {a:?}: exact {exact} > coarse {coarse}"
        );
    }
}

/// Above the coarse threshold the lattice sets agree and the counts match;
/// below the exact threshold they differ at the all-floors point.
#[test]
fn hull_stability_splits_at_the_thresholds() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xAB);
    let mut tested_above = 0;
    let mut tested_below = 0;
    for i in 0..60 {
        let d = 2 + (i % 2);
        // Fractional parts kept in [0.1, 0.9] so the coarse threshold stays
        // in a sane powf range.
        let a: Vec<f64> = (0..d)
            .map(|_| {
                let int: f64 = rng.gen_range(1..4) as f64;
                int + rng.gen_range(0.1..0.9)
            })
            .collect();
        let coarse = p0_paper(&a).unwrap();
        let (exact, _) = p0_exact(&a).unwrap();

        let p_hi = coarse * (1.0 + 1e-5);
        let hi = verify_lp_hull_stability(&a, p_hi, TAU).unwrap();
        assert_eq!(hi.verdict, HullVerdict::Equal, "alphas {a:?} at p = {p_hi}");
        let ball = ConvexBody::lp_ball(p_hi, a.clone()).unwrap();
        let cube = ConvexBody::box_body(a.clone()).unwrap();
        assert_eq!(
            count_lattice_points(&ball, TAU).unwrap().count,
            count_lattice_points(&cube, TAU).unwrap().count
        );
        tested_above += 1;

        let p_lo = exact * (1.0 - 1e-5);
        if p_lo >= 1.0 {
            let lo = verify_lp_hull_stability(&a, p_lo, TAU).unwrap();
            match lo.verdict {
                HullVerdict::Unequal { witness } => {
                    let floors: Vec<i64> = {
                        let mut s = a.clone();
                        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
                        s.iter().map(|v| v.floor() as i64).collect()
                    };
                    let abs: Vec<i64> = witness.coords.iter().map(|c| c.abs()).collect();
                    assert_eq!(abs, floors, "alphas {a:?} at p = {p_lo}");
                }
                other => panic!("expected inequality below the threshold, got {other:?}"),
            }
            tested_below += 1;
        }
    }
    assert!(tested_above >= 50 && tested_below >= 20);
}

/// Counts are monotone in p: the L_p balls grow with p.
#[test]
fn lattice_sets_grow_with_p() {
    let grid = [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY];
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for _ in 0..25 {
        let d = 2 + (rng.gen::<u32>() % 2) as usize;
        let a: Vec<f64> = (0..d).map(|_| rng.gen_range(0.6..3.4)).collect();
        let mut previous: Option<std::collections::BTreeSet<latstab::LatticePoint>> = None;
        for &p in &grid {
            let ball = ConvexBody::lp_ball(p, a.clone()).unwrap();
            let set: std::collections::BTreeSet<_> = list_lattice_points(&ball, TAU)
                .unwrap()
                .into_iter()
                .collect();
            if let Some(prev) = &previous {
                assert!(
                    prev.is_subset(&set),
                    "alphas {a:?}: lattice set shrank between exponents"
                );
            }
            previous = Some(set);
        }
    }
}

/// Finding, not an assertion: along a fixed rotation direction the count
/// drop is usually monotone in the amplitude, but nothing guarantees it.
/// Violations are printed for inspection.
#[test]
fn drop_monotonicity_along_fixed_directions_reported() {
    let bx = BoxBody::new(vec![2.0, 1.0]).unwrap();
    let base = count_lattice_points(&ConvexBody::Box(bx.clone()), TAU)
        .unwrap()
        .count;
    let mut violations = 0;
    for direction in 0..20u64 {
        let skew = random_skew(2, 1000 + direction);
        let mut last_drop = i64::MIN;
        for step in 1..=10 {
            let t = step as f64 / 10.0;
            let rotation = cayley_rotation(&skew.scale(0.15 * t)).unwrap();
            let (record, _) =
                evaluate_rotation(&bx, &rotation, base, TAU, latstab::DEFAULT_BUDGET).unwrap();
            if record.drop < last_drop {
                violations += 1;
            }
            last_drop = record.drop;
        }
    }
    println!("drop monotonicity findings: {violations} decreases across 20 directions x 10 steps");
}
