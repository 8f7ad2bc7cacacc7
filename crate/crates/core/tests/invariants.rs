//! Cross-module invariants checked on randomized inputs: norm identities,
//! the 1-D separation and determinant lemmas on admissible data, pruned
//! against naive enumeration, cover partitions, and witness searches
//! re-evaluated from first principles.

use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use sdioph_core::enumeration::{
    cover_compact_with_radius, dirichlet_uniform_witness, dirichlet_witness, enumerate_rationals,
    enumerate_rationals_naive, psi_witnesses, radius_schedule, snap_radius, BallCenter,
    DirichletExponent, SBall, TargetPoint,
};
use sdioph_core::exactnum::{as_power_of, prime_power, rat_pow, snap_to_power};
use sdioph_core::lattice::{
    affine_hull_hyperplane, build_a, contradiction_bound, covolume, det_exact, Approximant,
    HeightWindow,
};
use sdioph_core::measures::{cylinder_measure, decay_ratio, DigitMeasure, ProductMeasure, RatioResult};
use sdioph_core::places::{
    content, place_abs, product_formula_check, snorm, Mode, Place, PlaceSet,
};
use sdioph_core::simplex1d::{check_pair, separation_lower_bound};
use sdioph_core::{Int, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

fn arb_rat() -> impl Strategy<Value = Rational> {
    (-120i64..=120, 1i64..=48).prop_map(|(n, d)| rat(n, d))
}

fn arb_nonzero_rat() -> impl Strategy<Value = Rational> {
    arb_rat().prop_filter("nonzero", |x| !x.is_zero())
}

fn arb_place() -> impl Strategy<Value = Place> {
    prop_oneof![
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(13)].prop_map(Place::Finite),
        Just(Place::Infinity),
    ]
}

fn arb_place_set() -> impl Strategy<Value = PlaceSet> {
    prop_oneof![
        Just("2"),
        Just("3"),
        Just("5"),
        Just("2,3"),
        Just("3,7"),
        Just("2,3,5"),
        Just("inf"),
        Just("2,inf"),
        Just("3,inf"),
        Just("2,5,inf"),
    ]
    .prop_map(|s| s.parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn absolute_values_are_multiplicative(
        x in arb_nonzero_rat(),
        y in arb_nonzero_rat(),
        pl in arb_place(),
    ) {
        let lhs = place_abs(&(&x * &y), pl).unwrap();
        let rhs = place_abs(&x, pl).unwrap() * place_abs(&y, pl).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_places_are_ultrametric(
        x in arb_rat(),
        y in arb_rat(),
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
    ) {
        let pl = Place::Finite(p);
        let ax = place_abs(&x, pl).unwrap();
        let ay = place_abs(&y, pl).unwrap();
        let asum = place_abs(&(&x + &y), pl).unwrap();
        let max = ax.clone().max(ay.clone());
        prop_assert!(asum <= max);
        if ax != ay {
            prop_assert_eq!(asum, max);
        }
    }

    #[test]
    fn snorm_triangle_inequality_by_mode(
        x0 in arb_rat(), x1 in arb_rat(),
        y0 in arb_rat(), y1 in arb_rat(),
        s in arb_place_set(),
    ) {
        let x = [x0, x1];
        let y = [y0, y1];
        let sum = [&x[0] + &y[0], &x[1] + &y[1]];
        let nx = snorm(&x, &s).unwrap();
        let ny = snorm(&y, &s).unwrap();
        let nsum = snorm(&sum, &s).unwrap();
        match s.mode() {
            Mode::AllFinite => prop_assert!(nsum <= nx.max(ny)),
            Mode::WithInfinity => prop_assert!(nsum <= nx + ny),
        }
    }

    #[test]
    fn content_is_multiplicative(
        x in arb_nonzero_rat(),
        y in arb_nonzero_rat(),
        s in arb_place_set(),
    ) {
        let lhs = content(&(&x * &y), &s).unwrap();
        let rhs = content(&x, &s).unwrap() * content(&y, &s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_formula_over_support(x in arb_nonzero_rat()) {
        prop_assert!(product_formula_check(&x).unwrap());
    }

    #[test]
    fn pair_check_is_symmetric(
        a in arb_rat(),
        b in arb_rat(),
        k in 0u32..4,
        s in arb_place_set(),
    ) {
        prop_assume!(a != b);
        let ab = check_pair(&a, &b, k, &s).unwrap();
        let ba = check_pair(&b, &a, k, &s).unwrap();
        prop_assert_eq!(&ab.separation, &ba.separation);
        prop_assert_eq!(&ab.bound, &ba.bound);
        prop_assert_eq!(ab.exceeds_bound, ba.exceeds_bound);
        prop_assert_eq!(ab.hypothesis_a, ba.hypothesis_b);
        prop_assert_eq!(ab.hypothesis_b, ba.hypothesis_a);
    }

    #[test]
    fn admissible_pairs_are_separated(
        m1 in -40i64..=40, n1 in 1i64..=40,
        m2 in -40i64..=40, n2 in 1i64..=40,
        k in 0u32..4,
        s in arb_place_set(),
    ) {
        let a = rat(m1, n1);
        let b = rat(m2, n2);
        prop_assume!(a != b);
        let v = check_pair(&a, &b, k, &s).unwrap();
        if v.hypothesis_a && v.hypothesis_b {
            prop_assert!(v.exceeds_bound, "pair {a}, {b} at k={k} over {s}");
            prop_assert!(v.separation > separation_lower_bound(k, &s));
        }
    }

    #[test]
    fn covolume_ignores_point_order(
        coords in prop::collection::vec((-12i64..=12, 1i64..=6), 6),
        s in arb_place_set(),
    ) {
        let points: Vec<Vec<Rational>> = coords
            .chunks(2)
            .map(|c| c.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect();
        let a = build_a(&points).unwrap();
        prop_assume!(!det_exact(&a).is_zero());
        let reference = covolume(&a, &s).unwrap();
        let mut shuffled = points.clone();
        shuffled.reverse();
        prop_assert_eq!(covolume(&build_a(&shuffled).unwrap(), &s).unwrap(), reference.clone());
        let mut swapped = points;
        swapped.swap(0, 1);
        prop_assert_eq!(covolume(&build_a(&swapped).unwrap(), &s).unwrap(), reference);
    }

    #[test]
    fn covolume_is_det_content_over_completed_set(
        coords in prop::collection::vec((-12i64..=12, 1i64..=6), 6),
        s in arb_place_set(),
    ) {
        let points: Vec<Vec<Rational>> = coords
            .chunks(2)
            .map(|c| c.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect();
        let a = build_a(&points).unwrap();
        let det = det_exact(&a);
        prop_assume!(!det.is_zero());
        prop_assert_eq!(
            covolume(&a, &s).unwrap(),
            content(&det, &s.with_infinity()).unwrap()
        );
    }

    #[test]
    fn affine_hull_ignores_point_order(
        coords in prop::collection::vec((-6i64..=6, 1i64..=4), 6..=10),
    ) {
        let points: Vec<Vec<Rational>> = coords
            .chunks(2)
            .map(|c| c.iter().map(|&(n, d)| rat(n, d)).collect())
            .collect();
        let points: Vec<Vec<Rational>> = points.into_iter().filter(|p| p.len() == 2).collect();
        prop_assume!(!points.is_empty());
        let reference = affine_hull_hyperplane(&points).unwrap();
        let mut reversed = points.clone();
        reversed.reverse();
        prop_assert_eq!(affine_hull_hyperplane(&reversed).unwrap(), reference.clone());
        if let Some(h) = reference {
            for p in &points {
                prop_assert!(h.contains(p));
            }
        }
    }

    #[test]
    fn snapping_brackets_the_radius(
        num in 1i64..=400, den in 1i64..=400,
        base in prop_oneof![Just(2u64), Just(3), Just(5), Just(10)],
    ) {
        let r = rat(num, den);
        let snapped = snap_to_power(&r, base).unwrap();
        let b = Rational::from_integer(Int::from(base));
        prop_assert!(snapped <= r);
        prop_assert!(r < &snapped * &b);
        prop_assert!(as_power_of(&snapped, base).is_some());
    }

    #[test]
    fn schedule_exponent_is_the_least_admissible(
        n in 0u32..12,
        d in 1usize..=3,
        l in 1usize..=3,
    ) {
        let sched = radius_schedule(n, d, l).unwrap();
        let sum = (d as u64 + 2) + (d as u64 + 1) * (n as u64 + 1);
        let dl = (d * l) as u64;
        let e = sched.exponent as u64;
        prop_assert!(e * dl >= sum);
        prop_assert!((e - 1) * dl < sum);
        prop_assert_eq!(sched.rounded_down, sum % dl != 0);
        let expect = Rational::new(Int::one(), Int::from(6u32) << sched.exponent);
        prop_assert_eq!(sched.value, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pruned_enumeration_matches_the_full_scan(
        cn in -10i64..=10, cd in 1i64..=10,
        radius in prop_oneof![
            Just((1i64, 1i64)),
            Just((1, 2)),
            Just((1, 3)),
            Just((1, 4)),
            Just((1, 9)),
        ],
        n in 0u32..=3,
        s in prop_oneof![Just("3"), Just("2,3"), Just("2,inf"), Just("3,inf")],
    ) {
        let s: PlaceSet = s.parse().unwrap();
        let center = vec![rat(cn, cd)];
        let ball = SBall::new(BallCenter::Diagonal(center), rat(radius.0, radius.1), &s).unwrap();
        let window = HeightWindow::for_set(n, &s);
        let fast = enumerate_rationals(&ball, &window, &s).unwrap();
        let slow = enumerate_rationals_naive(&ball, &window, &s).unwrap();
        prop_assert_eq!(&fast, &slow);
        for e in &fast {
            prop_assert!(window.contains_closed(&e.pair));
            prop_assert!(ball.contains(&e.point).unwrap());
            prop_assert!(e.pair.q0.is_positive());
        }
        for w in fast.windows(2) {
            prop_assert!((&w[0].pair.q0, &w[0].pair.q) < (&w[1].pair.q0, &w[1].pair.q));
        }
    }

    #[test]
    fn cover_partitions_a_digit_support(
        digits in prop::sample::subsequence(vec![0u64, 1, 2], 1..=3),
        depth in 1i64..=3,
    ) {
        let m = DigitMeasure::uniform(Place::Finite(3), 3, 1, &digits).unwrap();
        let k = ProductMeasure::new(vec![m]).unwrap();
        let radius = prime_power(3, -depth);
        let balls = cover_compact_with_radius(&k, &radius).unwrap();
        prop_assert_eq!(balls.len() as u64, (digits.len() as u64).pow(depth as u32));
        let mut mass = Rational::zero();
        for b in &balls {
            mass += cylinder_measure(&k.components()[0], b.center_at(0), b.radius_at(0)).unwrap();
        }
        prop_assert!(mass.is_one());
        for (i, a) in balls.iter().enumerate() {
            for b in &balls[i + 1..] {
                let gap = place_abs(
                    &(&a.center_at(0)[0] - &b.center_at(0)[0]),
                    Place::Finite(3),
                ).unwrap();
                prop_assert!(gap > radius);
            }
        }
    }

    #[test]
    fn sampled_digits_respect_the_digit_sets(
        digits in prop::sample::subsequence(vec![0u64, 1, 2], 1..=3),
        seed in any::<u64>(),
    ) {
        let m = Arc::new(ProductMeasure::new(vec![
            DigitMeasure::uniform(Place::Finite(3), 3, 2, &digits).unwrap(),
        ]).unwrap());
        for point in ProductMeasure::sample(&m, seed, 3, 16) {
            for coord in 0..2 {
                for digit in point.prefix(0, coord, 6) {
                    prop_assert!(digits.contains(&digit));
                }
            }
        }
    }

    #[test]
    fn dirichlet_witnesses_reevaluate_exactly(
        xn in -8i64..=8, xd in 1i64..=8,
        s in arb_place_set(),
    ) {
        let x = rat(xn, xd);
        prop_assume!(snorm(&[x.clone()], &s).unwrap() <= Rational::one());
        let l = s.len() as i64;
        let w = dirichlet_witness(&[x.clone()], 16, &s, DirichletExponent::Denominator)
            .unwrap()
            .expect("points of the unit ball always yield a witness");
        let q0r = Rational::from_integer(w.q0.clone());
        let y = &x * &q0r + Rational::from_integer(w.q[0].clone());
        prop_assert_eq!(&rat_pow(&snorm(&[y], &s).unwrap(), l), &w.lhs);
        let gauge = match s.mode() {
            Mode::AllFinite => w.q[0].abs().max(w.q0.clone()),
            Mode::WithInfinity => w.q0.clone(),
        };
        let expo = match s.mode() {
            Mode::AllFinite => -2,
            Mode::WithInfinity => -1,
        };
        prop_assert_eq!(&rat_pow(&Rational::from_integer(gauge.clone()), expo), &w.rhs);
        prop_assert!(w.lhs <= w.rhs);
        prop_assert_eq!(w.level, gauge.to_u64().unwrap().ilog2());

        if let Some(u) =
            dirichlet_uniform_witness(&[x], 16, &s, DirichletExponent::Denominator).unwrap()
        {
            prop_assert!(u.lhs < u.rhs);
            prop_assert!(u.q[0].abs().max(u.q0.clone()) <= Int::from(16));
        }
    }

    #[test]
    fn psi_witnesses_match_a_direct_filter(
        xn in -16i64..=16, xd in 1i64..=8,
        n in 0u32..=2,
        s in prop_oneof![Just("3"), Just("2,3"), Just("2,inf")],
    ) {
        let s: PlaceSet = s.parse().unwrap();
        let x = rat(xn, xd);
        let l = s.len() as i64;
        let psi = |h: &Int| rat_pow(&Rational::from_integer(h.clone()), -2);
        let target = TargetPoint::Rational(vec![x.clone()]);
        let got: Vec<(Int, Int)> = psi_witnesses(&target, &psi, n, &s, 64)
            .unwrap()
            .into_iter()
            .map(|w| (w.q0, w.q.into_iter().next().unwrap()))
            .collect();

        let window = HeightWindow::for_set(n, &s);
        let hi = window.hi().to_i64().unwrap();
        let lo = window.lo().to_i64().unwrap();
        let q0s = match s.mode() {
            Mode::AllFinite => 1..=hi,
            Mode::WithInfinity => lo..=hi,
        };
        let mut expect = Vec::new();
        for q0 in q0s {
            let reach = match s.mode() {
                Mode::AllFinite => hi,
                // accepted points satisfy |x + q/q0| <= 1 at the real place
                Mode::WithInfinity => {
                    ((Rational::from_integer(Int::from(q0)) * (x.abs() + Rational::one()))
                        .ceil()
                        .to_integer())
                    .to_i64()
                    .unwrap()
                        + 1
                }
            };
            for q in -reach..=reach {
                let pair = Approximant::from_i64(&[q], q0);
                if !window.contains_closed(&pair) {
                    continue;
                }
                let gauge = match s.mode() {
                    Mode::AllFinite => pair.height(),
                    Mode::WithInfinity => Int::from(q0),
                };
                let y = &x + rat(q, q0);
                if rat_pow(&snorm(&[y], &s).unwrap(), l) <= psi(&gauge) {
                    expect.push((Int::from(q0), Int::from(q)));
                }
            }
        }
        expect.sort();
        prop_assert_eq!(got, expect);
    }
}

#[test]
fn scheduled_radii_force_the_volume_contradiction() {
    for set_str in ["3", "2,3", "2,3,5", "2,inf", "2,3,inf"] {
        let s: PlaceSet = set_str.parse().unwrap();
        let l = s.len();
        for d in 1..=2 {
            for n in 0..=4 {
                let window = HeightWindow::for_set(n, &s);
                let sched = radius_schedule(n, d, l).unwrap();
                let radii: Vec<(Place, Rational)> = s
                    .iter()
                    .map(|pl| match pl {
                        Place::Finite(p) => (pl, snap_radius(&sched.value, p).unwrap()),
                        Place::Infinity => (pl, sched.value.clone()),
                    })
                    .collect();
                let cert = contradiction_bound(d, &window, &s, &radii).unwrap();
                assert!(cert.impossible, "d={d} n={n} S={set_str}");
                assert!(cert.covolume_lower_bound > cert.box_volume);
            }
        }
    }
}

#[test]
fn certificate_json_is_stable() {
    let s: PlaceSet = "3".parse().unwrap();
    let window = HeightWindow::new(1, Mode::AllFinite);
    let radii = vec![(Place::Finite(3), Rational::new(Int::one(), Int::from(2187)))];
    let cert = contradiction_bound(1, &window, &s, &radii).unwrap();
    assert_eq!(
        cert.to_json().to_string(),
        "{\"box_volume\":\"1/2187\",\"covolume_lower_bound\":\"1/16\",\"d\":1,\
         \"impossible\":true,\"mode\":\"all-finite\",\"n\":1,\"places\":\"3\",\
         \"radii\":[[\"3\",\"1/2187\"]]}"
    );
}

#[test]
fn monte_carlo_band_measure_matches_geometry() {
    // band |x + y - 1| <= 1/4 inside the unit square has area 7/16; the
    // normal (1, 1) is not axis-aligned, so the ratio is estimated
    let m = ProductMeasure::new(vec![DigitMeasure::full(Place::Infinity, 2, 2).unwrap()]).unwrap();
    let h = affine_hull_hyperplane(&[
        vec![rat(1, 1), rat(0, 1)],
        vec![rat(0, 1), rat(1, 1)],
    ])
    .unwrap()
    .expect("two points in the plane span a line");
    let center = [rat(1, 2), rat(1, 2)];
    match decay_ratio(&m, &center, &rat(1, 2), &h, &rat(1, 8), Some((7, 4000))).unwrap() {
        RatioResult::Exact(_) => panic!("oblique hyperplane cannot be handled exactly"),
        RatioResult::Estimate { value, std_error, in_ball } => {
            assert!(in_ball > 3000);
            assert!((value - 0.4375).abs() < 5.0 * std_error.max(0.008));
        }
    }
}
