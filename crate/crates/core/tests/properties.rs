//! Property tests for the norm, balancer, streaming and oracle invariants.

mod common;

use proptest::prelude::*;
use signbal::balancer::alternating_pair;
use signbal::cli::DirectionSource;
use signbal::geometry::{prefix_sums, signed_sum};
use signbal::oracle::{min_max_odd_prefix_fixed_order, min_signed_sum};
use signbal::streaming::decompose;
use signbal::{
    alternating_balance, balance_three, boundary_order, hull_of_plus_minus, odd_prefix_points,
    polygon_norm, stream_run, Norm, Sign, Vec2,
};

const TAU: f64 = 1e-9;

fn norm_strategy() -> impl Strategy<Value = Norm> {
    prop_oneof![
        Just(Norm::Euclidean),
        Just(Norm::Max),
        (1.0f64..8.0).prop_map(|p| Norm::lp(p).unwrap()),
        any::<u64>().prop_map(|seed| polygon_norm(DirectionSource::new(seed).polygon())),
    ]
}

fn point() -> impl Strategy<Value = Vec2> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| Vec2::new(x, y))
}

fn unit(norm: &Norm, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    norm.unitize(Vec2::new(c, s)).unwrap()
}

/// A norm and `n` of its unit vectors, `n` odd in `1..=max`.
fn odd_instance(max: usize) -> impl Strategy<Value = (Norm, Vec<Vec2>)> {
    (norm_strategy(), (0..=(max - 1) / 2).prop_map(|h| 2 * h + 1)).prop_flat_map(|(norm, n)| {
        let angles = prop::collection::vec(0.0f64..std::f64::consts::TAU, n);
        (Just(norm), angles).prop_map(|(norm, angles)| {
            let v = angles.iter().map(|&a| unit(&norm, a)).collect();
            (norm, v)
        })
    })
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_axioms(norm in norm_strategy(), x in point(), y in point(), t in -5.0f64..5.0) {
        let nx = norm.eval(x);
        prop_assert!(nx >= 0.0);
        prop_assert_eq!(nx == 0.0, x.is_zero());
        prop_assert!((norm.eval(x * t) - t.abs() * nx).abs() <= TAU * (1.0 + nx * t.abs()));
        prop_assert!(norm.eval(x + y) <= nx + norm.eval(y) + TAU);
        prop_assert!((norm.eval(-x) - nx).abs() <= TAU);
        prop_assert_eq!(norm.eval(Vec2::ZERO), 0.0);
    }

    #[test]
    fn polygon_gauge_matches_membership(seed in any::<u64>(), x in point()) {
        let polygon = DirectionSource::new(seed).polygon();
        let norm = polygon_norm(polygon.clone());
        let g = norm.eval(x);
        // Points within rounding of the boundary may land on either side.
        prop_assume!((g - 1.0).abs() > 1e-9);
        prop_assert_eq!(g <= 1.0, polygon.contains(x));
    }

    #[test]
    fn unitize_is_idempotent(norm in norm_strategy(), x in point()) {
        prop_assume!(!x.is_zero());
        let u = norm.unitize(x).unwrap();
        prop_assert!((norm.eval(u) - 1.0).abs() <= TAU);
        prop_assert!(norm.unitize(u).unwrap().max_abs_diff(u) <= TAU);
    }

    #[test]
    fn hull_ignores_negation_and_order((norm, v) in odd_instance(15), flip in any::<usize>(), rot in any::<usize>()) {
        let base = hull_of_plus_minus(&v);
        let mut w = v.clone();
        let j = flip % w.len();
        w[j] = -w[j];
        let k = rot % w.len();
        w.rotate_left(k);
        prop_assert_eq!(hull_of_plus_minus(&w), base.clone());
        if let Ok(p) = base {
            // Unit vectors of a norm whose ball contains P lie on the boundary of P.
            let pn = polygon_norm(p);
            for &x in &v {
                prop_assert!((pn.eval(x) - 1.0).abs() <= TAU);
            }
            let _ = norm;
        }
    }

    #[test]
    fn alternating_balance_bounds((norm, v) in odd_instance(31)) {
        let c = alternating_balance(&norm, &v).unwrap();
        prop_assert!(norm.eval(c.signed_sum) <= 1.0 + TAU);
        for (k, &p) in c.prefix_norms.iter().enumerate() {
            prop_assert!(p <= 2.0 + TAU);
            if k % 2 == 0 {
                prop_assert!(p <= 1.0 + TAU);
            }
        }
        prop_assert!(c.is_verified());
        prop_assert!(signed_sum(&v, &c.signs_original).max_abs_diff(c.signed_sum) <= TAU);
        for (j, &p) in c.prefix_sums.iter().enumerate() {
            prop_assert!((norm.eval(p) - c.prefix_norms[j]).abs() <= TAU);
        }
    }

    #[test]
    fn boundary_ordering_is_angular((_norm, v) in odd_instance(21)) {
        let o = boundary_order(&v).unwrap();
        for (j, &i) in o.perm.iter().enumerate() {
            prop_assert_eq!(o.ordered[j], o.flips[i].apply(v[i]));
            let u = o.ordered[j];
            prop_assert!(u.y > 0.0 || (u.y == 0.0 && u.x > 0.0));
        }
        let angles: Vec<f64> = o.ordered.iter().map(|u| u.y.atan2(u.x)).collect();
        for w in angles.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-15);
        }
    }

    #[test]
    fn edge_identity_and_zonotope_points((_norm, v) in odd_instance(31)) {
        let o = boundary_order(&v).unwrap();
        let (u, w) = alternating_pair(&o);
        prop_assert!((w + u).max_abs_diff(Vec2::ZERO) <= 1e-12);
        let n = o.len();
        let signs: Vec<Sign> = (0..n).map(|i| if i % 2 == 0 { Sign::Plus } else { Sign::Minus }).collect();
        let prefix = prefix_sums(&o.ordered, &signs);
        for (k, p) in odd_prefix_points(&o).into_iter().enumerate() {
            prop_assert!(p.max_abs_diff(prefix[2 * k]) <= 1e-12);
        }
        if let Ok(poly) = hull_of_plus_minus(&v) {
            let pn = polygon_norm(poly);
            for p in odd_prefix_points(&o) {
                prop_assert!(pn.eval(p) <= 1.0 + TAU);
            }
        }
    }

    #[test]
    fn starting_vertex_only_flips_the_sum((norm, v) in odd_instance(21), shift in 1usize..40) {
        // Walk the boundary v1..vn, −v1..−vn from another start: the alternating
        // sum is unchanged up to sign.
        let o = boundary_order(&v).unwrap();
        let n = o.len();
        let walk: Vec<Vec2> = o.ordered.iter().copied().chain(o.ordered.iter().map(|&x| -x)).collect();
        let start = shift % (2 * n);
        let alt = |seq: &[Vec2]| seq.iter().enumerate().fold(Vec2::ZERO, |acc, (i, &x)| {
            if i % 2 == 0 { acc + x } else { acc - x }
        });
        let base = alt(&walk[..n]);
        let moved: Vec<Vec2> = (0..n).map(|i| walk[(start + i) % (2 * n)]).collect();
        let other = alt(&moved);
        let err = other.max_abs_diff(base).min(other.max_abs_diff(-base));
        prop_assert!(err <= 1e-12);
        prop_assert!(norm.eval(other) <= 1.0 + TAU);
    }

    #[test]
    fn negation_and_permutation_invariance((norm, v) in odd_instance(15), pick in any::<usize>(), seed in any::<u64>()) {
        let base = alternating_balance(&norm, &v).unwrap();
        let j = pick % v.len();
        let mut w = v.clone();
        w[j] = -w[j];
        let c = alternating_balance(&norm, &w).unwrap();
        prop_assert_eq!(c.signed_sum, base.signed_sum);
        prop_assert_eq!(&c.prefix_norms, &base.prefix_norms);
        prop_assert_eq!(c.signs_original[j], -base.signs_original[j]);

        let mut src = DirectionSource::new(seed);
        let mut order: Vec<usize> = (0..v.len()).collect();
        for k in (1..order.len()).rev() {
            order.swap(k, (src.next_u64() % (k as u64 + 1)) as usize);
        }
        let shuffled: Vec<Vec2> = order.iter().map(|&k| v[k]).collect();
        let c = alternating_balance(&norm, &shuffled).unwrap();
        prop_assert!(c.signed_sum.max_abs_diff(base.signed_sum) <= TAU);
        prop_assert!(max_diff(&c.prefix_norms, &base.prefix_norms) <= TAU);
    }

    #[test]
    fn decompose_is_exact(norm in norm_strategy(), angle in 0.0f64..std::f64::consts::TAU, r in 0.0f64..=2.0, fb in 0.0f64..std::f64::consts::TAU) {
        let s = unit(&norm, angle) * r;
        let fallback = unit(&Norm::Euclidean, fb);
        let (u, w) = decompose(&norm, s, fallback).unwrap();
        prop_assert!((u + w).max_abs_diff(s) <= TAU);
        prop_assert!((norm.eval(u) - 1.0).abs() <= TAU);
        prop_assert!(norm.eval(w) <= 1.0 + TAU);
        if !s.is_zero() {
            prop_assert!(u.cross(s).abs() <= TAU && w.cross(s).abs() <= TAU);
        }
    }

    #[test]
    fn step_chain_holds(norm in norm_strategy(), a in 0.0f64..6.3, b in 0.0f64..6.3, c in 0.0f64..6.3, r in 0.0f64..=2.0) {
        let s = unit(&norm, a) * r;
        let (va, vb) = (unit(&norm, b), unit(&norm, c));
        let (u, w) = decompose(&norm, s, va).unwrap();
        let [su, sa, sb] = balance_three(&norm, u, va, vb).unwrap();
        prop_assert_eq!(su, Sign::Plus);
        let inner = u + sa.apply(va) + sb.apply(vb);
        prop_assert!(norm.eval(inner) <= 1.0 + TAU);
        let next = s + sa.apply(va) + sb.apply(vb);
        prop_assert!(norm.eval(next) <= norm.eval(inner) + norm.eval(w) + TAU);
        prop_assert!(norm.eval(next) <= 2.0 + TAU);
    }

    #[test]
    fn stream_is_online_and_consistent((norm, v) in odd_instance(25), cut in any::<usize>()) {
        let full = stream_run(&norm, &v).unwrap();
        prop_assert!(full.max_odd_prefix_norm() <= 2.0 + TAU);
        let prefix = prefix_sums(&v, &full.signs);
        for (k, s) in full.odd_prefix_sums.iter().enumerate() {
            prop_assert!(s.max_abs_diff(prefix[2 * k]) <= TAU);
        }
        let k = 2 * (cut % ((v.len() + 1) / 2)) + 1;
        let part = stream_run(&norm, &v[..k]).unwrap();
        prop_assert_eq!(&part.signs[..], &full.signs[..k]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_dominates_construction((norm, v) in odd_instance(11)) {
        let report = min_signed_sum(&norm, &v).unwrap();
        let built = alternating_balance(&norm, &v).unwrap();
        prop_assert!(report.value <= norm.eval(built.signed_sum) + TAU);
        prop_assert!(report.value <= 1.0 + TAU);
        prop_assert!((report.reevaluate(&norm, &v) - report.value).abs() <= TAU);

        let fixed = min_max_odd_prefix_fixed_order(&norm, &v).unwrap();
        let online = stream_run(&norm, &v).unwrap();
        prop_assert!(fixed.value <= online.max_odd_prefix_norm() + TAU);
        prop_assert!(fixed.value <= 2.0 + TAU);
        prop_assert!((fixed.reevaluate(&norm, &v) - fixed.value).abs() <= TAU);
    }

    #[test]
    fn oracle_is_deterministic((norm, v) in odd_instance(9)) {
        prop_assert_eq!(min_signed_sum(&norm, &v).unwrap(), min_signed_sum(&norm, &v).unwrap());
    }
}
