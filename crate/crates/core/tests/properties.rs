use itertools::Itertools;
use num_bigint::BigUint;
use proptest::prelude::*;

use pqr_core::bounds::{binom, implied_q, kalai_bound, lemma_r0_threshold};
use pqr_core::family::{face_counts, max_r, satisfies_pqr, Family};
use pqr_core::generators::{disjoint_plus_container, extremal_dim1};
use pqr_core::geometry::{
    body_contains_point, int, intersect_bodies, intersect_pair, lexmax_body, line_meets_body, rat,
    separating_line, ConvexBody, ConvexPolygon, Point,
};
use pqr_core::piercing::{
    branch_and_bound_piercing, greedy_interval_piercing, hd_pierce, min_piercing, ms_line, pierces,
    DEFAULT_NODE_BUDGET,
};

fn point() -> impl Strategy<Value = Point> {
    (0i64..=16, 0i64..=16).prop_map(|(x, y)| Point::new(rat(x, 2), rat(y, 2)))
}

fn polygon() -> impl Strategy<Value = ConvexBody> {
    prop::collection::vec(point(), 1..=6)
        .prop_map(|pts| ConvexBody::Polygon(ConvexPolygon::hull(pts).unwrap()))
}

fn interval() -> impl Strategy<Value = ConvexBody> {
    (0i64..=20, 0i64..=8)
        .prop_map(|(lo, len)| ConvexBody::interval(rat(lo, 2), rat(lo + len, 2)).unwrap())
}

fn polygon_family(max: usize) -> impl Strategy<Value = Family> {
    prop::collection::vec(polygon(), 2..=max).prop_map(|b| Family::new(b).unwrap())
}

fn interval_family(max: usize) -> impl Strategy<Value = Family> {
    prop::collection::vec(interval(), 2..=max).prop_map(|b| Family::new(b).unwrap())
}

/// Same point set: mutual containment of vertices.
fn same_set(a: &ConvexBody, b: &ConvexBody) -> bool {
    a.planar_vertices()
        .iter()
        .all(|v| body_contains_point(b, v))
        && b.planar_vertices()
            .iter()
            .all(|v| body_contains_point(a, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersect_xor_separate(a in polygon(), b in polygon()) {
        let meet = intersect_pair(&a, &b).unwrap();
        let sep = separating_line(&a, &b);
        prop_assert!(meet.is_some() != sep.is_ok());
        if let Ok(line) = sep {
            prop_assert!(!line_meets_body(&line, &a));
            prop_assert!(!line_meets_body(&line, &b));
        }
    }

    #[test]
    fn intersection_points_lie_in_both(a in polygon(), b in polygon(), p in point()) {
        let both = body_contains_point(&a, &p) && body_contains_point(&b, &p);
        match intersect_pair(&a, &b).unwrap() {
            Some(c) => prop_assert_eq!(body_contains_point(&c, &p), both),
            None => prop_assert!(!both),
        }
    }

    #[test]
    fn clipping_is_associative(a in polygon(), b in polygon(), c in polygon()) {
        let all = intersect_bodies(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let staged = intersect_pair(&a, &b).unwrap().and_then(|ab| intersect_pair(&ab, &c).unwrap());
        let other = intersect_pair(&b, &c).unwrap().and_then(|bc| intersect_pair(&a, &bc).unwrap());
        match (all, staged, other) {
            (Some(x), Some(y), Some(z)) => {
                prop_assert!(same_set(&x, &y));
                prop_assert!(same_set(&x, &z));
            }
            (None, None, None) => {}
            other => prop_assert!(false, "inconsistent emptiness: {:?}", other),
        }
    }

    #[test]
    fn lexmax_of_intersection_is_lower(s in prop::collection::vec(polygon(), 1..=4)) {
        if let Some(common) = intersect_bodies(&s).unwrap() {
            let top = lexmax_body(&common);
            for body in &s {
                prop_assert!(top <= lexmax_body(body));
                prop_assert!(body_contains_point(body, &top));
            }
        }
    }

    #[test]
    fn helly_in_the_plane(f in polygon_family(6)) {
        let bodies = f.bodies();
        let triples_meet = (0..f.len())
            .combinations(3.min(f.len()))
            .all(|t| intersect_bodies(&t.iter().map(|&i| bodies[i].clone()).collect::<Vec<_>>()).unwrap().is_some());
        if triples_meet {
            prop_assert!(intersect_bodies(bodies).unwrap().is_some());
        }
    }

    #[test]
    fn helly_on_the_line(f in interval_family(8)) {
        let pairs_meet = (0..f.len()).tuple_combinations().all(|(i, j)| intersect_pair(f.get(i), f.get(j)).unwrap().is_some());
        prop_assert_eq!(pairs_meet, intersect_bodies(f.bodies()).unwrap().is_some());
    }

    #[test]
    fn max_r_is_monotone(f in interval_family(7), p in 2usize..=7, q in 1usize..=7) {
        prop_assume!(q <= p && p <= f.len());
        let r = max_r(&f, p, q).unwrap().max_r;
        prop_assert!(r <= binom(p as i64, q as i64));
        if r >= BigUint::from(2u32) {
            prop_assert!(satisfies_pqr(&f, p, q, r.clone() - 1u32).unwrap());
        }
        if r >= BigUint::from(1u32) {
            prop_assert!(satisfies_pqr(&f, p, q, r.clone()).unwrap());
            prop_assert!(!satisfies_pqr(&f, p, q, r.clone() + 1u32).unwrap());
            if p < f.len() {
                prop_assert!(satisfies_pqr(&f, p + 1, q, r).unwrap());
            }
        }
    }

    #[test]
    fn witness_attains_max_r(f in polygon_family(6), p in 2usize..=6, q in 1usize..=6) {
        prop_assume!(q <= p && p <= f.len());
        let rep = max_r(&f, p, q).unwrap();
        prop_assert_eq!(rep.witness_subset.len(), p);
        let count = rep
            .witness_subset
            .iter()
            .copied()
            .combinations(q)
            .filter(|t| intersect_bodies(&t.iter().map(|&i| f.get(i).clone()).collect::<Vec<_>>()).unwrap().is_some())
            .count();
        prop_assert_eq!(BigUint::from(count), rep.max_r);
    }

    #[test]
    fn kalai_consistency(f in polygon_family(7)) {
        let n = f.len();
        let faces = face_counts(&f, n).unwrap();
        for s in 0..n.saturating_sub(2) {
            if faces[2 + s] == 0 {
                for q in 1..=n {
                    prop_assert!(BigUint::from(faces[q - 1]) <= kalai_bound(n as u64, q as u64, s as u64, 2));
                }
            }
        }
    }

    #[test]
    fn lemma_r0_is_kalai_plus_one(p in 3u64..=20, q in 2u64..=20, d in 1u64..=4, f in 1u64..=10) {
        prop_assume!(q <= p && q > d && f < p / d);
        let t = lemma_r0_threshold(p, q, d, f).unwrap().threshold_r;
        prop_assert_eq!(t, kalai_bound(p, q, p - f - d, d) + 1u32);
    }

    #[test]
    fn implied_q_holds(f in polygon_family(6)) {
        for p in 3..=f.len() {
            for q in 3..=p {
                let r = max_r(&f, p, q).unwrap().max_r;
                if r >= BigUint::from(1u32) {
                    let q2 = implied_q(p as u64, q as u64, &r, 2).unwrap() as usize;
                    prop_assert!(satisfies_pqr(&f, p, q2, 1u32).unwrap());
                }
            }
        }
    }

    #[test]
    fn solvers_return_sound_certificates(f in polygon_family(7)) {
        let set = branch_and_bound_piercing(&f, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(set.certified);
        prop_assert!(pierces(&f, &set.points));
    }

    #[test]
    fn greedy_matches_exact_on_intervals(f in interval_family(9)) {
        let g = greedy_interval_piercing(&f).unwrap();
        let e = branch_and_bound_piercing(&f, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert!(pierces(&f, &g.points));
        prop_assert_eq!(g.len(), e.len());
    }

    #[test]
    fn hd_pierce_within_bound(f in polygon_family(6)) {
        let tau = min_piercing(&f).unwrap().len();
        for p in 3..=f.len() {
            for q in (p / 2 + 2)..=p {
                if !satisfies_pqr(&f, p, q, 1u32).unwrap() {
                    continue;
                }
                let set = hd_pierce(&f, p, q).unwrap();
                prop_assert!(set.certified && pierces(&f, &set.points));
                prop_assert!(set.len() <= p - q + 1);
                prop_assert!(tau <= set.len());
            }
        }
    }

    #[test]
    fn ms_line_predicate(f in polygon_family(6)) {
        let w = ms_line(&f).unwrap();
        for c in f.bodies() {
            let both = intersect_pair(f.get(w.a_index), c).unwrap().is_some()
                && intersect_pair(f.get(w.b_index), c).unwrap().is_some();
            prop_assert!(!both || line_meets_body(&w.line, c));
        }
    }
}

#[test]
fn extremal_family_is_tight() {
    for p in 2..=8usize {
        for k in 0..=p - 2 {
            let f = extremal_dim1(p, k).unwrap();
            assert_eq!(min_piercing(&f).unwrap().len(), k + 2);
            for q in 2..=p.min(p - k) {
                if k + q < p {
                    let t = pqr_core::bounds::dim1_threshold(p as u64, q as u64, k as u64)
                        .unwrap()
                        .threshold_r;
                    assert_eq!(
                        max_r(&f, p, q).unwrap().max_r + 1u32,
                        t,
                        "p={p} q={q} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn disjoint_plus_container_piercing() {
    for dim in 1..=2 {
        for a in 0..=5 {
            for b in 0..=3 {
                if a + b == 0 {
                    continue;
                }
                let f = disjoint_plus_container(a, b, dim).unwrap();
                assert_eq!(
                    min_piercing(&f).unwrap().len(),
                    a.max(1),
                    "a={a} b={b} dim={dim}"
                );
                let top = lexmax_body(f.get(f.len() - 1));
                assert!(body_contains_point(f.get(f.len() - 1), &top));
            }
        }
    }
    // all bodies are valid convex sets
    let f = disjoint_plus_container(3, 2, 2).unwrap();
    for body in f.bodies() {
        let ConvexBody::Polygon(poly) = body else {
            panic!()
        };
        assert_eq!(&ConvexPolygon::new(poly.vertices().to_vec()).unwrap(), poly);
    }
    assert!(body_contains_point(f.get(4), &Point::new(int(1), int(1))));
}
