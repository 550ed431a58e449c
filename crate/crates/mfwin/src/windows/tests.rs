use proptest::prelude::*;

use super::*;
use crate::exactalg::{Field, Poly};

fn ws(v: &[Weight]) -> WeightSet {
    v.iter().copied().collect()
}

#[test]
fn window_regions_for_small_cases() {
    let r = window_regions(4, 1).unwrap();
    assert!(r.s_plus.contains((2, 2)));
    assert!(!r.s_plus.contains((3, 1)));
    assert!(r.s_plus.contains((2, 0)));
    assert!(!r.s_plus.contains((3, 0)));
    assert!(r.s_minus.contains((1, 0)));
    assert!(!r.s_minus.contains((1, 1)));
    assert!(!r.s_minus.is_bounded());
    assert!(r.s_minus.enumerate().is_err());
    assert!(window_regions(4, 0).unwrap().s_minus_res.enumerate().unwrap().is_empty());

    let odd = window_regions(3, 0).unwrap().s_plus.enumerate().unwrap();
    assert_eq!(odd.len(), 9);
    assert!(odd.is_sigma_symmetric());
    assert!(odd.iter().all(|(i, j)| (0..=5).contains(&(i + j)) && (i - j).abs() <= 1));
    let even = window_regions(4, 0).unwrap().s_plus.enumerate().unwrap();
    // Sums 0..3 with width <= 2, then sums 4..7 with width <= 1.
    assert_eq!(even.len(), 3 + 2 + 3 + 2 + 1 + 2 + 1 + 2);
    assert_eq!(r.s_plus.describe().len(), 2);
}

#[test]
fn orders_on_characters() {
    assert!(leq_stratum((0, 0), (1, 0), Stratum::XLocus));
    assert!(leq_stratum((0, 0), (-1, -1), Stratum::XLocus));
    assert!(leq_stratum((0, 0), (0, -1), Stratum::XLocus));
    assert!(leq_stratum((0, 0), (0, -3), Stratum::XLocus));
    assert!(!leq_stratum((0, 0), (0, 1), Stratum::XLocus));
    assert!(!leq_stratum((0, 0), (-1, 0), Stratum::XLocus));
    assert!(leq_stratum((0, 0), (1, 2), Stratum::Full));
    assert!(!leq_stratum((0, 0), (0, -3), Stratum::Full));
    assert!(leq_stratum((2, 3), (2, 3), Stratum::Full));
}

#[test]
fn good_sets() {
    assert!(is_good(&ws(&[(0, 3)]), 3));
    assert!(!is_good(&ws(&[(0, 3), (3, 0)]), 3));
    assert!(!is_good(&ws(&[(1, 1)]), 3));
    // sigma(2,0) - (2,0) = (-2,2) and (0,2) - (i,0) never hits (2,0).
    assert!(is_good(&ws(&[(2, 0)]).negated(), 3));
    assert!(is_good(&ws(&[(0, 4), (1, 3)]), 4));
}

#[test]
fn extremal_subsets() {
    // On the X-locus (0,1) lies below (0,0): the difference is (1,0) + (-1,-1).
    assert!(!is_minimal_subset(&ws(&[(0, 0)]), &ws(&[(0, 0), (0, 1)]), Stratum::XLocus));
    let all = ws(&[(0, 0), (1, 0)]);
    assert!(is_minimal_subset(&ws(&[(0, 0)]), &all, Stratum::XLocus));
    assert!(!is_minimal_subset(&ws(&[(1, 0)]), &all, Stratum::XLocus));
    assert!(is_maximal_subset(&ws(&[(1, 0)]), &all, Stratum::XLocus));
    assert!(!is_maximal_subset(&ws(&[(0, 0)]), &all, Stratum::XLocus));
}

#[test]
fn strip_shifts_are_diagonal() {
    let (out, shifts) = strip_normalize(&ws(&[(4, 4), (-1, -2)]), 3);
    assert_eq!(out, ws(&[(2, 2), (1, 0)]));
    assert_eq!(shifts.len(), 2);
    assert!(out.iter().all(|(i, j)| (0..=5).contains(&(i + j))));
}

#[test]
fn reduction_of_the_two_point_set() {
    let (out, trace) = reduce_to_window(&ws(&[(0, 3), (3, 0)]), 3).unwrap();
    assert_eq!(trace.steps[0].kind, StepKind::Minimal);
    assert_eq!(trace.steps[0].s, ws(&[(0, 3)]));
    assert_eq!(trace.steps[0].result, ws(&[(0, 0), (0, 1), (1, 0), (0, 2), (2, 0)]));
    assert_eq!(trace.steps[1].kind, StepKind::Maximal);
    assert_eq!(trace.steps[1].s, ws(&[(2, 0)]));
    assert_eq!(
        trace.steps[1].result,
        ws(&[(0, 0), (0, 1), (1, 0), (2, 1), (1, 2), (2, 2), (2, 3), (3, 2)])
    );
    assert_eq!(trace.steps.len(), 2);
    assert!(trace.steps.iter().all(|s| s.good && s.extremal));
    assert!(out.is_subset_of_region(&window_regions(3, 0).unwrap().s_plus));
}

#[test]
fn reduction_rejects_asymmetric_input() {
    assert!(matches!(reduce_to_window(&ws(&[(0, 3)]), 3), Err(Error::NotSymmetric(_))));
    let (out, trace) = reduce_to_window(&ws(&[(0, 1), (1, 0)]), 3).unwrap();
    assert!(trace.steps.is_empty());
    assert_eq!(out, ws(&[(0, 1), (1, 0)]));
}

#[test]
fn even_reduction_leaves_the_upper_strip() {
    let (out, trace) = reduce_to_window(&ws(&[(1, 3), (3, 1)]), 4).unwrap();
    assert!(out.is_subset_of_region(&window_regions(4, 0).unwrap().s_plus));
    assert!(trace.steps.iter().all(|s| s.good && s.extremal));
}

#[test]
fn exceptional_counts() {
    let c = enumerate_exceptional(3, 0).unwrap();
    assert_eq!(c.objects.len(), 9);
    assert!(c.is_exceptional());
    let c = enumerate_exceptional(3, 2).unwrap();
    assert_eq!(
        c.objects,
        vec![
            IrrepLabel::Diagonal { i: 2, plus: false },
            IrrepLabel::Diagonal { i: 2, plus: true },
            IrrepLabel::off_diagonal(3, 2),
        ]
    );
    assert_eq!(c.edges, vec![(0, 2), (1, 2)]);
    assert!(c.is_exceptional());
    assert!(enumerate_exceptional(5, 5).unwrap().objects.is_empty());
    assert!(enumerate_exceptional(2, 3).unwrap().objects.is_empty());
    assert!(enumerate_exceptional(3, 3).unwrap().objects.is_empty());
}

#[test]
fn invariant_hom_dimensions() {
    let p0 = IrrepLabel::Diagonal { i: 0, plus: true };
    let m0 = IrrepLabel::Diagonal { i: 0, plus: false };
    let p1 = IrrepLabel::Diagonal { i: 1, plus: true };
    let m1 = IrrepLabel::Diagonal { i: 1, plus: false };
    let o = IrrepLabel::off_diagonal(1, 0);
    assert_eq!(invariant_hom_dim(&p0, &o, 3), 3);
    assert_eq!(invariant_hom_dim(&p0, &p1, 3), 6);
    assert_eq!(invariant_hom_dim(&p0, &m1, 3), 3);
    assert_eq!(invariant_hom_dim(&p0, &m0, 3), 0);
    assert_eq!(invariant_hom_dim(&o, &p0, 3), 0);
    assert_eq!(invariant_hom_dim(&o, &o, 3), 1);
    // Monomials of bidegree (1,1) in one pair: just xy, fixed with sign +.
    assert_eq!(invariant_hom_dim(&p0, &p1, 1), 1);
    assert_eq!(invariant_hom_dim(&p0, &m1, 1), 0);
}

#[test]
fn hom_vanishing_in_the_collections() {
    for (n, l) in [(3, 0), (3, 2), (4, 1), (5, 5)] {
        let c = enumerate_exceptional(n, l).unwrap();
        let order = c.exceptional_order();
        for (a, x) in order.iter().enumerate() {
            for y in &order[..a] {
                assert_eq!(invariant_hom_dim(x, y, n), 0, "{x} -> {y} for n={n}");
            }
            assert_eq!(invariant_hom_dim(x, x, n), 1);
        }
    }
}

fn two_term(stratum: Stratum, entry: &str, target: Weight) -> FreeComplex {
    let ring = stratum_ring(1, 1, stratum, Field::Rational).unwrap();
    let z = Poly::zero(&ring);
    let e = Poly::parse(&ring, entry).unwrap();
    FreeComplex::new(&ring, vec![(0, 0), target], vec![0, 1], vec![vec![z.clone(), z.clone()], vec![e, z]]).unwrap()
}

#[test]
fn truncation_by_closed_sets() {
    let c = two_term(Stratum::XLocus, "x1", (1, 0));
    let t = weight_truncate(&c, &Closure::Up(ws(&[(1, 0)])), Stratum::XLocus).unwrap();
    assert_eq!((t.sub_indices.clone(), t.quotient_indices.clone()), (vec![1], vec![0]));
    assert_eq!(t.sub.weights, vec![(1, 0)]);
    let t = weight_truncate(&c, &Closure::Down(ws(&[(0, 0)])), Stratum::XLocus).unwrap();
    assert_eq!((t.sub_indices, t.quotient_indices), (vec![1], vec![0]));

    // (-1,-1) is above (0,0) on the X-locus but not in the product order.
    let c = two_term(Stratum::XLocus, "p1", (-1, -1));
    assert!(weight_truncate(&c, &Closure::Up(ws(&[(0, 0)])), Stratum::XLocus).is_ok());
    assert!(matches!(
        weight_truncate(&c, &Closure::Up(ws(&[(0, 0)])), Stratum::Full),
        Err(Error::NotClosed(_))
    ));
    assert!(Closure::Up(ws(&[(0, 0)])).contains((0, -3), Stratum::XLocus));
    assert!(!Closure::Down(ws(&[(0, 0)])).contains((0, -3), Stratum::XLocus));
}

#[test]
fn map_into_the_lower_weight_is_a_subcomplex() {
    // On the X-locus (0,0) <= (0,-3), and x1^3 p1^3 is a map O(0,0) -> O(0,-3);
    // the up-closure of (0,0) then keeps both summands, that of (0,-3) only
    // the target.
    let ring = stratum_ring(1, 1, Stratum::XLocus, Field::Rational).unwrap();
    let z = Poly::zero(&ring);
    let e = Poly::parse(&ring, "x1^3*p1^3").unwrap();
    let c = FreeComplex::new(
        &ring,
        vec![(0, 0), (0, -3)],
        vec![0, 1],
        vec![vec![z.clone(), z.clone()], vec![e.clone(), z.clone()]],
    )
    .unwrap();
    let t = weight_truncate(&c, &Closure::Up(ws(&[(0, -3)])), Stratum::XLocus).unwrap();
    assert_eq!((t.sub_indices, t.quotient_indices), (vec![1], vec![0]));
    let t = weight_truncate(&c, &Closure::Up(ws(&[(0, 0)])), Stratum::XLocus).unwrap();
    assert_eq!(t.sub.rank(), 2);
    // No section of weight (0,3) exists, so O(0,-3) -> O(0,0) is zero.
    let bad = FreeComplex::new(&ring, vec![(0, -3), (0, 0)], vec![0, 1], vec![vec![z.clone(), z.clone()], vec![e, z]]);
    assert!(matches!(bad, Err(Error::Inhomogeneous(_))));
}

#[test]
fn koszul_truncation_at_the_top_weight() {
    let ring = stratum_ring(3, 0, Stratum::Full, Field::Rational).unwrap();
    let ys: Vec<Poly> = ["y1", "y2", "y3"].iter().map(|v| Poly::parse(&ring, v).unwrap()).collect();
    let k = FreeComplex::koszul(&ring, &ys, (2, 2)).unwrap();
    assert_eq!(k.rank(), 8);
    let t = weight_truncate(&k, &Closure::Up(ws(&[(2, 2)])), Stratum::Full).unwrap();
    assert_eq!(t.sub.weights, vec![(2, 2)]);
    assert_eq!(t.quotient.rank(), 7);
    let w = weights_at_origin(&k).unwrap();
    assert_eq!(w.into_iter().collect::<Vec<_>>(), vec![((2, -1), 1), ((2, 0), 3), ((2, 1), 3), ((2, 2), 1)]);
}

#[test]
fn strip_normalization_of_a_diagonal_point() {
    let (out, trace) = reduce_to_window(&ws(&[(4, 4)]), 3).unwrap();
    assert_eq!(out, ws(&[(2, 2)]));
    assert_eq!(trace.steps.len(), 1);
    assert_eq!(trace.steps[0].kind, StepKind::Strip { shifts: vec![((4, 4), 2)] });
    assert!(is_good(&ws(&[(1, 2), (0, 3)]), 3));
}

#[test]
fn free_complex_validation() {
    let ring = stratum_ring(1, 0, Stratum::Full, Field::Rational).unwrap();
    let z = Poly::zero(&ring);
    let y = Poly::parse(&ring, "y1").unwrap();
    let bad = FreeComplex::new(&ring, vec![(0, 0), (1, 0)], vec![0, 1], vec![vec![z.clone(), z.clone()], vec![y, z]]);
    assert!(matches!(bad, Err(Error::Inhomogeneous(_))));
}

#[test]
fn fibre_at_the_origin() {
    let ring = stratum_ring(1, 0, Stratum::Full, Field::Rational).unwrap();
    let z = Poly::zero(&ring);
    let one = Poly::one(&ring);
    let x = Poly::parse(&ring, "x1").unwrap();
    let c = FreeComplex::new(
        &ring,
        vec![(0, 0), (0, 0), (1, 0)],
        vec![0, 1, 1],
        vec![vec![z.clone(), z.clone(), z.clone()], vec![one, z.clone(), z.clone()], vec![x, z.clone(), z]],
    )
    .unwrap();
    let w = weights_at_origin(&c).unwrap();
    assert_eq!(w.into_iter().collect::<Vec<_>>(), vec![((1, 0), 1)]);
}

fn symmetric_strip_set(n: usize) -> impl Strategy<Value = WeightSet> {
    let top = 2 * n as i64 - 1;
    let wide = 2 * n as i64;
    prop::collection::vec((0..=top, -wide..=wide), 1..6).prop_filter_map("parity", move |v| {
        let pts: Vec<Weight> = v
            .into_iter()
            .filter(|(s, d)| (s + d).rem_euclid(2) == 0)
            .map(|(s, d)| ((s + d) / 2, (s - d) / 2))
            .collect();
        if pts.is_empty() {
            return None;
        }
        let set: WeightSet = pts.into_iter().collect();
        Some(set.union(&set.sigma()))
    })
}

fn check_reduction(wt: &WeightSet, n: usize) -> std::result::Result<(), TestCaseError> {
    let (out, trace) = reduce_to_window(wt, n).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(out.is_subset_of_region(&window_regions(n, 0).unwrap().s_plus), "{wt} -> {out}");
    prop_assert!(out.is_sigma_symmetric());
    for s in &trace.steps {
        prop_assert!(s.good, "step {:?} not good for {wt}", s.s);
        prop_assert!(s.extremal, "step {:?} not extremal for {wt}", s.s);
        prop_assert!(s.result.is_sigma_symmetric());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reduction_lands_in_the_window_n3(wt in symmetric_strip_set(3)) {
        check_reduction(&wt, 3)?;
    }

    #[test]
    fn reduction_lands_in_the_window_n4(wt in symmetric_strip_set(4)) {
        check_reduction(&wt, 4)?;
    }

    #[test]
    fn reduction_lands_in_the_window_n5(wt in symmetric_strip_set(5)) {
        check_reduction(&wt, 5)?;
    }

    #[test]
    fn strip_normalization_preserves_symmetry(v in prop::collection::vec((-20i64..20, -20i64..20), 1..8)) {
        let set: WeightSet = v.into_iter().collect();
        let set = set.union(&set.sigma());
        let (out, _) = strip_normalize(&set, 3);
        prop_assert!(out.is_sigma_symmetric());
        prop_assert!(out.iter().all(|(i, j)| (0..=5).contains(&(i + j))));
    }

    #[test]
    fn maximal_weights_survive_at_the_origin(
        seq in prop::collection::vec((0usize..4, 1u32..3), 1..4),
        top in (-3i64..3, -3i64..3),
    ) {
        let ring = stratum_ring(2, 0, Stratum::Full, Field::Rational).unwrap();
        let names = ["x1", "x2", "y1", "y2"];
        let fs: Vec<Poly> = seq.iter().map(|&(v, e)| Poly::parse(&ring, &format!("{}^{e}", names[v])).unwrap()).collect();
        let k = FreeComplex::koszul(&ring, &fs, top).unwrap();
        let fibre = weights_at_origin(&k).unwrap();
        let all: WeightSet = k.weights.iter().copied().collect();
        for w in all.iter() {
            let maximal = all.iter().all(|v| v == w || !leq_stratum(w, v, Stratum::Full));
            if maximal {
                prop_assert!(fibre.get(&w).copied().unwrap_or(0) > 0, "{w:?} missing in {fibre:?}");
            }
        }
        prop_assert_eq!(fibre.values().sum::<usize>(), k.rank());
    }

    #[test]
    fn up_closures_of_koszul_complexes_are_subcomplexes(
        seq in prop::collection::vec((0usize..4, 1u32..3), 1..4),
        gens in prop::collection::vec((-4i64..2, -4i64..2), 1..3),
    ) {
        let ring = stratum_ring(2, 0, Stratum::Full, Field::Rational).unwrap();
        let names = ["x1", "x2", "y1", "y2"];
        let fs: Vec<Poly> = seq.iter().map(|&(v, e)| Poly::parse(&ring, &format!("{}^{e}", names[v])).unwrap()).collect();
        let k = FreeComplex::koszul(&ring, &fs, (0, 0)).unwrap();
        let t = weight_truncate(&k, &Closure::Up(gens.into_iter().collect()), Stratum::Full).unwrap();
        prop_assert!(k.is_subcomplex(&t.sub_indices));
        prop_assert_eq!(t.sub.rank() + t.quotient.rank(), k.rank());
    }

    #[test]
    fn orders_are_partial_orders(a in (-6i64..6, -6i64..6), b in (-6i64..6, -6i64..6), c in (-6i64..6, -6i64..6)) {
        for st in [Stratum::Full, Stratum::XLocus] {
            prop_assert!(leq_stratum(a, a, st));
            if leq_stratum(a, b, st) && leq_stratum(b, a, st) {
                prop_assert_eq!(a, b);
            }
            if leq_stratum(a, b, st) && leq_stratum(b, c, st) {
                prop_assert!(leq_stratum(a, c, st));
            }
        }
    }
}
