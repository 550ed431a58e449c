use super::*;
use crate::exactalg::Field;
use crate::groebner::GroebnerBasis;
use crate::mf::{corank2_ring, koszul_with, m1, m2, q_ideal, sigma_on_hom, MatrixFactorization};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(ring: &RingRef, s: &str) -> Poly {
    Poly::parse(ring, s).unwrap()
}

fn q_gb(ring: &RingRef) -> GroebnerBasis {
    BaseRing::quotient(ring, q_ideal(ring).unwrap())
        .ideal_gb()
        .unwrap()
}

fn congruent(gb: &GroebnerBasis, a: &Poly, b: &Poly) -> bool {
    gb.reduce_poly(&(a - b)).unwrap().is_zero()
}

/// Sign with which a block of the dual of M1 (or M2, with `pre` = "σ")
/// restricted to Y1 agrees with a hand computation, if it does: `dr` has rows
/// e, f2, f3 and columns f1, g1, g2 of the dual; `dl` the transposed index sets.
fn restricted_dual_signs(
    ring: &RingRef,
    dr: [[&str; 3]; 3],
    dl: [[&str; 3]; 3],
    m: &MatrixFactorization,
    pre: &str,
) -> (Option<i64>, Option<i64>) {
    let dual = m.dual();
    let idx = |l: &str| dual.index_of(&format!("{pre}{l}^v")).unwrap();
    let rows = ["e", "f2", "f3"].map(idx);
    let cols = ["f1", "g1", "g2"].map(idx);
    let gb = q_gb(ring);
    let sign = |ours: &dyn Fn(usize, usize) -> Poly, hand: &[[&str; 3]; 3]| {
        [1, -1].into_iter().find(|&e| {
            (0..3).all(|i| {
                (0..3).all(|j| {
                    let o = if e == 1 { ours(i, j) } else { -&ours(i, j) };
                    congruent(&gb, &o, &p(ring, hand[i][j]))
                })
            })
        })
    };
    (
        sign(&|i, j| dual.d[rows[i]][cols[j]].clone(), &dr),
        sign(&|i, j| dual.d[cols[i]][rows[j]].clone(), &dl),
    )
}

#[test]
fn restricted_duals_match_hand_computation() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let b = m2(&ring).unwrap();
    let r1 = restricted_dual_signs(
        &ring,
        [["0", "y1", "y2"], ["x1", "-u", "t"], ["x2", "t", "-s"]],
        [
            ["0", "s*y1 + t*y2", "t*y1 + u*y2"],
            ["0", "-x2*y2", "x1*y2"],
            ["0", "x2*y1", "-x1*y1"],
        ],
        &a,
        "",
    );
    assert_eq!(r1, (Some(-1), Some(1)));
    // The twist by -1 swaps parities, so the sign pattern of the dual flips.
    let r2 = restricted_dual_signs(
        &ring,
        [["0", "x1", "x2"], ["y1", "-u", "t"], ["y2", "t", "-s"]],
        [
            ["0", "0", "0"],
            ["s*y1 + t*y2", "-x2*y2", "x2*y1"],
            ["t*y1 + u*y2", "x1*y2", "-x1*y1"],
        ],
        &b,
        "σ",
    );
    assert_eq!(r2, (Some(1), Some(-1)));
}

fn basis_vector(ring: &RingRef, c: &CohomologyModule, coeffs: &[(&str, &str)]) -> Vec<Poly> {
    let mut v = vec![Poly::zero(ring); c.ambient.len()];
    for (l, s) in coeffs {
        let k = c.ambient_labels.iter().position(|x| x == l).unwrap();
        v[k] = p(ring, s);
    }
    v
}

fn s_presentation(
    split: &BaseSplit,
    labels: &[&str],
    weights: &[i64],
    rels: &[&[&str]],
) -> SubquotientPresentation {
    let s = &split.s_ring;
    presentation_from_relations(
        &BaseRing::polynomial(s),
        labels,
        weights.iter().map(|&w| split.s_degree(w)).collect(),
        rels.iter()
            .map(|r| r.iter().map(|x| p(s, x)).collect())
            .collect(),
    )
}

#[test]
fn endomorphisms_of_the_first_summand_restricted() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let dual = a.dual();
    let q = q_ideal(&ring).unwrap();
    let h = dg_cohomology(&dual, Some(&q)).unwrap();
    let e = dual.index_of("e^v").unwrap();
    let par = dual.gens[e].parity(&ring.grading);
    assert!(h.half(par + 1).is_zero());
    let c = h.half(par);
    let ev = basis_vector(&ring, c, &[("e^v", "1")]);
    let c = c.with_generators(&dual, &[("e^v", ev)]).unwrap();
    let expected = presentation_from_relations(
        &c.presentation.base,
        &["e^v"],
        vec![c.presentation.gen_degrees[0].clone()],
        [
            "x1*y1",
            "x1*y2",
            "x2*y1",
            "x2*y2",
            "t*y1 + u*y2",
            "s*y1 + t*y2",
        ]
        .iter()
        .map(|s| vec![p(&ring, s)])
        .collect(),
    );
    assert!(same_relations_up_to(&c.presentation, &expected, &[0], &[1]).unwrap());
    let inv = invariant_degree_zero(&c).unwrap();
    let split = BaseSplit::new(&ring).unwrap();
    let target = s_presentation(&split, &["e^v"], &[0], &[&["s*u - t^2"]]);
    assert!(same_relations_up_to(&inv, &target, &[0], &[1]).unwrap());
}

#[test]
fn maps_from_the_second_summand_restricted() {
    let ring = corank2_ring(2).unwrap();
    let b = m2(&ring).unwrap();
    let dual = b.dual();
    let q = q_ideal(&ring).unwrap();
    let h = dg_cohomology(&dual, Some(&q)).unwrap();
    let g1 = dual.index_of("σg1^v").unwrap();
    let par = dual.gens[g1].parity(&ring.grading);
    assert!(h.half(par + 1).is_zero());
    let c = h.half(par);
    let gens = [
        (
            "h1",
            basis_vector(&ring, c, &[("σg1^v", "s"), ("σg2^v", "t")]),
        ),
        (
            "h2",
            basis_vector(&ring, c, &[("σg1^v", "t"), ("σg2^v", "u")]),
        ),
        (
            "h3",
            basis_vector(&ring, c, &[("σg1^v", "x2"), ("σg2^v", "-x1")]),
        ),
    ];
    let c = c.with_generators(&dual, &gens).unwrap();
    // y_k h3 is exact.
    for y in ["y1", "y2"] {
        let v: Vec<Poly> = gens[2].1.iter().map(|x| x * &p(&ring, y)).collect();
        assert!(c.is_exact(&v).unwrap());
    }
    let inv = invariant_degree_zero(&c).unwrap();
    assert_eq!(inv.labels, vec!["h1", "h2"]);
    let split = BaseSplit::new(&ring).unwrap();
    let ours = s_presentation(
        &split,
        &["h1", "h2"],
        &[2, 2],
        &[&["t", "-s"], &["u", "-t"]],
    );
    assert!(same_relations_up_to(&inv, &ours, &[0, 1], &[1, 1]).unwrap());
    // The relations ((s,-t),(t,-u)) describe the same module with h1, h2 swapped.
    let swapped = s_presentation(
        &split,
        &["h1", "h2"],
        &[2, 2],
        &[&["s", "-t"], &["t", "-u"]],
    );
    assert!(same_relations_up_to(&inv, &swapped, &[1, 0], &[1, 1]).unwrap());
    assert!(!same_relations_up_to(&inv, &swapped, &[0, 1], &[1, 1]).unwrap());
}

#[test]
fn koszul_complex_of_a_regular_sequence() {
    let ring = corank2_ring(2).unwrap();
    let x: Vec<Poly> = ["x1", "x2"].iter().map(|s| p(&ring, s)).collect();
    let z = vec![Poly::zero(&ring); 2];
    let k = koszul_with(&x, &z, Some(1)).unwrap();
    let h = dg_cohomology(&k, None).unwrap();
    let top = k.index_of(&k.gens[0].label).unwrap();
    let par = k.gens[top].parity(&ring.grading);
    assert!(h.half(par + 1).is_zero());
    let c = h.half(par);
    assert_eq!(c.presentation.num_generators(), 1);
    let expected = presentation_from_relations(
        &c.presentation.base,
        &["1"],
        vec![c.presentation.gen_degrees[0].clone()],
        vec![vec![x[0].clone()], vec![x[1].clone()]],
    );
    assert!(same_relations_up_to(&c.presentation, &expected, &[0], &[1]).unwrap());
}

#[test]
fn lifts_restrict_to_the_chosen_cocycles() {
    let t = corank2_thetas().unwrap();
    let gb = q_gb(&t.ring);
    let e = t.m1.index_of("e").unwrap();
    for (phi, h) in t.phi.iter().zip(h_rows(&t.ring, &t.m2).unwrap()) {
        assert!(t.hom_21.is_closed(0, phi));
        for (a, b) in phi[e].iter().zip(&h) {
            assert!(congruent(&gb, a, b));
        }
    }
    let sk = t.k.sigma.clone().unwrap();
    for th in &t.theta {
        assert!(t.hom_k.is_closed(0, th));
        assert_eq!(&sigma_on_hom(&t.ring, &sk, &sk, th).unwrap(), th);
    }
}

#[test]
fn compositions_of_lifts_on_the_unit() {
    let t = corank2_thetas().unwrap();
    let gb = q_gb(&t.ring);
    let e = t.m1.index_of("e").unwrap();
    let expect = [["s", "t"], ["t", "u"]];
    for i in 0..2 {
        for j in 0..2 {
            let prod = crate::mf::mat_mul(&t.ring, &t.theta[i], &t.theta[j]);
            assert!(
                congruent(&gb, &prod[e][e], &p(&t.ring, expect[i][j])),
                "theta{} theta{}",
                i + 1,
                j + 1
            );
        }
    }
}

#[test]
fn corank2_end_algebra_matches_target() {
    let (t, alg) = corank2_end_algebra(DEFAULT_CAP).unwrap();
    let pres = &alg.presentation;
    assert!(pres.commutative);
    let values: Vec<(&str, &str, &str)> = pres
        .table
        .iter()
        .map(|e| (e.left.as_str(), e.right.as_str(), e.value.as_str()))
        .collect();
    assert_eq!(
        values,
        vec![
            ("theta1", "theta1", "s"),
            ("theta1", "theta2", "t"),
            ("theta2", "theta1", "t"),
            ("theta2", "theta2", "u"),
        ]
    );
    let target = corank2_target(&Field::Rational, &t.ring).unwrap();
    let v = check_presentation(pres, &target, DEFAULT_CAP).unwrap();
    assert!(v.matches, "{v}");
    let dims: Vec<usize> = v.dims_computed.values().copied().collect();
    assert_eq!(dims, (1..=11).collect::<Vec<_>>());
}

#[test]
fn wrong_target_fails_in_degree_two() {
    let (t, alg) = corank2_end_algebra(DEFAULT_CAP).unwrap();
    let base = base_specs(&t.ring);
    let wrong = AlgebraPresentation::from_strings(
        &Field::Rational,
        &base,
        &[("theta1", 1), ("theta2", 1)],
        &[
            "theta1^2 - t",
            "theta1*theta2 - t",
            "theta2^2 - u",
            "s*u - t^2",
        ],
    )
    .unwrap();
    let v = check_presentation(&alg.presentation, &wrong, DEFAULT_CAP).unwrap();
    assert!(!v.matches);
    assert_eq!(v.mismatches.iter().map(|m| m.degree).min(), Some(2));
}

#[test]
fn so2_generator_has_the_coordinate_ring_of_the_locus() {
    let (alg, target) = so2_end_algebra(3, 2, DEFAULT_CAP).unwrap();
    assert!(alg.presentation.generators.is_empty());
    let v = check_presentation(&alg.presentation, &target, DEFAULT_CAP).unwrap();
    assert!(v.matches, "{v}");
    for (w, d) in &v.dims_computed {
        assert_eq!(*d as i64, if w % 2 == 0 { w + 1 } else { 0 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn perturbed_lifts_give_the_same_algebra(seed in any::<u64>()) {
        let t = corank2_thetas().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens = Vec::new();
        for (i, th) in t.theta.iter().enumerate() {
            let b = t.hom_k.random_boundary(1, &mut rng).unwrap();
            let pert: Vec<Vec<Poly>> =
                th.iter().zip(&b).map(|(x, y)| x.iter().zip(y).map(|(a, c)| a + c).collect()).collect();
            prop_assert!(t.hom_k.is_closed(0, &pert));
            gens.push((["theta1", "theta2"][i], pert));
        }
        let alg = crate::homalg::algebra_structure(&t.hom_k, &gens, 6).unwrap();
        let values: Vec<String> = alg.presentation.table.iter().map(|e| e.value.clone()).collect();
        prop_assert_eq!(values, vec!["s", "t", "t", "u"]);
    }
}
