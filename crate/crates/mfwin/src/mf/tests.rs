use super::*;
use crate::exactalg::{Field, RConvention};

fn mset(ws: &[i64]) -> WeightMultiset {
    WeightMultiset::from_weights(ws.iter().map(|&w| vec![w]))
}

fn origin(ring: &RingRef) -> Vec<(String, crate::exactalg::FieldElem)> {
    let g = &ring.grading;
    (0..g.nvars())
        .filter(|&i| g.is_base_var(i))
        .map(|i| (g.vars[i].name.clone(), ring.field.zero()))
        .collect()
}

fn graded_ranks(m: &MatrixFactorization) -> Vec<(Vec<i64>, i64, i64)> {
    let mut v: Vec<_> = m.gens.iter().map(|g| (g.chi.clone(), g.r, g.w)).collect();
    v.sort();
    v
}

#[test]
fn resolutions_validate() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    assert!(a.validate().ok);
    assert_eq!(a.w, potential(&ring, KernelVariant::So2));
    let b = m2(&ring).unwrap();
    assert!(b.validate().ok);
    assert_eq!(b.gens[0].chi, vec![-1]);
    let k = k2_prime(&ring).unwrap();
    assert!(k.validate().ok);
    assert!(k
        .sigma
        .as_ref()
        .unwrap()
        .signs
        .iter()
        .all(|&s| s == k.sigma.as_ref().unwrap().signs[0]));
}

#[test]
fn corrupted_entry_is_reported() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let bad = a.with_entry(0, 2, Poly::parse(&ring, "s*x1").unwrap());
    let rep = bad.validate();
    assert!(!rep.ok);
    assert!(rep
        .violations
        .iter()
        .all(|v| v.kind == ViolationKind::Square));
    assert!(rep
        .violations
        .iter()
        .any(|v| v.col == Some(2) || v.row == Some(2)));
    let inhom = a.with_entry(0, 2, Poly::parse(&ring, "s*x1 + x2").unwrap());
    assert!(inhom
        .validate()
        .violations
        .iter()
        .any(|v| v.kind == ViolationKind::Homogeneity && v.row == Some(0)));
}

#[test]
fn koszul_pair_and_dual() {
    let ring = local_ring(1, 0, Field::Rational).unwrap();
    let (x, y) = (
        Poly::var_named(&ring, "x1").unwrap(),
        Poly::var_named(&ring, "y1").unwrap(),
    );
    let f = koszul(std::slice::from_ref(&x), std::slice::from_ref(&y)).unwrap();
    assert!(f.validate().ok);
    assert_eq!(weights_at_point(&f, &[]).unwrap(), mset(&[-1, 0]));
    let dv = f.dual();
    assert!(dv.validate().ok);
    assert_eq!(dv.w, -&(&x * &y));
    assert_eq!(weights_at_point(&dv, &[]).unwrap(), mset(&[0, 1]));
    let z = koszul_with(std::slice::from_ref(&x), &[Poly::zero(&ring)], Some(1)).unwrap();
    assert!(z.validate().ok && z.w.is_zero());
    assert!(matches!(koszul(&[], &[]), Err(Error::Degenerate(_))));
    assert!(matches!(
        koszul(&[Poly::zero(&ring)], &[Poly::zero(&ring)]),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn tensor_of_koszul_pairs() {
    let ring = local_ring(2, 0, Field::Rational).unwrap();
    let v = |n: &str| Poly::var_named(&ring, n).unwrap();
    let a = koszul(&[v("x1")], &[v("y1")]).unwrap();
    let b = koszul(&[v("x2")], &[v("y2")]).unwrap();
    let t = tensor(&a, &b).unwrap();
    let k = koszul(&[v("x1"), v("x2")], &[v("y1"), v("y2")]).unwrap();
    assert!(t.validate().ok);
    assert_eq!(t.w, k.w);
    assert_eq!(graded_ranks(&t), graded_ranks(&k));
    let unit = MatrixFactorization::unit(&ring, &[2], a.c);
    let au = tensor(&a, &unit).unwrap();
    assert_eq!(au.d, a.d);
    assert_eq!(graded_ranks(&au), graded_ranks(&a.twist(&[2])));
}

#[test]
fn shift_and_twist() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let s2 = a.shift(2);
    assert_eq!(s2.d, a.d);
    assert!(s2.gens.iter().zip(&a.gens).all(|(p, q)| p.r == q.r + 2));
    let s1 = a.shift(1);
    assert!(s1.validate().ok);
    assert_eq!(s1.d[0][2], -&a.d[0][2]);
    assert!(a.twist(&[3]).validate().ok);
}

#[test]
fn hom_complex_squares_to_zero() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let b = m2(&ring).unwrap();
    let h = hom_dg(&b, &a).unwrap();
    assert!(h.validate().ok);
    assert!(h.w.is_zero());
    let e = hom_dg(&a, &a).unwrap();
    assert!(e.validate().ok);
    // The identity is closed.
    let n = a.rank();
    let id: Vec<Poly> = (0..n * n)
        .map(|i| {
            if i / n == i % n {
                Poly::one(&ring)
            } else {
                Poly::zero(&ring)
            }
        })
        .collect();
    for row in &e.d {
        let mut acc = Poly::zero(&ring);
        for (p, q) in row.iter().zip(&id) {
            acc = &acc + &(p * q);
        }
        assert!(acc.is_zero());
    }
    let other = koszul(
        &[Poly::var_named(&ring, "x1").unwrap()],
        &[Poly::var_named(&ring, "y1").unwrap()],
    )
    .unwrap();
    assert!(matches!(
        hom_dg(&a, &other),
        Err(Error::PotentialMismatch(_))
    ));
}

#[test]
fn weights_of_the_corank2_resolution() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    assert_eq!(
        weights_at_point(&a, &origin(&ring)).unwrap().support(),
        mset(&[-1, 0]).support()
    );
    let p = base_point(&ring, &[("s", 1), ("t", 0), ("u", 1)]);
    assert!(weights_at_point(&a, &p).unwrap().is_empty());
    let q = base_point(&ring, &[("s", 1), ("t", 1), ("u", 1)]);
    assert!(!weights_at_point(&a, &q).unwrap().is_empty());
    assert!(matches!(
        weights_at_point(&a, &[]),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn knorrer_weight_laws() {
    let ring = corank2_ring(4).unwrap();
    let a = m1(&ring).unwrap();
    let pt = origin(&ring);
    let wa = weights_at_point(&a, &pt).unwrap();
    let so2 = knorrer_so2_kernel(&ring, 3).unwrap();
    let t = tensor(&a, &so2).unwrap();
    assert!(t.validate().ok);
    assert_eq!(
        weights_at_point(&t, &pt).unwrap(),
        wa.convolve(&mset(&[-1, 0]))
    );
    let o2 = knorrer_o2_kernel(&ring, 3, 4).unwrap();
    assert!(o2.validate().ok);
    assert!(weights_at_point(&o2, &[]).is_err());
    let t2 = tensor(&a, &o2).unwrap();
    assert!(t2.validate().ok);
    assert_eq!(
        weights_at_point(&t2, &pt).unwrap(),
        wa.convolve(&mset(&[-1, 0, 0, 1]))
    );
}

#[test]
fn standard_models_validate() {
    for (n, corank, variant) in [
        (2, 2, KernelVariant::So2),
        (3, 2, KernelVariant::So2),
        (3, 2, KernelVariant::O2),
        (4, 2, KernelVariant::O2),
        (5, 2, KernelVariant::O2),
        (3, 1, KernelVariant::So2),
        (2, 1, KernelVariant::O2),
        (4, 1, KernelVariant::So2),
        (2, 0, KernelVariant::So2),
        (4, 0, KernelVariant::O2),
    ] {
        let m = standard_model(n, corank, variant).unwrap();
        let s = m.k_sum.as_ref().unwrap();
        let rep = s.validate();
        assert!(rep.ok, "({n},{corank},{variant:?}): {rep}");
        assert_eq!(m.k.len(), 2);
        let w = weights_at_point(s, &origin(&m.ring)).unwrap();
        let sh = s.sigma.as_ref().unwrap().chi_shift.clone();
        let image = w.mapped(|c| {
            m.ring
                .grading
                .act_torus(c)
                .iter()
                .zip(&sh)
                .map(|(a, b)| a + b)
                .collect()
        });
        assert_eq!(
            image, w,
            "weights of ({n},{corank}) are not sigma-symmetric"
        );
        if n % 2 == 0 && corank <= 1 {
            assert!(w.width() <= n as i64 / 2);
        }
    }
    assert!(standard_model(3, 0, KernelVariant::So2)
        .unwrap()
        .k
        .is_empty());
    assert!(standard_model(1, 2, KernelVariant::So2).is_err());
}

#[test]
fn corank2_generator_has_grade_restricted_weights() {
    for n in 2..=5 {
        for variant in [KernelVariant::So2, KernelVariant::O2] {
            let m = standard_model(n, 2, variant).unwrap();
            let s = m.k_sum.as_ref().unwrap();
            let w = weights_at_point(s, &origin(&m.ring)).unwrap();
            assert!(w.width() <= (n as i64 + 1) / 2, "n={n} {variant:?}: {w}");
        }
    }
}

#[test]
fn global_koszul_weights() {
    let ring = global_ring(2, 2, RConvention::LCharge, Field::Rational).unwrap();
    let f = global_quadrics(
        &ring,
        &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
    )
    .unwrap();
    let e = global_e_rho(&ring, &f, (1, 0)).unwrap();
    assert!(e.validate().ok);
    let w = weights_at_point(&e, &[]).unwrap();
    let expect = WeightMultiset::from_weights([vec![-1, -2], vec![0, -1], vec![0, -1], vec![1, 0]]);
    assert_eq!(w, expect);
    let k = global_def_of_k(&ring, &f).unwrap();
    assert!(k.validate().ok);
    assert_eq!(k.w, global_potential(&ring, &f));
}

#[test]
fn json_round_trip() {
    let ring = corank2_ring(2).unwrap();
    let k = k2_prime(&ring).unwrap();
    let j = k.to_json();
    let s = serde_json::to_string(&j).unwrap();
    let back = MatrixFactorization::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
    assert!(back.validate().ok);
    assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), s);
}

#[test]
fn conjugation_keeps_validity_and_weights() {
    let ring = corank2_ring(2).unwrap();
    let a = m1(&ring).unwrap();
    let n = a.rank();
    let perm: Vec<usize> = (0..n).rev().collect();
    let scale: Vec<_> = (0..n).map(|k| ring.field.from_i64(k as i64 - 7)).collect();
    let c = a.conjugate(&perm, &scale).unwrap();
    assert!(c.validate().ok);
    assert_eq!(
        weights_at_point(&c, &origin(&ring)).unwrap(),
        weights_at_point(&a, &origin(&ring)).unwrap()
    );
    assert!(a.conjugate(&vec![0; n], &scale).is_err());
    let zero = vec![ring.field.zero(); n];
    assert!(a.conjugate(&perm, &zero).is_err());
}

#[test]
fn weight_multisets_round_trip_through_json() {
    let w = WeightMultiset::from_weights([vec![-1], vec![0], vec![0]]);
    let s = serde_json::to_string(&w).unwrap();
    assert_eq!(s, r#"{"weights":[[[-1],1],[[0],2]]}"#);
    assert_eq!(serde_json::from_str::<WeightMultiset>(&s).unwrap(), w);
}
