use super::*;
use crate::exactalg::{Degree, Field, GradingSpec, Poly, Ring, RingRef, VarSpec};

fn plain(names: &[&str]) -> RingRef {
    let vars = names.iter().map(|n| VarSpec::new(n, &[0], 0, 1)).collect();
    Ring::new(
        Field::Rational,
        GradingSpec::new(vars, vec![0], None).unwrap(),
    )
}

fn p(r: &RingRef, s: &str) -> Poly {
    Poly::parse(r, s).unwrap()
}

#[test]
fn ideal_of_variables() {
    let r = plain(&["x", "y"]);
    let gb = buchberger(
        &SubmoduleGens::ideal(&r, vec![p(&r, "x"), p(&r, "y")]),
        &MonomialOrder::default(),
    )
    .unwrap();
    let els: Vec<String> = gb.elements().iter().map(|v| v[0].to_string()).collect();
    assert_eq!(els, vec!["x", "y"]);
}

#[test]
fn s_pair_produces_determinant_multiple() {
    let r = plain(&["s", "t", "u", "x1", "x2"]);
    let gens = vec![p(&r, "s*x1 + t*x2"), p(&r, "t*x1 + u*x2")];
    let gb = buchberger(&SubmoduleGens::ideal(&r, gens), &MonomialOrder::default()).unwrap();
    // Hand S-pair: t*(s x1 + t x2) - s*(t x1 + u x2) = -(s u - t^2) x2.
    let target = p(&r, "s*u*x2 - t^2*x2");
    let monic_target = target.scale(&target.leading().unwrap().1.inv().unwrap());
    assert!(gb.elements().iter().any(|v| v[0] == monic_target));
}

#[test]
fn single_reduction_in_lex() {
    let r = plain(&["s", "t", "u"]);
    let gb = buchberger(
        &SubmoduleGens::ideal(&r, vec![p(&r, "s*u - t^2")]),
        &MonomialOrder::lex(),
    )
    .unwrap();
    assert_eq!(gb.reduce_poly(&p(&r, "s*u")).unwrap(), p(&r, "t^2"));
}

#[test]
fn membership() {
    let r = plain(&["x", "y"]);
    let gb = buchberger(
        &SubmoduleGens::ideal(&r, vec![p(&r, "x"), p(&r, "y")]),
        &MonomialOrder::default(),
    )
    .unwrap();
    assert!(gb.contains(&[p(&r, "x")]).unwrap());
    assert!(!gb.contains(&[p(&r, "1 + x")]).unwrap());
}

#[test]
fn koszul_syzygy() {
    let r = plain(&["x", "y"]);
    let syz = syzygies(&SubmoduleGens::new(
        &r,
        1,
        vec![vec![p(&r, "x")], vec![p(&r, "y")]],
    ))
    .unwrap();
    assert_eq!(syz.gens.len(), 1);
    let s = &syz.gens[0];
    assert!(s[0] == p(&r, "y") && s[1] == p(&r, "-x") || s[0] == p(&r, "-y") && s[1] == p(&r, "x"));
    let single = syzygies(&SubmoduleGens::new(&r, 1, vec![vec![p(&r, "x")]])).unwrap();
    assert!(single.gens.is_empty());
}

#[test]
fn syzygies_over_quotient() {
    let r = plain(&["x", "y"]);
    // Over k[x,y]/(x y), x is annihilated by y.
    let sg = SubmoduleGens::new(&r, 1, vec![vec![p(&r, "x")]]).with_quotient(vec![p(&r, "x*y")]);
    let syz = syzygies(&sg).unwrap();
    assert_eq!(syz.gens.len(), 1);
    assert_eq!(syz.gens[0][0], p(&r, "y"));
}

#[test]
fn zero_maps_give_free_module() {
    let r = plain(&["x"]);
    let z = Degree::zero(1);
    let a = GradedMatrix::zero(&r, vec![], vec![z.clone()], z.clone());
    let b = GradedMatrix::zero(&r, vec![z.clone()], vec![], z.clone());
    let pres = subquotient(&a, &b, &BaseRing::polynomial(&r)).unwrap();
    assert_eq!(pres.num_generators(), 1);
    assert!(pres.relations.is_empty());
    for w in 0..5 {
        assert_eq!(pres.graded_piece_dim(&Degree::new(&[0], 0, w)).unwrap(), 1);
    }
    assert!(pres.graded_piece_dim(&Degree::new(&[0], 0, 21)).is_err());
}

#[test]
fn koszul_homology_of_two_variables() {
    // 0 -> R -(y,-x)-> R^2 -(x y)-> R: middle homology is zero, top is k.
    let r = plain(&["x", "y"]);
    let d = |w: i64| Degree::new(&[0], 0, w);
    let a = GradedMatrix::new(
        &r,
        vec![d(0)],
        vec![d(1), d(1)],
        d(0),
        vec![vec![p(&r, "x"), p(&r, "y")]],
    )
    .unwrap();
    let b = GradedMatrix::new(
        &r,
        vec![d(1), d(1)],
        vec![d(2)],
        d(0),
        vec![vec![p(&r, "y")], vec![p(&r, "-x")]],
    )
    .unwrap();
    let mid = subquotient(&a, &b, &BaseRing::polynomial(&r)).unwrap();
    assert!(mid.is_zero());
    let z = GradedMatrix::zero(&r, vec![], vec![d(0)], d(0));
    let top = subquotient(&z, &a, &BaseRing::polynomial(&r)).unwrap();
    assert_eq!(top.num_generators(), 1);
    assert_eq!(top.graded_piece_dim(&d(0)).unwrap(), 1);
    assert_eq!(top.graded_piece_dim(&d(1)).unwrap(), 0);
}

#[test]
fn non_complex_rejected() {
    let r = plain(&["x"]);
    let d = |w: i64| Degree::new(&[0], 0, w);
    let a = GradedMatrix::new(&r, vec![d(0)], vec![d(1)], d(0), vec![vec![p(&r, "x")]]).unwrap();
    let b = GradedMatrix::new(&r, vec![d(1)], vec![d(2)], d(0), vec![vec![p(&r, "x")]]).unwrap();
    assert!(subquotient(&a, &b, &BaseRing::polynomial(&r)).is_err());
    let bad =
        GradedMatrix::new(&r, vec![d(0)], vec![d(1)], d(0), vec![vec![p(&r, "x + 1")]]).unwrap();
    let z = GradedMatrix::zero(&r, vec![], vec![d(0)], d(0));
    assert!(matches!(
        subquotient(&z, &bad, &BaseRing::polynomial(&r)),
        Err(crate::Error::Inhomogeneous(_))
    ));
}
