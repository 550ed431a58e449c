//! Independent oracles for the combinatorial and algebraic counts.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mfwin::clifford::{center_split, clifford_algebra, Part, QuadraticForm};
use mfwin::exactalg::{Matrix, RConvention};
use mfwin::mf::{global_def_of_k, global_quadrics, global_ring};
use mfwin::windows::{enumerate_exceptional, invariant_hom_dim, window_regions, IrrepLabel, Weight};
use mfwin::Field;

/// Points of the window regions straight from the defining inequalities.
fn definitional(n: i64, l: i64) -> (BTreeSet<Weight>, BTreeSet<Weight>) {
    let box_pts = || (-3 * n..=3 * n).flat_map(|i| (-3 * n..=3 * n).map(move |j| (i, j)));
    let plus = box_pts()
        .filter(|&(i, j)| {
            let (s, d) = (i + j, (i - j).abs());
            if n % 2 == 1 {
                (0..=2 * n - 1).contains(&s) && 2 * d < n
            } else {
                ((0..=n - 1).contains(&s) && 2 * d <= n) || ((n..=2 * n - 1).contains(&s) && 2 * d <= n - 2)
            }
        })
        .collect();
    let res = box_pts().filter(|&(i, j)| (0..=2 * l - 1).contains(&(i + j)) && (i - j).abs() <= n / 2).collect();
    (plus, res)
}

#[test]
fn regions_match_their_definitions() {
    for n in 1..=8usize {
        for l in 0..=n {
            let r = window_regions(n, l).unwrap();
            let (plus, res) = definitional(n as i64, l as i64);
            assert_eq!(r.s_plus.enumerate().unwrap().points, plus, "S+ for n={n}");
            assert_eq!(r.s_minus_res.enumerate().unwrap().points, res, "S-,res for n={n}, l={l}");
            assert_eq!(r.s_minus.is_bounded(), l == 0);
        }
    }
}

#[test]
fn odd_collections_have_the_orbifold_euler_characteristic() {
    // chi(X / sigma) + chi(X^sigma) for X = P^(n-1) x P^(n-1).
    for n in (1..=9usize).step_by(2) {
        let c = enumerate_exceptional(n, 0).unwrap();
        assert_eq!(c.objects.len(), (n * n + n) / 2 + n, "n={n}");
        assert!(c.is_exceptional());
    }
}

fn exponent_vectors(n: usize, deg: i64) -> Vec<Vec<i64>> {
    if deg < 0 {
        return vec![];
    }
    if n == 1 {
        return vec![vec![deg]];
    }
    (0..=deg)
        .flat_map(|k| {
            exponent_vectors(n - 1, deg - k).into_iter().map(move |mut v| {
                v.push(k);
                v
            })
        })
        .collect()
}

/// Invariant maps O(rho) -> O(rho2) by listing monomial maps and folding
/// them under the swap of x and y.
fn brute_hom_dim(rho: &IrrepLabel, rho2: &IrrepLabel, n: usize) -> u128 {
    let sign = rho.sign() * rho2.sign();
    let mut all = BTreeSet::new();
    for a in rho.weights() {
        for b in rho2.weights() {
            for ex in exponent_vectors(n, b.0 - a.0) {
                for ey in exponent_vectors(n, b.1 - a.1) {
                    all.insert((a, b, ex.clone(), ey));
                }
            }
        }
    }
    let swap = |t: &(Weight, Weight, Vec<i64>, Vec<i64>)| ((t.0 .1, t.0 .0), (t.1 .1, t.1 .0), t.3.clone(), t.2.clone());
    let mut orbits = 0;
    let mut seen = BTreeSet::new();
    for t in &all {
        if seen.insert(t.clone()) {
            let s = swap(t);
            seen.insert(s.clone());
            if &s != t || sign > 0 {
                orbits += 1;
            }
        }
    }
    orbits
}

fn random_label(rng: &mut ChaCha8Rng) -> IrrepLabel {
    let i = rng.random_range(-2..=3);
    let j = rng.random_range(-2..=3);
    if i == j {
        IrrepLabel::Diagonal { i, plus: rng.random_bool(0.5) }
    } else {
        IrrepLabel::off_diagonal(i, j)
    }
}

#[test]
fn hom_dimensions_match_monomial_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=3);
        let (a, b) = (random_label(&mut rng), random_label(&mut rng));
        assert_eq!(invariant_hom_dim(&a, &b, n), brute_hom_dim(&a, &b, n), "{a} -> {b}, n={n}");
    }
}

/// At a base point the potential is the bilinear pairing `x^T A y` with
/// `A = sum p_k A_k`, a quadratic form on the 2n coordinates x, y.
#[test]
fn clifford_algebra_of_the_fibre_matches_the_koszul_rank() {
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=3usize {
        for l in 1..=2usize {
            let forms: Vec<Vec<Vec<i64>>> = (0..l)
                .map(|_| {
                    let mut a = vec![vec![0i64; n]; n];
                    for i in 0..n {
                        for j in i..n {
                            let v = rng.random_range(-3..=3);
                            a[i][j] = v;
                            a[j][i] = v;
                        }
                    }
                    a
                })
                .collect();
            let ring = global_ring(n, l, RConvention::LCharge, f).unwrap();
            let k = global_def_of_k(&ring, &global_quadrics(&ring, &forms).unwrap()).unwrap();
            let p: Vec<i64> = (0..l).map(|_| rng.random_range(-2..=2)).collect();
            let mut b = Matrix::zero(&f, 2 * n, 2 * n);
            let half = f.from_ratio(1, 2).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let v: i64 = (0..l).map(|k| p[k] * forms[k][i][j]).sum();
                    let e = &f.from_i64(v) * &half;
                    b.set(i, n + j, e.clone());
                    b.set(n + j, i, e);
                }
            }
            let c = clifford_algebra(&QuadraticForm::new(b).unwrap()).unwrap();
            assert_eq!(c.dim(), k.rank(), "n={n}, l={l}");
            assert_eq!(k.rank(), 1 << (2 * n));
        }
    }
}

#[test]
fn centers_of_random_nondegenerate_forms() {
    let f = Field::Rational;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for m in 2..=6usize {
        let mut done = 0;
        while done < 3 {
            let mut rows = vec![vec![0i64; m]; m];
            for i in 0..m {
                for j in i..m {
                    let v = rng.random_range(-3..=3);
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let q = QuadraticForm::from_i64(&f, &rows).unwrap();
            if q.corank() != 0 {
                continue;
            }
            let c = clifford_algebra(&q).unwrap();
            let even = center_split(&c, Part::Even).unwrap();
            let full = center_split(&c, Part::Full).unwrap();
            assert_eq!(even.center_dim, if m % 2 == 0 { 2 } else { 1 }, "{rows:?}");
            assert_eq!(full.center_dim, if m % 2 == 0 { 1 } else { 2 }, "{rows:?}");
            assert_eq!(even.nilradical_dim, 0);
            done += 1;
        }
    }
}
