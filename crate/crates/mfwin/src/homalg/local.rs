//! End-to-end computations in the standard local models: the endomorphism
//! algebra of the generator in corank 2 and its SO(2) analogue.

use super::algebra::{algebra_structure, AlgebraPresentation, EndAlgebra};
use super::complex::HomComplex;
use crate::error::Result;
use crate::exactalg::{Field, Poly, RingRef};
use crate::mf::{
    corank2_ring, k2_prime, m1, m2, q_ideal, sigma_on_hom, standard_model, KernelVariant,
    MatrixFactorization,
};

/// Data of the corank-2 computation on n = 2.
#[derive(Clone, Debug)]
pub struct Corank2Thetas {
    pub ring: RingRef,
    pub m1: MatrixFactorization,
    pub m2: MatrixFactorization,
    pub k: MatrixFactorization,
    /// The lifts phi_i: M2 -> M1.
    pub phi: Vec<Vec<Vec<Poly>>>,
    /// theta_i = phi_i + sigma(phi_i) as endomorphisms of M1 + M2.
    pub theta: Vec<Vec<Vec<Poly>>>,
    pub hom_k: HomComplex,
    pub hom_21: HomComplex,
}

/// Row targets `e^v phi_i`: the cocycles h_1 = s g1' + t g2' and
/// h_2 = t g1' + u g2' on the generators of M2.
pub fn h_rows(ring: &RingRef, m2: &MatrixFactorization) -> Result<Vec<Vec<Poly>>> {
    let g1 = m2.index_of("σg1")?;
    let g2 = m2.index_of("σg2")?;
    let mk = |a: &str, b: &str| -> Result<Vec<Poly>> {
        let mut v = vec![Poly::zero(ring); m2.rank()];
        v[g1] = Poly::parse(ring, a)?;
        v[g2] = Poly::parse(ring, b)?;
        Ok(v)
    };
    Ok(vec![mk("s", "t")?, mk("t", "u")?])
}

/// Lifts h_1, h_2 to cocycles phi_i in Hom(M2, M1) of weight 1 whose
/// e-row agrees with h_i modulo the ideal of Y_1, and symmetrizes.
pub fn corank2_thetas() -> Result<Corank2Thetas> {
    let ring = corank2_ring(2)?;
    let a = m1(&ring)?;
    let b = m2(&ring)?;
    let k = k2_prime(&ring)?;
    let q = q_ideal(&ring)?;
    let zero = vec![0; ring.grading.torus_rank];
    let hom_21 = HomComplex::new(&b, &a, &zero)?;
    let e = a.index_of("e")?;
    let mut phi = Vec::new();
    for h in h_rows(&ring, &b)? {
        phi.push(hom_21.lift(1, &[(e, h)], &q)?);
    }
    let sk = k.sigma.clone().expect("K carries a sigma-structure");
    let r = a.rank();
    let mut theta = Vec::new();
    for p in &phi {
        let mut big = vec![vec![Poly::zero(&ring); 2 * r]; 2 * r];
        for h in 0..r {
            for g in 0..r {
                big[h][r + g] = p[h][g].clone();
            }
        }
        let s = sigma_on_hom(&ring, &sk, &sk, &big)?;
        theta.push(
            big.iter()
                .zip(&s)
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
                .collect(),
        );
    }
    let hom_k = HomComplex::new(&k, &k, &zero)?;
    Ok(Corank2Thetas {
        ring,
        m1: a,
        m2: b,
        k,
        phi,
        theta,
        hom_k,
        hom_21,
    })
}

/// `k[s,t,u,theta1,theta2]/(theta1^2 - s, theta1 theta2 - t, theta2^2 - u, su - t^2)`.
pub fn corank2_target(field: &Field, ring: &RingRef) -> Result<AlgebraPresentation> {
    let base = base_specs(ring);
    AlgebraPresentation::from_strings(
        field,
        &base,
        &[("theta1", 1), ("theta2", 1)],
        &[
            "theta1^2 - s",
            "theta1*theta2 - t",
            "theta2^2 - u",
            "s*u - t^2",
        ],
    )
}

/// Base variables of a local model ring.
pub fn base_specs(ring: &RingRef) -> Vec<crate::exactalg::VarSpec> {
    let g = &ring.grading;
    (0..g.nvars())
        .filter(|&i| g.is_base_var(i))
        .map(|i| g.vars[i].clone())
        .collect()
}

/// Endomorphism algebra of K = M1 + M2 generated by the two thetas.
pub fn corank2_end_algebra(cap: i64) -> Result<(Corank2Thetas, EndAlgebra)> {
    let t = corank2_thetas()?;
    let gens = vec![
        ("theta1", t.theta[0].clone()),
        ("theta2", t.theta[1].clone()),
    ];
    let alg = algebra_structure(&t.hom_k, &gens, cap)?;
    Ok((t, alg))
}

/// Endomorphism algebra of the first summand of the generator in the SO(2)
/// variant of the standard model of dimension n and the given corank,
/// together with the coordinate ring of the corank-one locus.
pub fn so2_end_algebra(
    n: usize,
    corank: usize,
    cap: i64,
) -> Result<(EndAlgebra, AlgebraPresentation)> {
    let model = standard_model(n, corank, KernelVariant::So2)?;
    let y1 = model.k.first().cloned().ok_or_else(|| {
        crate::error::Error::Unsupported(format!(
            "the ({n}, {corank}) model has no generating object"
        ))
    })?;
    let zero = vec![0; model.ring.grading.torus_rank];
    let hc = HomComplex::new(&y1, &y1, &zero)?;
    let alg = algebra_structure(&hc, &[], cap)?;
    let locus = match corank {
        2 => vec!["s*u - t^2"],
        1 => vec!["s"],
        _ => vec!["1"],
    };
    let target = AlgebraPresentation::from_strings(
        &model.ring.field,
        &base_specs(&model.ring),
        &[],
        &locus,
    )?;
    Ok((alg, target))
}
