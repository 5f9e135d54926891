//! Seeded generators of random ring elements, jets, derivations and roofs,
//! shared by the property tests, the acceptance suite and `selftest`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
use crate::index::MultiIndex;
use crate::jet_group::JetAutomorphism;
use crate::lie::Derivation;
use crate::ring::{determinant, Ring};
use crate::series::{Polynomial, TruncatedSeries};

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational, numerator in `-3..=3`, denominator in `1..=3`.
pub fn small_rational(rng: &mut DetRng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-3i64..=3)), BigInt::from(rng.gen_range(1i64..=3)))
}

pub fn nonzero_rational(rng: &mut DetRng) -> BigRational {
    loop {
        let q = small_rational(rng);
        if q != BigRational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Uniform integer point coordinate in `-10..=10`.
pub fn point_coordinate(rng: &mut DetRng) -> BigRational {
    BigRational::from_integer(rng.gen_range(-10i64..=10).into())
}

/// `Q` or one of the small nilpotent rings with index at most `max_nu`.
pub fn descriptor(rng: &mut DetRng, max_nu: usize) -> BaseRingDescriptor {
    let choices: Vec<Vec<u32>> = vec![vec![], vec![2], vec![3], vec![2, 2], vec![4], vec![2, 3], vec![2, 2, 2]];
    let fitting: Vec<_> = choices
        .into_iter()
        .map(|o| BaseRingDescriptor::new(o).unwrap())
        .filter(|d| d.nilpotency_index() <= max_nu)
        .collect();
    fitting[rng.gen_range(0..fitting.len())].clone()
}

/// Random element; `nilpotent` forces a zero rational part.
pub fn element(rng: &mut DetRng, desc: &BaseRingDescriptor, nilpotent: bool) -> BaseRingElement {
    let mut terms = Vec::new();
    for e in desc.monomials() {
        if (nilpotent && e.is_zero()) || !rng.gen_bool(0.6) {
            continue;
        }
        terms.push((e, small_rational(rng)));
    }
    BaseRingElement::from_terms(desc, terms)
}

pub fn unit(rng: &mut DetRng, desc: &BaseRingDescriptor) -> BaseRingElement {
    let x = element(rng, desc, true);
    x.add(&BaseRingElement::constant(desc, nonzero_rational(rng)))
}

/// Polynomial with terms of degree in `lo..=hi`, each present with probability `density`.
pub fn polynomial(
    rng: &mut DetRng,
    n: usize,
    lo: usize,
    hi: usize,
    desc: &BaseRingDescriptor,
    density: f64,
) -> Polynomial<BaseRingElement> {
    let mut terms = Vec::new();
    for j in MultiIndex::all_up_to(n, lo, hi) {
        if rng.gen_bool(density) {
            terms.push((j, element(rng, desc, false)));
        }
    }
    Polynomial::from_terms(n, desc, terms)
}

/// Linear part with unit determinant.
pub fn unit_matrix(rng: &mut DetRng, n: usize, desc: &BaseRingDescriptor) -> Vec<Vec<BaseRingElement>> {
    loop {
        let m: Vec<Vec<BaseRingElement>> = (0..n)
            .map(|_| (0..n).map(|_| element(rng, desc, false)).collect())
            .collect();
        if determinant(&m, desc).try_inverse().is_some() {
            return m;
        }
    }
}

fn assemble(
    n: usize,
    constants: Vec<BaseRingElement>,
    linear: Vec<Vec<BaseRingElement>>,
    higher: Vec<Polynomial<BaseRingElement>>,
) -> Vec<Polynomial<BaseRingElement>> {
    (0..n)
        .map(|k| {
            let lin = Polynomial::from_terms(
                n,
                constants[k].descriptor(),
                linear[k].iter().enumerate().map(|(kp, x)| (MultiIndex::unit(n, kp), x.clone())),
            );
            Polynomial::constant(n, constants[k].clone()).add(&lin).add(&higher[k])
        })
        .collect()
}

/// Random point of `G^(c)(R)` (nilpotent constant terms).
pub fn g_element(rng: &mut DetRng, n: usize, c: usize, desc: &BaseRingDescriptor) -> JetAutomorphism {
    let constants = (0..n).map(|_| element(rng, desc, true)).collect();
    let linear = unit_matrix(rng, n, desc);
    let higher = (0..n).map(|_| polynomial(rng, n, 2, c, desc, 0.5)).collect();
    JetAutomorphism::from_polynomials(c, assemble(n, constants, linear, higher)).unwrap()
}

/// Random point of `K^(c)(R)`.
pub fn k_element(rng: &mut DetRng, n: usize, c: usize, desc: &BaseRingDescriptor) -> JetAutomorphism {
    let constants = vec![BaseRingElement::zero(desc); n];
    let linear = unit_matrix(rng, n, desc);
    let higher = (0..n).map(|_| polynomial(rng, n, 2, c, desc, 0.5)).collect();
    JetAutomorphism::from_polynomials(c, assemble(n, constants, linear, higher)).unwrap()
}

/// Random point of `K_u^(c)(R)`.
pub fn k_u_element(rng: &mut DetRng, n: usize, c: usize, desc: &BaseRingDescriptor) -> JetAutomorphism {
    let constants = vec![BaseRingElement::zero(desc); n];
    let one = BaseRingElement::constant(desc, BigRational::from_integer(1.into()));
    let linear = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { BaseRingElement::zero(desc) }).collect())
        .collect();
    let higher = (0..n).map(|_| polynomial(rng, n, 2, c, desc, 0.5)).collect();
    JetAutomorphism::from_polynomials(c, assemble(n, constants, linear, higher)).unwrap()
}

/// Random derivation whose coefficients have m-order at least `min_order`.
pub fn derivation(
    rng: &mut DetRng,
    n: usize,
    c: usize,
    desc: &BaseRingDescriptor,
    min_order: usize,
) -> Derivation<BaseRingElement> {
    let coeffs = (0..n)
        .map(|_| TruncatedSeries::from_polynomial(polynomial(rng, n, min_order, c, desc, 0.5), c))
        .collect();
    Derivation::new(coeffs).unwrap()
}

/// Random rational point of `K^(c)` with integer coordinates in `-10..=10`.
pub fn rational_k_point(rng: &mut DetRng, n: usize, c: usize) -> JetAutomorphism {
    let q = BaseRingDescriptor::rationals();
    loop {
        let polys: Vec<_> = (0..n)
            .map(|_| {
                Polynomial::from_terms(
                    n,
                    &q,
                    MultiIndex::all_up_to(n, 1, c)
                        .into_iter()
                        .map(|j| (j, BaseRingElement::constant(&q, point_coordinate(rng))))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        if let Ok(g) = JetAutomorphism::from_polynomials(c, polys) {
            return g;
        }
    }
}
