//! Finite-dimensional representations of `K^(c)` as matrices of
//! coordinate-ring functions, with their `G_m` weights and the degree bound
//! `alpha_0 = d_max - d_min + 1` through which they factor.
//!
//! Conventions: `R(rho) f = f . rho^-1` for the standard jet representation;
//! weights `d_i` are read from the scaling point `z id` as `z^{d_i}` on the
//! diagonal, in basis order; the matrix coefficient `(i, j)` is then
//! homogeneous of degree `d_j - d_i` for `deg(a^k_J) = |J| - 1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::base_ring::BaseRingElement;
use crate::error::{Error, Result};
use crate::hopf::{self, COORD, LEFT, RIGHT};
use crate::index::MultiIndex;
use crate::jet_group::JetAutomorphism;
use crate::ring::Ring;
use crate::series::TruncatedSeries;
use crate::symbolic::{det_poly, CoordRingElement, SymbolicShape, Var};

#[derive(Clone, PartialEq, Debug)]
pub struct Representation {
    n: usize,
    c: usize,
    entries: Vec<Vec<CoordRingElement>>,
    weights: Vec<i64>,
}

/// Outcome of the symbolic comodule check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HomomorphismReport {
    pub ok: bool,
    pub failing_entry: Option<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExtensionBound {
    pub alpha0: usize,
    pub factoring_order: usize,
}

impl Representation {
    /// Builds a representation; fails unless the basis diagonalizes scaling.
    pub fn new(n: usize, c: usize, entries: Vec<Vec<CoordRingElement>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 || entries.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("representation matrix must be square and nonempty".into()));
        }
        if c == 0 {
            return Err(Error::InvalidOrder("K^(c) needs c >= 1".into()));
        }
        for x in entries.iter().flatten() {
            if x.dim() != n {
                return Err(Error::ShapeMismatch("matrix coefficient of the wrong dimension".into()));
            }
            if x.max_index_degree() > c {
                return Err(Error::ShapeMismatch(format!("coefficient uses coordinates beyond order {c}")));
            }
            if x.alphabets().iter().any(|&a| a != COORD) {
                return Err(Error::Parse("matrix coefficients must be written in alphabet 'a'".into()));
            }
        }
        let weights = scaling_weights(n, &entries)?;
        Ok(Representation { n, c, entries, weights })
    }

    /// The one-dimensional trivial representation.
    pub fn trivial(n: usize, c: usize) -> Result<Self> {
        Self::new(n, c, vec![vec![CoordRingElement::constant(n, BigRational::one())]])
    }

    /// `rho -> det(r^k_{e_k'})`.
    pub fn determinant(n: usize, c: usize) -> Result<Self> {
        Self::new(n, c, vec![vec![CoordRingElement::polynomial(n, (*det_poly(COORD, n, 1)).clone())]])
    }

    /// Action on `m / m^(c+1)` by `f -> f . rho^-1`, basis `t^J` for
    /// `0 < |J| <= c` in graded-lex order.
    pub fn jet_standard(n: usize, c: usize) -> Result<Self> {
        let s = hopf::antipode(n, c)?;
        let shape = SymbolicShape { dim: n };
        let basis = MultiIndex::all_up_to(n, 1, c);
        let inverse: Vec<TruncatedSeries<CoordRingElement>> = (0..n)
            .map(|k| {
                TruncatedSeries::from_terms(n, c, &shape, basis.iter().map(|j| (j.clone(), s[&(k, j.clone())].clone())))
            })
            .collect();
        let mut columns = Vec::with_capacity(basis.len());
        for j in &basis {
            let mut image = TruncatedSeries::constant(n, c, CoordRingElement::constant(n, BigRational::one()));
            for (k, &e) in j.exponents().iter().enumerate() {
                for _ in 0..e {
                    image = image.mul(&inverse[k])?;
                }
            }
            columns.push(image);
        }
        let entries = basis
            .iter()
            .map(|row| columns.iter().map(|col| col.coeff(row)).collect())
            .collect();
        Self::new(n, c, entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn group_dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.c
    }

    pub fn entries(&self) -> &[Vec<CoordRingElement>] {
        &self.entries
    }

    /// `d_i` in basis order.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Same matrix coefficients viewed on `K^(c')` for `c' >= c`.
    pub fn at_level(&self, c_prime: usize) -> Result<Self> {
        if c_prime < self.c {
            return Err(Error::InvalidOrder(format!("cannot view an order-{} representation at order {c_prime}", self.c)));
        }
        Ok(Representation { c: c_prime, ..self.clone() })
    }

    /// Matrix of the action of `g in K^(c)(R)`.
    pub fn evaluate(&self, g: &JetAutomorphism<BaseRingElement>) -> Result<Vec<Vec<BaseRingElement>>> {
        if g.dim() != self.n || g.order() != self.c {
            return Err(Error::ShapeMismatch(format!(
                "representation of K^({}) on n={} evaluated at a jet with n={}, c={}",
                self.c,
                self.n,
                g.dim(),
                g.order()
            )));
        }
        if !g.is_in_k() {
            return Err(Error::NotInK);
        }
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| hopf::evaluate_at(x, g)).collect())
            .collect()
    }

    /// `Delta(R_ij) = sum_k R_ik (x) R_kj` for every entry, exactly.
    #[allow(clippy::needless_range_loop)]
    pub fn check_homomorphism(&self) -> Result<HomomorphismReport> {
        let m = self.dim();
        let left: Vec<Vec<_>> = self.entries.iter().map(|r| r.iter().map(|x| x.rename(COORD, LEFT)).collect()).collect();
        let right: Vec<Vec<_>> = self.entries.iter().map(|r| r.iter().map(|x| x.rename(COORD, RIGHT)).collect()).collect();
        let shape = SymbolicShape { dim: self.n };
        for i in 0..m {
            for j in 0..m {
                let lhs = hopf::apply_coproduct(&self.entries[i][j], self.c)?;
                let mut rhs = CoordRingElement::zero(&shape);
                for k in 0..m {
                    rhs = rhs.add(&left[i][k].mul(&right[k][j]));
                }
                if lhs != rhs {
                    return Ok(HomomorphismReport { ok: false, failing_entry: Some((i, j)) });
                }
            }
        }
        Ok(HomomorphismReport { ok: true, failing_entry: None })
    }

    /// `alpha_0 = d_max - d_min + 1`, after checking that entry `(i, j)` is
    /// homogeneous of degree `d_j - d_i`; also reports the largest `|J|`
    /// actually used, which never exceeds `alpha_0`.
    pub fn extension_order(&self) -> Result<ExtensionBound> {
        let d = &self.weights;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() && !x.is_homogeneous(d[j] - d[i]) {
                    return Err(Error::NotHomogeneous(i, j));
                }
            }
        }
        let alpha0 = (d.iter().max().unwrap() - d.iter().min().unwrap() + 1) as usize;
        Ok(ExtensionBound { alpha0, factoring_order: self.factoring_order() })
    }

    /// Largest `|J|` over the variables occurring in the entries.
    pub fn factoring_order(&self) -> usize {
        self.entries.iter().flatten().map(CoordRingElement::max_index_degree).max().unwrap_or(0)
    }
}

/// Laurent polynomials in one variable `z`, for reading off weights.
#[derive(Clone, PartialEq, Debug, Default)]
struct Laurent(BTreeMap<i64, BigRational>);

impl Laurent {
    fn monomial(e: i64, q: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(e, q);
        }
        Laurent(m)
    }

    fn as_power(&self) -> Option<(i64, &BigRational)> {
        match self.0.len() {
            1 => self.0.iter().next().map(|(e, q)| (*e, q)),
            _ => None,
        }
    }
}

impl Ring for Laurent {
    type Shape = ();

    fn shape(&self) {}

    fn zero(_: &()) -> Self {
        Laurent::default()
    }

    fn from_rational(_: &(), q: BigRational) -> Self {
        Laurent::monomial(0, q)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (e, q) in &other.0 {
            *out.entry(*e).or_insert_with(BigRational::zero) += q;
        }
        out.retain(|_, q| !q.is_zero());
        Laurent(out)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (e1, q1) in &self.0 {
            for (e2, q2) in &other.0 {
                *out.entry(e1 + e2).or_insert_with(BigRational::zero) += q1 * q2;
            }
        }
        out.retain(|_, q: &mut BigRational| !q.is_zero());
        Laurent(out)
    }

    fn neg(&self) -> Self {
        Laurent(self.0.iter().map(|(e, q)| (*e, -q)).collect())
    }

    fn try_inverse(&self) -> Option<Self> {
        let (e, q) = self.as_power()?;
        Some(Laurent::monomial(-e, q.recip()))
    }

    fn is_nilpotent(&self) -> bool {
        self.is_zero()
    }

    fn nilpotency_index(_: &()) -> usize {
        1
    }
}

/// Substitutes the scaling point `a^k_{e_k'} = z delta_{kk'}`, all else 0.
fn scaling_weights(_n: usize, entries: &[Vec<CoordRingElement>]) -> Result<Vec<i64>> {
    let z = |v: &Var| match v.index.as_unit() {
        Some(kp) if kp == v.k => Laurent::monomial(1, BigRational::one()),
        _ => Laurent::default(),
    };
    let mut weights = Vec::with_capacity(entries.len());
    for (i, row) in entries.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let v = x
                .evaluate(&(), &z)
                .ok_or_else(|| Error::NotDiagonal(format!("entry ({i}, {j}) is undefined at the scaling point")))?;
            if i != j {
                if !v.is_zero() {
                    return Err(Error::NotDiagonal(format!("off-diagonal entry ({i}, {j}) survives")));
                }
                continue;
            }
            match v.as_power() {
                Some((e, q)) if q.is_one() => weights.push(e),
                _ => return Err(Error::NotDiagonal(format!("diagonal entry {i} is not a power of z"))),
            }
        }
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::BaseRingDescriptor;
    use crate::ring::{int, rational};
    use crate::series::Polynomial;

    fn q() -> BaseRingDescriptor {
        BaseRingDescriptor::rationals()
    }

    fn num(n: i64, d: i64) -> BaseRingElement {
        BaseRingElement::constant(&q(), rational(n, d))
    }

    fn jet1(c: usize, coeffs: &[(u32, i64)]) -> JetAutomorphism {
        let p = Polynomial::from_terms(1, &q(), coeffs.iter().map(|&(j, x)| (MultiIndex::new(vec![j]), num(x, 1))));
        JetAutomorphism::from_polynomials(c, vec![p]).unwrap()
    }

    fn a(n: usize, k: usize, j: &[u32]) -> CoordRingElement {
        CoordRingElement::var(n, Var::new(COORD, k, MultiIndex::new(j.to_vec())))
    }

    #[test]
    fn standard_rep_n1_c2() {
        let r = Representation::jet_standard(1, 2).unwrap();
        let a1 = a(1, 0, &[1]);
        let expected = [vec![a1.try_inverse().unwrap(), CoordRingElement::zero(&SymbolicShape { dim: 1 })],
            vec![a(1, 0, &[2]).neg().mul(&a1.pow(3).try_inverse().unwrap()), a1.pow(2).try_inverse().unwrap()]];
        assert_eq!(r.entries(), &expected[..]);
        assert_eq!(r.weights(), &[-1, -2]);
        assert_eq!(r.extension_order().unwrap(), ExtensionBound { alpha0: 2, factoring_order: 2 });

        let m = r.evaluate(&jet1(2, &[(1, 1), (2, 1)])).unwrap();
        assert_eq!(m, vec![vec![num(1, 1), num(0, 1)], vec![num(-1, 1), num(1, 1)]]);
        let m = r.evaluate(&jet1(2, &[(1, 2)])).unwrap();
        assert_eq!(m, vec![vec![num(1, 2), num(0, 1)], vec![num(0, 1), num(1, 4)]]);
        let id = JetAutomorphism::identity(1, 2, &q()).unwrap();
        assert_eq!(r.evaluate(&id).unwrap(), vec![vec![num(1, 1), num(0, 1)], vec![num(0, 1), num(1, 1)]]);
    }

    #[test]
    fn small_reps() {
        let r = Representation::jet_standard(1, 1).unwrap();
        assert_eq!(r.weights(), &[-1]);

        let r = Representation::jet_standard(2, 1).unwrap();
        let det_inv = CoordRingElement::det_inverse(2, COORD, 1);
        // (A^-1)^T = [[d, -c], [-b, a]] / det for A = [[a, b], [c, d]].
        let expected = [vec![a(2, 1, &[0, 1]).mul(&det_inv), a(2, 1, &[1, 0]).neg().mul(&det_inv)],
            vec![a(2, 0, &[0, 1]).neg().mul(&det_inv), a(2, 0, &[1, 0]).mul(&det_inv)]];
        assert_eq!(r.entries(), &expected[..]);
        assert!(r.check_homomorphism().unwrap().ok);

        let t = Representation::trivial(2, 3).unwrap();
        assert_eq!(t.weights(), &[0]);
        assert_eq!(t.extension_order().unwrap(), ExtensionBound { alpha0: 1, factoring_order: 0 });
        assert!(t.check_homomorphism().unwrap().ok);

        let d = Representation::determinant(2, 2).unwrap();
        assert_eq!(d.weights(), &[2]);
        assert_eq!(d.extension_order().unwrap(), ExtensionBound { alpha0: 1, factoring_order: 1 });
        assert!(d.check_homomorphism().unwrap().ok);
    }

    #[test]
    fn broken_reps_are_reported() {
        let one = CoordRingElement::constant(1, BigRational::one());
        let r = Representation::new(1, 2, vec![vec![a(1, 0, &[1]).add(&one)]]);
        assert!(matches!(r, Err(Error::NotDiagonal(_))));
        let r = Representation::new(1, 2, vec![vec![a(1, 0, &[1]).pow(2)]]).unwrap();
        assert_eq!(r.weights(), &[2]);
        assert!(r.check_homomorphism().unwrap().ok);
        let r = Representation::new(
            1,
            2,
            vec![
                vec![a(1, 0, &[1]), CoordRingElement::zero(&SymbolicShape { dim: 1 })],
                vec![a(1, 0, &[2]), a(1, 0, &[1])],
            ],
        )
        .unwrap();
        assert_eq!(r.check_homomorphism().unwrap(), HomomorphismReport { ok: false, failing_entry: Some((1, 0)) });
        assert_eq!(r.extension_order(), Err(Error::NotHomogeneous(1, 0)));
    }

    #[test]
    fn standard_rep_is_a_homomorphism() {
        for (n, c) in [(1, 2), (1, 3), (2, 2)] {
            let r = Representation::jet_standard(n, c).unwrap();
            assert!(r.check_homomorphism().unwrap().ok, "n={n} c={c}");
        }
    }

    #[test]
    fn evaluation_needs_k() {
        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let g = JetAutomorphism::translation(2, &[e]).unwrap();
        let r = Representation::jet_standard(1, 2).unwrap();
        assert_eq!(r.evaluate(&g), Err(Error::NotInK));
        let h = JetAutomorphism::translation(2, &[BaseRingElement::constant(&d, int(0))]).unwrap();
        assert!(r.evaluate(&h).is_ok());
    }
}
