//! Truncated derivations `sum f_k d/dt_k`, their bracket, the exponential
//! onto `K_u^(c)` and the adjoint action of `K^(c)`.
//!
//! The group side is read on `c`-jets: for origin-fixing jets, composition
//! truncated at `c` is already well defined.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::jet_group::JetAutomorphism;
use crate::ring::Ring;
use crate::series::TruncatedSeries;

#[derive(Clone, PartialEq, Debug)]
pub struct Derivation<R: Ring> {
    coefficients: Vec<TruncatedSeries<R>>,
}

impl<R: Ring> Derivation<R> {
    pub fn new(coefficients: Vec<TruncatedSeries<R>>) -> Result<Self> {
        let n = coefficients.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("derivation needs at least one coefficient".into()));
        }
        let (c, shape) = (coefficients[0].order(), coefficients[0].shape().clone());
        for f in &coefficients {
            if f.dim() != n || f.order() != c {
                return Err(Error::ShapeMismatch("coefficients differ in dimension or order".into()));
            }
            if *f.shape() != shape {
                return Err(Error::DescriptorMismatch);
            }
        }
        Ok(Derivation { coefficients })
    }

    pub fn zero(n: usize, c: usize, shape: &R::Shape) -> Self {
        Derivation { coefficients: (0..n).map(|_| TruncatedSeries::zero(n, c, shape)).collect() }
    }

    /// `x * t^J d/dt_k`.
    pub fn monomial(n: usize, c: usize, k: usize, j: MultiIndex, x: R) -> Self {
        let shape = x.shape();
        let mut d = Self::zero(n, c, &shape);
        d.coefficients[k] = TruncatedSeries::from_terms(n, c, &shape, [(j, x)]);
        d
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn order(&self) -> usize {
        self.coefficients[0].order()
    }

    pub fn shape(&self) -> R::Shape {
        self.coefficients[0].shape().clone()
    }

    pub fn coefficients(&self) -> &[TruncatedSeries<R>] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(TruncatedSeries::is_zero)
    }

    /// Smallest m-order among the coefficients (`None` for zero).
    pub fn m_order(&self) -> Option<usize> {
        self.coefficients.iter().filter_map(TruncatedSeries::m_order).min()
    }

    /// Lies in `Lie K`: vanishes at the origin.
    pub fn in_lie_k(&self) -> bool {
        self.m_order().is_none_or(|m| m >= 1)
    }

    /// Lies in `Lie K_u`: strictly raises m-order.
    pub fn in_lie_k_u(&self) -> bool {
        self.m_order().is_none_or(|m| m >= 2)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.order() != other.order() {
            return Err(Error::ShapeMismatch("derivations of different shape".into()));
        }
        if self.shape() != other.shape() {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coefficients =
            self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Derivation { coefficients })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&R::from_rational(&other.shape(), BigRational::from_integer((-1).into()))))
    }

    pub fn scale(&self, x: &R) -> Self {
        Derivation { coefficients: self.coefficients.iter().map(|f| f.scale(x)).collect() }
    }

    /// `sum_k f_k * df/dt_k`, truncated to the derivation's order.
    pub fn apply(&self, f: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
        if f.dim() != self.dim() || f.order() != self.order() {
            return Err(Error::ShapeMismatch("series and derivation differ in shape".into()));
        }
        if *f.shape() != self.shape() {
            return Err(Error::DescriptorMismatch);
        }
        let mut acc = TruncatedSeries::zero(self.dim(), self.order(), &self.shape());
        for (k, fk) in self.coefficients.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            acc = acc.add(&fk.mul(&f.derivative(k))?)?;
        }
        Ok(acc)
    }

    /// `[D, E]_k = D(E_k) - E(D_k)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(dk, ek)| self.apply(ek)?.sub(&other.apply(dk)?))
            .collect::<Result<_>>()?;
        Ok(Derivation { coefficients })
    }

    /// `t_k -> sum_i D^i(t_k) / i!`; the sum stops once `D^i(t_k)` vanishes.
    pub fn exp(&self) -> Result<JetAutomorphism<R>> {
        if !self.in_lie_k_u() {
            return Err(Error::OrderTooLow(2));
        }
        let (n, c, shape) = (self.dim(), self.order(), self.shape());
        let mut components = Vec::with_capacity(n);
        for k in 0..n {
            let mut term = TruncatedSeries::variable(n, c, &shape, k);
            let mut acc = term.clone();
            let mut fact = BigInt::from(1);
            for i in 1..=c {
                term = self.apply(&term)?;
                if term.is_zero() {
                    break;
                }
                fact *= i;
                let inv = BigRational::new(BigInt::from(1), fact.clone());
                acc = acc.add(&term.scale(&R::from_rational(&shape, inv)))?;
            }
            components.push(acc);
        }
        JetAutomorphism::from_components(c, components)
    }

    /// The unique `D` in `Lie K_u` with `exp(D) = u` (on `c`-jets), found
    /// one degree at a time via `D <- D - (exp(D) - u)`.
    pub fn log_unipotent(u: &JetAutomorphism<R>) -> Result<Self> {
        if !u.is_in_k_u() {
            return Err(Error::NotUnipotent);
        }
        let (n, c, shape) = (u.dim(), u.order(), u.shape());
        let target = u.c_jet();
        let t: Vec<_> = (0..n).map(|k| TruncatedSeries::variable(n, c, &shape, k)).collect();
        let mut d = Derivation {
            coefficients: target.iter().zip(&t).map(|(uk, tk)| uk.sub(tk)).collect::<Result<_>>()?,
        };
        for _ in 1..c {
            let e = d.exp()?.c_jet();
            let err: Vec<_> = e.iter().zip(&target).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
            if err.iter().all(TruncatedSeries::is_zero) {
                break;
            }
            d = d.sub(&Derivation { coefficients: err })?;
        }
        Ok(d)
    }

    /// `(Ad_k D)(f) = D(f . k) . k^-1`, computed on the generators.
    pub fn adjoint(&self, k: &JetAutomorphism<R>) -> Result<Self> {
        if !k.is_in_k() {
            return Err(Error::NotInK);
        }
        if !self.in_lie_k() {
            return Err(Error::OrderTooLow(1));
        }
        if k.dim() != self.dim() || k.order() != self.order() {
            return Err(Error::ShapeMismatch("jet and derivation differ in shape".into()));
        }
        if k.shape() != self.shape() {
            return Err(Error::DescriptorMismatch);
        }
        let c = self.order();
        let k_jet = k.c_jet();
        let k_inv = k.invert()?.c_jet();
        let coefficients = k_jet
            .iter()
            .map(|kj| self.apply(kj)?.substitute(&k_inv, c))
            .collect::<Result<_>>()?;
        Ok(Derivation { coefficients })
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Derivation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let mut parts = Vec::new();
        for (k, fk) in self.coefficients.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            let d = if n == 1 { "d/dt".to_string() } else { format!("d/dt{}", k + 1) };
            parts.push(format!("({}) {d}", fk.as_polynomial()));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
    use crate::ring::{int, rational};
    use crate::series::Polynomial;

    type D = Derivation<BaseRingElement>;

    fn q() -> BaseRingDescriptor {
        BaseRingDescriptor::rationals()
    }

    fn num(x: i64) -> BaseRingElement {
        BaseRingElement::constant(&q(), int(x))
    }

    fn mono1(c: usize, j: u32, x: i64) -> D {
        D::monomial(1, c, 0, MultiIndex::new(vec![j]), num(x))
    }

    fn t_pow(n: usize, c: usize, j: &[u32]) -> TruncatedSeries<BaseRingElement> {
        TruncatedSeries::from_terms(n, c, &q(), [(MultiIndex::new(j.to_vec()), num(1))])
    }

    #[test]
    fn apply_examples() {
        let d = mono1(4, 2, 1);
        assert_eq!(d.apply(&t_pow(1, 4, &[1])).unwrap(), t_pow(1, 4, &[2]));
        assert_eq!(d.apply(&t_pow(1, 4, &[2])).unwrap(), t_pow(1, 4, &[3]).scale(&num(2)));
        let d = D::monomial(2, 3, 0, MultiIndex::new(vec![0, 1]), num(1));
        assert_eq!(d.apply(&t_pow(2, 3, &[1, 1])).unwrap(), t_pow(2, 3, &[0, 2]));
    }

    #[test]
    fn bracket_examples() {
        let c = 5;
        assert_eq!(mono1(c, 2, 1).bracket(&mono1(c, 3, 1)).unwrap(), mono1(c, 4, 1));
        assert!(mono1(c, 2, 1).bracket(&mono1(c, 2, 1)).unwrap().is_zero());
        assert_eq!(mono1(c, 1, 1).bracket(&mono1(c, 2, 1)).unwrap(), mono1(c, 2, 1));
    }

    #[test]
    fn exp_examples() {
        assert!(D::zero(1, 4, &q()).exp().unwrap().is_in_n(4));
        let e = mono1(4, 2, 1).exp().unwrap();
        let expected = Polynomial::from_terms(1, &q(), (1..=4).map(|j| (MultiIndex::new(vec![j]), num(1))));
        assert_eq!(e, JetAutomorphism::from_polynomials(4, vec![expected]).unwrap());

        let d = D::monomial(2, 3, 0, MultiIndex::new(vec![0, 2]), num(1));
        let e = d.exp().unwrap();
        assert_eq!(e.components()[0], t_pow(2, 3, &[1, 0]).add(&t_pow(2, 3, &[0, 2])).unwrap());
        assert_eq!(e.components()[1], t_pow(2, 3, &[0, 1]));

        assert_eq!(mono1(4, 1, 1).exp(), Err(Error::OrderTooLow(2)));
    }

    #[test]
    fn log_examples() {
        let id = JetAutomorphism::identity(1, 4, &q()).unwrap();
        assert!(D::log_unipotent(&id).unwrap().is_zero());
        let e = mono1(4, 2, 1).exp().unwrap();
        assert_eq!(D::log_unipotent(&e).unwrap(), mono1(4, 2, 1));
        let scaled = JetAutomorphism::linear(4, &[vec![num(2)]]).unwrap();
        assert_eq!(D::log_unipotent(&scaled), Err(Error::NotUnipotent));
    }

    #[test]
    fn adjoint_examples() {
        let d = mono1(4, 2, 1);
        let id = JetAutomorphism::identity(1, 4, &q()).unwrap();
        assert_eq!(d.adjoint(&id).unwrap(), d);
        let z = JetAutomorphism::linear(4, &[vec![num(2)]]).unwrap();
        let half = D::monomial(1, 4, 0, MultiIndex::new(vec![2]), BaseRingElement::constant(&q(), rational(1, 2)));
        assert_eq!(d.adjoint(&z).unwrap(), half);
    }
}
