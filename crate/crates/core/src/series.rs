//! Sparse multivariate polynomials and truncated power series
//! `R[t_1..t_n]/m^(c+1)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::ring::Ring;

/// Exact (untruncated) polynomial in `n` variables over `R`.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<R: Ring> {
    dim: usize,
    shape: R::Shape,
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(dim: usize, shape: &R::Shape) -> Self {
        Polynomial { dim, shape: shape.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, value: R) -> Self {
        let mut p = Self::zero(dim, &value.shape());
        p.add_term(MultiIndex::zero(dim), value);
        p
    }

    pub fn variable(dim: usize, shape: &R::Shape, k: usize) -> Self {
        let mut p = Self::zero(dim, shape);
        p.add_term(MultiIndex::unit(dim, k), R::one(shape));
        p
    }

    pub fn from_terms(
        dim: usize,
        shape: &R::Shape,
        terms: impl IntoIterator<Item = (MultiIndex, R)>,
    ) -> Self {
        let mut p = Self::zero(dim, shape);
        for (j, c) in terms {
            assert_eq!(j.dim(), dim, "multi-index length");
            p.add_term(j, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, j: MultiIndex, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(j) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &R::Shape {
        &self.shape
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, j: &MultiIndex) -> R {
        self.terms.get(j).cloned().unwrap_or_else(|| R::zero(&self.shape))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Lowest total degree present, `None` for zero.
    pub fn m_order(&self) -> Option<usize> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &other.terms {
            out.add_term(j.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &R) -> Self {
        self.map_coeffs(|c| c.mul(r))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero(self.dim, &self.shape);
        for (j, c) in &self.terms {
            out.add_term(j.clone(), f(c));
        }
        out
    }

    /// Product, dropping every term of total degree above `bound`.
    pub fn mul_bounded(&self, other: &Self, bound: Option<usize>) -> Self {
        let mut out = Self::zero(self.dim, &self.shape);
        for (j1, c1) in &self.terms {
            let d1 = j1.degree();
            if bound.is_some_and(|b| d1 > b) {
                // terms are graded, nothing later can fit either
                break;
            }
            for (j2, c2) in &other.terms {
                if bound.is_some_and(|b| d1 + j2.degree() > b) {
                    break;
                }
                out.add_term(j1.add(j2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_bounded(other, None)
    }

    /// Keeps `t^J x` only up to total weight `max_weight`, where every `t_i`
    /// and every nilpotent generator has weight one.
    pub fn truncate_weighted(&self, max_weight: usize) -> Self {
        let mut out = Self::zero(self.dim, &self.shape);
        for (j, c) in &self.terms {
            let d = j.degree();
            if d <= max_weight {
                out.add_term(j.clone(), c.truncate_nil_weight(max_weight - d));
            }
        }
        out
    }

    /// Product modulo `(m + Nil R)^(max_weight + 1)`: `t^J x` has weight
    /// `|J|` plus the nilpotent weight of `x`.
    pub fn mul_weighted(&self, other: &Self, max_weight: usize) -> Self {
        let zero = R::zero(&self.shape);
        let mut acc: BTreeMap<MultiIndex, R> = BTreeMap::new();
        let weights: Vec<(usize, &MultiIndex, &R)> =
            other.terms.iter().map(|(j, c)| (j.degree().saturating_add(c.nil_weight()), j, c)).collect();
        for (j1, c1) in &self.terms {
            let d1 = j1.degree();
            if d1 > max_weight {
                break;
            }
            let w1 = d1.saturating_add(c1.nil_weight());
            if w1 > max_weight {
                continue;
            }
            for &(w2, j2, c2) in &weights {
                let d = d1 + j2.degree();
                if d > max_weight {
                    break;
                }
                if w1.saturating_add(w2) > max_weight {
                    continue;
                }
                acc.entry(j1.add(j2)).or_insert_with(|| zero.clone()).add_product(c1, c2, max_weight - d);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial { dim: self.dim, shape: self.shape.clone(), terms: acc }
    }

    /// `self(g_1, .., g_n)` modulo `(m + Nil R)^(max_weight + 1)`.
    pub fn substitute_weighted(&self, g: &[Polynomial<R>], max_weight: usize) -> Self {
        let zero = R::zero(&self.shape);
        self.substitute_with(g, |x, y| x.mul_weighted(y, max_weight), |acc, c, x| {
            for (j, y) in &x.terms {
                if let Some(room) = max_weight.checked_sub(j.degree()) {
                    acc.terms.entry(j.clone()).or_insert_with(|| zero.clone()).add_product(c, y, room);
                }
            }
        })
    }

    /// Shared substitution loop: the value of each needed monomial `t^J` is
    /// built as `value(J - e_k) * g_k`, one product per monomial, and
    /// `accumulate(out, c_J, value(J))` collects the terms.
    fn substitute_with(
        &self,
        g: &[Polynomial<R>],
        mul: impl Fn(&Self, &Self) -> Self,
        accumulate: impl Fn(&mut Self, &R, &Self),
    ) -> Self {
        assert_eq!(g.len(), self.dim, "substitution arity");
        let out_dim = g.first().map_or(self.dim, |p| p.dim);
        let mut values: BTreeMap<MultiIndex, Self> = BTreeMap::new();
        values.insert(MultiIndex::zero(self.dim), Polynomial::constant(out_dim, R::one(&self.shape)));
        let mut out = Polynomial::zero(out_dim, &self.shape);
        // terms come in graded order, so every predecessor is built first
        for (j, c) in &self.terms {
            let mut chain = Vec::new();
            let mut cur = j.clone();
            while !values.contains_key(&cur) {
                let k = cur.exponents().iter().rposition(|&e| e > 0).expect("zero index is memoized");
                let mut prev = cur.exponents().to_vec();
                prev[k] -= 1;
                chain.push((cur, k));
                cur = MultiIndex::new(prev);
            }
            while let Some((idx, k)) = chain.pop() {
                let v = mul(&values[&cur], &g[k]);
                values.insert(idx.clone(), v);
                cur = idx;
            }
            accumulate(&mut out, c, &values[j]);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn retain(&mut self, keep: impl Fn(&MultiIndex, &R) -> bool) {
        self.terms.retain(|j, c| keep(j, c));
    }

    /// `self(g_1, .., g_n)`, every product bounded by `bound`.
    pub fn substitute_bounded(&self, g: &[Polynomial<R>], bound: Option<usize>) -> Self {
        self.substitute_with(g, |x, y| x.mul_bounded(y, bound), |acc, c, x| {
            for (j, y) in &x.terms {
                acc.add_term(j.clone(), c.mul(y));
            }
        })
    }

    pub fn substitute(&self, g: &[Polynomial<R>]) -> Self {
        self.substitute_bounded(g, None)
    }

    /// Evaluates at a point of `R^n`.
    pub fn evaluate(&self, point: &[R]) -> R {
        assert_eq!(point.len(), self.dim, "evaluation arity");
        let mut acc = R::zero(&self.shape);
        for (j, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(j.exponents()) {
                term = term.mul(&x.pow(e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// `d/dt_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim, &self.shape);
        for (j, c) in &self.terms {
            let e = j.exponents()[k];
            if e == 0 {
                continue;
            }
            let mut ex = j.exponents().to_vec();
            ex[k] -= 1;
            out.add_term(MultiIndex::new(ex), c.scale(&BigRational::from_integer(e.into())));
        }
        out
    }
}

/// Element of `R[t_1..t_n]/m^(c+1)`.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSeries<R: Ring> {
    order: usize,
    poly: Polynomial<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(dim: usize, order: usize, shape: &R::Shape) -> Self {
        TruncatedSeries { order, poly: Polynomial::zero(dim, shape) }
    }

    pub fn variable(dim: usize, order: usize, shape: &R::Shape, k: usize) -> Self {
        Self::from_polynomial(Polynomial::variable(dim, shape, k), order)
    }

    pub fn constant(dim: usize, order: usize, value: R) -> Self {
        Self::from_polynomial(Polynomial::constant(dim, value), order)
    }

    pub fn from_terms(
        dim: usize,
        order: usize,
        shape: &R::Shape,
        terms: impl IntoIterator<Item = (MultiIndex, R)>,
    ) -> Self {
        Self::from_polynomial(Polynomial::from_terms(dim, shape, terms), order)
    }

    /// Truncates an exact polynomial to order `order`.
    pub fn from_polynomial(mut poly: Polynomial<R>, order: usize) -> Self {
        poly.retain(|j, _| j.degree() <= order);
        TruncatedSeries { order, poly }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn shape(&self) -> &R::Shape {
        &self.poly.shape
    }

    /// The zero-lift: stored terms as an exact polynomial.
    pub fn as_polynomial(&self) -> &Polynomial<R> {
        &self.poly
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> {
        self.poly.terms()
    }

    pub fn coeff(&self, j: &MultiIndex) -> R {
        self.poly.coeff(j)
    }

    pub fn constant_term(&self) -> R {
        self.poly.constant_term()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `min |J|` over nonzero terms; `None` stands for infinity.
    pub fn m_order(&self) -> Option<usize> {
        self.poly.m_order()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.order != other.order {
            return Err(Error::ShapeMismatch(format!(
                "series (n={}, c={}) vs (n={}, c={})",
                self.dim(),
                self.order,
                other.dim(),
                other.order
            )));
        }
        if self.shape() != other.shape() {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(TruncatedSeries { order: self.order, poly: self.poly.add(&other.poly) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(TruncatedSeries { order: self.order, poly: self.poly.sub(&other.poly) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(TruncatedSeries {
            order: self.order,
            poly: self.poly.mul_bounded(&other.poly, Some(self.order)),
        })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { order: self.order, poly: self.poly.neg() }
    }

    pub fn scale(&self, r: &R) -> Self {
        TruncatedSeries { order: self.order, poly: self.poly.scale(r) }
    }

    /// Drops every term with `|J| > order`; the order becomes `order`.
    /// Raising the order zero-lifts.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_polynomial(self.poly.clone(), order)
    }

    /// Truncation for the filtration where every `t_i` and every nilpotent
    /// generator has weight one: keeps `t^J * x` only up to total weight `max_weight`.
    pub fn truncate_weighted(&self, max_weight: usize) -> Self {
        TruncatedSeries { order: self.order.min(max_weight), poly: self.poly.truncate_weighted(max_weight) }
    }

    /// `f(g_1, .., g_n)` computed exactly through degree `work_order`, then
    /// truncated to the smallest order among `f` and the `g_k`.
    ///
    /// Every `g_k` needs a nilpotent constant term.
    pub fn substitute(&self, g: &[TruncatedSeries<R>], work_order: usize) -> Result<Self> {
        let target = self.check_substitution(g)?;
        if work_order < target {
            return Err(Error::InvalidOrder(format!(
                "working order {work_order} below target order {target}"
            )));
        }
        let gs: Vec<Polynomial<R>> = g.iter().map(|s| s.poly.clone()).collect();
        let poly = self.poly.substitute_bounded(&gs, Some(work_order));
        Ok(Self::from_polynomial(poly, target))
    }

    /// [`substitute`](Self::substitute) followed by
    /// [`truncate_weighted`](Self::truncate_weighted) at `max_weight`, without
    /// ever forming the discarded terms.
    pub fn substitute_weighted(&self, g: &[TruncatedSeries<R>], max_weight: usize) -> Result<Self> {
        let target = self.check_substitution(g)?;
        if max_weight < target {
            return Err(Error::InvalidOrder(format!("working order {max_weight} below target order {target}")));
        }
        let gs: Vec<Polynomial<R>> = g.iter().map(|s| s.poly.clone()).collect();
        let poly = self.poly.substitute_weighted(&gs, max_weight);
        Ok(Self::from_polynomial(poly, target).truncate_weighted(max_weight))
    }

    /// Validates a substitution and returns the order of its result.
    fn check_substitution(&self, g: &[TruncatedSeries<R>]) -> Result<usize> {
        if g.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "substituting {} series into a series in {} variables",
                g.len(),
                self.dim()
            )));
        }
        let out_dim = g.first().map_or(self.dim(), |s| s.dim());
        let mut target = self.order;
        for gk in g {
            if gk.dim() != out_dim {
                return Err(Error::ShapeMismatch("substituted series differ in dimension".into()));
            }
            if gk.shape() != self.shape() {
                return Err(Error::DescriptorMismatch);
            }
            if !gk.constant_term().is_nilpotent() {
                return Err(Error::NonNilpotentConstant);
            }
            target = target.min(gk.order);
        }
        Ok(target)
    }

    /// `d/dt_k`, kept at the same nominal order.
    pub fn derivative(&self, k: usize) -> Self {
        TruncatedSeries { order: self.order, poly: self.poly.derivative(k) }
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = j
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    let var = if self.dim == 1 { "t".to_string() } else { format!("t{}", k + 1) };
                    if e == 1 { var } else { format!("{var}^{e}") }
                })
                .collect();
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<R: Ring + fmt::Display> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
    use crate::ring::int;

    type S = TruncatedSeries<BaseRingElement>;

    fn q() -> BaseRingDescriptor {
        BaseRingDescriptor::rationals()
    }

    /// Series in one variable from integer coefficients `[c_0, c_1, ..]`.
    fn uni(d: &BaseRingDescriptor, order: usize, coeffs: &[BaseRingElement]) -> S {
        S::from_terms(
            1,
            order,
            d,
            coeffs.iter().enumerate().map(|(i, c)| (MultiIndex::new(vec![i as u32]), c.clone())),
        )
    }

    fn ints(d: &BaseRingDescriptor, cs: &[i64]) -> Vec<BaseRingElement> {
        cs.iter().map(|&c| BaseRingElement::constant(d, int(c))).collect()
    }

    #[test]
    fn products() {
        let d = q();
        let t1 = S::variable(2, 2, &d, 0);
        let t2 = S::variable(2, 2, &d, 1);
        let p = t1.mul(&t2).unwrap();
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.coeff(&MultiIndex::new(vec![1, 1])), BaseRingElement::constant(&d, int(1)));

        let t = S::variable(1, 1, &d, 0);
        assert!(t.mul(&t).unwrap().is_zero());

        let a = uni(&d, 2, &ints(&d, &[1, 1]));
        let b = uni(&d, 2, &ints(&d, &[1, -1, 1]));
        assert_eq!(a.mul(&b).unwrap(), uni(&d, 2, &ints(&d, &[1])));
    }

    #[test]
    fn shape_mismatch() {
        let d = q();
        let a = S::variable(1, 2, &d, 0);
        let b = S::variable(1, 3, &d, 0);
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn substitution_examples() {
        let d = q();
        let f = uni(&d, 4, &ints(&d, &[0, 0, 1]));
        let g = uni(&d, 4, &ints(&d, &[0, 1, 1]));
        assert_eq!(f.substitute(&[g], 4).unwrap(), uni(&d, 4, &ints(&d, &[0, 0, 1, 2, 1])));

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let zero = BaseRingElement::zero(&d);
        let g = uni(&d, 2, &[e.clone(), one.clone()]);
        let t = S::variable(1, 2, &d, 0);
        assert_eq!(t.substitute(std::slice::from_ref(&g), 2).unwrap(), g);

        // (e + t)^3 with e^2 = 0 is 3e t^2 + t^3; at order 2 only 3e t^2 survives.
        let cube = uni(&d, 3, &[zero.clone(), zero.clone(), zero.clone(), one.clone()]);
        let out = cube.substitute(&[g], 3).unwrap();
        assert_eq!(out.order(), 2);
        assert_eq!(out, uni(&d, 2, &[zero.clone(), zero, e.scale(&int(3))]));
    }

    #[test]
    fn substitution_needs_nilpotent_constant() {
        let d = q();
        let f = S::variable(1, 2, &d, 0);
        let g = uni(&d, 2, &ints(&d, &[1, 1]));
        assert_eq!(f.substitute(&[g], 2), Err(Error::NonNilpotentConstant));
    }

    #[test]
    fn truncation() {
        let d = q();
        let f = uni(&d, 3, &ints(&d, &[0, 1, 1, 1]));
        assert_eq!(f.truncate(2), uni(&d, 2, &ints(&d, &[0, 1, 1])));
        assert!(S::zero(1, 5, &d).truncate(2).is_zero());

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let z = BaseRingElement::zero(&d);
        let one = BaseRingElement::constant(&d, int(1));
        let f = uni(&d, 4, &[z.clone(), e.clone(), z.clone(), z.clone(), one]);
        assert_eq!(f.truncate(3), uni(&d, 3, &[z, e]));
    }

    #[test]
    fn weighted_truncation_drops_heavy_terms() {
        let d = BaseRingDescriptor::dual(3);
        let e = BaseRingElement::generator(&d, 0);
        let e2 = e.mul(&e);
        let f = S::from_terms(
            1,
            4,
            &d,
            [
                (MultiIndex::new(vec![2]), e2.clone()),
                (MultiIndex::new(vec![3]), e.add(&e2)),
                (MultiIndex::new(vec![4]), e.clone()),
            ],
        );
        let w = f.truncate_weighted(4);
        assert_eq!(w.coeff(&MultiIndex::new(vec![2])), e2);
        assert_eq!(w.coeff(&MultiIndex::new(vec![3])), e);
        assert!(w.coeff(&MultiIndex::new(vec![4])).is_zero());
    }
}
