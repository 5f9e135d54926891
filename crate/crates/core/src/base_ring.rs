//! Exact arithmetic in `Q[e_1..e_m]/(e_i^N_i)`.
//!
//! Elements are dense coefficient vectors over the admissible e-monomials;
//! the descriptor carries the monomial basis and its multiplication table,
//! shared by every element of the ring.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::ring::{format_rational, Ring};

#[derive(Debug)]
struct Tables {
    orders: Vec<u32>,
    /// Admissible monomials in graded-lex order; position 0 is `1`.
    monomials: Vec<MultiIndex>,
    degrees: Vec<usize>,
    /// `product[i * len + j]`: position of `monomials[i] * monomials[j]`.
    product: Vec<Option<usize>>,
}

impl Tables {
    fn new(orders: Vec<u32>) -> Self {
        let m = orders.len();
        let top: usize = orders.iter().map(|&o| (o - 1) as usize).sum();
        let monomials: Vec<MultiIndex> = MultiIndex::all_up_to(m, 0, top)
            .into_iter()
            .filter(|e| e.exponents().iter().zip(&orders).all(|(x, n)| x < n))
            .collect();
        let degrees = monomials.iter().map(MultiIndex::degree).collect();
        let len = monomials.len();
        let mut product = vec![None; len * len];
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let ab = a.add(b);
                product[i * len + j] = monomials.binary_search(&ab).ok();
            }
        }
        Tables { orders, monomials, degrees, product }
    }
}

/// Which base ring: the nilpotency orders `N_i >= 2` of the generators.
/// No generators means the field `Q`.
#[derive(Clone, Debug)]
pub struct BaseRingDescriptor {
    tables: Arc<Tables>,
}

impl PartialEq for BaseRingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables) || self.tables.orders == other.tables.orders
    }
}

impl Eq for BaseRingDescriptor {}

impl Hash for BaseRingDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.tables.orders.hash(state);
    }
}

impl Default for BaseRingDescriptor {
    fn default() -> Self {
        BaseRingDescriptor { tables: Arc::new(Tables::new(Vec::new())) }
    }
}

impl BaseRingDescriptor {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if let Some(bad) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::Parse(format!("nilpotency order {bad} must be >= 2")));
        }
        let size = orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(u64::from(o)));
        if size.is_none_or(|s| s > 1 << 16) {
            return Err(Error::Parse(format!("base ring with orders {orders:?} is too large")));
        }
        Ok(BaseRingDescriptor { tables: Arc::new(Tables::new(orders)) })
    }

    pub fn rationals() -> Self {
        Self::default()
    }

    /// Shorthand for `Q[e]/(e^order)`.
    pub fn dual(order: u32) -> Self {
        Self::new(vec![order]).expect("order >= 2")
    }

    pub fn num_nilpotents(&self) -> usize {
        self.tables.orders.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.tables.orders
    }

    /// `1 + sum(N_i - 1)`.
    pub fn nilpotency_index(&self) -> usize {
        1 + self.tables.orders.iter().map(|&o| (o - 1) as usize).sum::<usize>()
    }

    /// Every admissible e-monomial, graded-lex.
    pub fn monomials(&self) -> Vec<MultiIndex> {
        self.tables.monomials.clone()
    }

    fn len(&self) -> usize {
        self.tables.monomials.len()
    }

    fn position(&self, e: &MultiIndex) -> Option<usize> {
        self.tables.monomials.binary_search(e).ok()
    }
}

/// An element of the base ring: one rational per admissible e-monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BaseRingElement {
    desc: BaseRingDescriptor,
    coeffs: Vec<BigRational>,
}

impl BaseRingElement {
    pub fn zero(desc: &BaseRingDescriptor) -> Self {
        BaseRingElement { desc: desc.clone(), coeffs: vec![BigRational::zero(); desc.len()] }
    }

    pub fn constant(desc: &BaseRingDescriptor, q: BigRational) -> Self {
        let mut out = Self::zero(desc);
        out.coeffs[0] = q;
        out
    }

    /// The generator `e_i` (0-based).
    pub fn generator(desc: &BaseRingDescriptor, i: usize) -> Self {
        Self::from_terms(desc, [(MultiIndex::unit(desc.num_nilpotents(), i), BigRational::one())])
    }

    /// Builds from raw terms; exponents `>= N_i` vanish, like terms add up.
    pub fn from_terms(desc: &BaseRingDescriptor, terms: impl IntoIterator<Item = (MultiIndex, BigRational)>) -> Self {
        let mut out = Self::zero(desc);
        for (e, q) in terms {
            assert_eq!(e.dim(), desc.num_nilpotents(), "e-index length");
            if let Some(i) = desc.position(&e) {
                out.coeffs[i] += q;
            }
        }
        out
    }

    pub fn descriptor(&self) -> &BaseRingDescriptor {
        &self.desc
    }

    /// Nonzero terms in graded-lex order of the e-monomials.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.desc.tables.monomials.iter().zip(&self.coeffs).filter(|(_, q)| !q.is_zero())
    }

    /// Image in the reduced ring `Q`.
    pub fn rational_part(&self) -> BigRational {
        self.coeffs[0].clone()
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Lowest total e-degree present, `None` for zero.
    pub fn nil_order(&self) -> Option<usize> {
        self.nonzero().next().map(|i| self.desc.tables.degrees[i])
    }

    fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(i, _)| i)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Ring::add(self, other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Ring::sub(self, other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(Ring::mul(self, other))
    }

    /// Inverse of a unit, `c^-1 * sum_{i<nu} (-eta)^i` for `a = c(1 + eta)`.
    pub fn invert(&self) -> Result<Self> {
        let c = self.rational_part();
        if c.is_zero() {
            return Err(Error::NonUnit);
        }
        let c_inv = c.recip();
        let one = Self::constant(&self.desc, BigRational::one());
        let eta = Ring::sub(&self.scale(&c_inv), &one);
        let minus_eta = eta.neg();
        let mut acc = one.clone();
        let mut power = one;
        for _ in 1..self.desc.nilpotency_index() {
            power = Ring::mul(&power, &minus_eta);
            if power.is_zero() {
                break;
            }
            acc = Ring::add(&acc, &power);
        }
        Ok(acc.scale(&c_inv))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.desc == other.desc {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    /// Product keeping only e-degrees `<= max_degree`.
    fn product(&self, other: &Self, max_degree: usize) -> Self {
        let mut out = Self::zero(&self.desc);
        out.accumulate(self, other, max_degree);
        out
    }

    /// `self += a * b`, keeping only e-degrees `<= max_degree`.
    fn accumulate(&mut self, a: &Self, b: &Self, max_degree: usize) {
        let t = &self.desc.tables;
        let len = self.coeffs.len();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &t.product[i * len..(i + 1) * len];
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() || t.degrees[i] + t.degrees[j] > max_degree {
                    continue;
                }
                if let Some(k) = row[j] {
                    if x.is_integer() && y.is_integer() && self.coeffs[k].is_integer() {
                        // stays integral: skip the gcd normalizations
                        let sum = self.coeffs[k].numer() + x.numer() * y.numer();
                        self.coeffs[k] = BigRational::from_integer(sum);
                    } else {
                        self.coeffs[k] += x * y;
                    }
                }
            }
        }
    }
}

impl Ring for BaseRingElement {
    type Shape = BaseRingDescriptor;

    fn shape(&self) -> BaseRingDescriptor {
        self.desc.clone()
    }

    fn zero(shape: &BaseRingDescriptor) -> Self {
        BaseRingElement::zero(shape)
    }

    fn from_rational(shape: &BaseRingDescriptor, q: BigRational) -> Self {
        BaseRingElement::constant(shape, q)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        self.product(other, usize::MAX)
    }

    fn neg(&self) -> Self {
        BaseRingElement { desc: self.desc.clone(), coeffs: self.coeffs.iter().map(|q| -q).collect() }
    }

    fn scale(&self, q: &BigRational) -> Self {
        BaseRingElement { desc: self.desc.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn try_inverse(&self) -> Option<Self> {
        self.invert().ok()
    }

    fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    fn nilpotency_index(shape: &BaseRingDescriptor) -> usize {
        shape.nilpotency_index()
    }

    fn nil_weight(&self) -> usize {
        self.nil_order().unwrap_or(usize::MAX)
    }

    fn mul_truncated(&self, other: &Self, max_weight: usize) -> Self {
        self.product(other, max_weight)
    }

    fn add_product(&mut self, a: &Self, b: &Self, max_weight: usize) {
        self.accumulate(a, b, max_weight);
    }

    fn truncate_nil_weight(&self, max_weight: usize) -> Self {
        let degrees = &self.desc.tables.degrees;
        BaseRingElement {
            desc: self.desc.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(degrees)
                .map(|(q, &d)| if d <= max_weight { q.clone() } else { BigRational::zero() })
                .collect(),
        }
    }
}

impl fmt::Display for BaseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, q)) in self.terms().enumerate() {
            let s = format_rational(q);
            if i > 0 {
                if s.starts_with('-') {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if s.starts_with('-') {
                write!(f, "-")?;
            }
            let s = s.trim_start_matches('-');
            let mono: Vec<String> = e
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("e{}", i + 1) } else { format!("e{}^{}", i + 1, x) })
                .collect();
            match (mono.is_empty(), s == "1") {
                (true, _) => write!(f, "{s}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{s}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rational};

    fn eps(order: u32) -> (BaseRingDescriptor, BaseRingElement) {
        let d = BaseRingDescriptor::dual(order);
        let e = BaseRingElement::generator(&d, 0);
        (d, e)
    }

    fn c(d: &BaseRingDescriptor, n: i64) -> BaseRingElement {
        BaseRingElement::constant(d, int(n))
    }

    #[test]
    fn dual_number_products() {
        let (d, e) = eps(2);
        let p = Ring::add(&c(&d, 1), &e).checked_mul(&Ring::sub(&c(&d, 1), &e)).unwrap();
        assert_eq!(p, c(&d, 1));

        let (d, e) = eps(3);
        let x = Ring::add(&c(&d, 1), &e);
        let sq = x.checked_mul(&x).unwrap();
        let expected = Ring::add(&Ring::add(&c(&d, 1), &e.scale(&int(2))), &Ring::mul(&e, &e));
        assert_eq!(sq, expected);
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn two_generators_commute() {
        let d = BaseRingDescriptor::new(vec![2, 2]).unwrap();
        let e1 = BaseRingElement::generator(&d, 0);
        let e2 = BaseRingElement::generator(&d, 1);
        let s = Ring::add(&Ring::mul(&e1, &e2), &Ring::mul(&e2, &e1));
        let e12 = BaseRingElement::from_terms(&d, [(MultiIndex::new(vec![1, 1]), int(2))]);
        assert_eq!(s, e12);
    }

    #[test]
    fn inversion() {
        let q = BaseRingDescriptor::rationals();
        assert_eq!(c(&q, 2).invert().unwrap(), BaseRingElement::constant(&q, rational(1, 2)));

        let (d, e) = eps(3);
        let inv = Ring::add(&c(&d, 1), &e).invert().unwrap();
        let expected = Ring::add(&Ring::sub(&c(&d, 1), &e), &Ring::mul(&e, &e));
        assert_eq!(inv, expected);

        // 3 + e over e^2 = 0: multiply back to 1.
        let (d, e) = eps(2);
        let x = Ring::add(&c(&d, 3), &e);
        let inv = x.invert().unwrap();
        let expected = BaseRingElement::from_terms(
            &d,
            [(MultiIndex::new(vec![0]), rational(1, 3)), (MultiIndex::new(vec![1]), rational(-1, 9))],
        );
        assert_eq!(inv, expected);
        assert!(Ring::mul(&x, &inv).is_one());
    }

    #[test]
    fn non_unit_rejected() {
        let (_, e) = eps(2);
        assert_eq!(e.invert(), Err(Error::NonUnit));
    }

    #[test]
    fn descriptor_mismatch() {
        let (_, e) = eps(2);
        let (_, f) = eps(3);
        assert_eq!(e.checked_add(&f), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn nilpotency_indices() {
        assert_eq!(BaseRingDescriptor::rationals().nilpotency_index(), 1);
        assert_eq!(BaseRingDescriptor::dual(3).nilpotency_index(), 3);
        let d = BaseRingDescriptor::new(vec![2, 3]).unwrap();
        // Brute force: largest degree of an admissible nonzero monomial, plus one.
        let top = d.monomials().iter().map(MultiIndex::degree).max().unwrap();
        assert_eq!(top, 3);
        assert_eq!(d.nilpotency_index(), top + 1);
        assert!(BaseRingDescriptor::new(vec![1]).is_err());
    }
}
