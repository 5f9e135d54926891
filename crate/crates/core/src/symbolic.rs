//! Polynomials in formal coordinates `a^k_J` and their localizations at
//! determinants of linear parts.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::index::MultiIndex;
use crate::ring::{format_rational, Ring};

type PolyCache = OnceLock<Mutex<HashMap<(char, usize, u32), Arc<Poly>>>>;

/// Coordinate `alphabet^k_J`: coefficient of `t^J` in component `k` (0-based)
/// of a generic automorphism named by `alphabet`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub alphabet: char,
    pub k: usize,
    pub index: MultiIndex,
}

impl Var {
    pub fn new(alphabet: char, k: usize, index: MultiIndex) -> Self {
        Var { alphabet, k, index }
    }

    /// `|J| - 1`.
    pub fn grading_degree(&self) -> i64 {
        self.index.degree() as i64 - 1
    }

    pub fn is_linear(&self) -> bool {
        self.index.degree() == 1
    }

    pub fn renamed(&self, alphabet: char) -> Var {
        Var { alphabet, ..self.clone() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.dim() == 1 {
            write!(f, "{}{}", self.alphabet, self.index.degree())
        } else {
            write!(f, "{}{}_{}", self.alphabet, self.k + 1, self.index)
        }
    }
}

/// Sorted variable powers; the empty monomial is `1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn exponent_of(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    /// Sum of `|J| - 1` over the variables, with multiplicity.
    pub fn grading_degree(&self) -> i64 {
        self.0.iter().map(|(v, e)| v.grading_degree() * *e as i64).sum()
    }

    fn degree_in(&self, alphabet: char) -> u32 {
        self.0.iter().filter(|(v, _)| v.alphabet == alphabet).map(|(_, e)| e).sum()
    }

    fn without(&self, v: &Var, by: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(w, e)| {
                    if w == v {
                        (*e > by).then(|| (w.clone(), e - by))
                    } else {
                        Some((w.clone(), *e))
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial over `Q` in the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(q: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), q);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, q) in terms {
            p.add_term(m, q);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, q) in &small.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(BigRational::zero) += q1 * q2;
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, q)| !q.is_zero()).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    /// Evaluates in any ring by substituting a value for each variable.
    pub fn evaluate<R: Ring>(&self, shape: &R::Shape, value: &dyn Fn(&Var) -> R) -> R {
        let mut cache: HashMap<&Var, Vec<R>> = HashMap::new();
        let mut acc = R::zero(shape);
        for (m, q) in &self.terms {
            let mut term = R::from_rational(shape, q.clone());
            for (v, e) in &m.0 {
                let powers = cache.entry(v).or_insert_with(|| vec![R::one(shape), value(v)]);
                while powers.len() <= *e as usize {
                    let next = powers.last().unwrap().mul(&powers[1]);
                    powers.push(next);
                }
                term = term.mul(&powers[*e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// True iff every monomial has grading degree `d`.
    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.grading_degree() == d)
    }

    /// Renames every variable of alphabet `from` to `to`.
    pub fn rename(&self, from: char, to: char) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, q)| {
            let m = Monomial::from_powers(
                m.0.iter().map(|(v, e)| (if v.alphabet == from { v.renamed(to) } else { v.clone() }, *e)),
            );
            (m, q.clone())
        }))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let abs = format_rational(&q.abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.0.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `det(alphabet^k_{e_k'})` for an `n x n` linear part, memoized.
pub fn det_poly(alphabet: char, n: usize, power: u32) -> Arc<Poly> {
    static CACHE: PolyCache = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&(alphabet, n, power)) {
        return p.clone();
    }
    let p = if power == 0 {
        Poly::constant(BigRational::one())
    } else if power == 1 {
        leibniz_det(alphabet, n)
    } else {
        det_poly(alphabet, n, power - 1).mul(&det_poly(alphabet, n, 1))
    };
    let p = Arc::new(p);
    cache.lock().unwrap().insert((alphabet, n, power), p.clone());
    p
}

fn leibniz_det(alphabet: char, n: usize) -> Poly {
    let mut out = Poly::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let sign = permutation_sign(p);
        let m = Monomial::from_powers(
            (0..n).map(|k| (Var::new(alphabet, k, MultiIndex::unit(n, p[k])), 1)),
        );
        out.add_term(m, BigRational::from_integer(sign.into()));
    });
    out
}

fn permutations(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Shape of the symbolic ring: the dimension `n` fixing what `det` means.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SymbolicShape {
    pub dim: usize,
}

/// `numerator / prod_alpha det(alpha)^{det_power[alpha]}`.
///
/// A function on `K^(c)` (one alphabet) or on a product of copies of it
/// (several alphabets). Never reduced by polynomial division: equality is
/// decided by cross-multiplying.
#[derive(Clone, Debug)]
pub struct CoordRingElement {
    dim: usize,
    numerator: Poly,
    det_power: BTreeMap<char, u32>,
}

/// Values of the coproduct: left factor in alphabet `b`, right in `c`.
pub type TensorCoordElement = CoordRingElement;

impl CoordRingElement {
    pub fn new(dim: usize, numerator: Poly, det_power: BTreeMap<char, u32>) -> Self {
        let mut x = CoordRingElement { dim, numerator, det_power };
        x.normalize();
        x
    }

    pub fn polynomial(dim: usize, numerator: Poly) -> Self {
        Self::new(dim, numerator, BTreeMap::new())
    }

    pub fn var(dim: usize, v: Var) -> Self {
        Self::polynomial(dim, Poly::var(v))
    }

    pub fn constant(dim: usize, q: BigRational) -> Self {
        Self::polynomial(dim, Poly::constant(q))
    }

    /// `det(alphabet)^-power`.
    pub fn det_inverse(dim: usize, alphabet: char, power: u32) -> Self {
        Self::new(dim, Poly::constant(BigRational::one()), [(alphabet, power)].into())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn det_powers(&self) -> &BTreeMap<char, u32> {
        &self.det_power
    }

    pub fn alphabets(&self) -> BTreeSet<char> {
        let mut s: BTreeSet<char> = self.numerator.vars().into_iter().map(|v| v.alphabet).collect();
        s.extend(self.det_power.iter().filter(|(_, &p)| p > 0).map(|(a, _)| *a));
        s
    }

    /// Numerator times `det^(target - own)` for each alphabet.
    fn lifted(&self, target: &BTreeMap<char, u32>) -> Poly {
        let mut p = self.numerator.clone();
        for (a, &t) in target {
            let own = self.det_power.get(a).copied().unwrap_or(0);
            if t > own {
                p = p.mul(&det_poly(*a, self.dim, t - own));
            }
        }
        p
    }

    fn common_powers(&self, other: &Self) -> BTreeMap<char, u32> {
        let mut out = self.det_power.clone();
        for (a, &p) in &other.det_power {
            let e = out.entry(*a).or_insert(0);
            *e = (*e).max(p);
        }
        out
    }

    /// Cancels powers of `det` when `det` is a single variable (`n = 1`).
    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.det_power.clear();
            return;
        }
        self.det_power.retain(|_, p| *p > 0);
        if self.dim != 1 {
            return;
        }
        let alphabets: Vec<char> = self.det_power.keys().copied().collect();
        for a in alphabets {
            let v = Var::new(a, 0, MultiIndex::unit(1, 0));
            let own = self.det_power[&a];
            let common = self.numerator.terms.keys().map(|m| m.exponent_of(&v)).min().unwrap_or(0);
            let cancel = common.min(own);
            if cancel == 0 {
                continue;
            }
            self.numerator = Poly::from_terms(
                self.numerator.terms.iter().map(|(m, q)| (m.without(&v, cancel), q.clone())),
            );
            let left = own - cancel;
            if left == 0 {
                self.det_power.remove(&a);
            } else {
                self.det_power.insert(a, left);
            }
        }
    }

    /// Evaluates in `R`, substituting a value for each variable; `None` if a
    /// needed determinant is not a unit there.
    pub fn evaluate<R: Ring>(&self, shape: &R::Shape, value: &dyn Fn(&Var) -> R) -> Option<R> {
        let mut out = self.numerator.evaluate(shape, value);
        for (&a, &p) in &self.det_power {
            let det = det_poly(a, self.dim, 1).evaluate(shape, value);
            out = out.mul(&det.try_inverse()?.pow(p));
        }
        Some(out)
    }

    /// Grading degree if every monomial of the numerator has the same one.
    /// `det` has degree 0, so the denominator never contributes.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.numerator.terms.keys().map(Monomial::grading_degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.numerator.is_homogeneous(d)
    }

    /// Largest `|J|` among variables in the numerator (0 if none).
    pub fn max_index_degree(&self) -> usize {
        self.numerator.vars().iter().map(|v| v.index.degree()).max().unwrap_or(0)
    }

    pub fn rename(&self, from: char, to: char) -> Self {
        let mut dp = self.det_power.clone();
        if let Some(p) = dp.remove(&from) {
            *dp.entry(to).or_insert(0) += p;
        }
        Self::new(self.dim, self.numerator.rename(from, to), dp)
    }

    fn inverse_impl(&self) -> Option<Self> {
        if self.numerator.is_zero() {
            return None;
        }
        if let Some(q) = self.numerator.as_constant() {
            return Some(Self::new(
                self.dim,
                Poly::constant(q.recip()).mul(&self.lifted_dets_only()),
                BTreeMap::new(),
            ));
        }
        // A unit is lambda * prod det(alpha)^j times a det-power denominator.
        let mut exps: BTreeMap<char, u32> = BTreeMap::new();
        for v in self.numerator.vars() {
            if !v.is_linear() {
                return None;
            }
            exps.entry(v.alphabet).or_insert(0);
        }
        let n = self.dim as u32;
        for (a, e) in exps.iter_mut() {
            let degs: BTreeSet<u32> = self.numerator.terms.keys().map(|m| m.degree_in(*a)).collect();
            if degs.len() != 1 {
                return None;
            }
            let d = *degs.iter().next().unwrap();
            if !d.is_multiple_of(n) {
                return None;
            }
            *e = d / n;
        }
        let mut candidate = Poly::constant(BigRational::one());
        for (a, &e) in &exps {
            candidate = candidate.mul(&det_poly(*a, self.dim, e));
        }
        let (m0, q0) = candidate.terms.iter().next()?;
        let lambda = self.numerator.terms.get(m0)? / q0;
        if candidate.scale(&lambda) != self.numerator {
            return None;
        }
        let num = Poly::constant(lambda.recip()).mul(&self.lifted_dets_only());
        Some(Self::new(self.dim, num, exps))
    }

    /// `prod det(alpha)^{det_power[alpha]}` as a polynomial.
    fn lifted_dets_only(&self) -> Poly {
        let mut p = Poly::constant(BigRational::one());
        for (&a, &e) in &self.det_power {
            p = p.mul(&det_poly(a, self.dim, e));
        }
        p
    }
}

impl PartialEq for CoordRingElement {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.det_power == other.det_power {
            return self.numerator == other.numerator;
        }
        let common = self.common_powers(other);
        self.lifted(&common) == other.lifted(&common)
    }
}

impl Ring for CoordRingElement {
    type Shape = SymbolicShape;

    fn shape(&self) -> SymbolicShape {
        SymbolicShape { dim: self.dim }
    }

    fn zero(shape: &SymbolicShape) -> Self {
        Self::polynomial(shape.dim, Poly::zero())
    }

    fn from_rational(shape: &SymbolicShape, q: BigRational) -> Self {
        Self::constant(shape.dim, q)
    }

    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        if other.numerator.is_zero() {
            return self.clone();
        }
        if self.numerator.is_zero() {
            return other.clone();
        }
        if self.det_power == other.det_power {
            return Self::new(self.dim, self.numerator.add(&other.numerator), self.det_power.clone());
        }
        let common = self.common_powers(other);
        Self::new(self.dim, self.lifted(&common).add(&other.lifted(&common)), common)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.numerator.is_zero() || other.numerator.is_zero() {
            return Self::zero(&self.shape());
        }
        let mut dp = self.det_power.clone();
        for (a, &p) in &other.det_power {
            *dp.entry(*a).or_insert(0) += p;
        }
        Self::new(self.dim, self.numerator.mul(&other.numerator), dp)
    }

    fn neg(&self) -> Self {
        CoordRingElement {
            dim: self.dim,
            numerator: self.numerator.neg(),
            det_power: self.det_power.clone(),
        }
    }

    fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.dim, self.numerator.scale(q), self.det_power.clone())
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inverse_impl()
    }

    fn is_nilpotent(&self) -> bool {
        self.numerator.is_zero()
    }

    fn nilpotency_index(_shape: &SymbolicShape) -> usize {
        1
    }
}

impl fmt::Display for CoordRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.det_power.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        let mut parts = Vec::new();
        if self.numerator.num_terms() > 1 {
            parts.push(format!("({})", self.numerator));
        } else if self.numerator.as_constant() != Some(BigRational::one()) {
            parts.push(self.numerator.to_string());
        }
        for (a, p) in &self.det_power {
            if self.dim == 1 {
                parts.push(format!("{a}1^-{p}"));
            } else {
                parts.push(format!("det({a})^-{p}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn a(n: usize, k: usize, j: &[u32]) -> CoordRingElement {
        CoordRingElement::var(n, Var::new('a', k, MultiIndex::new(j.to_vec())))
    }

    #[test]
    fn det_of_two_by_two() {
        let d = det_poly('a', 2, 1);
        assert_eq!(d.num_terms(), 2);
        let expected = a(2, 0, &[1, 0]).mul(&a(2, 1, &[0, 1])).sub(&a(2, 0, &[0, 1]).mul(&a(2, 1, &[1, 0])));
        assert_eq!(CoordRingElement::polynomial(2, (*d).clone()), expected);
    }

    #[test]
    fn cross_multiplied_equality() {
        let n = 2;
        let det = CoordRingElement::polynomial(n, (*det_poly('a', n, 1)).clone());
        let x = a(n, 0, &[2, 0]);
        let y = x.mul(&det).mul(&CoordRingElement::det_inverse(n, 'a', 1));
        assert_eq!(y.det_powers().get(&'a'), Some(&1));
        assert_eq!(x, y);
    }

    #[test]
    fn units_invert() {
        let n = 2;
        let det = CoordRingElement::polynomial(n, (*det_poly('a', n, 1)).clone());
        let inv = det.scale(&int(3)).try_inverse().unwrap();
        assert!(det.scale(&int(3)).mul(&inv).is_one());
        assert!(a(n, 0, &[1, 0]).try_inverse().is_none());
        // n = 1: det is a1 itself.
        let a1 = a(1, 0, &[1]);
        let inv = a1.pow(2).try_inverse().unwrap();
        assert_eq!(inv.to_string(), "a1^-2");
        assert!(a(1, 0, &[2]).try_inverse().is_none());
    }

    #[test]
    fn normalization_cancels_monomial_det() {
        let a1 = a(1, 0, &[1]);
        let a2 = a(1, 0, &[2]);
        let x = a2.mul(&a1).mul(&CoordRingElement::det_inverse(1, 'a', 4));
        assert_eq!(x.det_powers().get(&'a'), Some(&3));
        assert_eq!(x.numerator(), a2.numerator());
    }

    #[test]
    fn evaluation() {
        use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
        let d = BaseRingDescriptor::rationals();
        let a1 = a(1, 0, &[1]);
        let x = a(1, 0, &[2]).neg().mul(&a1.pow(3).try_inverse().unwrap());
        let val = |v: &Var| BaseRingElement::constant(&d, int(if v.index.degree() == 1 { 2 } else { 5 }));
        let out = x.evaluate(&d, &val).unwrap();
        assert_eq!(out.rational_part(), crate::ring::rational(-5, 8));
    }
}
