//! The jet groups `G^(c)(R)` and `K^(c)(R)`.
//!
//! Composition is `(rho . sigma)(t_k) = rho_k(sigma(t))`: the right operand
//! is substituted into the left one.
//!
//! Elements are stored to working precision `p = c + nu - 1`, where `nu` is
//! the nilpotency index of the base ring, and truncated for the weight
//! filtration in which each `t_i` and each nilpotent generator has weight
//! one. Terms of degree at most `c` are therefore stored exactly; the extra
//! terms are what makes composition of elements with nilpotent constant
//! terms associative (a plain degree-`c` truncation is not). Over a reduced
//! base, `p = c` and an element is just its `c`-jet.

use std::fmt;

use crate::base_ring::BaseRingElement;
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::ring::{determinant, invert_matrix, Ring};
use crate::series::{Polynomial, TruncatedSeries};

#[derive(Clone, PartialEq, Debug)]
pub struct JetAutomorphism<R: Ring = BaseRingElement> {
    order: usize,
    components: Vec<TruncatedSeries<R>>,
}

/// Subgroup membership flags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub in_g: bool,
    pub in_k: bool,
    pub in_k_u: bool,
    /// Membership in `N_{c'}`, when a `c'` was asked for.
    pub in_n: Option<bool>,
}

/// Working precision for order `c` over a ring of nilpotency index `nu`.
pub fn working_precision(c: usize, nu: usize) -> usize {
    c + nu - 1
}

impl<R: Ring> JetAutomorphism<R> {
    pub fn identity(n: usize, c: usize, shape: &R::Shape) -> Result<Self> {
        check_dims(n, c)?;
        let p = working_precision(c, R::nilpotency_index(shape));
        let components = (0..n).map(|k| TruncatedSeries::variable(n, p, shape, k)).collect();
        Ok(JetAutomorphism { order: c, components })
    }

    /// Zero-lifts the given series to working precision and validates the
    /// group invariants (nilpotent constant terms, unit linear part).
    pub fn from_components(c: usize, components: Vec<TruncatedSeries<R>>) -> Result<Self> {
        let n = components.len();
        check_dims(n, c)?;
        let shape = components[0].shape().clone();
        for s in &components {
            if s.dim() != n {
                return Err(Error::ShapeMismatch(format!(
                    "component in {} variables for an automorphism of dimension {n}",
                    s.dim()
                )));
            }
            if *s.shape() != shape {
                return Err(Error::DescriptorMismatch);
            }
        }
        let p = working_precision(c, R::nilpotency_index(&shape));
        let components: Vec<_> = components.iter().map(|s| s.truncate(p).truncate_weighted(p)).collect();
        let g = JetAutomorphism { order: c, components };
        g.validate()?;
        Ok(g)
    }

    /// Zero-lift of exact polynomials.
    pub fn from_polynomials(c: usize, polys: Vec<Polynomial<R>>) -> Result<Self> {
        let p = match polys.first() {
            Some(f) => working_precision(c, R::nilpotency_index(f.shape())),
            None => c,
        };
        Self::from_components(c, polys.into_iter().map(|f| TruncatedSeries::from_polynomial(f, p)).collect())
    }

    /// `t -> t + a`.
    pub fn translation(c: usize, a: &[R]) -> Result<Self> {
        let n = a.len();
        check_dims(n, c)?;
        let shape = a[0].shape();
        let polys = a
            .iter()
            .enumerate()
            .map(|(k, ak)| Polynomial::variable(n, &shape, k).add(&Polynomial::constant(n, ak.clone())))
            .collect();
        Self::from_polynomials(c, polys)
    }

    /// `t -> M t`, with `M[k][k']` the coefficient of `t_k'` in component `k`.
    pub fn linear(c: usize, matrix: &[Vec<R>]) -> Result<Self> {
        let n = matrix.len();
        check_dims(n, c)?;
        let shape = matrix[0][0].shape();
        let polys = matrix
            .iter()
            .map(|row| Polynomial::from_terms(n, &shape, row.iter().enumerate().map(|(k, x)| (MultiIndex::unit(n, k), x.clone()))))
            .collect();
        Self::from_polynomials(c, polys)
    }

    fn validate(&self) -> Result<()> {
        if !self.components.iter().all(|s| s.constant_term().is_nilpotent()) {
            return Err(Error::NonNilpotentConstant);
        }
        if determinant(&self.linear_part(), &self.shape()).try_inverse().is_none() {
            return Err(Error::SingularLinearPart);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn precision(&self) -> usize {
        self.components[0].order()
    }

    pub fn shape(&self) -> R::Shape {
        self.components[0].shape().clone()
    }

    /// `rho(t_1), .., rho(t_n)` at working precision.
    pub fn components(&self) -> &[TruncatedSeries<R>] {
        &self.components
    }

    /// The components truncated to order `c`.
    pub fn c_jet(&self) -> Vec<TruncatedSeries<R>> {
        self.components.iter().map(|s| s.truncate(self.order)).collect()
    }

    /// `r^k_J`.
    pub fn coeff(&self, k: usize, j: &MultiIndex) -> R {
        self.components[k].coeff(j)
    }

    pub fn constant_terms(&self) -> Vec<R> {
        self.components.iter().map(TruncatedSeries::constant_term).collect()
    }

    /// `(r^k_{e_k'})`.
    pub fn linear_part(&self) -> Vec<Vec<R>> {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|kp| self.coeff(k, &MultiIndex::unit(n, kp))).collect())
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() || self.order != other.order {
            return Err(Error::ShapeMismatch(format!(
                "jets (n={}, c={}) vs (n={}, c={})",
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

    /// `self . other`: `other` is applied first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.precision();
        let components = self
            .components
            .iter()
            .map(|f| f.substitute_weighted(&other.components, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(JetAutomorphism { order: self.order, components })
    }

    /// Two-sided inverse, solved from `v = A^-1 (t - a - h(v))` where
    /// `g = a + A t + h` and `h` has m-order >= 2.
    ///
    /// Every term of `v` has weight >= 1 (the constant `a` is nilpotent), so
    /// `h(v)` has weight >= 2 and each pass fixes one more weight.
    pub fn invert(&self) -> Result<Self> {
        let n = self.dim();
        let p = self.precision();
        let shape = self.shape();
        let a_inv = invert_matrix(&self.linear_part(), &shape).ok_or(Error::SingularLinearPart)?;
        let t: Vec<Polynomial<R>> = (0..n)
            .map(|k| Polynomial::variable(n, &shape, k).sub(&Polynomial::constant(n, self.components[k].constant_term())))
            .collect();
        let h: Vec<Polynomial<R>> = self
            .components
            .iter()
            .map(|s| {
                let mut poly = s.as_polynomial().clone();
                poly.retain(|j, _| j.degree() >= 2);
                poly
            })
            .collect();
        let solve = |rhs: &[Polynomial<R>], w: usize| -> Vec<Polynomial<R>> {
            a_inv
                .iter()
                .map(|row| {
                    let mut acc = Polynomial::zero(n, &shape);
                    for (x, f) in row.iter().zip(rhs) {
                        acc = acc.add(&f.scale(x));
                    }
                    acc.truncate_weighted(w)
                })
                .collect()
        };
        let mut v = solve(&t, 1);
        for w in 2..=p {
            let rhs: Vec<_> = t.iter().zip(&h).map(|(tk, hk)| tk.sub(&hk.substitute_weighted(&v, w))).collect();
            v = solve(&rhs, w);
        }
        let components = v.into_iter().map(|f| TruncatedSeries::from_polynomial(f, p)).collect();
        Ok(JetAutomorphism { order: self.order, components })
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().enumerate().all(|(k, s)| {
            s.terms().all(|(j, x)| if j.as_unit() == Some(k) { x.is_one() } else { x.is_zero() })
                && !s.coeff(&MultiIndex::unit(self.dim(), k)).is_zero()
        })
    }

    pub fn is_in_k(&self) -> bool {
        self.constant_terms().iter().all(Ring::is_zero)
    }

    pub fn is_in_k_u(&self) -> bool {
        self.is_in_k() && is_identity_matrix(&self.linear_part())
    }

    /// Membership in `N_{c'}`: the `c'`-truncation is the identity.
    pub fn is_in_n(&self, c_prime: usize) -> bool {
        let n = self.dim();
        self.components.iter().enumerate().all(|(k, s)| {
            let mut poly = s.as_polynomial().clone();
            poly.retain(|j, _| j.degree() <= c_prime);
            poly == Polynomial::variable(n, s.shape(), k)
        })
    }

    pub fn classify(&self, c_prime: Option<usize>) -> Classification {
        Classification {
            in_g: self.validate().is_ok(),
            in_k: self.is_in_k(),
            in_k_u: self.is_in_k_u(),
            in_n: c_prime.map(|c| self.is_in_n(c)),
        }
    }

    /// `g = tau_a . k` with `k` fixing the origin.
    pub fn split_translation(&self) -> (Vec<R>, Self) {
        let a = self.constant_terms();
        let n = self.dim();
        let components = self
            .components
            .iter()
            .map(|s| {
                let mut poly = s.as_polynomial().clone();
                poly.retain(|j, _| j.degree() > 0);
                TruncatedSeries::from_polynomial(poly, s.order())
            })
            .collect();
        debug_assert_eq!(a.len(), n);
        (a, JetAutomorphism { order: self.order, components })
    }

    /// `k = A . u` with `A` linear and `u` unipotent.
    pub fn split_linear_unipotent(&self) -> Result<(Self, Self)> {
        if !self.is_in_k() {
            return Err(Error::NotInK);
        }
        let a = Self::linear(self.order, &self.linear_part())?;
        let u = a.invert()?.compose(self)?;
        Ok((a, u))
    }

    /// Truncation to a lower order `c'`; a group homomorphism `G^(c) -> G^(c')`.
    pub fn truncate(&self, c_prime: usize) -> Result<Self> {
        if c_prime == 0 || c_prime > self.order {
            return Err(Error::InvalidOrder(format!("cannot truncate order {} to {c_prime}", self.order)));
        }
        let p = working_precision(c_prime, R::nilpotency_index(&self.shape()));
        let components = self.components.iter().map(|s| s.truncate(p).truncate_weighted(p)).collect();
        Ok(JetAutomorphism { order: c_prime, components })
    }

    /// Same `c'`-jet, component by component.
    pub fn c_equivalent(&self, other: &Self, c_prime: usize) -> bool {
        self.dim() == other.dim()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.truncate(c_prime) == b.truncate(c_prime))
    }
}

fn check_dims(n: usize, c: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    if c == 0 {
        return Err(Error::InvalidOrder("jet order must be at least 1".into()));
    }
    Ok(())
}

fn is_identity_matrix<R: Ring>(m: &[Vec<R>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// Component-wise `M . s`.
impl<R: Ring + fmt::Display> fmt::Display for JetAutomorphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c_jet().iter().map(|s| s.as_polynomial().to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::BaseRingDescriptor;
    use crate::ring::{int, rational};

    type Jet = JetAutomorphism<BaseRingElement>;

    fn uni(d: &BaseRingDescriptor, c: usize, coeffs: &[BaseRingElement]) -> Jet {
        let poly = Polynomial::from_terms(
            1,
            d,
            coeffs.iter().enumerate().map(|(i, x)| (MultiIndex::new(vec![i as u32]), x.clone())),
        );
        Jet::from_polynomials(c, vec![poly]).unwrap()
    }

    fn q_uni(c: usize, coeffs: &[(i64, i64)]) -> Jet {
        let d = BaseRingDescriptor::rationals();
        let cs: Vec<_> = coeffs.iter().map(|&(n, m)| BaseRingElement::constant(&d, rational(n, m))).collect();
        uni(&d, c, &cs)
    }

    fn ints(c: usize, coeffs: &[i64]) -> Jet {
        q_uni(c, &coeffs.iter().map(|&x| (x, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn identity_shapes() {
        let q = BaseRingDescriptor::rationals();
        let id = Jet::identity(2, 3, &q).unwrap();
        assert_eq!(id.dim(), 2);
        assert!(id.is_in_k_u());
        assert!(Jet::identity(1, 0, &q).is_err());
        let d = BaseRingDescriptor::dual(2);
        assert_eq!(Jet::identity(1, 2, &d).unwrap().precision(), 3);
    }

    #[test]
    fn compose_examples() {
        let rho = ints(4, &[0, 1, 1]);
        let sigma = ints(4, &[0, 1, 0, 1]);
        assert_eq!(rho.compose(&sigma).unwrap(), ints(4, &[0, 1, 1, 1, 2]));
        let id = Jet::identity(1, 4, &BaseRingDescriptor::rationals()).unwrap();
        assert_eq!(rho.compose(&id).unwrap(), rho);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(ints(3, &[0, 2]).invert().unwrap(), q_uni(3, &[(0, 1), (1, 2)]));
        let g = ints(4, &[0, 1, 1]);
        let inv = g.invert().unwrap();
        assert_eq!(inv, ints(4, &[0, 1, -1, 2, -5]));
        assert!(g.compose(&inv).unwrap().is_in_n(4));

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let g = uni(&d, 2, &[e.clone(), one.clone()]);
        assert_eq!(g.invert().unwrap(), uni(&d, 2, &[e.neg(), one]));
    }

    #[test]
    fn singular_linear_part_rejected() {
        let d = BaseRingDescriptor::rationals();
        let poly = Polynomial::from_terms(1, &d, [(MultiIndex::new(vec![2]), BaseRingElement::constant(&d, int(1)))]);
        assert_eq!(Jet::from_polynomials(3, vec![poly]), Err(Error::SingularLinearPart));
    }

    #[test]
    fn classification() {
        let g = ints(3, &[0, 1, 0, 1]);
        let f = g.classify(Some(2));
        assert!(f.in_g && f.in_k && f.in_k_u);
        assert_eq!(f.in_n, Some(true));
        assert_eq!(g.classify(Some(3)).in_n, Some(false));

        let g = ints(3, &[0, 2, 1]);
        let f = g.classify(None);
        assert!(f.in_k && !f.in_k_u);

        let d = BaseRingDescriptor::dual(2);
        let g = uni(&d, 2, &[BaseRingElement::generator(&d, 0), BaseRingElement::constant(&d, int(1))]);
        let f = g.classify(None);
        assert!(f.in_g && !f.in_k);
    }

    #[test]
    fn translation_split() {
        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let z = BaseRingElement::zero(&d);
        let g = uni(&d, 2, &[e.clone(), one.clone(), e.clone()]);
        let (a, k) = g.split_translation();
        assert_eq!(a, vec![e.clone()]);
        assert_eq!(k, uni(&d, 2, &[z, one, e.clone()]));
        let tau = Jet::translation(2, &a).unwrap();
        assert_eq!(tau.compose(&k).unwrap(), g);

        let (a, k2) = k.split_translation();
        assert!(a[0].is_zero());
        assert_eq!(k2, k);
    }

    #[test]
    fn linear_unipotent_split() {
        let k = ints(3, &[0, 2, 1]);
        let (a, u) = k.split_linear_unipotent().unwrap();
        assert_eq!(a, ints(3, &[0, 2]));
        assert_eq!(u, q_uni(3, &[(0, 1), (1, 1), (1, 2)]));
        assert_eq!(a.compose(&u).unwrap(), k);

        let k = ints(3, &[0, 1, 5, 1]);
        let (a, u) = k.split_linear_unipotent().unwrap();
        assert!(a.is_in_n(3));
        assert_eq!(u, k);

        let (a, u) = ints(3, &[0, 3]).split_linear_unipotent().unwrap();
        assert_eq!(a, ints(3, &[0, 3]));
        assert!(u.is_in_n(3));

        let d = BaseRingDescriptor::dual(2);
        let g = uni(&d, 2, &[BaseRingElement::generator(&d, 0), BaseRingElement::constant(&d, int(1))]);
        assert_eq!(g.split_linear_unipotent(), Err(Error::NotInK));
    }

    #[test]
    fn c_equivalence() {
        let g = ints(4, &[0, 1, 0, 1]);
        let h = ints(4, &[0, 1, 0, 0, 1]);
        assert!(g.c_equivalent(&h, 2));
        assert!(!g.c_equivalent(&h, 3));
        assert!(g.c_equivalent(&g, 4));
    }

    #[test]
    fn plain_truncation_is_not_associative_with_nilpotent_translations() {
        // rho = sigma = t + t^2, tau = e + t over Q[e]/(e^2), c = 2. Working
        // purely with 2-jets, the two bracketings differ by 6e t^2.
        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let z = BaseRingElement::zero(&d);
        let s = |cs: &[BaseRingElement]| {
            TruncatedSeries::from_terms(1, 2, &d, cs.iter().enumerate().map(|(i, x)| (MultiIndex::new(vec![i as u32]), x.clone())))
        };
        let rho = s(&[z.clone(), one.clone(), one.clone()]);
        let tau = s(&[e.clone(), one.clone()]);
        let c2 = |f: &TruncatedSeries<BaseRingElement>, g: &TruncatedSeries<BaseRingElement>| {
            f.substitute(std::slice::from_ref(g), 2).unwrap()
        };
        let left = c2(&c2(&rho, &rho), &tau);
        let right = c2(&rho, &c2(&rho, &tau));
        let diff = right.sub(&left).unwrap();
        assert_eq!(diff.coeff(&MultiIndex::new(vec![2])), e.scale(&int(6)));

        // In the working-precision model both bracketings agree.
        let rho = uni(&d, 2, &[z.clone(), one.clone(), one.clone()]);
        let tau = uni(&d, 2, &[e, one]);
        let l = rho.compose(&rho).unwrap().compose(&tau).unwrap();
        let r = rho.compose(&rho.compose(&tau).unwrap()).unwrap();
        assert_eq!(l, r);
    }
}
