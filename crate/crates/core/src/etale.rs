//! Jets of split etale roofs given by polynomial charts.
//!
//! A roof is a pair of polynomial maps `phi, psi` out of a common chart,
//! together with a basepoint `w` whose image under each leg reduces to the
//! origin. Its jet is `omega = psi_hat . phi_hat^-1`, with `f_hat` the Taylor
//! expansion `t -> f(w + t)`.

use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::jet_group::{working_precision, JetAutomorphism};
use crate::ring::{determinant, Ring};
use crate::series::{Polynomial, TruncatedSeries};

/// Serialization tag for the direction of `omega`.
pub const CONVENTION: &str = "psi_after_phi_inverse";

/// Exact polynomial map `R^n -> R^n`.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMap {
    components: Vec<Polynomial<BaseRingElement>>,
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial<BaseRingElement>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("polynomial map needs at least one component".into()));
        }
        let desc = components[0].shape().clone();
        for f in &components {
            if f.dim() != n {
                return Err(Error::ShapeMismatch(format!("component in {} variables, expected {n}", f.dim())));
            }
            if *f.shape() != desc {
                return Err(Error::DescriptorMismatch);
            }
        }
        Ok(PolyMap { components })
    }

    pub fn identity(n: usize, desc: &BaseRingDescriptor) -> Self {
        PolyMap { components: (0..n).map(|k| Polynomial::variable(n, desc, k)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn descriptor(&self) -> &BaseRingDescriptor {
        self.components[0].shape()
    }

    pub fn components(&self) -> &[Polynomial<BaseRingElement>] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch("polynomial maps of different dimension".into()));
        }
        if self.descriptor() != other.descriptor() {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    /// `self . g`, exactly.
    pub fn compose(&self, g: &PolyMap) -> Result<PolyMap> {
        self.check_same(g)?;
        Ok(PolyMap { components: self.components.iter().map(|f| f.substitute(&g.components)).collect() })
    }

    pub fn evaluate(&self, w: &[BaseRingElement]) -> Vec<BaseRingElement> {
        self.components.iter().map(|f| f.evaluate(w)).collect()
    }

    /// `(d f_k / d t_k')(w)`.
    pub fn jacobian_at(&self, w: &[BaseRingElement]) -> Vec<Vec<BaseRingElement>> {
        self.components
            .iter()
            .map(|f| (0..self.dim()).map(|kp| f.derivative(kp).evaluate(w)).collect())
            .collect()
    }

    pub fn is_etale_at(&self, w: &[BaseRingElement]) -> bool {
        determinant(&self.jacobian_at(w), self.descriptor()).try_inverse().is_some()
    }

    /// Taylor expansion at `w`: the components of `f(w + t)` truncated to `order`.
    pub fn jet_at(&self, w: &[BaseRingElement], order: usize) -> Result<Vec<TruncatedSeries<BaseRingElement>>> {
        self.check_point(w)?;
        let n = self.dim();
        let desc = self.descriptor();
        let shifted: Vec<_> = (0..n)
            .map(|k| Polynomial::variable(n, desc, k).add(&Polynomial::constant(n, w[k].clone())))
            .collect();
        Ok(self
            .components
            .iter()
            .map(|f| TruncatedSeries::from_polynomial(f.substitute_bounded(&shifted, Some(order)), order))
            .collect())
    }

    fn check_point(&self, w: &[BaseRingElement]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("basepoint of length {} for dimension {}", w.len(), self.dim())));
        }
        if w.iter().any(|x| x.descriptor() != self.descriptor()) {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }
}

/// A split roof `X <- U -> Y` on polynomial charts, pointed at `w`.
#[derive(Clone, PartialEq, Debug)]
pub struct RoofChart {
    phi: PolyMap,
    psi: PolyMap,
    basepoint: Vec<BaseRingElement>,
}

impl RoofChart {
    /// Checks that both legs send `w` into the nilradical and are etale at `w`.
    pub fn new(phi: PolyMap, psi: PolyMap, basepoint: Vec<BaseRingElement>) -> Result<Self> {
        phi.check_same(&psi)?;
        phi.check_point(&basepoint)?;
        for leg in [&phi, &psi] {
            if !leg.evaluate(&basepoint).iter().all(Ring::is_nilpotent) {
                return Err(Error::SectionMismatch);
            }
            if !leg.is_etale_at(&basepoint) {
                return Err(Error::NotEtale);
            }
        }
        Ok(RoofChart { phi, psi, basepoint })
    }

    /// The roof `(id, zero-lift of omega)` at the origin; its jet is `omega`.
    pub fn witness(omega: &JetAutomorphism) -> Result<Self> {
        let n = omega.dim();
        let desc = omega.shape();
        let psi = PolyMap::new(omega.components().iter().map(|s| s.as_polynomial().clone()).collect())?;
        Self::new(PolyMap::identity(n, &desc), psi, vec![BaseRingElement::zero(&desc); n])
    }

    pub fn phi(&self) -> &PolyMap {
        &self.phi
    }

    pub fn psi(&self) -> &PolyMap {
        &self.psi
    }

    pub fn basepoint(&self) -> &[BaseRingElement] {
        &self.basepoint
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// `omega = psi_hat . phi_hat^-1` in `G^(c)(R)`.
    pub fn jet(&self, c: usize) -> Result<JetAutomorphism> {
        let p = working_precision(c, self.phi.descriptor().nilpotency_index());
        let phi_hat = JetAutomorphism::from_components(c, self.phi.jet_at(&self.basepoint, p)?)?;
        let psi_hat = JetAutomorphism::from_components(c, self.psi.jet_at(&self.basepoint, p)?)?;
        psi_hat.compose(&phi_hat.invert()?)
    }

    /// Legs swapped; its jet is the inverse jet.
    pub fn mirror(&self) -> Self {
        RoofChart { phi: self.psi.clone(), psi: self.phi.clone(), basepoint: self.basepoint.clone() }
    }

    /// Both legs precomposed with `g`, based at `w'` with `g(w') = w`.
    pub fn restrict(&self, g: &PolyMap, new_basepoint: Vec<BaseRingElement>) -> Result<Self> {
        self.phi.check_same(g)?;
        g.check_point(&new_basepoint)?;
        if g.evaluate(&new_basepoint) != self.basepoint {
            return Err(Error::BasepointMismatch);
        }
        if !g.is_etale_at(&new_basepoint) {
            return Err(Error::NotEtale);
        }
        Self::new(self.phi.compose(g)?, self.psi.compose(g)?, new_basepoint)
    }

    /// Both legs send `w` exactly to the origin.
    pub fn is_strict(&self) -> bool {
        self.phi.evaluate(&self.basepoint).iter().chain(self.psi.evaluate(&self.basepoint).iter()).all(Ring::is_zero)
    }
}

/// `g` with `g(w') = w`: `w + L (t - w') + h(t - w')`, `L` the given linear part.
pub fn chart_through(
    w: &[BaseRingElement],
    w_prime: &[BaseRingElement],
    linear: &[Vec<BaseRingElement>],
    higher: &[Polynomial<BaseRingElement>],
) -> Result<PolyMap> {
    let n = w.len();
    let desc = w[0].descriptor().clone();
    let shifted: Vec<_> = (0..n)
        .map(|k| Polynomial::variable(n, &desc, k).sub(&Polynomial::constant(n, w_prime[k].clone())))
        .collect();
    let components = (0..n)
        .map(|k| {
            let lin = Polynomial::from_terms(
                n,
                &desc,
                linear[k].iter().enumerate().map(|(kp, x)| (MultiIndex::unit(n, kp), x.clone())),
            );
            let mut h = higher[k].clone();
            h.retain(|j, _| j.degree() >= 2);
            Polynomial::constant(n, w[k].clone()).add(&lin.add(&h).substitute(&shifted))
        })
        .collect();
    PolyMap::new(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn q() -> BaseRingDescriptor {
        BaseRingDescriptor::rationals()
    }

    fn uni(d: &BaseRingDescriptor, coeffs: &[(u32, BaseRingElement)]) -> PolyMap {
        PolyMap::new(vec![Polynomial::from_terms(
            1,
            d,
            coeffs.iter().map(|(j, x)| (MultiIndex::new(vec![*j]), x.clone())),
        )])
        .unwrap()
    }

    fn qi(coeffs: &[(u32, i64)]) -> PolyMap {
        let d = q();
        uni(&d, &coeffs.iter().map(|&(j, x)| (j, BaseRingElement::constant(&d, int(x)))).collect::<Vec<_>>())
    }

    fn q_jet(c: usize, coeffs: &[(u32, i64)]) -> JetAutomorphism {
        JetAutomorphism::from_polynomials(c, qi(coeffs).components().to_vec()).unwrap()
    }

    #[test]
    fn exact_composition() {
        assert_eq!(qi(&[(2, 1)]).compose(&qi(&[(0, 1), (1, 1)])).unwrap(), qi(&[(0, 1), (1, 2), (2, 1)]));
        let f = qi(&[(1, 1), (2, 1)]);
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff.degree(), 4);
        assert_eq!(ff, qi(&[(1, 1), (2, 2), (3, 2), (4, 1)]));
        assert_eq!(f.compose(&PolyMap::identity(1, &q())).unwrap(), f);
    }

    #[test]
    fn taylor_jets() {
        let zero = vec![BaseRingElement::zero(&q())];
        let jet = qi(&[(2, 1)]).jet_at(&zero, 3).unwrap();
        assert_eq!(jet[0].as_polynomial(), &qi(&[(2, 1)]).components()[0]);
        assert_eq!(jet[0].order(), 3);

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let t = uni(&d, &[(1, one.clone())]);
        let jet = t.jet_at(std::slice::from_ref(&e), 2).unwrap();
        assert_eq!(jet[0].coeff(&MultiIndex::new(vec![0])), e);
        assert_eq!(jet[0].coeff(&MultiIndex::new(vec![1])), one.clone());
        let cube = uni(&d, &[(3, one)]);
        let jet = cube.jet_at(std::slice::from_ref(&e), 2).unwrap();
        assert_eq!(jet[0].terms().count(), 1);
        assert_eq!(jet[0].coeff(&MultiIndex::new(vec![2])), e.scale(&int(3)));
    }

    #[test]
    fn roof_jets() {
        let zero = vec![BaseRingElement::zero(&q())];
        let phi = qi(&[(1, 1), (3, 1)]);
        let psi = qi(&[(1, 1), (2, -1)]);
        let sym = RoofChart::new(phi.clone(), phi.clone(), zero.clone()).unwrap();
        assert!(sym.jet(4).unwrap().is_in_n(4));

        let roof = RoofChart::new(phi.clone(), psi.clone(), zero.clone()).unwrap();
        let omega = roof.jet(4).unwrap();
        assert_eq!(omega, q_jet(4, &[(1, 1), (2, -1), (3, -1), (4, 2)]));
        let back = roof.mirror().jet(4).unwrap();
        assert!(back.compose(&omega).unwrap().is_in_n(4));
        assert_eq!(roof.mirror().mirror(), roof);

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let id = PolyMap::identity(1, &d);
        let r = RoofChart::new(id.clone(), id, vec![e]).unwrap();
        assert!(r.jet(2).unwrap().is_in_n(2));
    }

    #[test]
    fn restriction_keeps_the_jet() {
        let zero = vec![BaseRingElement::zero(&q())];
        let roof = RoofChart::new(qi(&[(1, 1), (3, 1)]), qi(&[(1, 1), (2, -1)]), zero.clone()).unwrap();
        let omega = roof.jet(4).unwrap();
        for g in [PolyMap::identity(1, &q()), qi(&[(1, 1), (4, 1)]), qi(&[(1, 2)])] {
            let r = roof.restrict(&g, zero.clone()).unwrap();
            assert_eq!(r.jet(4).unwrap(), omega);
        }
        let shifted = qi(&[(0, 1), (1, 1)]);
        assert_eq!(roof.restrict(&shifted, zero.clone()), Err(Error::BasepointMismatch));
        assert_eq!(roof.restrict(&qi(&[(2, 1)]), zero), Err(Error::NotEtale));
    }

    #[test]
    fn strictness() {
        let zero = vec![BaseRingElement::zero(&q())];
        let roof = RoofChart::new(qi(&[(1, 1), (3, 1)]), qi(&[(1, 1), (2, -1)]), zero).unwrap();
        assert!(roof.is_strict() && roof.jet(3).unwrap().is_in_k());
        assert!(roof.mirror().is_strict());

        let d = BaseRingDescriptor::dual(2);
        let e = BaseRingElement::generator(&d, 0);
        let one = BaseRingElement::constant(&d, int(1));
        let psi = uni(&d, &[(0, e.clone()), (1, one)]);
        let r = RoofChart::new(PolyMap::identity(1, &d), psi, vec![BaseRingElement::zero(&d)]).unwrap();
        assert!(!r.is_strict());
        let omega = r.jet(2).unwrap();
        assert!(!omega.is_in_k());
        assert_eq!(omega.constant_terms(), vec![e]);
    }

    #[test]
    fn invalid_roofs() {
        let zero = vec![BaseRingElement::zero(&q())];
        assert_eq!(RoofChart::new(qi(&[(0, 1), (1, 1)]), qi(&[(1, 1)]), zero.clone()), Err(Error::SectionMismatch));
        assert_eq!(RoofChart::new(qi(&[(2, 1)]), qi(&[(1, 1)]), zero), Err(Error::NotEtale));
    }
}
