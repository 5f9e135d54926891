//! Coordinate ring of `K^(c)`: coproduct, counit, antipode and the grading
//! `deg(a^k_J) = |J| - 1`.
//!
//! Everything is read off generic automorphisms whose coefficients are the
//! formal coordinates: the coproduct from composing a generic `b` with a
//! generic `c` (left factor = outer map), the antipode from inverting a
//! generic `a`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::base_ring::BaseRingElement;
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::jet_group::JetAutomorphism;
use crate::series::Polynomial;

type TableCache = OnceLock<Mutex<HashMap<(usize, usize), Arc<CoordTable>>>>;
use crate::symbolic::{CoordRingElement, Monomial, Poly, SymbolicShape, Var};

/// `(k, J)`, naming the coordinate `a^k_J` (k is 0-based).
pub type CoordIndex = (usize, MultiIndex);

pub type CoordTable = BTreeMap<CoordIndex, CoordRingElement>;

pub const LEFT: char = 'b';
pub const RIGHT: char = 'c';
pub const COORD: char = 'a';

/// All `(k, J)` with `0 < |J| <= c`, ordered by `k` then graded-lex `J`.
pub fn coordinates(n: usize, c: usize) -> Vec<CoordIndex> {
    let js = MultiIndex::all_up_to(n, 1, c);
    (0..n).flat_map(|k| js.iter().map(move |j| (k, j.clone()))).collect()
}

/// The automorphism `t_k -> sum_J alphabet^k_J t^J`; with `unipotent` the
/// linear part is the identity instead of formal.
pub fn generic_jet(alphabet: char, n: usize, c: usize, unipotent: bool) -> Result<JetAutomorphism<CoordRingElement>> {
    let shape = SymbolicShape { dim: n };
    let polys = (0..n)
        .map(|k| {
            Polynomial::from_terms(
                n,
                &shape,
                MultiIndex::all_up_to(n, 1, c).into_iter().map(|j| {
                    let coeff = match (unipotent, j.as_unit()) {
                        (true, Some(kp)) => {
                            CoordRingElement::constant(n, if kp == k { BigRational::one() } else { BigRational::zero() })
                        }
                        _ => CoordRingElement::var(n, Var::new(alphabet, k, j.clone())),
                    };
                    (j, coeff)
                }),
            )
        })
        .collect();
    JetAutomorphism::from_polynomials(c, polys)
}

fn check_nc(n: usize, c: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ShapeMismatch("dimension must be at least 1".into()));
    }
    if c == 0 {
        return Err(Error::InvalidOrder("K^(c) needs c >= 1".into()));
    }
    Ok(())
}

fn table_of(g: &JetAutomorphism<CoordRingElement>) -> CoordTable {
    coordinates(g.dim(), g.order())
        .into_iter()
        .map(|(k, j)| {
            let v = g.coeff(k, &j);
            ((k, j), v)
        })
        .collect()
}

/// `Delta(a^k_J)` in alphabets `b` (left) and `c` (right). Memoized per `(n, c)`.
pub fn coproduct(n: usize, c: usize) -> Result<Arc<CoordTable>> {
    static CACHE: TableCache = OnceLock::new();
    check_nc(n, c)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(n, c)) {
        return Ok(t.clone());
    }
    let composite = generic_jet(LEFT, n, c, false)?.compose(&generic_jet(RIGHT, n, c, false)?)?;
    let table = Arc::new(table_of(&composite));
    cache.lock().unwrap().insert((n, c), table.clone());
    Ok(table)
}

/// `epsilon(a^k_J)`: the coordinates of the identity.
pub fn counit(n: usize, c: usize) -> Result<BTreeMap<CoordIndex, BigRational>> {
    check_nc(n, c)?;
    Ok(coordinates(n, c)
        .into_iter()
        .map(|(k, j)| {
            let v = if j.as_unit() == Some(k) { BigRational::one() } else { BigRational::zero() };
            ((k, j), v)
        })
        .collect())
}

/// `S(a^k_J)`: coefficients of the inverse of the generic automorphism.
pub fn antipode(n: usize, c: usize) -> Result<Arc<CoordTable>> {
    static CACHE: TableCache = OnceLock::new();
    check_nc(n, c)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(n, c)) {
        return Ok(t.clone());
    }
    let inverse = generic_jet(COORD, n, c, false)?.invert()?;
    let table = Arc::new(table_of(&inverse));
    cache.lock().unwrap().insert((n, c), table.clone());
    Ok(table)
}

/// `|J| - 1`.
pub fn grading_degree(index: &MultiIndex) -> i64 {
    index.degree() as i64 - 1
}

pub fn check_homogeneous(x: &CoordRingElement, d: i64) -> bool {
    x.is_homogeneous(d)
}

fn var_index(v: &Var) -> CoordIndex {
    (v.k, v.index.clone())
}

/// Substitutes `a^k_J -> value(k, J)` for every variable of `alphabet`,
/// leaving other alphabets alone.
pub fn substitute_alphabet(
    x: &CoordRingElement,
    alphabet: char,
    value: &dyn Fn(&CoordIndex) -> CoordRingElement,
) -> Option<CoordRingElement> {
    let n = x.dim();
    x.evaluate(&SymbolicShape { dim: n }, &|v: &Var| {
        if v.alphabet == alphabet {
            value(&var_index(v))
        } else {
            CoordRingElement::var(n, v.clone())
        }
    })
}

fn lookup(table: &CoordTable, idx: &CoordIndex) -> Result<CoordRingElement> {
    table
        .get(idx)
        .cloned()
        .ok_or_else(|| Error::ShapeMismatch(format!("coordinate ({}, {}) beyond the table order", idx.0 + 1, idx.1)))
}

/// `Delta(x)` for `x` in alphabet `a`, result in alphabets `b`, `c`.
pub fn apply_coproduct(x: &CoordRingElement, c: usize) -> Result<CoordRingElement> {
    if x.max_index_degree() > c {
        return Err(Error::ShapeMismatch(format!(
            "function uses coordinates of order {} beyond c = {c}",
            x.max_index_degree()
        )));
    }
    let table = coproduct(x.dim(), c)?;
    substitute_alphabet(x, COORD, &|idx| table[idx].clone()).ok_or(Error::NonUnit)
}

/// Sets every linear coordinate `x^k_{e_k'}` to `delta_{kk'}` in the given alphabets.
pub fn unipotent_chart(x: &CoordRingElement, alphabets: &[char]) -> CoordRingElement {
    let n = x.dim();
    x.evaluate(&SymbolicShape { dim: n }, &|v: &Var| match (alphabets.contains(&v.alphabet), v.index.as_unit()) {
        (true, Some(kp)) => CoordRingElement::constant(n, if kp == v.k { BigRational::one() } else { BigRational::zero() }),
        _ => CoordRingElement::var(n, v.clone()),
    })
    .expect("det is 1 in the unipotent chart")
}

/// `(Delta (x) id) Delta = (id (x) Delta) Delta` on every generator.
pub fn coassociativity_holds(n: usize, c: usize) -> Result<bool> {
    let table = coproduct(n, c)?;
    for (idx, delta) in table.iter() {
        // outer alphabets b, c, d: rename the right factor of the first
        // application out of the way before expanding.
        let left = substitute_alphabet(&delta.rename(RIGHT, 'd'), LEFT, &|i| lookup(&table, i).unwrap())
            .ok_or(Error::NonUnit)?;
        let right = substitute_alphabet(&delta.rename(LEFT, 'x'), RIGHT, &|i| {
            lookup(&table, i).unwrap().rename(RIGHT, 'd').rename(LEFT, RIGHT)
        })
        .ok_or(Error::NonUnit)?
        .rename('x', LEFT);
        if left != right {
            let _ = idx;
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(eps (x) id) Delta(a) = a = (id (x) eps) Delta(a)`.
pub fn counit_law_holds(n: usize, c: usize) -> Result<bool> {
    let table = coproduct(n, c)?;
    let eps = counit(n, c)?;
    let eps_of = |i: &CoordIndex| CoordRingElement::constant(n, eps[i].clone());
    for ((k, j), delta) in table.iter() {
        let a = CoordRingElement::var(n, Var::new(COORD, *k, j.clone()));
        let l = substitute_alphabet(delta, LEFT, &eps_of).ok_or(Error::NonUnit)?.rename(RIGHT, COORD);
        let r = substitute_alphabet(delta, RIGHT, &eps_of).ok_or(Error::NonUnit)?.rename(LEFT, COORD);
        if l != a || r != a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m (S (x) id) Delta = eps 1 = m (id (x) S) Delta` on every generator.
pub fn antipode_law_holds(n: usize, c: usize) -> Result<bool> {
    let table = coproduct(n, c)?;
    let s = antipode(n, c)?;
    let eps = counit(n, c)?;
    for (idx, delta) in table.iter() {
        let expected = CoordRingElement::constant(n, eps[idx].clone());
        let l = substitute_alphabet(&delta.rename(RIGHT, COORD), LEFT, &|i| lookup(&s, i).unwrap())
            .ok_or(Error::NonUnit)?;
        let r = substitute_alphabet(&delta.rename(LEFT, COORD), RIGHT, &|i| lookup(&s, i).unwrap())
            .ok_or(Error::NonUnit)?;
        if l != expected || r != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `Delta(a^k_J)` is homogeneous of degree `|J| - 1`.
pub fn coproduct_is_graded(n: usize, c: usize) -> Result<bool> {
    let table = coproduct(n, c)?;
    Ok(table.iter().all(|((_, j), delta)| delta.is_homogeneous(grading_degree(j))))
}

fn k_value(g: &JetAutomorphism<BaseRingElement>, idx: &CoordIndex) -> BaseRingElement {
    g.coeff(idx.0, &idx.1)
}

fn check_point(x: &CoordRingElement, g: &JetAutomorphism<BaseRingElement>) -> Result<()> {
    if !g.is_in_k() {
        return Err(Error::NotInK);
    }
    if g.dim() != x.dim() {
        return Err(Error::ShapeMismatch(format!("function on n={} evaluated at n={}", x.dim(), g.dim())));
    }
    if x.max_index_degree() > g.order() {
        return Err(Error::ShapeMismatch(format!(
            "function uses coordinates of order {} but the jet has order {}",
            x.max_index_degree(),
            g.order()
        )));
    }
    Ok(())
}

/// Value of a function in alphabet `a` at a point of `K^(c)(R)`.
pub fn evaluate_at(x: &CoordRingElement, g: &JetAutomorphism<BaseRingElement>) -> Result<BaseRingElement> {
    check_point(x, g)?;
    x.evaluate(&g.shape(), &|v: &Var| k_value(g, &var_index(v))).ok_or(Error::SingularLinearPart)
}

/// Value of a function in alphabets `b`, `c` at a pair of points.
pub fn evaluate_tensor_at(
    x: &CoordRingElement,
    left: &JetAutomorphism<BaseRingElement>,
    right: &JetAutomorphism<BaseRingElement>,
) -> Result<BaseRingElement> {
    check_point(x, left)?;
    check_point(x, right)?;
    x.evaluate(&left.shape(), &|v: &Var| {
        if v.alphabet == LEFT {
            k_value(left, &var_index(v))
        } else {
            k_value(right, &var_index(v))
        }
    })
    .ok_or(Error::SingularLinearPart)
}

/// Renders a polynomial tensor as `sum q * L (x) R`, left factor in `b`.
pub fn display_tensor(x: &CoordRingElement) -> String {
    let mut rows: Vec<(Monomial, Monomial, BigRational)> = Vec::new();
    for (m, q) in x.numerator().terms() {
        let split = |alpha: char| {
            Monomial::from_powers(
                m.powers().iter().filter(|(v, _)| v.alphabet == alpha).map(|(v, e)| (v.renamed(COORD), *e)),
            )
        };
        rows.push((split(LEFT), split(RIGHT), q.clone()));
    }
    let weight = |m: &Monomial| m.powers().iter().map(|(v, e)| v.index.degree() * *e as usize).sum::<usize>();
    rows.sort_by(|a, b| {
        weight(&b.0)
            .cmp(&weight(&a.0))
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
            .then_with(|| a.1.to_string().cmp(&b.1.to_string()))
    });
    let mut out = String::new();
    for (i, (l, r, q)) in rows.iter().enumerate() {
        let neg = q < &BigRational::zero();
        let abs = crate::ring::format_rational(&if neg { -q.clone() } else { q.clone() });
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        if abs != "1" {
            out.push_str(&abs);
            out.push(' ');
        }
        out.push_str(&format!("{l} ⊗ {r}"));
    }
    if rows.is_empty() {
        out.push('0');
    }
    for (a, p) in x.det_powers() {
        out.push_str(&format!(" / det({a})^{p}"));
    }
    out
}

/// One term `coef * a^{left} ⊗ a^{right}`, factors given as `(j, power)` on `a_j`.
pub type TensorRow<'a> = (i64, &'a [(u32, u32)], &'a [(u32, u32)]);

/// Builds a polynomial tensor from `(coefficient, left powers, right powers)`
/// rows given in the single-index `n = 1` notation (`2` means `a_2`).
pub fn tensor_n1(rows: &[TensorRow]) -> CoordRingElement {
    let var = |alpha: char, j: u32| Var::new(alpha, 0, MultiIndex::new(vec![j]));
    let poly = Poly::from_terms(rows.iter().map(|(q, l, r)| {
        let m = Monomial::from_powers(
            l.iter().map(|&(j, e)| (var(LEFT, j), e)).chain(r.iter().map(|&(j, e)| (var(RIGHT, j), e))),
        );
        (m, BigRational::from_integer((*q).into()))
    }));
    CoordRingElement::polynomial(1, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Ring};

    fn a1(j: u32) -> CoordRingElement {
        CoordRingElement::var(1, Var::new(COORD, 0, MultiIndex::new(vec![j])))
    }

    fn idx1(j: u32) -> CoordIndex {
        (0, MultiIndex::new(vec![j]))
    }

    #[test]
    fn coproduct_n1() {
        let t = coproduct(1, 4).unwrap();
        // Delta(a2) = b2 c1^2 + b1 c2
        assert_eq!(t[&idx1(2)], tensor_n1(&[(1, &[(2, 1)], &[(1, 2)]), (1, &[(1, 1)], &[(2, 1)])]));
        let chart = |j| unipotent_chart(&t[&idx1(j)], &[LEFT, RIGHT]);
        assert_eq!(chart(2), tensor_n1(&[(1, &[(2, 1)], &[]), (1, &[], &[(2, 1)])]));
        assert_eq!(chart(3), tensor_n1(&[(1, &[(3, 1)], &[]), (2, &[(2, 1)], &[(2, 1)]), (1, &[], &[(3, 1)])]));
        assert_eq!(
            chart(4),
            tensor_n1(&[
                (1, &[(4, 1)], &[]),
                (3, &[(3, 1)], &[(2, 1)]),
                (1, &[(2, 1)], &[(2, 2)]),
                (2, &[(2, 1)], &[(3, 1)]),
                (1, &[], &[(4, 1)]),
            ])
        );
        assert_eq!(display_tensor(&chart(2)), "a2 ⊗ 1 + 1 ⊗ a2");
    }

    #[test]
    fn counit_values() {
        let e = counit(1, 3).unwrap();
        assert_eq!(e[&idx1(1)], int(1));
        assert_eq!(e[&idx1(2)], int(0));
        let e = counit(2, 2).unwrap();
        assert_eq!(e[&(0, MultiIndex::new(vec![0, 1]))], int(0));
        assert_eq!(e[&(1, MultiIndex::new(vec![0, 1]))], int(1));
    }

    #[test]
    fn antipode_n1() {
        let s = antipode(1, 4).unwrap();
        assert_eq!(s[&idx1(1)], a1(1).try_inverse().unwrap());
        let expected = a1(2).neg().mul(&a1(1).pow(3).try_inverse().unwrap());
        assert_eq!(s[&idx1(2)], expected);
        assert_eq!(s[&idx1(2)].to_string(), "-a2*a1^-3");
        let specialized: Vec<BigRational> = (2..=4)
            .map(|j| {
                let v = s[&idx1(j)].evaluate(&crate::symbolic::SymbolicShape { dim: 1 }, &|v: &Var| {
                    CoordRingElement::constant(1, int(if v.index.degree() <= 2 { 1 } else { 0 }))
                });
                v.unwrap().numerator().as_constant().unwrap()
            })
            .collect();
        assert_eq!(specialized, vec![int(-1), int(2), int(-5)]);
    }

    #[test]
    fn grading_degrees() {
        assert_eq!(grading_degree(&MultiIndex::new(vec![2])), 1);
        assert_eq!(grading_degree(&MultiIndex::new(vec![0, 1])), 0);
        assert_eq!(grading_degree(&MultiIndex::new(vec![2, 1])), 2);
        assert!(check_homogeneous(&a1(3).mul(&a1(1)), 2));
        assert!(!check_homogeneous(&a1(3).add(&a1(2)), 2));
    }

    #[test]
    fn hopf_axioms_small() {
        for (n, c) in [(1, 3), (2, 2)] {
            assert!(coassociativity_holds(n, c).unwrap(), "coassoc n={n} c={c}");
            assert!(counit_law_holds(n, c).unwrap(), "counit n={n} c={c}");
            assert!(antipode_law_holds(n, c).unwrap(), "antipode n={n} c={c}");
            assert!(coproduct_is_graded(n, c).unwrap());
        }
    }

    #[test]
    fn rejects_order_zero() {
        assert!(coproduct(1, 0).is_err());
    }
}
