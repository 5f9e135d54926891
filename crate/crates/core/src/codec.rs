//! Canonical JSON encoding of every value type.
//!
//! Every document carries `"schema": "discjet/1"` at top level. Terms are
//! written in canonical order, so serializing a parsed document reproduces
//! it byte for byte. Structural problems are reported as [`Error::Parse`];
//! mathematical ones (a singular linear part, say) keep their own variants.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
use crate::error::{Error, Result};
use crate::etale::{PolyMap, RoofChart, CONVENTION};
use crate::hopf::{self, CoordIndex, CoordTable};
use crate::index::MultiIndex;
use crate::jet_group::JetAutomorphism;
use crate::lie::Derivation;
use crate::rep::Representation;
use crate::ring::{format_rational, parse_rational, Ring};
use crate::series::{Polynomial, TruncatedSeries};
use crate::symbolic::{CoordRingElement, Monomial, Poly, SymbolicShape, Var};

pub const SCHEMA: &str = "discjet/1";

/// Value of the `"base"` key for jets with formal (symbolic) coefficients.
pub const SYMBOLIC_BASE: &str = "symbolic";

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Checks that `v` is an object whose keys are exactly `required` plus any
/// subset of `optional`.
fn object<'a>(v: &'a Value, what: &str, required: &[&str], optional: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| bad(format!("{what}: expected an object")))?;
    for key in required {
        if !obj.contains_key(*key) {
            return Err(bad(format!("{what}: missing key {key:?}")));
        }
    }
    if let Some(k) = obj.keys().find(|k| !required.contains(&k.as_str()) && !optional.contains(&k.as_str())) {
        return Err(bad(format!("{what}: unexpected key {k:?}")));
    }
    Ok(obj)
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what}: expected an array")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what}: expected a non-negative integer")))
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    usize::try_from(uint(v, what)?).map_err(|_| bad(format!("{what}: out of range")))
}

fn u32_of(v: &Value, what: &str) -> Result<u32> {
    u32::try_from(uint(v, what)?).map_err(|_| bad(format!("{what}: out of range")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what}: expected a string")))
}

pub fn rational_to_json(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    parse_rational(string(v, "coefficient")?)
}

pub fn index_to_json(j: &MultiIndex) -> Value {
    json!(j.exponents())
}

pub fn index_from_json(v: &Value, dim: usize, what: &str) -> Result<MultiIndex> {
    let xs = array(v, what)?;
    if xs.len() != dim {
        return Err(bad(format!("{what}: expected {dim} exponents, found {}", xs.len())));
    }
    Ok(MultiIndex::new(xs.iter().map(|x| u32_of(x, what)).collect::<Result<_>>()?))
}

/// Wraps a value as a top-level document.
pub fn document(value: Value) -> Value {
    match value {
        Value::Object(mut obj) => {
            let mut out = Map::new();
            out.insert("schema".into(), Value::String(SCHEMA.into()));
            out.append(&mut obj);
            Value::Object(out)
        }
        other => json!({ "schema": SCHEMA, "value": other }),
    }
}

/// Checks the schema tag and strips it.
pub fn open(doc: &Value) -> Result<Value> {
    let obj = doc.as_object().ok_or_else(|| bad("document: expected an object"))?;
    match obj.get("schema") {
        Some(Value::String(s)) if s == SCHEMA => {}
        Some(other) => return Err(bad(format!("document: unsupported schema {other}"))),
        None => return Err(bad("document: missing \"schema\" key")),
    }
    let mut obj = obj.clone();
    obj.remove("schema");
    if obj.len() == 1 {
        if let Some(v) = obj.remove("value") {
            return Ok(v);
        }
    }
    Ok(Value::Object(obj))
}

/// Canonical text: pretty-printed, trailing newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))
}

pub fn descriptor_to_json(d: &BaseRingDescriptor) -> Value {
    json!({ "nilpotents": d.orders() })
}

pub fn descriptor_from_json(v: &Value) -> Result<BaseRingDescriptor> {
    let obj = object(v, "descriptor", &["nilpotents"], &[])?;
    let orders = array(&obj["nilpotents"], "nilpotents")?
        .iter()
        .map(|x| u32_of(x, "nilpotent order"))
        .collect::<Result<Vec<_>>>()?;
    BaseRingDescriptor::new(orders).map_err(|e| bad(e.to_string()))
}

/// A coefficient type with a JSON form and a JSON description of its ring.
pub trait JsonCoefficient: Ring {
    fn base_to_json(shape: &Self::Shape) -> Value;
    fn base_from_json(v: &Value, n: usize) -> Result<Self::Shape>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, shape: &Self::Shape) -> Result<Self>;
}

impl JsonCoefficient for BaseRingElement {
    fn base_to_json(shape: &BaseRingDescriptor) -> Value {
        descriptor_to_json(shape)
    }

    fn base_from_json(v: &Value, _n: usize) -> Result<BaseRingDescriptor> {
        if v.is_string() {
            return Err(bad("expected a numeric base ring, found a symbolic one"));
        }
        descriptor_from_json(v)
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(e, q)| json!({ "eps": index_to_json(e), "coef": rational_to_json(q) }))
                .collect(),
        )
    }

    /// Also accepts a bare rational string as shorthand for a constant.
    fn from_json(v: &Value, desc: &BaseRingDescriptor) -> Result<Self> {
        if v.is_string() {
            return Ok(BaseRingElement::constant(desc, rational_from_json(v)?));
        }
        let mut terms = Vec::new();
        for t in array(v, "element")? {
            let obj = object(t, "element term", &["eps", "coef"], &[])?;
            let e = index_from_json(&obj["eps"], desc.num_nilpotents(), "eps")?;
            if e.exponents().iter().zip(desc.orders()).any(|(x, n)| x >= n) {
                return Err(bad(format!("eps exponent {e} exceeds the nilpotency orders {:?}", desc.orders())));
            }
            terms.push((e, rational_from_json(&obj["coef"])?));
        }
        Ok(BaseRingElement::from_terms(desc, terms))
    }
}

fn var_to_json(v: &Var, pow: u32) -> Value {
    json!({ "alphabet": v.alphabet.to_string(), "k": v.k, "J": index_to_json(&v.index), "pow": pow })
}

fn alphabet_from_json(v: &Value) -> Result<char> {
    let s = string(v, "alphabet")?;
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(a), None) if a.is_ascii_lowercase() => Ok(a),
        _ => Err(bad(format!("alphabet must be one lowercase letter, found {s:?}"))),
    }
}

pub fn coord_to_json(x: &CoordRingElement) -> Value {
    let terms: Vec<Value> = x
        .numerator()
        .terms()
        .map(|(m, q)| {
            json!({
                "coef": rational_to_json(q),
                "vars": m.powers().iter().map(|(v, p)| var_to_json(v, *p)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let dets: Vec<Value> = x
        .det_powers()
        .iter()
        .filter(|(_, &p)| p > 0)
        .map(|(a, p)| json!({ "alphabet": a.to_string(), "pow": p }))
        .collect();
    json!({ "terms": terms, "det_power": dets })
}

pub fn coord_from_json(v: &Value, n: usize) -> Result<CoordRingElement> {
    let obj = object(v, "coordinate function", &["terms", "det_power"], &[])?;
    let mut numerator = Poly::zero();
    for t in array(&obj["terms"], "terms")? {
        let t = object(t, "monomial", &["coef", "vars"], &[])?;
        let mut powers = Vec::new();
        for var in array(&t["vars"], "vars")? {
            let var = object(var, "variable", &["alphabet", "k", "J", "pow"], &[])?;
            let k = usize_of(&var["k"], "k")?;
            if k >= n {
                return Err(bad(format!("component index k={k} out of range for n={n}")));
            }
            let index = index_from_json(&var["J"], n, "J")?;
            powers.push((Var::new(alphabet_from_json(&var["alphabet"])?, k, index), u32_of(&var["pow"], "pow")?));
        }
        numerator.add_term(Monomial::from_powers(powers), rational_from_json(&t["coef"])?);
    }
    let mut dets = BTreeMap::new();
    for d in array(&obj["det_power"], "det_power")? {
        let d = object(d, "det power", &["alphabet", "pow"], &[])?;
        *dets.entry(alphabet_from_json(&d["alphabet"])?).or_insert(0) += u32_of(&d["pow"], "pow")?;
    }
    Ok(CoordRingElement::new(n, numerator, dets))
}

impl JsonCoefficient for CoordRingElement {
    fn base_to_json(_: &SymbolicShape) -> Value {
        Value::String(SYMBOLIC_BASE.into())
    }

    fn base_from_json(v: &Value, n: usize) -> Result<SymbolicShape> {
        match v.as_str() {
            Some(SYMBOLIC_BASE) => Ok(SymbolicShape { dim: n }),
            _ => Err(bad(format!("expected base {SYMBOLIC_BASE:?}"))),
        }
    }

    fn to_json(&self) -> Value {
        coord_to_json(self)
    }

    fn from_json(v: &Value, shape: &SymbolicShape) -> Result<Self> {
        coord_from_json(v, shape.dim)
    }
}

pub fn polynomial_to_json<R: JsonCoefficient>(p: &Polynomial<R>) -> Value {
    Value::Array(
        p.terms()
            .map(|(j, x)| json!({ "J": index_to_json(j), "coef": x.to_json() }))
            .collect(),
    )
}

pub fn polynomial_from_json<R: JsonCoefficient>(v: &Value, dim: usize, shape: &R::Shape) -> Result<Polynomial<R>> {
    let mut terms = Vec::new();
    for t in array(v, "terms")? {
        let obj = object(t, "term", &["J", "coef"], &[])?;
        terms.push((index_from_json(&obj["J"], dim, "J")?, R::from_json(&obj["coef"], shape)?));
    }
    Ok(Polynomial::from_terms(dim, shape, terms))
}

pub fn series_to_json<R: JsonCoefficient>(s: &TruncatedSeries<R>) -> Value {
    json!({ "dim": s.dim(), "order": s.order(), "terms": polynomial_to_json(s.as_polynomial()) })
}

pub fn series_from_json<R: JsonCoefficient>(v: &Value, shape: &R::Shape) -> Result<TruncatedSeries<R>> {
    let obj = object(v, "series", &["dim", "order", "terms"], &[])?;
    let dim = usize_of(&obj["dim"], "dim")?;
    let order = usize_of(&obj["order"], "order")?;
    let poly = polynomial_from_json(&obj["terms"], dim, shape)?;
    if let Some(j) = poly.terms().map(|(j, _)| j).find(|j| j.degree() > order) {
        return Err(bad(format!("term t^{j} exceeds the series order {order}")));
    }
    Ok(TruncatedSeries::from_polynomial(poly, order))
}

fn components_to_json<R: JsonCoefficient>(n: usize, c: usize, shape: &R::Shape, comps: &[TruncatedSeries<R>]) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(n));
    obj.insert("c".into(), json!(c));
    obj.insert("base".into(), R::base_to_json(shape));
    obj.insert("components".into(), Value::Array(comps.iter().map(series_to_json).collect()));
    obj
}

fn components_from_json<R: JsonCoefficient>(
    v: &Value,
    what: &str,
    role: Option<&str>,
) -> Result<(usize, Vec<TruncatedSeries<R>>)> {
    let required: &[&str] = if role.is_some() { &["n", "c", "base", "components", "role"] } else { &["n", "c", "base", "components"] };
    let obj = object(v, what, required, &[])?;
    if let Some(role) = role {
        if obj["role"].as_str() != Some(role) {
            return Err(bad(format!("{what}: expected \"role\": {role:?}")));
        }
    }
    let n = usize_of(&obj["n"], "n")?;
    let c = usize_of(&obj["c"], "c")?;
    if n == 0 {
        return Err(bad(format!("{what}: n must be positive")));
    }
    let shape = R::base_from_json(&obj["base"], n)?;
    let comps = array(&obj["components"], "components")?
        .iter()
        .map(|s| series_from_json(s, &shape))
        .collect::<Result<Vec<_>>>()?;
    if comps.len() != n || comps.iter().any(|s| s.dim() != n) {
        return Err(bad(format!("{what}: expected {n} components in {n} variables")));
    }
    Ok((c, comps))
}

/// The stored components are written at working precision, so that the
/// round trip is exact; coefficients above order `c` are zero for ν = 1.
pub fn jet_to_json<R: JsonCoefficient>(g: &JetAutomorphism<R>) -> Value {
    Value::Object(components_to_json(g.dim(), g.order(), &g.shape(), g.components()))
}

pub fn jet_from_json<R: JsonCoefficient>(v: &Value) -> Result<JetAutomorphism<R>> {
    let (c, comps) = components_from_json::<R>(v, "jet", None)?;
    if c == 0 {
        return Err(bad("jet: c must be positive"));
    }
    JetAutomorphism::from_components(c, comps)
}

/// `"symbolic"` or the numeric descriptor of a jet document, without parsing it fully.
pub fn is_symbolic(v: &Value) -> bool {
    v.get("base").and_then(Value::as_str) == Some(SYMBOLIC_BASE)
}

pub fn derivation_to_json(d: &Derivation<BaseRingElement>) -> Value {
    let mut obj = components_to_json(d.dim(), d.order(), &d.shape(), d.coefficients());
    obj.insert("role".into(), json!("derivation"));
    Value::Object(obj)
}

pub fn derivation_from_json(v: &Value) -> Result<Derivation<BaseRingElement>> {
    let (c, comps) = components_from_json::<BaseRingElement>(v, "derivation", Some("derivation"))?;
    if comps.iter().any(|s| s.order() != c) {
        return Err(bad("derivation: every coefficient must have order c"));
    }
    Derivation::new(comps)
}

pub fn elements_to_json(xs: &[BaseRingElement]) -> Value {
    Value::Array(xs.iter().map(|x| x.to_json()).collect())
}

pub fn elements_from_json(v: &Value, desc: &BaseRingDescriptor) -> Result<Vec<BaseRingElement>> {
    array(v, "elements")?.iter().map(|x| BaseRingElement::from_json(x, desc)).collect()
}

pub fn matrix_to_json(desc: &BaseRingDescriptor, m: &[Vec<BaseRingElement>]) -> Value {
    json!({
        "base": descriptor_to_json(desc),
        "matrix": m.iter().map(|r| elements_to_json(r)).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<(BaseRingDescriptor, Vec<Vec<BaseRingElement>>)> {
    let obj = object(v, "matrix", &["base", "matrix"], &[])?;
    let desc = descriptor_from_json(&obj["base"])?;
    let rows = array(&obj["matrix"], "matrix")?.iter().map(|r| elements_from_json(r, &desc)).collect::<Result<_>>()?;
    Ok((desc, rows))
}

/// Tables are lists sorted by `(k, J)`. Coproduct entries also carry their
/// `b (x) c` rendering and its restriction to the unipotent chart (linear
/// coordinates set to the identity); these are derived and ignored on input.
pub fn table_to_json(n: usize, c: usize, kind: &str, table: &CoordTable) -> Value {
    let entries: Vec<Value> = table
        .iter()
        .map(|((k, j), x)| {
            let mut e = json!({ "k": k, "J": index_to_json(j), "value": coord_to_json(x) });
            if kind == "coproduct" {
                e["display"] = json!(hopf::display_tensor(x));
                e["unipotent_chart"] = json!(hopf::display_tensor(&hopf::unipotent_chart(x, &[hopf::LEFT, hopf::RIGHT])));
            } else {
                e["display"] = json!(x.to_string());
            }
            e
        })
        .collect();
    json!({ "kind": kind, "n": n, "c": c, "entries": entries })
}

pub fn table_from_json(v: &Value) -> Result<(String, usize, usize, CoordTable)> {
    let obj = object(v, "table", &["kind", "n", "c", "entries"], &[])?;
    let kind = string(&obj["kind"], "kind")?.to_string();
    let n = usize_of(&obj["n"], "n")?;
    let c = usize_of(&obj["c"], "c")?;
    let mut table = CoordTable::new();
    for e in array(&obj["entries"], "entries")? {
        let e = object(e, "table entry", &["k", "J", "value"], &["display", "unipotent_chart"])?;
        let key: CoordIndex = (usize_of(&e["k"], "k")?, index_from_json(&e["J"], n, "J")?);
        if table.insert(key, coord_from_json(&e["value"], n)?).is_some() {
            return Err(bad("table: duplicate (k, J) key"));
        }
    }
    Ok((kind, n, c, table))
}

pub fn rep_to_json(r: &Representation) -> Value {
    json!({
        "m": r.dim(),
        "n": r.group_dim(),
        "c": r.order(),
        "weights": r.weights(),
        "entries": r.entries().iter().map(|row| row.iter().map(coord_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// The stored weights are optional on input; when present they must agree
/// with the ones read off the entries.
pub fn rep_from_json(v: &Value) -> Result<Representation> {
    let obj = object(v, "representation", &["m", "n", "c", "entries"], &["weights"])?;
    let m = usize_of(&obj["m"], "m")?;
    let n = usize_of(&obj["n"], "n")?;
    let c = usize_of(&obj["c"], "c")?;
    let rows = array(&obj["entries"], "entries")?;
    if rows.len() != m {
        return Err(bad(format!("representation: expected {m} rows")));
    }
    let mut entries = Vec::with_capacity(m);
    for row in rows {
        let row = array(row, "row")?;
        if row.len() != m {
            return Err(bad(format!("representation: expected {m} columns")));
        }
        entries.push(row.iter().map(|x| coord_from_json(x, n)).collect::<Result<Vec<_>>>()?);
    }
    let rep = Representation::new(n, c, entries)?;
    if let Some(w) = obj.get("weights") {
        let w: Vec<i64> = array(w, "weights")?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad("weights: expected integers")))
            .collect::<Result<_>>()?;
        if w != rep.weights() {
            return Err(Error::NotDiagonal(format!("declared weights {w:?} differ from computed {:?}", rep.weights())));
        }
    }
    Ok(rep)
}

pub fn polymap_to_json(f: &PolyMap) -> Value {
    json!({
        "n": f.dim(),
        "base": descriptor_to_json(f.descriptor()),
        "components": f.components().iter().map(polynomial_to_json).collect::<Vec<_>>(),
    })
}

pub fn polymap_from_json(v: &Value) -> Result<PolyMap> {
    let obj = object(v, "polynomial map", &["n", "base", "components"], &[])?;
    let n = usize_of(&obj["n"], "n")?;
    let desc = descriptor_from_json(&obj["base"])?;
    let comps = array(&obj["components"], "components")?
        .iter()
        .map(|p| polynomial_from_json(p, n, &desc))
        .collect::<Result<Vec<_>>>()?;
    if comps.len() != n {
        return Err(bad(format!("polynomial map: expected {n} components")));
    }
    PolyMap::new(comps)
}

pub fn roof_to_json(r: &RoofChart) -> Value {
    json!({
        "phi": polymap_to_json(r.phi()),
        "psi": polymap_to_json(r.psi()),
        "w": elements_to_json(r.basepoint()),
        "convention": CONVENTION,
    })
}

pub fn roof_from_json(v: &Value) -> Result<RoofChart> {
    let obj = object(v, "roof", &["phi", "psi", "w"], &["convention"])?;
    if let Some(conv) = obj.get("convention") {
        if conv.as_str() != Some(CONVENTION) {
            return Err(bad(format!("roof: unsupported convention {conv}, expected {CONVENTION:?}")));
        }
    }
    let phi = polymap_from_json(&obj["phi"])?;
    let psi = polymap_from_json(&obj["psi"])?;
    let w = elements_from_json(&obj["w"], phi.descriptor())?;
    RoofChart::new(phi, psi, w)
}
