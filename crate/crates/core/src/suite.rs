//! The acceptance suite, shared by the `acceptance` test target and the
//! CLI's `selftest` verb.
//!
//! Each criterion produces one deterministic line: the detail text depends
//! only on the seed (digests of the generated cases are included), never on
//! timings. Runtime budgets are enforced but only mentioned on failure.

use std::time::{Duration, Instant};

use rand::Rng as _;

use crate::base_ring::{BaseRingDescriptor, BaseRingElement};
use crate::codec;
use crate::error::Result;
use crate::etale::{chart_through, PolyMap, RoofChart};
use crate::hopf::{self, LEFT, RIGHT};
use crate::index::MultiIndex;
use crate::jet_group::{working_precision, JetAutomorphism};
use crate::lie::Derivation;
use crate::random::{self, DetRng};
use crate::rep::Representation;
use crate::ring::{int, matmul};
use crate::series::Polynomial;
use crate::symbolic::{Poly, Var};

/// Canonical rendering of the `coproduct --n 1 --c 4` document.
pub const COPRODUCT_GOLDEN: &str = include_str!("../golden/coproduct_n1_c4.json");

pub const CRITERIA: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("discjet acceptance suite, seed {}\n", self.seed);
        for r in &self.results {
            out.push_str(&r.line());
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        out.push_str(&format!("{passed}/{} criteria passed\n", self.results.len()));
        out
    }
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] {:>2}. {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// Replacement text for the coproduct golden file.
    pub golden: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 7, golden: None }
    }
}

/// Outcome of a criterion body: detail on success, reason on failure.
type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn math<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

/// FNV-1a over the canonical renderings of generated cases.
#[derive(Clone, Copy)]
struct Digest(u64);

impl Digest {
    fn new() -> Self {
        Digest(0xcbf2_9ce4_8422_2325)
    }

    fn feed(&mut self, s: &str) {
        for b in s.bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self.0 ^= 0xff;
    }

    fn jet(&mut self, g: &JetAutomorphism) {
        self.feed(&codec::render(&codec::jet_to_json(g)));
    }
}

impl std::fmt::Display for Digest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    body: fn(&Options, &mut DetRng) -> Outcome,
}

fn criteria() -> [Criterion; CRITERIA] {
    let secs = |s| Some(Duration::from_secs(s));
    [
        Criterion { name: "symbolic composition table (n=1, c=4)", budget: secs(1), body: composition_table },
        Criterion { name: "coproduct table and golden file (n=1, c=4)", budget: secs(1), body: coproduct_table },
        Criterion { name: "coproduct is graded of degree 0", budget: None, body: grading },
        Criterion { name: "group axioms", budget: secs(30), body: group_axioms },
        Criterion { name: "composition independent of lift", budget: None, body: lift_padding },
        Criterion { name: "Hopf axioms", budget: secs(60), body: hopf_axioms },
        Criterion { name: "Lie suite", budget: None, body: lie_suite },
        Criterion { name: "roof suite", budget: None, body: roof_suite },
        Criterion { name: "representation suite", budget: None, body: rep_suite },
        Criterion { name: "determinism", budget: None, body: determinism },
    ]
}

fn criterion_rng(seed: u64, id: usize) -> DetRng {
    random::rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ id as u64)
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, opts: &Options) -> CriterionResult {
    assert!((1..=CRITERIA).contains(&id), "criterion {id} does not exist");
    let c = &criteria()[id - 1];
    let mut rng = criterion_rng(opts.seed, id);
    let start = Instant::now();
    let outcome = (c.body)(opts, &mut rng);
    finish(id, start, outcome)
}

fn finish(id: usize, start: Instant, outcome: Outcome) -> CriterionResult {
    let elapsed = start.elapsed();
    let c = &criteria()[id - 1];
    let (passed, detail) = match (outcome, c.budget) {
        (Ok(_), Some(b)) if elapsed > b => (false, format!("exceeded the {} s runtime budget", b.as_secs())),
        (Ok(d), _) => (true, d),
        (Err(e), _) => (false, e),
    };
    CriterionResult { id, name: c.name, passed, detail }
}

/// Runs every criterion; the determinism check compares against the lines
/// already produced instead of running the seeded criteria twice more.
pub fn run(opts: &Options) -> Report {
    let mut results: Vec<_> = (1..CRITERIA).map(|id| run_criterion(id, opts)).collect();
    let start = Instant::now();
    let outcome = determinism_against(opts, &results);
    results.push(finish(CRITERIA, start, outcome));
    Report { seed: opts.seed, results }
}

/// Runs only the listed criteria, in the order given.
pub fn run_only(opts: &Options, ids: &[usize]) -> Report {
    Report { seed: opts.seed, results: ids.iter().map(|&id| run_criterion(id, opts)).collect() }
}

fn sym(alpha: char, j: u32) -> Poly {
    Poly::var(Var::new(alpha, 0, MultiIndex::new(vec![j])))
}

fn composition_table(_: &Options, _: &mut DetRng) -> Outcome {
    let r = math(hopf::generic_jet('r', 1, 4, true))?;
    let s = math(hopf::generic_jet('s', 1, 4, true))?;
    let rs = math(r.compose(&s))?;
    let coeff = |j: u32| rs.coeff(0, &MultiIndex::new(vec![j])).numerator().clone();
    let (r2, r3, r4) = (sym('r', 2), sym('r', 3), sym('r', 4));
    let (s2, s3, s4) = (sym('s', 2), sym('s', 3), sym('s', 4));
    let two = Poly::constant(int(2));
    let three = Poly::constant(int(3));
    let t2 = r2.add(&s2);
    let t3 = r3.add(&two.mul(&r2).mul(&s2)).add(&s3);
    let t4 = r4
        .add(&three.mul(&r3).mul(&s2))
        .add(&r2.mul(&s2).mul(&s2))
        .add(&two.mul(&r2).mul(&s3))
        .add(&s4);
    ensure(rs.coeff(0, &MultiIndex::new(vec![1])).numerator() == &Poly::constant(int(1)), || {
        "t-coefficient is not 1".into()
    })?;
    ensure(coeff(2) == t2, || format!("t^2 coefficient {} != r2 + s2", coeff(2)))?;
    ensure(coeff(4) == t4, || format!("t^4 coefficient {} != r4 + 3r3s2 + r2s2^2 + 2r2s3 + s4", coeff(4)))?;
    ensure(coeff(3) == t3, || format!("t^3 coefficient {} != r3 + 2r2s2 + s3", coeff(3)))?;
    Ok(format!(
        "t^2: {}; t^3: {} (the printed table has s2 for the last term, a typo); t^4: {}",
        coeff(2),
        coeff(3),
        coeff(4)
    ))
}

/// Document written by `coproduct --n N --c C`.
pub fn coproduct_document(n: usize, c: usize) -> Result<serde_json::Value> {
    Ok(codec::document(codec::table_to_json(n, c, "coproduct", &*hopf::coproduct(n, c)?)))
}

/// Document written by `antipode --n N --c C`.
pub fn antipode_document(n: usize, c: usize) -> Result<serde_json::Value> {
    Ok(codec::document(codec::table_to_json(n, c, "antipode", &*hopf::antipode(n, c)?)))
}

fn coproduct_table(opts: &Options, _: &mut DetRng) -> Outcome {
    let table = math(hopf::coproduct(1, 4))?;
    let chart = |j: u32| hopf::unipotent_chart(&table[&(0, MultiIndex::new(vec![j]))], &[LEFT, RIGHT]);
    // Rows (coefficient, left powers, right powers) of the displayed identities.
    let expected: [(u32, Vec<hopf::TensorRow>); 3] = [
        (2, vec![(1, &[(2, 1)], &[]), (1, &[], &[(2, 1)])]),
        (3, vec![(1, &[(3, 1)], &[]), (2, &[(2, 1)], &[(2, 1)]), (1, &[], &[(3, 1)])]),
        (
            4,
            vec![
                (1, &[(4, 1)], &[]),
                (3, &[(3, 1)], &[(2, 1)]),
                (1, &[(2, 1)], &[(2, 2)]),
                (2, &[(2, 1)], &[(3, 1)]),
                (1, &[], &[(4, 1)]),
            ],
        ),
    ];
    let mut lines = Vec::new();
    for (j, rows) in &expected {
        let got = chart(*j);
        ensure(got == hopf::tensor_n1(rows), || {
            format!("Delta(a{j}) in the unipotent chart is {}", hopf::display_tensor(&got))
        })?;
        lines.push(format!("Delta(a{j}) = {}", hopf::display_tensor(&got)));
    }
    let rendered = codec::render(&math(coproduct_document(1, 4))?);
    let golden = opts.golden.as_deref().unwrap_or(COPRODUCT_GOLDEN);
    if rendered != golden {
        let line = rendered.lines().zip(golden.lines()).position(|(a, b)| a != b).map_or_else(
            || rendered.lines().count().min(golden.lines().count()) + 1,
            |i| i + 1,
        );
        return Err(format!("coproduct golden file mismatch at line {line}"));
    }
    Ok(format!("{}; golden file matches", lines.join("; ")))
}

fn grading(_: &Options, _: &mut DetRng) -> Outcome {
    let mut checked = 0;
    for n in 1..=2 {
        for c in 1..=5 {
            ensure(math(hopf::coproduct_is_graded(n, c))?, || format!("Delta not homogeneous for n={n}, c={c}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tables (n in 1..=2, c in 1..=5) homogeneous of degree 0 for deg a^k_J = |J| - 1"))
}

/// `(n, c, maximal nilpotency index)` for the group-axiom runs.
const GROUP_CONFIGS: [(usize, usize, usize); 6] = [(1, 1, 4), (1, 6, 4), (2, 2, 4), (2, 3, 3), (3, 1, 4), (3, 2, 2)];
const GROUP_TRIPLES: usize = 200;

/// Configurations run on separate threads, each from its own sub-seed
/// drawn in a fixed order, so the outcome does not depend on scheduling.
fn group_axioms(_: &Options, rng: &mut DetRng) -> Outcome {
    let seeds: Vec<u64> = GROUP_CONFIGS.iter().map(|_| rng.gen()).collect();
    let outcomes: Vec<std::result::Result<Digest, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = GROUP_CONFIGS
            .iter()
            .zip(&seeds)
            .map(|(&config, &seed)| scope.spawn(move || group_axioms_for(config, &mut random::rng(seed))))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("worker panicked".into()))).collect()
    });
    let mut digest = Digest::new();
    for d in outcomes {
        digest.feed(&d?.to_string());
    }
    Ok(format!(
        "{GROUP_TRIPLES} triples on each (n, c, max nu) in {GROUP_CONFIGS:?}: associativity, identity, inverse exact; digest {digest}"
    ))
}

fn group_axioms_for((n, c, max_nu): (usize, usize, usize), rng: &mut DetRng) -> std::result::Result<Digest, String> {
    let mut digest = Digest::new();
    for case in 0..GROUP_TRIPLES {
        let desc = random::descriptor(rng, max_nu);
        let [a, b, d] = [(); 3].map(|_| random::g_element(rng, n, c, &desc));
        let id = math(JetAutomorphism::identity(n, c, &desc))?;
        let fail = |what: &str| format!("{what} fails for n={n}, c={c}, base {:?}, case {case}", desc.orders());
        let ab_d = math(a.compose(&b).and_then(|ab| ab.compose(&d)))?;
        let a_bd = math(b.compose(&d).and_then(|bd| a.compose(&bd)))?;
        ensure(ab_d == a_bd, || fail("associativity"))?;
        ensure(math(a.compose(&id))? == a && math(id.compose(&a))? == a, || fail("identity"))?;
        let inv = math(a.invert())?;
        ensure(math(a.compose(&inv))?.is_identity() && math(inv.compose(&a))?.is_identity(), || fail("inverse"))?;
        digest.jet(&ab_d);
        digest.jet(&inv);
    }
    Ok(digest)
}

/// Adds `t^J x` for `c < |J| <= c + 2`, with `x` of nilpotent order large
/// enough that the weight `|J| + ord(x)` exceeds `floor`.
fn pad(
    rng: &mut DetRng,
    f: &Polynomial<BaseRingElement>,
    c: usize,
    desc: &BaseRingDescriptor,
    floor: usize,
) -> Polynomial<BaseRingElement> {
    let n = f.dim();
    let mut out = f.clone();
    for j in MultiIndex::all_up_to(n, c + 1, c + 2) {
        let need = (floor + 1).saturating_sub(j.degree());
        let eps: Vec<_> = desc.monomials().into_iter().filter(|e| e.degree() >= need).collect();
        if eps.is_empty() || !rng.gen_bool(0.7) {
            continue;
        }
        let e = eps[rng.gen_range(0..eps.len())].clone();
        let x = BaseRingElement::from_terms(desc, [(e, random::nonzero_rational(rng))]);
        out = out.add(&Polynomial::from_terms(n, desc, [(j, x)]));
    }
    out
}

const PAD_CASES: usize = 100;

fn lift_padding(_: &Options, rng: &mut DetRng) -> Outcome {
    let mut digest = Digest::new();
    let mut literal = 0;
    for case in 0..PAD_CASES {
        let n = 1 + case % 2;
        let c = 1 + (case / 2) % 3;
        let desc = random::descriptor(rng, 3);
        let p = working_precision(c, desc.nilpotency_index());
        let inner_in_k = case % 2 == 0;
        let a = random::g_element(rng, n, c, &desc);
        let b = if inner_in_k { random::k_element(rng, n, c, &desc) } else { random::g_element(rng, n, c, &desc) };
        let expected = math(a.compose(&b))?;
        let lift = |g: &JetAutomorphism| g.components().iter().map(|s| s.as_polynomial().clone()).collect::<Vec<_>>();
        // Padding invisible at the working precision: the class is unchanged.
        let a_pad: Vec<_> = lift(&a).iter().map(|f| pad(rng, f, c, &desc, p)).collect();
        let b_pad: Vec<_> = lift(&b).iter().map(|f| pad(rng, f, c, &desc, p)).collect();
        let exact: Vec<_> = a_pad.iter().map(|f| f.substitute_bounded(&b_pad, Some(p))).collect();
        let got = math(JetAutomorphism::from_polynomials(c, exact))?;
        ensure(got == expected, || format!("lift changes the composite (n={n}, c={c}, base {:?})", desc.orders()))?;
        digest.jet(&got);
        if inner_in_k {
            // With an origin-fixing inner map any terms above degree c are invisible.
            let a_any: Vec<_> = lift(&a).iter().map(|f| pad(rng, f, c, &desc, 0)).collect();
            let b_any: Vec<_> = lift(&b).iter().map(|f| pad(rng, f, c, &desc, 0)).collect();
            let exact: Vec<_> = a_any.iter().map(|f| f.substitute_bounded(&b_any, Some(p))).collect();
            let got = math(JetAutomorphism::from_polynomials(c, exact))?;
            ensure(got.c_equivalent(&expected, c), || {
                format!("degree-(c, c+2] padding changes the c-jet (n={n}, c={c}, base {:?})", desc.orders())
            })?;
            literal += 1;
        }
    }
    Ok(format!(
        "{PAD_CASES} padded pairs in G (padding beyond the working precision); {literal} pairs with inner map in K \
         padded with arbitrary degree-(c, c+2] terms keep their c-jet; digest {digest}"
    ))
}

fn hopf_axioms(_: &Options, _: &mut DetRng) -> Outcome {
    let configs = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3)];
    for &(n, c) in &configs {
        ensure(math(hopf::coassociativity_holds(n, c))?, || format!("coassociativity fails for n={n}, c={c}"))?;
        ensure(math(hopf::counit_law_holds(n, c))?, || format!("counit law fails for n={n}, c={c}"))?;
        ensure(math(hopf::antipode_law_holds(n, c))?, || format!("antipode law fails for n={n}, c={c}"))?;
    }
    Ok(format!("coassociativity, counit and antipode laws exact for (n, c) in {configs:?}"))
}

fn lie_suite(_: &Options, rng: &mut DetRng) -> Outcome {
    let mut digest = Digest::new();
    let shapes = [(1, 4), (2, 3), (1, 6), (2, 2)];
    for case in 0..100 {
        let (n, c) = shapes[case % shapes.len()];
        let desc = random::descriptor(rng, 3);
        let [x, y, z] = [(); 3].map(|_| random::derivation(rng, n, c, &desc, 1));
        let cyc = |a: &Derivation<_>, b: &Derivation<_>, c: &Derivation<_>| b.bracket(c).and_then(|bc| a.bracket(&bc));
        let sum = math(cyc(&x, &y, &z).and_then(|s| s.add(&cyc(&y, &z, &x)?)).and_then(|s| s.add(&cyc(&z, &x, &y)?)))?;
        ensure(sum.is_zero(), || format!("Jacobi identity fails (n={n}, c={c}, base {:?})", desc.orders()))?;
    }
    for case in 0..100 {
        let (n, c) = shapes[case % shapes.len()];
        let desc = random::descriptor(rng, 3);
        let u = random::k_u_element(rng, n, c, &desc);
        let d = math(Derivation::log_unipotent(&u))?;
        let back = math(d.exp())?;
        ensure(back.c_equivalent(&u, c), || format!("exp(log u) != u (n={n}, c={c}, base {:?})", desc.orders()))?;
        ensure(math(Derivation::log_unipotent(&back))? == d, || "log(exp D) != D".into())?;
        digest.jet(&back);
    }
    let q = BaseRingDescriptor::rationals();
    let one = BaseRingElement::constant(&q, int(1));
    let e = math(Derivation::monomial(1, 4, 0, MultiIndex::new(vec![2]), one.clone()).exp())?;
    let geometric = Polynomial::from_terms(1, &q, (1..=4).map(|j| (MultiIndex::new(vec![j]), one.clone())));
    ensure(e.c_equivalent(&math(JetAutomorphism::from_polynomials(4, vec![geometric]))?, 4), || {
        format!("exp(t^2 d/dt) at c=4 is {e}")
    })?;
    for case in 0..50 {
        let (n, c) = shapes[case % shapes.len()];
        let desc = random::descriptor(rng, 3);
        let k = random::k_element(rng, n, c, &desc);
        let d = random::derivation(rng, n, c, &desc, 2);
        let lhs = math(d.adjoint(&k).and_then(|ad| ad.exp()))?;
        let rhs = math(d.exp().and_then(|e| k.compose(&e)).and_then(|ke| ke.compose(&k.invert()?)))?;
        ensure(lhs.c_equivalent(&rhs, c), || {
            format!("exp(Ad_k D) != k exp(D) k^-1 (n={n}, c={c}, base {:?})", desc.orders())
        })?;
        digest.jet(&lhs);
    }
    Ok(format!(
        "Jacobi on 100 triples; exp/log round trip on 100 unipotent jets; exp(t^2 d/dt) = t + t^2 + t^3 + t^4; \
         exp(Ad_k D) = k exp(D) k^-1 on 50 pairs; digest {digest}"
    ))
}

/// Random chart `g` with `g(w) = target`, etale at `w`.
fn random_chart(
    rng: &mut DetRng,
    target: &[BaseRingElement],
    w: &[BaseRingElement],
    c: usize,
) -> Result<PolyMap> {
    let n = w.len();
    let desc = w[0].descriptor().clone();
    let linear = random::unit_matrix(rng, n, &desc);
    let higher: Vec<_> = (0..n).map(|_| random::polynomial(rng, n, 2, c, &desc, 0.4)).collect();
    chart_through(target, w, &linear, &higher)
}

fn nilpotent_point(rng: &mut DetRng, n: usize, desc: &BaseRingDescriptor) -> Vec<BaseRingElement> {
    (0..n).map(|_| random::element(rng, desc, true)).collect()
}

fn roof_suite(_: &Options, rng: &mut DetRng) -> Outcome {
    const CASES: usize = 100;
    let mut digest = Digest::new();
    let shapes = [(1, 4), (2, 2), (1, 3), (2, 3)];
    let (mut strict, mut loose) = (0, 0);
    for case in 0..CASES {
        let (n, c) = shapes[case % shapes.len()];
        let desc = random::descriptor(rng, 3);
        let zero = vec![BaseRingElement::zero(&desc); n];
        let w = nilpotent_point(rng, n, &desc);
        let fail = |what: &str| format!("{what} fails (case {case}, n={n}, c={c}, base {:?})", desc.orders());

        // Strict roofs send w to 0; the others move exactly one leg off 0,
        // so the jet's constant term cannot cancel.
        let (phi_w, psi_w) = match case % 3 {
            0 => (zero.clone(), zero.clone()),
            1 => (zero.clone(), nilpotent_point(rng, n, &desc)),
            _ => (nilpotent_point(rng, n, &desc), zero.clone()),
        };
        let phi = math(random_chart(rng, &phi_w, &w, c))?;
        let psi = math(random_chart(rng, &psi_w, &w, c))?;
        let roof = math(RoofChart::new(phi.clone(), psi.clone(), w.clone()))?;
        let omega = math(roof.jet(c))?;
        digest.jet(&omega);

        ensure(roof.is_strict() == omega.is_in_k(), || fail("strictness <=> K"))?;
        if roof.is_strict() {
            strict += 1;
        } else {
            loose += 1;
        }

        let w2 = nilpotent_point(rng, n, &desc);
        let g = math(random_chart(rng, &w, &w2, c))?;
        ensure(math(math(roof.restrict(&g, w2))?.jet(c))? == omega, || fail("similarity invariance"))?;

        let mirrored = math(roof.mirror().jet(c))?;
        ensure(math(mirrored.compose(&omega))?.is_identity(), || fail("mirror law"))?;

        let chi_w = nilpotent_point(rng, n, &desc);
        let chi = math(random_chart(rng, &chi_w, &w, c))?;
        let first = math(RoofChart::new(phi.clone(), psi.clone(), w.clone()))?;
        let second = math(RoofChart::new(psi, chi.clone(), w.clone()))?;
        let composite = math(RoofChart::new(phi, chi, w.clone()))?;
        let independent = math(math(second.jet(c))?.compose(&math(first.jet(c))?))?;
        ensure(math(composite.jet(c))? == independent, || fail("order reversal"))?;
    }
    let mut witnesses = 0;
    for case in 0..50 {
        let (n, c) = shapes[case % shapes.len()];
        let desc = random::descriptor(rng, 3);
        let omega = random::g_element(rng, n, c, &desc);
        let jet = math(math(RoofChart::witness(&omega))?.jet(c))?;
        ensure(jet == omega, || format!("witness roof misses its target (case {case})"))?;
        witnesses += 1;
    }
    Ok(format!(
        "{CASES} roofs ({strict} strict, {loose} not): similarity invariance, mirror law, strictness <=> K, \
         order reversal exact; {witnesses} surjectivity witnesses; digest {digest}"
    ))
}

fn rep_suite(_: &Options, rng: &mut DetRng) -> Outcome {
    let configs = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2)];
    let mut reps = Vec::new();
    for &(n, c) in &configs {
        let r = math(Representation::jet_standard(n, c))?;
        let report = math(r.check_homomorphism())?;
        ensure(report.ok, || format!("standard rep (n={n}, c={c}) fails at entry {:?}", report.failing_entry))?;
        reps.push(r);
        reps.push(math(Representation::determinant(n, c))?);
        reps.push(math(Representation::trivial(n, c))?);
    }
    let r12 = math(Representation::jet_standard(1, 2))?;
    let bound = math(r12.extension_order())?;
    ensure(r12.weights() == [-1, -2] && bound.alpha0 == 2, || {
        format!("n=1, c=2: weights {:?}, alpha_0 {}", r12.weights(), bound.alpha0)
    })?;
    for r in &reps {
        let b = math(r.extension_order())?;
        ensure(b.factoring_order <= b.alpha0, || {
            format!("factoring order {} exceeds alpha_0 {}", b.factoring_order, b.alpha0)
        })?;
    }
    let standard: Vec<_> = reps.iter().step_by(3).collect();
    let mut digest = Digest::new();
    for case in 0..100 {
        let r = standard[case % standard.len()];
        let (n, c) = (r.group_dim(), r.order());
        let desc = random::descriptor(rng, 3);
        let g = random::k_element(rng, n, c, &desc);
        let h = random::k_element(rng, n, c, &desc);
        let lhs = math(g.compose(&h).and_then(|gh| r.evaluate(&gh)))?;
        let rhs = matmul(&math(r.evaluate(&g))?, &math(r.evaluate(&h))?, &desc);
        ensure(lhs == rhs, || format!("R(gh) != R(g) R(h) (n={n}, c={c}, base {:?})", desc.orders()))?;
        digest.feed(&codec::render(&codec::matrix_to_json(&desc, &lhs)));
    }
    Ok(format!(
        "standard reps comodule-check for (n, c) in {configs:?}; n=1, c=2 weights (-1, -2), alpha_0 = 2; \
         factoring order <= alpha_0 on {} reps; R(gh) = R(g)R(h) on 100 pairs; digest {digest}",
        reps.len()
    ))
}

const SEEDED: [usize; 5] = [4, 5, 7, 8, 9];

/// Runs every seeded criterion twice and compares the report lines.
fn determinism(opts: &Options, _: &mut DetRng) -> Outcome {
    let first: Vec<_> = (1..CRITERIA).map(|id| if SEEDED.contains(&id) { run_criterion(id, opts) } else { placeholder(id) }).collect();
    determinism_against(opts, &first)
}

fn placeholder(id: usize) -> CriterionResult {
    CriterionResult { id, name: "", passed: true, detail: String::new() }
}

fn determinism_against(opts: &Options, previous: &[CriterionResult]) -> Outcome {
    for id in SEEDED {
        let again = run_criterion(id, opts);
        ensure(again.line() == previous[id - 1].line(), || {
            format!("criterion {id} differs between two runs with seed {}", opts.seed)
        })?;
    }
    Ok(format!("criteria {SEEDED:?} reproduce byte-identical lines on a second run"))
}


#[cfg(test)]
mod tests {
    use super::*;

    /// `DISCJET_BLESS=1 cargo test -p discjet golden` rewrites the golden file.
    #[test]
    fn golden_file_is_current() {
        let rendered = codec::render(&coproduct_document(1, 4).unwrap());
        if std::env::var_os("DISCJET_BLESS").is_some() {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/coproduct_n1_c4.json");
            std::fs::write(path, &rendered).unwrap();
        } else {
            assert_eq!(rendered, COPRODUCT_GOLDEN);
        }
    }

    #[test]
    fn corrupted_golden_is_a_named_failure() {
        let opts = Options { seed: 7, golden: Some(COPRODUCT_GOLDEN.replacen("\"coef\": \"3\"", "\"coef\": \"4\"", 1)) };
        let r = run_criterion(2, &opts);
        assert!(!r.passed);
        assert!(r.detail.contains("golden file mismatch"), "{}", r.detail);
    }
}
