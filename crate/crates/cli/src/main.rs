//! `discjet`: file-in/file-out front end to the jet-group library.
//!
//! Exit status: 0 on success, 2 for malformed input (bad JSON, wrong schema,
//! bad flags), 3 when a mathematical precondition fails (the message names
//! it), 1 for I/O failures writing the output or a failing `selftest`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use discjet::codec;
use discjet::suite::{self, Options};
use discjet::{random, BaseRingDescriptor, BaseRingElement, CoordRingElement, Derivation, Error, JetAutomorphism, Representation};

#[derive(Parser)]
#[command(name = "discjet", version, about = "Exact computations in jet groups of the formal disc")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone, Default)]
struct Io {
    /// Input document (repeat for verbs taking several).
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Output file, written atomically; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Expected base ring `[N1,..]`; inputs over another ring are rejected.
    #[arg(long, value_name = "ORDERS")]
    base: Option<String>,
}

#[derive(Args, Clone)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: usize,
}

#[derive(Subcommand)]
enum Verb {
    /// `A . B` (B applied first) for two jets, or the generic r/s pair with --symbolic.
    Compose {
        #[command(flatten)]
        io: Io,
        /// Compose the generic unipotent jets r and s instead of reading inputs.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, requires = "symbolic")]
        n: Option<usize>,
        #[arg(long, requires = "symbolic")]
        c: Option<usize>,
    },
    /// Inverse jet.
    Invert(Io),
    /// Membership in G, K, K_u and (with --level) in N_level.
    Classify {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        level: Option<usize>,
    },
    /// `g = tau_a . A . u`: translation, linear and unipotent factors.
    Split(Io),
    /// Coproduct table of the coordinate ring of K^(c).
    Coproduct {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Antipode table of the coordinate ring of K^(c).
    Antipode {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// Exponential of a derivation of m-order >= 2.
    Exp(Io),
    /// Logarithm of a unipotent jet.
    Log(Io),
    /// Lie bracket of two derivations.
    Bracket(Io),
    /// `Ad_k D` for a jet k in K and a derivation D (inputs in that order).
    Adjoint(Io),
    /// Jet `psi_hat . phi_hat^-1` of a roof.
    RoofJet {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        c: usize,
    },
    /// Validates a roof and reports strictness (and K-membership of its jet with --c).
    RoofCheck {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        c: Option<usize>,
    },
    /// Matrix of a representation at a jet (inputs: rep, jet).
    RepEval(Io),
    /// Exact comodule check of a representation.
    RepCheck(Io),
    /// Weights, alpha_0 and the factoring order of a representation.
    RepBound(Io),
    /// The standard representation on m / m^(c+1).
    RepStandard {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// The identity jet over the ring given by --base (default Q).
    Identity {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
    },
    /// A seeded random element of G, K or K_u.
    Sample {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "g", value_parser = ["g", "k", "ku"])]
        subgroup: String,
    },
    /// Runs the acceptance suite; one PASS/FAIL line per criterion.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Coproduct golden file to check against instead of the built-in one.
        #[arg(long, value_name = "FILE")]
        golden: Option<PathBuf>,
        /// Run only these criteria (comma separated, 1-based).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..=suite::CRITERIA as u64))]
        only: Vec<u64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Math(String),
    Output(String),
    Selftest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Input(e.to_string())
        } else {
            Failure::Math(e.to_string())
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("discjet: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("discjet: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Output(m)) => {
            eprintln!("discjet: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Selftest) => ExitCode::from(1),
    }
}

fn read_doc(path: &Path) -> Run<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(codec::open(&codec::parse_text(&text)?)?)
}

impl Io {
    fn docs(&self, count: usize) -> Run<Vec<Value>> {
        if self.inputs.len() != count {
            return Err(Failure::Input(format!("expected {count} --in file(s), got {}", self.inputs.len())));
        }
        self.inputs.iter().map(|p| read_doc(p)).collect()
    }

    fn doc(&self) -> Run<Value> {
        Ok(self.docs(1)?.remove(0))
    }

    fn expected_base(&self) -> Run<Option<BaseRingDescriptor>> {
        let Some(text) = &self.base else { return Ok(None) };
        let orders: Vec<u32> = serde_json::from_str(text)
            .map_err(|e| Failure::Input(format!("--base must look like [2,3]: {e}")))?;
        Ok(Some(BaseRingDescriptor::new(orders)?))
    }

    fn check_base(&self, desc: &BaseRingDescriptor) -> Run<()> {
        match self.expected_base()? {
            Some(expected) if &expected != desc => Err(Failure::Input(format!(
                "input is over base {:?}, --base says {:?}",
                desc.orders(),
                expected.orders()
            ))),
            _ => Ok(()),
        }
    }

    fn jet(&self, v: &Value) -> Run<JetAutomorphism> {
        let g: JetAutomorphism = codec::jet_from_json(v)?;
        self.check_base(&g.shape())?;
        Ok(g)
    }

    fn derivation(&self, v: &Value) -> Run<Derivation<BaseRingElement>> {
        let d = codec::derivation_from_json(v)?;
        self.check_base(&d.shape())?;
        Ok(d)
    }

    fn emit(&self, value: Value) -> Run<()> {
        emit_text(self.out.as_deref(), &codec::render(&codec::document(value)))
    }
}

fn emit_text(out: Option<&Path>, text: &str) -> Run<()> {
    let fail = |e: std::io::Error| Failure::Output(format!("cannot write output: {e}"));
    match out {
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(fail),
        Some(path) => {
            // write a sibling file, then rename over the target
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(format!(".tmp{}", std::process::id()));
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, text).map_err(fail)?;
            fs::rename(&tmp, path).map_err(|e| {
                let _ = fs::remove_file(&tmp);
                fail(e)
            })
        }
    }
}

fn compose_symbolic(io: &Io, docs: &[Value]) -> Run<Value> {
    let a: JetAutomorphism<CoordRingElement> = codec::jet_from_json(&docs[0])?;
    let b: JetAutomorphism<CoordRingElement> = codec::jet_from_json(&docs[1])?;
    if io.base.is_some() {
        return Err(Failure::Input("--base does not apply to symbolic jets".into()));
    }
    Ok(codec::jet_to_json(&a.compose(&b)?))
}

fn run(verb: Verb) -> Run<()> {
    match verb {
        Verb::Compose { io, symbolic: true, n, c } => {
            if !io.inputs.is_empty() {
                return Err(Failure::Input("--symbolic composes the generic jets; drop --in".into()));
            }
            let (n, c) = (n.unwrap_or(1), c.unwrap_or(4));
            let r = discjet::hopf::generic_jet('r', n, c, true)?;
            let s = discjet::hopf::generic_jet('s', n, c, true)?;
            io.emit(codec::jet_to_json(&r.compose(&s)?))
        }
        Verb::Compose { io, .. } => {
            let docs = io.docs(2)?;
            match (codec::is_symbolic(&docs[0]), codec::is_symbolic(&docs[1])) {
                (true, true) => io.emit(compose_symbolic(&io, &docs)?),
                (false, false) => {
                    let (a, b) = (io.jet(&docs[0])?, io.jet(&docs[1])?);
                    io.emit(codec::jet_to_json(&a.compose(&b)?))
                }
                _ => Err(Failure::Input("cannot mix symbolic and numeric jets".into())),
            }
        }
        Verb::Invert(io) => {
            let doc = io.doc()?;
            if codec::is_symbolic(&doc) {
                let g: JetAutomorphism<CoordRingElement> = codec::jet_from_json(&doc)?;
                return io.emit(codec::jet_to_json(&g.invert()?));
            }
            io.emit(codec::jet_to_json(&io.jet(&doc)?.invert()?))
        }
        Verb::Classify { io, level } => {
            let g = io.jet(&io.doc()?)?;
            if level.is_some_and(|l| l == 0 || l > g.order()) {
                return Err(Failure::Math(format!("invalid order: level must lie in 1..={}", g.order())));
            }
            let k = g.classify(level);
            io.emit(json!({ "in_g": k.in_g, "in_k": k.in_k, "in_k_u": k.in_k_u, "in_n": k.in_n, "level": level }))
        }
        Verb::Split(io) => {
            let g = io.jet(&io.doc()?)?;
            let (a, k) = g.split_translation();
            let (lin, u) = k.split_linear_unipotent()?;
            io.emit(json!({
                "base": codec::descriptor_to_json(&g.shape()),
                "translation": codec::elements_to_json(&a),
                "linear": codec::jet_to_json(&lin),
                "unipotent": codec::jet_to_json(&u),
            }))
        }
        Verb::Coproduct { shape, io } => {
            no_inputs(&io)?;
            emit_text(io.out.as_deref(), &codec::render(&suite::coproduct_document(shape.n, shape.c)?))
        }
        Verb::Antipode { shape, io } => {
            no_inputs(&io)?;
            emit_text(io.out.as_deref(), &codec::render(&suite::antipode_document(shape.n, shape.c)?))
        }
        Verb::Exp(io) => {
            let d = io.derivation(&io.doc()?)?;
            io.emit(codec::jet_to_json(&d.exp()?))
        }
        Verb::Log(io) => {
            let u = io.jet(&io.doc()?)?;
            io.emit(codec::derivation_to_json(&Derivation::log_unipotent(&u)?))
        }
        Verb::Bracket(io) => {
            let docs = io.docs(2)?;
            let (x, y) = (io.derivation(&docs[0])?, io.derivation(&docs[1])?);
            io.emit(codec::derivation_to_json(&x.bracket(&y)?))
        }
        Verb::Adjoint(io) => {
            let docs = io.docs(2)?;
            let (k, d) = (io.jet(&docs[0])?, io.derivation(&docs[1])?);
            io.emit(codec::derivation_to_json(&d.adjoint(&k)?))
        }
        Verb::RoofJet { io, c } => {
            let roof = codec::roof_from_json(&io.doc()?)?;
            io.check_base(roof.phi().descriptor())?;
            if c == 0 {
                return Err(Failure::Math("invalid order: c must be positive".into()));
            }
            io.emit(codec::jet_to_json(&roof.jet(c)?))
        }
        Verb::RoofCheck { io, c } => {
            let roof = codec::roof_from_json(&io.doc()?)?;
            io.check_base(roof.phi().descriptor())?;
            let jet_in_k = match c {
                Some(0) => return Err(Failure::Math("invalid order: c must be positive".into())),
                Some(c) => Some(roof.jet(c)?.is_in_k()),
                None => None,
            };
            io.emit(json!({
                "valid": true,
                "strict": roof.is_strict(),
                "jet_in_k": jet_in_k,
                "convention": discjet::etale::CONVENTION,
            }))
        }
        Verb::RepEval(io) => {
            let docs = io.docs(2)?;
            let rep = codec::rep_from_json(&docs[0])?;
            let g = io.jet(&docs[1])?;
            io.emit(codec::matrix_to_json(&g.shape(), &rep.evaluate(&g)?))
        }
        Verb::RepCheck(io) => {
            let report = codec::rep_from_json(&io.doc()?)?.check_homomorphism()?;
            io.emit(json!({ "ok": report.ok, "failing_entry": report.failing_entry }))
        }
        Verb::RepBound(io) => {
            let rep = codec::rep_from_json(&io.doc()?)?;
            let b = rep.extension_order()?;
            io.emit(json!({ "weights": rep.weights(), "alpha0": b.alpha0, "factoring_order": b.factoring_order }))
        }
        Verb::RepStandard { shape, io } => {
            no_inputs(&io)?;
            io.emit(codec::rep_to_json(&Representation::jet_standard(shape.n, shape.c)?))
        }
        Verb::Identity { shape, io } => {
            no_inputs(&io)?;
            let desc = io.expected_base()?.unwrap_or_default();
            io.emit(codec::jet_to_json(&JetAutomorphism::<BaseRingElement>::identity(shape.n, shape.c, &desc)?))
        }
        Verb::Sample { shape, io, seed, subgroup } => {
            no_inputs(&io)?;
            let desc = io.expected_base()?.unwrap_or_default();
            if shape.n == 0 || shape.c == 0 {
                return Err(Failure::Math("invalid order: n and c must be positive".into()));
            }
            let mut rng = random::rng(seed);
            let g = match subgroup.as_str() {
                "k" => random::k_element(&mut rng, shape.n, shape.c, &desc),
                "ku" => random::k_u_element(&mut rng, shape.n, shape.c, &desc),
                _ => random::g_element(&mut rng, shape.n, shape.c, &desc),
            };
            io.emit(codec::jet_to_json(&g))
        }
        Verb::Selftest { seed, golden, only, out } => {
            let golden = match golden {
                Some(p) => Some(
                    fs::read_to_string(&p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?,
                ),
                None => None,
            };
            let opts = Options { seed, golden };
            let report = if only.is_empty() { suite::run(&opts) } else { suite::run_only(&opts, &only.iter().map(|&i| i as usize).collect::<Vec<_>>()) };
            emit_text(out.as_deref(), &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Selftest)
            }
        }
    }
}

fn no_inputs(io: &Io) -> Run<()> {
    if io.inputs.is_empty() {
        Ok(())
    } else {
        Err(Failure::Input("this verb takes no --in files".into()))
    }
}

