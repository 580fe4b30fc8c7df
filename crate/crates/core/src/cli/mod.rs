//! The `k3lab` command-line driver.
//!
//! Exit codes: 0 when every check passes or is certified, 1 when a check
//! fails, 2 on usage, parse or domain errors, 3 when a resource cap is hit.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abpres::Classification;
use crate::barhom::{
    c_lemma_suite, homology_groups_with, torus_class_in, unit_triples, verify_gl2_steinberg, verify_s1_all,
    verify_s_torsion, verify_theta_identities, BarChain, CycleClass, GroupTable, HomologySolver, MatrixGroup,
    SolvePolicy, Torus, TorusClassKind,
};
use crate::bloch::{exact_seq_report, five_term_check};
use crate::fields::FiniteField;
use crate::intlin::Caps;
use crate::milnor::{
    k2q_decompose, kernel_gen_check, milnor_pres, parse_symbol, reciprocity_product, UnitModel,
    DEFAULT_EXPONENT_BOUND,
};
use crate::report::{emit_report, Check, CheckStatus, Report};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Fields used by `verify exact-seq` when no field is given.
pub const EXACT_SEQ_ORDERS: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

#[derive(Debug, Parser)]
#[command(name = "k3lab", version, about = "Milnor K-groups, Bloch groups and torus homology over finite fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// Seed for every sampled instance.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Write the JSON report here (`-` for stdout instead of the summary).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[arg(long, global = true)]
    max_cols: Option<usize>,
    #[arg(long, global = true)]
    max_bits: Option<u64>,
    /// Enable computations in GL2(F_q).
    #[arg(long, global = true)]
    big: bool,
}

/// How homology-class equality is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Exact within the column cap, modular certificates beyond it.
    Auto,
    /// Exact only; exceeding the cap is an error.
    Exact,
    /// Modular certificates only.
    Modular,
}

impl Mode {
    fn policy(self) -> SolvePolicy {
        match self {
            Mode::Auto => SolvePolicy::auto(),
            Mode::Exact => SolvePolicy::Exact,
            Mode::Modular => SolvePolicy::modular(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Exact => "exact",
            Mode::Modular => "modular",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elements, discrete logarithms and the modulus of F_q.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
    /// Pre-Bloch group, Bloch group, sigma-quotient, K2 and exactness verdicts.
    Bloch {
        #[arg(long)]
        field: String,
    },
    /// Milnor K-group of a finite field or of truncated Q.
    MilnorK {
        #[arg(long, conflicts_with = "s")]
        field: Option<String>,
        /// Primes of the truncated-Q model, e.g. `-1,2,3,5`.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Work modulo 2.
        #[arg(long)]
        mod2: bool,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "symbol3")]
        symbol: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        symbol3: Option<String>,
    },
    /// Local symbols of {a,b} in K2(Q) and Hilbert reciprocity.
    K2q {
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        #[arg(long, default_value_t = 50)]
        prime_bound: u64,
    },
    /// Bar-complex homology of a group, or the class of a cycle.
    Homology(HomologyArgs),
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Args)]
struct HomologyArgs {
    /// `Z/2xZ/4`-style product of cyclic groups, or `gl2` with --field and --big.
    #[arg(long, conflicts_with = "rank")]
    group: Option<String>,
    /// Field of the diagonal torus (or of GL2).
    #[arg(long)]
    field: Option<String>,
    /// Rank of the diagonal torus.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    degree: usize,
    /// Torus class: k, s, psi, phi or iota.
    #[arg(long)]
    class: Option<String>,
    /// Class arguments as field element labels, comma separated.
    #[arg(long, value_delimiter = ',')]
    args: Vec<String>,
    /// File of `coeff: g1|...|gn` lines to test against zero.
    #[arg(long)]
    chain: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Suite {
    /// Properties (i)-(iii) of c-cycles in small abelian groups.
    CLemma {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Torus identities T1-T3.
    Theta {
        #[arg(long, default_value = "q=3")]
        field: String,
        /// Number of seeded triples; all triples when omitted over F_3.
        #[arg(long)]
        triples: Option<usize>,
    },
    /// Conjugation by w on s, and torsion of s in the torus.
    STorsion {
        #[arg(long, default_value = "q=5")]
        field: String,
        #[arg(long, default_value_t = 5)]
        triples: usize,
    },
    /// The exact sequence through B, P, the sigma-quotient and K2.
    ExactSeq {
        #[arg(long)]
        field: Option<String>,
    },
    /// The five-term relation under lambda' and lambda.
    FiveTerm {
        #[arg(long, default_value = "q=31")]
        field: String,
    },
    /// Generators of the kernel of the product map into K3.
    KernelGens {
        #[arg(long, conflicts_with = "s")]
        field: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "-1,2,3,5")]
        s: String,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_BOUND)]
        bound: i64,
    },
}

/// Parses `argv` (program name first), runs, prints, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let emitted = match cli.global.report.as_deref() {
                Some(p) if p.as_os_str() == "-" => {
                    print!("{}", report.to_json());
                    Ok(())
                }
                Some(p) => {
                    print!("{}", report.summary());
                    emit_report(&report, p)
                }
                None => {
                    print!("{}", report.summary());
                    Ok(())
                }
            };
            if let Err(e) = emitted {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if report.failures() > 0 {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses and executes without printing; the report path flag is ignored.
pub fn report_for<I, T>(argv: I) -> Result<Report>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::parse(e.to_string().trim_end()))?;
    execute(&cli)
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        EXIT_RESOURCE
    } else {
        EXIT_USAGE
    }
}

fn caps(g: &Global) -> Caps {
    let mut c = Caps::default();
    if let Some(m) = g.max_cols {
        c.max_cols = m;
    }
    if let Some(b) = g.max_bits {
        c.max_bits = b;
    }
    c
}

fn new_report(command: &str, g: &Global) -> Report {
    let mut r = Report::new(command, g.seed);
    let c = caps(g);
    r.param("mode", g.mode.name());
    r.param("max_cols", c.max_cols);
    r.param("max_bits", c.max_bits);
    r.param("big", g.big);
    r
}

fn class_value(c: &Classification) -> Value {
    let factors: Vec<Value> = c.invariant_factors.iter().map(big_value).collect();
    json!({
        "group": c.to_string(),
        "free_rank": c.free_rank,
        "invariant_factors": factors,
    })
}

/// A JSON number when it fits in 64 bits, a decimal string otherwise.
fn big_value(d: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    d.to_i64().map_or_else(|| Value::from(d.to_string()), Value::from)
}

fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::FieldInfo { field } => field_info(g, field),
        Command::Bloch { field } => bloch(g, field),
        Command::MilnorK {
            field,
            s,
            bound,
            n,
            mod2,
            symbol,
            symbol3,
        } => milnor_k(g, field.as_deref(), s.as_deref(), *bound, *n, *mod2, symbol.as_deref().or(symbol3.as_deref())),
        Command::K2q { symbol, prime_bound } => k2q(g, symbol, *prime_bound),
        Command::Homology(a) => homology(g, a),
        Command::Verify { suite } => verify(g, suite),
    }
}

fn field_info(g: &Global, spec: &str) -> Result<Report> {
    let f = FiniteField::parse_spec(spec)?;
    let mut r = new_report("field-info", g);
    r.param("field", spec);
    r.result("field", f.to_string());
    r.result("order", f.order());
    r.result("characteristic", f.characteristic());
    r.result("degree", f.degree());
    r.result("modulus", f.modulus().to_vec());
    r.result("generator", f.label(f.generator()));
    let elems: Vec<Value> = f
        .elements()
        .map(|a| {
            json!({
                "label": f.label(a),
                "index": f.index(a),
                "dlog": f.dlog(a).ok(),
                "coefficients": f.coefficients(a),
            })
        })
        .collect();
    r.result("elements", elems);
    Ok(r)
}

fn bloch(g: &Global, spec: &str) -> Result<Report> {
    let f = FiniteField::parse_spec(spec)?;
    let mut r = new_report("bloch", g);
    r.param("field", spec);
    let start = Instant::now();
    let e = exact_seq_report(&f)?;
    r.result("prebloch", class_value(&e.prebloch));
    r.result("bloch", class_value(&e.bloch));
    r.result("sigma", class_value(&e.sigma));
    r.result("k2", class_value(&e.k2));
    r.extend(exact_seq_checks(&f, &e, start));
    Ok(r)
}

fn exact_seq_checks(f: &FiniteField, e: &crate::bloch::ExactSeqReport, start: Instant) -> Vec<Check> {
    let q = f.order();
    vec![
        Check::from_bool(format!("E1(F_{q})"), "lambda vanishes on B", e.e1, "").timed(start),
        Check::from_bool(format!("E2(F_{q})"), "im lambda = ker(sigma-quotient -> K2)", e.e2(), e.e2.to_string())
            .timed(start),
        Check::from_bool(
            format!("E3(F_{q})"),
            "sigma-quotient -> K2 is onto",
            e.e3(),
            format!("cokernel {}", e.e3_cokernel),
        )
        .timed(start),
    ]
}

fn unit_model(field: Option<&str>, s: Option<&str>, bound: i64) -> Result<UnitModel> {
    match (field, s) {
        (Some(spec), None) => Ok(UnitModel::Finite(FiniteField::parse_spec(spec)?)),
        (None, Some(s)) => {
            let primes = s
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::parse(format!("bad prime {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            UnitModel::truncated_q(&primes, bound)
        }
        _ => Err(Error::parse("give exactly one of --field and --s")),
    }
}

fn milnor_k(
    g: &Global,
    field: Option<&str>,
    s: Option<&str>,
    bound: i64,
    n: usize,
    mod2: bool,
    symbol: Option<&str>,
) -> Result<Report> {
    let model = unit_model(field, s, bound)?;
    let mut r = new_report("milnor-k", g);
    if let Some(f) = field {
        r.param("field", f);
    }
    if let Some(s) = s {
        r.param("s", s);
        r.param("exponent_bound", bound);
    }
    r.param("n", n);
    r.param("mod2", mod2);
    let k = milnor_pres(&model, n, mod2)?;
    r.result("model", model.describe());
    r.result("steinberg_pairs", k.steinberg_pair_count());
    r.result("group", class_value(&k.classify()?));
    if let Some(sym) = symbol {
        r.param("symbol", sym);
        let units = sym.split(',').map(|t| model.parse_unit(t.trim())).collect::<Result<Vec<_>>>()?;
        let x = k.symbol(&units)?;
        let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
        r.result("symbol_coordinates", coords);
        r.result("symbol_is_zero", k.pres().is_zero(&x)?);
    }
    Ok(r)
}

fn k2q(g: &Global, symbol: &str, bound: u64) -> Result<Report> {
    let ab = parse_symbol(symbol)?;
    if ab.len() != 2 {
        return Err(Error::parse("--symbol takes a,b"));
    }
    let mut r = new_report("k2q", g);
    r.param("symbol", symbol);
    r.param("prime_bound", bound);
    let start = Instant::now();
    let vals = k2q_decompose(&ab[0], &ab[1], bound)?;
    let nontrivial: Vec<Value> = vals
        .iter()
        .filter(|v| !v.is_trivial())
        .map(|v| json!({"place": v.place.to_string(), "value": v.value, "hilbert": v.hilbert_sign()}))
        .collect();
    r.result("nontrivial_places", nontrivial);
    let prod = reciprocity_product(&vals);
    r.result("reciprocity_product", prod);
    r.push(
        Check::from_bool("reciprocity", "product of Hilbert symbols over all places is +1", prod == 1, format!("{} places", vals.len()))
            .timed(start),
    );
    Ok(r)
}

fn parse_group(spec: &str) -> Result<GroupTable> {
    let orders = spec
        .split('x')
        .map(|t| {
            let t = t.trim();
            let t = t.strip_prefix("Z/").unwrap_or(t);
            t.parse::<u32>().map_err(|_| Error::parse(format!("bad cyclic factor {t:?} in {spec:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if orders.len() == 1 {
        GroupTable::cyclic(orders[0])
    } else {
        GroupTable::product_of_cyclic(&orders)
    }
}

fn homology(g: &Global, a: &HomologyArgs) -> Result<Report> {
    let caps = caps(g);
    let policy = g.mode.policy();
    let mut r = new_report("homology", g);
    r.param("degree", a.degree);
    let mut torus = None;
    let group: Arc<GroupTable> = match (a.group.as_deref(), a.field.as_deref()) {
        (Some("gl2"), Some(spec)) => {
            if !g.big {
                return Err(Error::domain("GL2 computations need --big"));
            }
            r.param("group", "gl2");
            r.param("field", spec);
            MatrixGroup::gl2(&FiniteField::parse_spec(spec)?)?.table().clone()
        }
        (Some(spec), None) => {
            r.param("group", spec);
            Arc::new(parse_group(spec)?)
        }
        (None, Some(spec)) => {
            let rank = a.rank.unwrap_or(2);
            r.param("field", spec);
            r.param("rank", rank);
            let t = Torus::new(&FiniteField::parse_spec(spec)?, rank)?;
            let tab = t.table().clone();
            torus = Some(t);
            tab
        }
        _ => return Err(Error::parse("give --group, or --field for a torus (--group gl2 --field for GL2)")),
    };
    r.result("group", group.name());
    r.result("order", group.order());

    let mut class = None;
    if let Some(kind) = a.class.as_deref() {
        let t = torus.as_ref().ok_or_else(|| Error::parse("--class needs a torus (--field, --rank)"))?;
        let kind: TorusClassKind = kind.parse()?;
        let args = a.args.iter().map(|s| t.field().parse_elem(s.trim())).collect::<Result<Vec<_>>>()?;
        r.param("class", kind.to_string());
        r.param("args", a.args.clone());
        class = Some(torus_class_in(kind, t, &args)?.into_chain());
    } else if let Some(path) = &a.chain {
        let text = std::fs::read_to_string(path)?;
        class = Some(BarChain::from_text(group.clone(), a.degree, &text)?);
    }

    match class {
        None => {
            let start = Instant::now();
            let h = homology_groups_with(&group, a.degree, &caps)?;
            r.result(&format!("H{}", a.degree), class_value(&h));
            r.push(Check::new("homology", format!("H_{} of {}", a.degree, group.name()), CheckStatus::Pass, h.to_string()).timed(start));
        }
        Some(x) => {
            if x.degree() != a.degree {
                return Err(Error::Mismatch(format!("class has degree {}, not {}", x.degree(), a.degree)));
            }
            r.result("chain", x.to_text());
            let start = Instant::now();
            let c = CycleClass::new(x)?;
            let mut solver = HomologySolver::new(caps);
            let v = solver.is_boundary(c.chain(), &policy)?;
            r.result("verdict", v.status.to_string());
            if let Some(w) = &v.witness {
                r.result("witness", w.to_text());
            }
            r.push(Check::new("is-boundary", "the class is zero in homology", v.check_status(), v.summary()).timed(start));
        }
    }
    Ok(r)
}

fn verify(g: &Global, suite: &Suite) -> Result<Report> {
    let caps = caps(g);
    let policy = g.mode.policy();
    let mut solver = HomologySolver::new(caps);
    let report = match suite {
        Suite::CLemma { trials } => {
            let mut r = new_report("verify c-lemma", g);
            r.param("trials", *trials);
            r.extend(c_lemma_suite(*trials, g.seed, &mut solver, &policy)?);
            r
        }
        Suite::Theta { field, triples } => {
            let f = FiniteField::parse_spec(field)?;
            let mut r = new_report("verify theta", g);
            r.param("field", field.as_str());
            let count = match triples {
                Some(k) => Some(*k),
                None if f.order() == 3 => None,
                None => Some(5),
            };
            r.param("triples", count.map_or(Value::from("all"), Value::from));
            let ts = unit_triples(&f, count, g.seed);
            r.extend(verify_theta_identities(&f, &ts, &mut solver, &policy)?);
            r
        }
        Suite::STorsion { field, triples } => {
            let f = FiniteField::parse_spec(field)?;
            let mut r = new_report("verify s-torsion", g);
            r.param("field", field.as_str());
            r.param("triples", *triples);
            r.push(verify_s1_all(&f)?);
            for [a, b, c] in unit_triples(&f, Some(*triples), g.seed) {
                r.extend(verify_s_torsion(&f, a, b, c, &mut solver, &policy)?);
            }
            if g.big {
                r.extend(verify_gl2_steinberg(&f, &mut solver, &policy)?);
            }
            r
        }
        Suite::ExactSeq { field } => {
            let mut r = new_report("verify exact-seq", g);
            let fields = match field {
                Some(spec) => {
                    r.param("field", spec.as_str());
                    vec![FiniteField::parse_spec(spec)?]
                }
                None => {
                    r.param("orders", EXACT_SEQ_ORDERS.to_vec());
                    EXACT_SEQ_ORDERS.iter().map(|&q| FiniteField::from_order(q)).collect::<Result<_>>()?
                }
            };
            for f in &fields {
                let start = Instant::now();
                let e = exact_seq_report(f)?;
                r.result(&format!("B(F_{})", f.order()), e.bloch.to_string());
                r.result(&format!("P(F_{})", f.order()), e.prebloch.to_string());
                r.extend(exact_seq_checks(f, &e, start));
            }
            r
        }
        Suite::FiveTerm { field } => {
            let f = FiniteField::parse_spec(field)?;
            let mut r = new_report("verify five-term", g);
            r.param("field", field.as_str());
            let start = Instant::now();
            let ft = five_term_check(&f)?;
            r.result("pairs", ft.pairs);
            let first = |v: &[(crate::fields::FieldElem, crate::fields::FieldElem)]| match v.first() {
                None => format!("{} pairs", ft.pairs),
                Some(&(a, b)) => format!("{} failures, first at ({},{})", v.len(), f.label(a), f.label(b)),
            };
            r.push(
                Check::from_bool(
                    "lambda-prime",
                    "lambda'(fiveterm(a,b)) = a(x)x + x(x)a with x = (1-a)/(1-b)",
                    ft.lambda_prime_failures.is_empty(),
                    first(&ft.lambda_prime_failures),
                )
                .timed(start),
            );
            r.push(
                Check::from_bool(
                    "lambda",
                    "lambda(fiveterm(a,b)) = 0 in the sigma-quotient",
                    ft.lambda_failures.is_empty(),
                    first(&ft.lambda_failures),
                )
                .timed(start),
            );
            r
        }
        Suite::KernelGens { field, s, bound } => {
            let model = match field {
                Some(spec) => UnitModel::Finite(FiniteField::parse_spec(spec)?),
                None => unit_model(None, Some(s), *bound)?,
            };
            let mut r = new_report("verify kernel-gens", g);
            match field {
                Some(spec) => r.param("field", spec.as_str()),
                None => {
                    r.param("s", s.as_str());
                    r.param("exponent_bound", *bound);
                }
            }
            let start = Instant::now();
            let k = kernel_gen_check(&model)?;
            r.result("model", k.model.clone());
            r.result("domain", class_value(&k.domain));
            r.result("kernel_k3", class_value(&k.kernel_k3));
            r.result("kernel_k3_mod2", class_value(&k.kernel_k3_mod2));
            r.result("generators", k.generator_count);
            r.result("k1_relation", k.k1.to_string());
            r.result("k2_relation", k.k2.to_string());
            r.push(
                Check::from_bool("K1", "<a(x){b,c} + b(x){a,c}> lies in ker(-> K3)", k.k1_contained(), k.k1.to_string())
                    .timed(start),
            );
            r.push(
                Check::from_bool(
                    "K2",
                    "<a(x){b,c} + b(x){a,c}, 2d(x){e,f}> lies in ker(-> K3/2)",
                    k.k2_contained(),
                    k.k2.to_string(),
                )
                .timed(start),
            );
            r
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(run(["k3lab", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["k3lab", "bloch"]), EXIT_USAGE);
        assert_eq!(run(["k3lab", "bloch", "--field", "q=6"]), EXIT_USAGE);
        assert_eq!(run(["k3lab", "--help"]), EXIT_OK);
    }

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("Z/2xZ/4").unwrap().order(), 8);
        assert_eq!(parse_group("3").unwrap().order(), 3);
        assert!(parse_group("Z/2xQ").is_err());
    }

    #[test]
    fn cap_maps_to_three() {
        let e = Error::ResourceLimit {
            what: "columns",
            cap: 1,
            actual: 2,
        };
        assert_eq!(exit_code(&e), EXIT_RESOURCE);
    }
}
