//! The `hallie` command line: knitting, Hall polynomials, Euler
//! characteristics, Lie tables and the full verification report.

mod store;
mod triple;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallie_core::algebra::{parse_algebra, AlgebraSpec};
use hallie_core::ffla::{is_prime, DEFAULT_ENUMERATION_CAP};
use hallie_core::hall::{hall_number, hall_polynomial, ArFamily, HallConfig, HallPolynomial, Strategy};
use hallie_core::knit::{check_field_independence, KnitLimits};
use hallie_core::liealg::{
    compare_with_root_system, jacobi_check, positive_roots, verify_isomorphism, HallAlgebra,
    LieTable,
};
use hallie_core::reps::DEFAULT_SEED;
use hallie_core::{Error, ErrorClass};
use serde::Serialize;
use serde_json::{json, Value};

pub use store::DirStore;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hallie", version, about = "Hall polynomials and Lie algebras of representation-directed algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Knit the Auslander-Reiten quiver.
    Knit {
        #[command(flatten)]
        common: Common,
        /// Include representation and irreducible-map matrices.
        #[arg(long)]
        with_maps: bool,
    },
    /// Interpolate the Hall polynomial of a triple `a,c,b`.
    Hall {
        #[command(flatten)]
        common: Common,
        /// Submodule a, quotient c, middle term b: `a,c,b` with `+`-joined
        /// summands `id[:k]`, or `a;c;b` with `id:k,...` lists. Ids are AR
        /// vertex ids or `S<v>`, `P<v>`, `I<v>`.
        #[arg(long)]
        triple: String,
    },
    /// Euler characteristic of the submodule variety of a triple `a,c,b`.
    Euler {
        #[command(flatten)]
        common: Common,
        /// Submodule a, quotient c, middle term b: `a,c,b` with `+`-joined
        /// summands `id[:k]`, or `a;c;b` with `id:k,...` lists. Ids are AR
        /// vertex ids or `S<v>`, `P<v>`, `I<v>`.
        #[arg(long)]
        triple: String,
    },
    /// Structure constants of K(B) and L(B).
    Lie {
        #[command(flatten)]
        common: Common,
    },
    /// Sign twist, Jacobi identity, root system and direction checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Algebra description (JSON).
    #[arg(long)]
    algebra: PathBuf,
    /// Primes to knit over, or at which to report raw Hall counts.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Primes never used as interpolation nodes.
    #[arg(long, value_delimiter = ',')]
    exclude_primes: Vec<u64>,
    /// Worker threads for Hall counting.
    #[arg(long)]
    #[serde(skip)]
    jobs: Option<usize>,
    /// Seed for module decomposition.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 512)]
    max_vertices: usize,
    /// Largest enumeration (subspace tuples, Hom or End elements) allowed.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP as u64)]
    enumeration_cap: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Auto,
    Grass,
    Hom,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => EXIT_INPUT,
            ErrorClass::Resource => EXIT_RESOURCE,
            ErrorClass::Verification => EXIT_VERIFICATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

/// A rendered document plus the exit code it implies.
struct Emitted {
    text: String,
    code: i32,
}

/// Runs the CLI on `argv` (including the program name), writing documents
/// to `out` and diagnostics to `err`; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_INPUT,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli) {
        Ok(emitted) => {
            let _ = out.write_all(emitted.text.as_bytes());
            if emitted.code != EXIT_OK {
                let _ = writeln!(err, "error: verification failed");
            }
            emitted.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::Knit { common, .. }
        | Command::Hall { common, .. }
        | Command::Euler { common, .. }
        | Command::Lie { common }
        | Command::Verify { common } => common,
    }
}

fn execute(cli: Cli) -> Result<Emitted, Failure> {
    let common = common_of(&cli.command).clone();
    validate(&common)?;
    let text = std::fs::read_to_string(&common.algebra)
        .map_err(|e| input_error(format!("{}: {e}", common.algebra.display())))?;
    let spec = Arc::new(parse_algebra(&text)?);
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = common.jobs {
            b = b.num_threads(j);
        }
        b.build()
            .map_err(|e| input_error(format!("cannot start {:?} workers: {e}", common.jobs)))?
    };
    pool.install(|| dispatch(&cli.command, &common, spec))
}

fn validate(c: &Common) -> Result<(), Failure> {
    let mut seen = BTreeSet::new();
    for &p in c.primes.iter().chain(&c.exclude_primes) {
        if !is_prime(p) {
            return Err(Error::NotPrime(p).into());
        }
    }
    for &p in &c.primes {
        if !seen.insert(p) {
            return Err(input_error(format!("prime {p} listed twice")));
        }
    }
    if c.max_vertices == 0 || c.enumeration_cap == 0 || c.jobs == Some(0) {
        return Err(input_error("caps and --jobs must be positive".into()));
    }
    Ok(())
}

fn limits(c: &Common) -> KnitLimits {
    KnitLimits {
        max_vertices: c.max_vertices,
        seed: c.seed,
        ..KnitLimits::default()
    }
}

fn hall_config(c: &Common) -> HallConfig {
    HallConfig {
        strategy: match c.strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Grass => Strategy::Grass,
            StrategyArg::Hom => Strategy::Hom,
        },
        excluded_primes: c.exclude_primes.clone(),
        enumeration_cap: c.enumeration_cap as u128,
        ..HallConfig::default()
    }
}

fn family(c: &Common, spec: Arc<AlgebraSpec>) -> Arc<ArFamily> {
    let mut f = ArFamily::new(spec, limits(c));
    if let Some(dir) = std::env::var_os("HALLIE_CACHE_DIR") {
        f = f.with_store(Arc::new(DirStore::new(PathBuf::from(dir), c.seed)));
    }
    Arc::new(f)
}

fn envelope(command: &str, c: &Common, spec: &AlgebraSpec, result: Value) -> Value {
    json!({
        "tool": "hallie",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": c,
        "algebra": spec.name(),
        "warnings": spec.warnings(),
        "result": result,
    })
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command, c: &Common, spec: Arc<AlgebraSpec>) -> Result<Emitted, Failure> {
    match cmd {
        Command::Knit { with_maps, .. } => knit_cmd(c, spec, *with_maps),
        Command::Hall { triple, .. } => hall_cmd(c, spec, triple, false),
        Command::Euler { triple, .. } => hall_cmd(c, spec, triple, true),
        Command::Lie { .. } => lie_cmd(c, spec),
        Command::Verify { .. } => verify_cmd(c, spec),
    }
}

fn ok(text: String) -> Result<Emitted, Failure> {
    Ok(Emitted { text, code: EXIT_OK })
}

fn knit_cmd(c: &Common, spec: Arc<AlgebraSpec>, with_maps: bool) -> Result<Emitted, Failure> {
    let primes = if c.primes.is_empty() { vec![2] } else { c.primes.clone() };
    let fam = family(c, spec.clone());
    let ar = fam.get(primes[0])?;
    let independence = if primes.len() > 1 {
        Some(check_field_independence(&spec, &primes, limits(c))?)
    } else {
        None
    };
    let text = match c.format {
        Format::Json => {
            let mut result = ar.to_json(with_maps);
            result["field_independence"] = json!(independence);
            render_json(&envelope("knit", c, &spec, result))
        }
        Format::Csv => {
            let mut s = String::from("id,dim,projective,injective,tau\n");
            for (i, v) in ar.vertices().iter().enumerate() {
                let tau = ar.tau(i).map(|t| ar.vertices()[t].id.as_str()).unwrap_or("");
                s.push_str(&format!(
                    "{},{},{},{},{tau}\n",
                    v.id,
                    v.rep.dim().id(),
                    v.projective.is_some(),
                    v.injective.is_some()
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} indecomposables, {} irreducible maps over F_{}\n",
                ar.len(),
                ar.arrows().len(),
                primes[0]
            );
            for (i, v) in ar.vertices().iter().enumerate() {
                let mut flags = Vec::new();
                if v.projective.is_some() {
                    flags.push("projective".to_string());
                }
                if v.injective.is_some() {
                    flags.push("injective".to_string());
                }
                if let Some(t) = ar.tau(i) {
                    flags.push(format!("tau = {}", ar.vertices()[t].id));
                }
                s.push_str(&format!("  {:<12} {}\n", v.id, flags.join(", ")));
            }
            for a in ar.arrows() {
                s.push_str(&format!("  {} -> {}\n", ar.vertices()[a.source].id, ar.vertices()[a.target].id));
            }
            if let Some(r) = &independence {
                s.push_str(&format!("identical over primes {:?}\n", r.primes));
            }
            s
        }
    };
    ok(text)
}

fn hall_cmd(c: &Common, spec: Arc<AlgebraSpec>, triple: &str, euler: bool) -> Result<Emitted, Failure> {
    let fam = family(c, spec.clone());
    let config = hall_config(c);
    let first = hallie_core::ffla::primes()
        .find(|p| !config.excluded_primes.contains(p))
        .expect("infinitely many primes");
    let base = fam.get(first)?;
    let (a, cc, b) = triple::parse_triple(&base, triple)?;
    let poly = hall_polynomial(&fam, &a, &cc, &b, &config)?;
    // raw counts at explicitly requested primes must match the polynomial
    let mut raw = Vec::new();
    for &p in &c.primes {
        let n = hall_number(&*fam.get(p)?, &a, &cc, &b, &config)?;
        raw.push((p, n));
    }
    let mismatch = raw
        .iter()
        .any(|&(p, n)| poly.evaluate(p as i64) != n as i64);
    let code = if mismatch { EXIT_VERIFICATION } else { EXIT_OK };
    let text = match c.format {
        Format::Json => {
            let mut result = if euler {
                json!({ "chi": poly.evaluate(1), "phi": poly.coefficients })
            } else {
                hall_json(&poly)
            };
            result["triple"] = json!({ "a": a, "c": cc, "b": b });
            result["provenance"] = json!(poly.provenance);
            if !raw.is_empty() {
                result["counts_at"] = json!(raw);
            }
            render_json(&envelope(if euler { "euler" } else { "hall" }, c, &spec, result))
        }
        Format::Csv => {
            if euler {
                format!("a,c,b,chi\n\"{a}\",\"{cc}\",\"{b}\",{}\n", poly.evaluate(1))
            } else {
                let mut s = String::from("degree,coefficient\n");
                for (d, k) in poly.coefficients.iter().enumerate() {
                    s.push_str(&format!("{d},{k}\n"));
                }
                s
            }
        }
        Format::Text => {
            let mut s = if euler {
                format!("chi(E({a}, {cc}; {b})) = {}\n", poly.evaluate(1))
            } else {
                format!("phi = {}\nphi(1) = {}\n", poly_text(&poly.coefficients), poly.evaluate(1))
            };
            for (p, n) in &raw {
                s.push_str(&format!("count at p = {p}: {n}\n"));
            }
            s
        }
    };
    Ok(Emitted { text, code })
}

fn hall_json(poly: &HallPolynomial) -> Value {
    json!({
        "phi": poly.coefficients,
        "phi_at_1": poly.evaluate(1),
        "primes": poly.provenance.primes,
        "validation_prime": poly.provenance.validation_prime,
    })
}

fn poly_text(coeffs: &[i64]) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (d, &k) in coeffs.iter().enumerate().rev() {
        if k == 0 {
            continue;
        }
        let power = match d {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{d}"),
        };
        terms.push(match k {
            _ if d == 0 => format!("{k}"),
            1 => power,
            -1 => format!("-{power}"),
            _ => format!("{k}*{power}"),
        });
    }
    terms.join(" + ").replace("+ -", "- ")
}

fn tables(c: &Common, spec: Arc<AlgebraSpec>) -> Result<(HallAlgebra, LieTable, LieTable), Failure> {
    let alg = HallAlgebra::new(family(c, spec), hall_config(c))?;
    let k = alg.lie_table_k()?;
    let l = alg.lie_table_l()?;
    Ok((alg, k, l))
}

fn table_csv(t: &LieTable, s: &mut String) {
    for i in 0..t.basis.len() {
        for j in 0..t.basis.len() {
            if let Some((target, k)) = t.bracket(i, j).filter(|_| i < j) {
                s.push_str(&format!(
                    "{},{},{},{},{k}\n",
                    serde_json::to_value(t.kind).expect("kind").as_str().unwrap_or(""),
                    t.basis[i],
                    t.basis[j],
                    t.basis[target]
                ));
            }
        }
    }
}

fn lie_cmd(c: &Common, spec: Arc<AlgebraSpec>) -> Result<Emitted, Failure> {
    let (_, k, l) = tables(c, spec.clone())?;
    if c.primes.len() > 1 {
        check_field_independence(&spec, &c.primes, limits(c))?;
    }
    let text = match c.format {
        Format::Json => render_json(&envelope(
            "lie",
            c,
            &spec,
            json!({
                "k": k,
                "l": l,
                "k_matrix": k.to_text(),
                "l_matrix": l.to_text(),
            }),
        )),
        Format::Csv => {
            let mut s = String::from("algebra,x,y,target,coefficient\n");
            table_csv(&k, &mut s);
            table_csv(&l, &mut s);
            s
        }
        Format::Text => format!("K(B): [row, column]\n{}\nL(B): [row, column]\n{}", k.to_text(), l.to_text()),
    };
    ok(text)
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    skipped: bool,
    detail: Value,
}

fn verify_cmd(c: &Common, spec: Arc<AlgebraSpec>) -> Result<Emitted, Failure> {
    let (alg, k, l) = tables(c, spec.clone())?;
    let mut checks = Vec::new();
    let iso = verify_isomorphism(&k, &l);
    checks.push(Check {
        name: "sign_twist_isomorphism",
        passed: iso.passed,
        skipped: false,
        detail: json!(iso),
    });
    for (name, t) in [("jacobi_k", &k), ("jacobi_l", &l)] {
        let j = jacobi_check(t);
        checks.push(Check {
            name,
            passed: j.passed,
            skipped: false,
            detail: json!(j),
        });
    }
    checks.push(Check {
        name: "ext_direction",
        passed: k.direction_violations.is_empty(),
        skipped: false,
        detail: json!(k.direction_violations),
    });
    let polys = alg.polynomials();
    let reproduced = polys.iter().all(|p| {
        p.provenance
            .counts
            .iter()
            .all(|&(q, n)| p.evaluate(q as i64) == n as i64)
    });
    let validated = polys
        .iter()
        .filter(|p| p.provenance.validation_prime.is_some())
        .count();
    checks.push(Check {
        name: "held_out_primes",
        passed: reproduced,
        skipped: false,
        detail: json!({ "polynomials_validated": validated }),
    });
    let roots = if spec.is_path_algebra() {
        positive_roots(&spec.quiver().cartan_matrix()).ok()
    } else {
        None
    };
    match roots {
        Some(rs) => {
            let cmp = compare_with_root_system(&k, &rs);
            checks.push(Check {
                name: "root_system",
                passed: cmp.passed,
                skipped: false,
                detail: json!(cmp),
            });
        }
        None => checks.push(Check {
            name: "root_system",
            passed: true,
            skipped: true,
            detail: json!("not a path algebra of Dynkin type"),
        }),
    }
    if c.primes.len() > 1 {
        let r = check_field_independence(&spec, &c.primes, limits(c))?;
        checks.push(Check {
            name: "field_independence",
            passed: true,
            skipped: false,
            detail: json!({ "primes": r.primes, "vertices": r.shape.vertices.len() }),
        });
    }
    let passed = checks.iter().all(|ch| ch.passed);
    let text = match c.format {
        Format::Json => render_json(&envelope(
            "verify",
            c,
            &spec,
            json!({ "passed": passed, "basis": k.basis, "checks": checks }),
        )),
        Format::Csv => {
            let mut s = String::from("check,passed,skipped\n");
            for ch in &checks {
                s.push_str(&format!("{},{},{}\n", ch.name, ch.passed, ch.skipped));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for ch in &checks {
                let status = if ch.skipped {
                    "skip"
                } else if ch.passed {
                    "pass"
                } else {
                    "FAIL"
                };
                s.push_str(&format!("{status:<5} {}\n", ch.name));
            }
            s.push_str(if passed { "all checks passed\n" } else { "verification FAILED\n" });
            s
        }
    };
    Ok(Emitted {
        text,
        code: if passed { EXIT_OK } else { EXIT_VERIFICATION },
    })
}
