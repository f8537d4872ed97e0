//! Command-line front end. `run` returns the process exit status: 0 on
//! success, 1 when a check fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rootsigma_core::domains::{
    self, gamma_cone, gamma_dual, omega_basepoint, omega_hat, omega_pq, omega_q, q_frame, union_in_halfspaces, upsilon,
    upsilon_hat, ConePiece, Domain,
};
use rootsigma_core::linalg::{self, QMatrix, QVec, Rat};
use rootsigma_core::parabolics::{self, minus_set, tau_set, ParabolicPoset, ParabolicSet, Tau};
use rootsigma_core::rank_one::{
    self, asymptotic_td2, blocks_for_pair, c_block, h_function_checks, AsymptoticBlock, BlockExponent, QuadConfig,
    RankOneBlock,
};
use rootsigma_core::root_datum::{fixtures, restricted_system, validate, RootKind, DEFAULT_GROUP_CAP};
use rootsigma_core::verify::{all_passed, run_suite, SuiteOptions};
use rootsigma_core::weyl::{chamber_of, chambers_q, faq_plus, p_sigma_a_q, script_w};
use rootsigma_core::{RootSet, SymmetricRootDatum};
use serde_json::{json, Value};

use crate::datum_file::{self, parse_rational_list};

pub const JSON_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "rootsigma", version, about = "Combinatorics of symmetric root data and rank-one c-function numerics")]
pub struct Cli {
    /// Output format; each subcommand accepts a subset.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a datum against the axioms.
    Validate { datum: String },
    /// List the bundled fixtures or write them out as datum files.
    Fixtures {
        /// Print the datum file of one fixture.
        #[arg(long)]
        emit: Option<String>,
        /// Write every fixture into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the parabolics with their root-set data.
    Parabolics { datum: String },
    /// Hasse diagram of the order on parabolics.
    Order {
        datum: String,
        /// Same as `--format dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Chambers of the restricted roots, the representatives W and the
    /// chamber bijection per parabolic.
    Chambers { datum: String },
    /// The cones Γ(Q) and Γ(Q)° in both representations.
    Cones { datum: String, q: String },
    /// The domains Ω_{P,Q}, Ω_Q, Υ_Q, or membership of a covector.
    Domains {
        datum: String,
        q: String,
        /// Ambient covector coordinates, e.g. "1/2,-1/2".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// The hull Ω̂_Q as half-spaces.
    Hull { datum: String, q: String },
    /// Run the verification suite and emit certificates.
    Check {
        datum: String,
        /// Visit all triples instead of comparable pairs only.
        #[arg(long)]
        exhaustive: bool,
        /// Also write the JSON certificates to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-one numerics.
    Rankone {
        #[command(subcommand)]
        command: RankOneCommand,
    },
}

#[derive(Args, Debug, Clone)]
pub struct NumericArgs {
    /// Absolute and relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Largest cutoff radius before giving up on convergence.
    #[arg(long, default_value_t = 1e6)]
    pub radius_max: f64,
}

impl NumericArgs {
    fn config(&self) -> QuadConfig {
        QuadConfig { abs_tol: self.tol, rel_tol: self.tol, radius_max: self.radius_max, ..QuadConfig::default() }
    }
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Datum, followed by the parabolics P and Q.
    pub datum: Option<String>,
    pub p: Option<String>,
    pub q: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum RankOneCommand {
    /// The partial c-function as a product of rank-one integrals.
    Cfun {
        #[command(flatten)]
        pair: PairArgs,
        /// Exponent ν as ambient covector coordinates; defaults to ρ_P.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
        nu: Option<String>,
        /// Spectral parameter λ, giving ν = -λ + ρ_Ph.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Blocks given directly as "m_alpha,m_2alpha:k", repeatable.
        #[arg(long = "block", allow_hyphen_values = true)]
        blocks: Vec<String>,
        #[command(flatten)]
        num: NumericArgs,
    },
    /// `t^{d/2} c(μ + tη)` along a ray against the Gaussian prediction.
    Asymptotic {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        /// Blocks given directly as "m_alpha,m_2alpha:k_mu:k_eta", repeatable.
        #[arg(long = "block", allow_hyphen_values = true)]
        blocks: Vec<String>,
        /// Largest t; the schedule runs over powers of ten from 100.
        #[arg(long, default_value_t = 1e5)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-2)]
        drift_tol: f64,
        #[arg(long, default_value_t = 2e-2)]
        prediction_tol: f64,
        #[command(flatten)]
        num: NumericArgs,
    },
    /// Positivity and Hessian checks on `h = k_η α∘ℋ`.
    Hcheck {
        /// Blocks as "m_alpha,m_2alpha:k_eta", repeatable; defaults to
        /// both supported blocks with k_eta = 1.
        #[arg(long = "block", allow_hyphen_values = true)]
        blocks: Vec<String>,
    },
}

/// Parses arguments and runs; writes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { datum } => cmd_validate(datum, fmt, out),
        Command::Fixtures { emit, out: dir } => cmd_fixtures(emit.as_deref(), dir.as_ref(), fmt, out),
        Command::Parabolics { datum } => with_datum(datum, out, |d, name, out| cmd_parabolics(d, name, fmt, out)),
        Command::Order { datum, dot } => {
            let fmt = if *dot { Format::Dot } else { fmt };
            with_datum(datum, out, |d, name, out| cmd_order(d, name, fmt, out))
        }
        Command::Chambers { datum } => with_datum(datum, out, |d, name, out| cmd_chambers(d, name, fmt, out)),
        Command::Cones { datum, q } => with_datum(datum, out, |d, name, out| cmd_cones(d, name, q, fmt, out)),
        Command::Domains { datum, q, lambda } => {
            with_datum(datum, out, |d, name, out| cmd_domains(d, name, q, lambda.as_deref(), fmt, out))
        }
        Command::Hull { datum, q } => with_datum(datum, out, |d, name, out| cmd_hull(d, name, q, fmt, out)),
        Command::Check { datum, exhaustive, out: file } => cmd_check(datum, *exhaustive, file.as_ref(), fmt, out),
        Command::Rankone { command } => cmd_rankone(command, fmt, out),
    }
}

fn need(fmt: Format, allowed: &[Format]) -> Result<()> {
    if !allowed.contains(&fmt) {
        bail!("format {:?} is not supported by this subcommand", fmt);
    }
    Ok(())
}

fn emit_json(out: &mut dyn Write, schema: &str, datum: Option<&str>, body: Value) -> Result<()> {
    let mut v = json!({ "schema": format!("rootsigma.{schema}"), "version": JSON_VERSION });
    if let Some(n) = datum {
        v["datum"] = json!(n);
    }
    if let Value::Object(m) = body {
        for (k, x) in m {
            v[k] = x;
        }
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    Ok(())
}

/// Loads and validates; an invalid datum prints its report and exits 1.
fn with_datum(
    arg: &str,
    out: &mut dyn Write,
    f: impl FnOnce(&SymmetricRootDatum, &str, &mut dyn Write) -> Result<i32>,
) -> Result<i32> {
    let (raw, name) = datum_file::resolve(arg)?;
    let report = validate(&raw);
    if !report.passed() {
        writeln!(out, "datum {name} is invalid")?;
        writeln!(out, "{report}")?;
        return Ok(1);
    }
    let d = SymmetricRootDatum::new(raw)?;
    f(&d, &name, out)
}

fn show(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn jvec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn jmat(m: &QMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| jvec(r)).collect())
}

fn show_set(d: &SymmetricRootDatum, s: &RootSet) -> String {
    let parts: Vec<String> = s.iter().map(|i| show(d.root(i))).collect();
    format!("{{{}}}", parts.join(", "))
}

fn csv_row(out: &mut dyn Write, head: &[&str], v: &[Rat]) -> Result<()> {
    let mut cells: Vec<String> = head.iter().map(|s| s.to_string()).collect();
    cells.extend(v.iter().map(|x| x.to_string()));
    writeln!(out, "{}", cells.join(","))?;
    Ok(())
}

/// A parabolic given by its index in the enumeration or by a regular
/// vector of `a` in rational coordinates.
pub fn parse_parabolic(d: &SymmetricRootDatum, s: &str) -> Result<(usize, ParabolicSet)> {
    let ps = parabolics::enumerate_parabolics(d);
    if let Ok(i) = s.trim().parse::<usize>() {
        let p = ps.get(i).ok_or_else(|| anyhow!("parabolic index {i} out of range (there are {})", ps.len()))?;
        return Ok((i, p.clone()));
    }
    let x = parse_rational_list(s)?;
    if x.len() != d.dim() {
        bail!("vector {s:?} has {} coordinates, expected {}", x.len(), d.dim());
    }
    let positive: RootSet =
        (0..d.num_roots()).filter(|&i| linalg::dot(d.root(i), &x) > Rat::from_integer(0.into())).collect();
    let p = ParabolicSet::from_positive(d, positive).map_err(|_| anyhow!("vector {s:?} lies on a root hyperplane"))?;
    let i = ps.iter().position(|q| *q == p).expect("every positive system is enumerated");
    Ok((i, p))
}

fn parse_covector(d: &SymmetricRootDatum, s: &str, what: &str) -> Result<QVec> {
    let v = parse_rational_list(s)?;
    if v.len() != d.dim() {
        bail!("{what} has {} coordinates, expected {}", v.len(), d.dim());
    }
    Ok(v)
}

fn cmd_validate(arg: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json])?;
    let (raw, name) = datum_file::resolve(arg)?;
    let report = validate(&raw);
    if fmt == Format::Json {
        emit_json(
            out,
            "validation",
            Some(&name),
            json!({ "valid": report.passed(), "violations": report.violations }),
        )?;
    } else {
        writeln!(out, "datum: {name}")?;
        writeln!(out, "valid: {}", report.passed())?;
        for v in &report.violations {
            writeln!(out, "  [{}] {}", v.code, v.message)?;
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_fixtures(emit: Option<&str>, dir: Option<&PathBuf>, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    if let Some(name) = emit {
        let d = fixtures::by_name(name).ok_or_else(|| anyhow!("no bundled fixture named {name:?}"))?;
        write!(out, "{}", datum_file::to_toml(&d.to_raw(), Some(name)))?;
        return Ok(0);
    }
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, d) in fixtures::all() {
            let path = dir.join(format!("{name}.toml"));
            std::fs::write(&path, datum_file::to_toml(&d.to_raw(), Some(name)))
                .with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "{}", path.display())?;
        }
        return Ok(0);
    }
    need(fmt, &[Format::Text, Format::Json])?;
    let mut names: Vec<String> = fixtures::NAMES.iter().map(|s| s.to_string()).collect();
    if let Some(dir) = std::env::var_os(datum_file::FIXTURE_DIR_VAR) {
        if let Ok(entries) = std::fs::read_dir(&dir) {
            let mut extra: Vec<String> = entries
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
                .filter(|n| !names.contains(n))
                .collect();
            extra.sort();
            names.extend(extra);
        }
    }
    if fmt == Format::Json {
        emit_json(out, "fixtures", None, json!({ "fixtures": names }))?;
    } else {
        for n in names {
            writeln!(out, "{n}")?;
        }
    }
    Ok(0)
}

fn kind_name(k: RootKind) -> &'static str {
    match k {
        RootKind::H => "h",
        RootKind::Q => "q",
        RootKind::Mixed => "mixed",
    }
}

fn cmd_parabolics(d: &SymmetricRootDatum, name: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json])?;
    let ps = parabolics::enumerate_parabolics(d);
    let flags = d.st_trivial();
    let rows: Vec<_> = ps
        .iter()
        .map(|p| {
            (
                p,
                parabolics::is_q_extreme(d, p),
                tau_set(d, p, Tau::Sigma),
                tau_set(d, p, Tau::SigmaTheta),
                minus_set(d, p),
            )
        })
        .collect();
    if fmt == Format::Json {
        let roots: Vec<Value> = (0..d.num_roots())
            .map(|i| {
                json!({ "index": i, "root": jvec(d.root(i)), "mult": d.mult(i), "kind": kind_name(d.kind(i)),
                        "st_trivial": flags.contains(i) })
            })
            .collect();
        let list: Vec<Value> = rows
            .iter()
            .enumerate()
            .map(|(i, (p, qx, s, st, m))| {
                json!({ "index": i, "positive": p.positive.to_vec(), "witness": jvec(&p.witness), "q_extreme": qx,
                        "sigma": s.to_vec(), "sigma_theta": st.to_vec(), "minus": m.to_vec() })
            })
            .collect();
        emit_json(out, "parabolics", Some(name), json!({ "roots": roots, "parabolics": list }))?;
        return Ok(0);
    }
    writeln!(out, "datum: {name}")?;
    writeln!(out, "roots: {}", d.num_roots())?;
    for i in 0..d.num_roots() {
        let flag = if flags.contains(i) { "  st-trivial" } else { "" };
        writeln!(out, "  {i:>3}  {}  mult {}  {}{flag}", show(d.root(i)), d.mult(i), kind_name(d.kind(i)))?;
    }
    writeln!(out, "parabolics: {}", ps.len())?;
    writeln!(out, "q-extreme: {}", rows.iter().filter(|r| r.1).count())?;
    for (i, (p, qx, s, st, m)) in rows.iter().enumerate() {
        writeln!(
            out,
            "P{i}  {}  |σ| {}  |σθ| {}  |minus| {}  roots {:?}  witness {}",
            if *qx { "q-extreme" } else { "         " },
            s.len(),
            st.len(),
            m.len(),
            p.positive.to_vec(),
            show(&p.witness)
        )?;
    }
    Ok(0)
}

fn cmd_order(d: &SymmetricRootDatum, name: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json, Format::Dot])?;
    let poset = ParabolicPoset::new(d);
    let edges = poset.hasse();
    let (maximal, minimal) = (poset.maximal(), poset.minimal());
    match fmt {
        Format::Dot => {
            writeln!(out, "digraph order {{")?;
            writeln!(out, "  rankdir=TB;")?;
            for (i, p) in poset.parabolics.iter().enumerate() {
                let style = if parabolics::is_q_extreme(d, p) { ", peripheries=2" } else { "" };
                writeln!(out, "  P{i} [label=\"P{i}\\n{}\"{style}];", show_set(d, &p.positive))?;
            }
            for (i, j) in &edges {
                writeln!(out, "  P{i} -> P{j};")?;
            }
            writeln!(out, "}}")?;
        }
        Format::Json => {
            let e: Vec<Value> = edges.iter().map(|(i, j)| json!([i, j])).collect();
            emit_json(
                out,
                "order",
                Some(name),
                json!({ "nodes": poset.len(), "covers": e, "maximal": maximal, "minimal": minimal }),
            )?;
        }
        _ => {
            writeln!(out, "datum: {name}")?;
            writeln!(out, "nodes: {}", poset.len())?;
            writeln!(out, "covering relations (P ≻ Q): {}", edges.len())?;
            for (i, j) in &edges {
                writeln!(out, "  P{i} > P{j}")?;
            }
            writeln!(out, "maximal: {maximal:?}")?;
            writeln!(out, "minimal: {minimal:?}")?;
        }
    }
    Ok(0)
}

fn cmd_chambers(d: &SymmetricRootDatum, name: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json])?;
    let sys = restricted_system(d);
    let chambers = chambers_q(d);
    let w = script_w(d, DEFAULT_GROUP_CAP)?;
    let ps = parabolics::enumerate_parabolics(d);
    let mut per_q = Vec::new();
    for (i, q) in ps.iter().enumerate() {
        let cone = faq_plus(d, q);
        let dominating: Vec<usize> =
            p_sigma_a_q(d, q).iter().map(|p| ps.iter().position(|x| x == p).expect("enumerated")).collect();
        let images: Vec<usize> = dominating
            .iter()
            .map(|&j| {
                let c = chamber_of(d, &ps[j])?;
                Ok(chambers.iter().position(|x| x.positive == c.positive).expect("chamber enumerated"))
            })
            .collect::<Result<_>>()?;
        per_q.push((i, dominating, cone.chambers, images));
    }
    if fmt == Format::Json {
        let ch: Vec<Value> = chambers
            .iter()
            .map(|c| json!({ "positive": c.positive.to_vec(), "signs": c.sign_vector, "witness": jvec(&c.witness) }))
            .collect();
        let wv: Vec<Value> = w.iter().map(|v| json!({ "word": v.word, "matrix": jmat(&v.matrix) })).collect();
        let qs: Vec<Value> = per_q
            .iter()
            .map(|(i, dom, cone, img)| json!({ "q": i, "dominating_q_extreme": dom, "chambers": cone, "images": img }))
            .collect();
        let roots: Vec<Value> = sys.roots_q.iter().map(|r| jvec(r)).collect();
        emit_json(
            out,
            "chambers",
            Some(name),
            json!({ "restricted_roots": roots, "chambers": ch, "script_w": wv, "bijection": qs }),
        )?;
        return Ok(0);
    }
    writeln!(out, "datum: {name}")?;
    writeln!(out, "restricted roots: {}", sys.roots_q.len())?;
    for (i, r) in sys.roots_q.iter().enumerate() {
        writeln!(out, "  {i:>3}  {}  mult {}", show(r), sys.mult_q[i])?;
    }
    writeln!(out, "chambers: {}", chambers.len())?;
    for (i, c) in chambers.iter().enumerate() {
        let signs: String = c.sign_vector.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        writeln!(out, "  C{i}  {signs}  witness {}", show(&c.witness))?;
    }
    writeln!(out, "W: {}", w.len())?;
    for v in &w {
        let rows: Vec<String> = v.matrix.row_vecs().iter().map(|r| show(r)).collect();
        writeln!(out, "  word {:?}  matrix [{}]", v.word, rows.join(", "))?;
    }
    writeln!(out, "bijection P_σ(A,Q) -> chambers in a_q^+(Q):")?;
    for (i, dom, cone, img) in &per_q {
        writeln!(out, "  Q = P{i}: dominating {dom:?} -> {img:?}; chambers in cone {cone:?}")?;
    }
    Ok(0)
}

fn cmd_cones(d: &SymmetricRootDatum, name: &str, qs: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json, Format::Csv])?;
    let (qi, q) = parse_parabolic(d, qs)?;
    let frame = q_frame(d);
    let g = gamma_cone(d, &q);
    let gd = gamma_dual(d, &q);
    // Γ(Q) lives in a_q, Γ(Q)° in a_q^*; convert frame coordinates back.
    let g_v: Vec<QVec> = g.generators.iter().map(|x| frame.vector(x)).collect();
    let g_h: Vec<QVec> = g.inequalities.iter().map(|y| frame.covector(y)).collect();
    let gd_v: Vec<QVec> = gd.generators.iter().map(|y| frame.covector(y)).collect();
    let gd_h: Vec<QVec> = gd.inequalities.iter().map(|x| frame.vector(x)).collect();
    let minus = minus_set(d, &q);
    match fmt {
        Format::Json => {
            let arr = |vs: &[QVec]| Value::Array(vs.iter().map(|v| jvec(v)).collect());
            emit_json(
                out,
                "cones",
                Some(name),
                json!({
                    "q": qi, "minus": minus.to_vec(),
                    "gamma": { "generators": arr(&g_v), "inequalities": arr(&g_h) },
                    "gamma_dual": { "generators": arr(&gd_v), "inequalities": arr(&gd_h) },
                }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "cone,representation,coordinates...")?;
            for v in &g_v {
                csv_row(out, &["gamma", "generator"], v)?;
            }
            for v in &g_h {
                csv_row(out, &["gamma", "inequality"], v)?;
            }
            for v in &gd_v {
                csv_row(out, &["gamma_dual", "generator"], v)?;
            }
            for v in &gd_h {
                csv_row(out, &["gamma_dual", "inequality"], v)?;
            }
        }
        _ => {
            writeln!(out, "datum: {name}")?;
            writeln!(out, "Q = P{qi}  {}", show_set(d, &q.positive))?;
            writeln!(out, "Σ(Q)₋ = {}", show_set(d, &minus))?;
            writeln!(out, "Γ(Q) generators (vectors of a_q; ± pairs span lines):")?;
            for v in &g_v {
                writeln!(out, "  {}", show(v))?;
            }
            writeln!(out, "Γ(Q) inequalities λ(X) >= 0 for covectors λ:")?;
            for v in &g_h {
                writeln!(out, "  {}", show(v))?;
            }
            writeln!(out, "Γ(Q)° generators (covectors of a_q^*):")?;
            for v in &gd_v {
                writeln!(out, "  {}", show(v))?;
            }
            writeln!(out, "Γ(Q)° inequalities λ(X) >= 0 for vectors X:")?;
            for v in &gd_h {
                writeln!(out, "  {}", show(v))?;
            }
        }
    }
    Ok(0)
}

fn piece_json(p: &ConePiece) -> Value {
    json!({
        "basepoint": jvec(&p.basepoint),
        "normals": p.normals.iter().map(|v| jvec(v)).collect::<Vec<_>>(),
        "rays": p.rays.iter().map(|v| jvec(v)).collect::<Vec<_>>(),
    })
}

fn cmd_domains(
    d: &SymmetricRootDatum,
    name: &str,
    qs: &str,
    lambda: Option<&str>,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json, Format::Csv])?;
    let (qi, q) = parse_parabolic(d, qs)?;
    let all = parabolics::enumerate_parabolics(d);
    let ps: Vec<(usize, ParabolicSet)> =
        p_sigma_a_q(d, &q).into_iter().map(|p| (all.iter().position(|x| *x == p).expect("enumerated"), p)).collect();
    let w = script_w(d, DEFAULT_GROUP_CAP)?;
    let om = omega_q(d, &q);
    let hat = omega_hat(d, &q);
    let ups = upsilon(d, &q, &w)?;
    let ups_hat = upsilon_hat(d, &q, &w)?;

    if let Some(s) = lambda {
        let l = parse_covector(d, s, "λ")?;
        let in_aq = d.is_q_covector(&l);
        let per_p: Vec<(usize, bool)> =
            ps.iter().map(|(i, p)| Ok((*i, omega_pq(d, p, &q)?.contains(d, &l)))).collect::<Result<_>>()?;
        let member = om.contains(d, &l);
        if fmt == Format::Json {
            let pp: Vec<Value> = per_p.iter().map(|(i, m)| json!({ "p": i, "member": m })).collect();
            emit_json(
                out,
                "membership",
                Some(name),
                json!({
                    "q": qi, "lambda": jvec(&l), "in_aq_dual": in_aq, "member": member, "omega_pq": pp,
                    "hull": hat.contains(d, &l), "upsilon": ups.contains(d, &l), "upsilon_hat": ups_hat.contains(d, &l),
                }),
            )?;
        } else {
            writeln!(out, "lambda: {}", show(&l))?;
            writeln!(out, "in a_q*: {in_aq}")?;
            writeln!(out, "member: {member}")?;
            for (i, m) in &per_p {
                writeln!(out, "  Ω_(P{i},Q): {m}")?;
            }
            writeln!(out, "hull: {}", hat.contains(d, &l))?;
            writeln!(out, "upsilon: {}", ups.contains(d, &l))?;
            writeln!(out, "upsilon_hat: {}", ups_hat.contains(d, &l))?;
        }
        return Ok(0);
    }

    let Domain::Union(pieces) = &om else { unreachable!("Ω_Q is a union of pieces") };
    match fmt {
        Format::Json => {
            let list: Vec<Value> = ps
                .iter()
                .zip(pieces)
                .map(|((i, _), piece)| {
                    let mut v = piece_json(piece);
                    v["p"] = json!(i);
                    v
                })
                .collect();
            emit_json(
                out,
                "domains",
                Some(name),
                json!({ "q": qi, "omega_q": list, "script_w": w.len(), "unconstrained": om.is_unconstrained() }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "p,kind,coordinates...")?;
            for ((i, _), piece) in ps.iter().zip(pieces) {
                let tag = format!("P{i}");
                csv_row(out, &[&tag, "basepoint"], &piece.basepoint)?;
                for r in &piece.rays {
                    csv_row(out, &[&tag, "ray"], r)?;
                }
                for x in &piece.normals {
                    csv_row(out, &[&tag, "normal"], x)?;
                }
            }
        }
        _ => {
            writeln!(out, "datum: {name}")?;
            writeln!(out, "Q = P{qi}  {}", show_set(d, &q.positive))?;
            writeln!(out, "Ω_Q: union over {} q-extreme P ⪰ Q", ps.len())?;
            for ((i, p), piece) in ps.iter().zip(pieces) {
                writeln!(out, "  Ω_(P{i},Q) = basepoint {} minus cone of:", show(&omega_basepoint(d, p)))?;
                for r in &piece.rays {
                    writeln!(out, "      {}", show(&linalg::neg(r)))?;
                }
            }
            writeln!(out, "Υ_Q: intersection of {} translate(s)", w.len())?;
        }
    }
    Ok(0)
}

fn cmd_hull(d: &SymmetricRootDatum, name: &str, qs: &str, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json, Format::Csv])?;
    let (qi, q) = parse_parabolic(d, qs)?;
    let hat = omega_hat(d, &q);
    let contained = union_in_halfspaces(d, &omega_q(d, &q), &hat)?;
    let Domain::HalfSpaces(hs) = &hat else { unreachable!("the hull is a half-space system") };
    match fmt {
        Format::Json => {
            let list: Vec<Value> =
                hs.iter().map(|h| json!({ "normal": jvec(&h.normal), "bound": h.bound.to_string() })).collect();
            emit_json(
                out,
                "hull",
                Some(name),
                json!({ "q": qi, "halfspaces": list, "unconstrained": hat.is_unconstrained(), "contains_omega_q": contained }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "bound,normal...")?;
            for h in hs {
                csv_row(out, &[&h.bound.to_string()], &h.normal)?;
            }
        }
        _ => {
            writeln!(out, "datum: {name}")?;
            writeln!(out, "Q = P{qi}  {}", show_set(d, &q.positive))?;
            writeln!(out, "half-spaces ⟨λ, β⟩ <= b: {}", hs.len())?;
            for h in hs {
                writeln!(out, "  β = {}  b = {}", show(&h.normal), h.bound)?;
            }
            writeln!(out, "unconstrained: {}", hat.is_unconstrained())?;
            writeln!(out, "Ω_Q contained: {contained}")?;
        }
    }
    Ok(if contained { 0 } else { 1 })
}

fn cmd_check(arg: &str, exhaustive: bool, file: Option<&PathBuf>, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    need(fmt, &[Format::Text, Format::Json])?;
    let (raw, name) = datum_file::resolve(arg)?;
    let opts = SuiteOptions { exhaustive, ..SuiteOptions::default() };
    let certs = run_suite(&raw, &name, &opts);
    let ok = all_passed(&certs);
    let doc = json!({
        "schema": "rootsigma.certificates", "version": JSON_VERSION, "datum": name,
        "exhaustive": exhaustive, "passed": ok, "certificates": certs,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    if let Some(path) = file {
        std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if fmt == Format::Json {
        writeln!(out, "{text}")?;
    } else {
        writeln!(out, "datum: {name}")?;
        for c in &certs {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "{tag}  {:<28} universe {}", c.lemma, c.universe)?;
            if let Some(cx) = &c.counterexample {
                writeln!(out, "      counterexample: {cx}")?;
            }
        }
        let failed = certs.iter().filter(|c| !c.passed()).count();
        writeln!(out, "{} certificates, {} failed", certs.len(), failed)?;
    }
    Ok(if ok { 0 } else { 1 })
}

/// `"m_alpha,m_2alpha:x[:y]"`.
fn parse_block_spec(s: &str, numbers: usize) -> Result<(RankOneBlock, Vec<f64>)> {
    let mut parts = s.split(':');
    let head = parts.next().unwrap_or_default();
    let (a, b) = head.split_once(',').ok_or_else(|| anyhow!("block {s:?}: expected \"m_alpha,m_2alpha:...\""))?;
    let block = RankOneBlock::new(a.trim().parse()?, b.trim().parse()?)?;
    let xs: Vec<f64> = parts.map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>()?;
    if xs.len() != numbers {
        bail!("block {s:?}: expected {numbers} number(s) after the multiplicities");
    }
    Ok((block, xs))
}

struct PairCtx {
    d: SymmetricRootDatum,
    p: ParabolicSet,
    q: ParabolicSet,
}

fn load_pair(pair: &PairArgs) -> Result<PairCtx> {
    let (Some(datum), Some(p), Some(q)) = (&pair.datum, &pair.p, &pair.q) else {
        bail!("give a datum with parabolics P and Q, or blocks with --block");
    };
    let (raw, _) = datum_file::resolve(datum)?;
    let d = SymmetricRootDatum::new(raw)?;
    let (_, p) = parse_parabolic(&d, p)?;
    let (_, q) = parse_parabolic(&d, q)?;
    Ok(PairCtx { d, p, q })
}

fn f64_of(r: &Rat) -> String {
    use num_traits::ToPrimitive;
    format!("{}", r.to_f64().unwrap_or(f64::NAN))
}

fn cmd_rankone(cmd: &RankOneCommand, fmt: Format, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        RankOneCommand::Cfun { pair, nu, lambda, blocks, num } => {
            need(fmt, &[Format::Text, Format::Json])?;
            let cfg = num.config();
            // (label, exponent, exact prediction of convergence)
            let mut items: Vec<(String, BlockExponent, bool)> = Vec::new();
            let mut exact_region = None;
            if !blocks.is_empty() {
                for s in blocks {
                    let (block, xs) = parse_block_spec(s, 1)?;
                    items.push((s.clone(), BlockExponent { block, k: xs[0] }, xs[0] > 0.0));
                }
            } else {
                let ctx = load_pair(pair)?;
                let d = &ctx.d;
                let nu_v = match (nu, lambda) {
                    (Some(s), _) => parse_covector(d, s, "ν")?,
                    (None, Some(s)) => {
                        let l = parse_covector(d, s, "λ")?;
                        exact_region = Some(rank_one::convergence_region(d, &ctx.p, &ctx.q, &l));
                        linalg::sub(&domains::rho_ph(d, &ctx.p), &l)
                    }
                    (None, None) => domains::rho_p(d, &ctx.p),
                };
                for (i, b, k) in blocks_for_pair(d, &ctx.p, &ctx.q, &nu_v)? {
                    let label = format!("β = {}  k = {}", show(d.root(i)), k);
                    items.push((label, b, k > Rat::from_integer(0.into())));
                }
            }
            let mut product = 1.0;
            let mut rel = 0.0;
            let mut agree = true;
            let mut rows = Vec::new();
            for (label, b, predicted) in &items {
                let c = c_block(*b, &cfg);
                let numeric = if c.converged {
                    Some(true)
                } else if c.diverged {
                    Some(false)
                } else {
                    None
                };
                agree &= numeric == Some(*predicted);
                product *= c.value;
                rel += c.est_error / c.value.abs();
                rows.push((label.clone(), *b, *predicted, c));
            }
            let converges = items.iter().all(|x| x.2);
            if fmt == Format::Json {
                let list: Vec<Value> = rows
                    .iter()
                    .map(|(label, b, pred, c)| {
                        json!({ "block": label, "m_alpha": b.block.m_alpha, "m_2alpha": b.block.m_2alpha, "k": b.k,
                                "predicted_convergent": pred, "value": c.value, "est_error": c.est_error,
                                "converged": c.converged, "diverged": c.diverged })
                    })
                    .collect();
                emit_json(
                    out,
                    "cfunction",
                    None,
                    json!({ "blocks": list, "convergent": converges, "exact_region": exact_region,
                            "value": if converges { json!(product) } else { Value::Null },
                            "est_error": rel * product.abs(), "numeric_agrees": agree }),
                )?;
            } else {
                for (label, b, pred, c) in &rows {
                    writeln!(
                        out,
                        "block ({},{})  {label}  predicted {}  value {:.12e} ± {:.1e}  converged {}  diverged {}",
                        b.block.m_alpha,
                        b.block.m_2alpha,
                        if *pred { "convergent" } else { "divergent" },
                        c.value,
                        c.est_error,
                        c.converged,
                        c.diverged
                    )?;
                }
                if let Some(r) = exact_region {
                    writeln!(out, "λ in convergence region: {r}")?;
                }
                if converges {
                    writeln!(out, "c = {:.12e} ± {:.1e}", product, rel * product.abs())?;
                } else {
                    writeln!(out, "c: divergent")?;
                }
                writeln!(out, "numeric verdict agrees: {agree}")?;
            }
            Ok(if agree { 0 } else { 1 })
        }
        RankOneCommand::Asymptotic { pair, mu, eta, blocks, t_max, drift_tol, prediction_tol, num } => {
            need(fmt, &[Format::Text, Format::Json, Format::Csv])?;
            let mut ab = Vec::new();
            if !blocks.is_empty() {
                for s in blocks {
                    let (block, xs) = parse_block_spec(s, 2)?;
                    ab.push(AsymptoticBlock { block, k_mu: xs[0], k_eta: xs[1] });
                }
            } else {
                let ctx = load_pair(pair)?;
                let d = &ctx.d;
                let mu = match mu {
                    Some(s) => parse_covector(d, s, "μ")?,
                    None => domains::rho_p(d, &ctx.p),
                };
                let eta = match eta {
                    Some(s) => parse_covector(d, s, "η")?,
                    None => domains::rho_p(d, &ctx.p),
                };
                let bm = blocks_for_pair(d, &ctx.p, &ctx.q, &mu)?;
                let be = blocks_for_pair(d, &ctx.p, &ctx.q, &eta)?;
                for ((_, m, _), (_, e, ke)) in bm.iter().zip(&be) {
                    if ke <= &Rat::from_integer(0.into()) {
                        bail!("η must be positive on every separating root (k = {})", f64_of(ke));
                    }
                    ab.push(AsymptoticBlock { block: m.block, k_mu: m.k, k_eta: e.k });
                }
            }
            if ab.is_empty() {
                bail!("no blocks: P and Q are not separated by any root");
            }
            let mut ts = Vec::new();
            let mut t = 100.0;
            while t <= *t_max * (1.0 + 1e-12) {
                ts.push(t);
                t *= 10.0;
            }
            let r = asymptotic_td2(&ab, &ts, &num.config(), *drift_tol, *prediction_tol)?;
            match fmt {
                Format::Csv => {
                    writeln!(out, "t,value,scaled,drift")?;
                    for row in &r.rows {
                        writeln!(out, "{},{:e},{:e},{:e}", row.t, row.value, row.scaled, row.drift)?;
                    }
                }
                Format::Json => {
                    let rows: Vec<Value> = r
                        .rows
                        .iter()
                        .map(|x| json!({ "t": x.t, "value": x.value, "scaled": x.scaled, "drift": x.drift }))
                        .collect();
                    emit_json(
                        out,
                        "asymptotic",
                        None,
                        json!({ "d": r.d, "rows": rows, "limit_estimate": r.limit_estimate, "drift": r.drift,
                                "predicted": r.predicted, "prediction_rel_diff": r.prediction_rel_diff, "passed": r.passed }),
                    )?;
                }
                _ => {
                    writeln!(out, "d = {}", r.d)?;
                    writeln!(out, "{:>12}  {:>20}  {:>20}  {:>10}", "t", "c", "t^(d/2) c", "drift")?;
                    for x in &r.rows {
                        writeln!(out, "{:>12e}  {:>20.12e}  {:>20.12e}  {:>10.2e}", x.t, x.value, x.scaled, x.drift)?;
                    }
                    writeln!(out, "limit estimate: {:.10}", r.limit_estimate)?;
                    writeln!(out, "predicted: {:.10}", r.predicted)?;
                    writeln!(out, "relative difference: {:.2e}", r.prediction_rel_diff)?;
                    writeln!(out, "passed: {}", r.passed)?;
                }
            }
            Ok(if r.passed { 0 } else { 1 })
        }
        RankOneCommand::Hcheck { blocks } => {
            need(fmt, &[Format::Text, Format::Json])?;
            let mut list = Vec::new();
            if blocks.is_empty() {
                list.push((RankOneBlock::SL2, 1.0));
                list.push((RankOneBlock::SU21, 1.0));
            }
            for s in blocks {
                let (b, xs) = parse_block_spec(s, 1)?;
                list.push((b, xs[0]));
            }
            let mut ok = true;
            let mut reports = Vec::new();
            for (b, k) in list {
                let r = h_function_checks(b, k)?;
                ok &= r.passed;
                reports.push((b, k, r));
            }
            if fmt == Format::Json {
                let v: Vec<Value> = reports
                    .iter()
                    .map(|(b, k, r)| {
                        json!({ "m_alpha": b.m_alpha, "m_2alpha": b.m_2alpha, "k_eta": k, "h_at_origin": r.h_at_origin,
                                "min_off_origin": r.min_off_origin, "min_on_sphere": r.min_on_sphere,
                                "hessian": r.hessian, "fd_rel_diff": r.fd_rel_diff,
                                "positive_definite": r.positive_definite, "passed": r.passed, "witness": r.witness })
                    })
                    .collect();
                emit_json(out, "hcheck", None, json!({ "blocks": v, "passed": ok }))?;
            } else {
                for (b, k, r) in &reports {
                    writeln!(out, "block ({},{})  k_eta {k}", b.m_alpha, b.m_2alpha)?;
                    writeln!(out, "  h(e) = {:e}", r.h_at_origin)?;
                    writeln!(out, "  min h off the origin: {:e}", r.min_off_origin)?;
                    writeln!(out, "  min h on the unit sphere: {:e}", r.min_on_sphere)?;
                    writeln!(
                        out,
                        "  Hessian: {:?}",
                        r.hessian.iter().map(|x| (x * 1e8).round() / 1e8).collect::<Vec<_>>()
                    )?;
                    writeln!(out, "  finite-difference relative difference: {:.1e}", r.fd_rel_diff)?;
                    writeln!(out, "  positive definite: {}", r.positive_definite)?;
                    writeln!(out, "  passed: {}", r.passed)?;
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}
