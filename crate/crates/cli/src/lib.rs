//! Batch front end for `hallgebra`.
//!
//! Exit codes: 0 success, 1 a check was violated, 2 malformed input or
//! configuration, 3 a size cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hallgebra::cartan::{c_2n, c_pm, cartan_from_graph, pm_quiver, symmetrizer};
use hallgebra::hall::{Normalization, PmContext, Relation, Status, VerifyOptions};
use hallgebra::modcat::{Caps, IsoClassId, ModCat, SpeciesFile};
use hallgebra::presver::{
    check_k_coefficient_chain, check_lemma_41_traced, check_s2, check_s2_reduction, check_term_a, parse_expr, reduce,
    reduce_mixed_traced, serre_mixed_expr, serre_mixed_expr_mirrored, RewriteOrder, TRACE_CAP,
};
use hallgebra::qlaurent::{b_closed_form, b_partial_sum, check_identity_4_2, qbinom, qint};
use hallgebra::{CartanError, CartanMatrix, HallError, ModError, PresError, ValuedQuiver};

pub mod selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Cap(String),
}

impl From<ModError> for CliError {
    fn from(e: ModError) -> Self {
        match e {
            ModError::CapExceeded { .. } => Self::Cap(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<HallError> for CliError {
    fn from(e: HallError) -> Self {
        match e {
            HallError::Mod(m) => m.into(),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<PresError> for CliError {
    fn from(e: PresError) -> Self {
        match e {
            PresError::TraceCapExceeded(_) => Self::Cap(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hallgebra", version, about = "Exact Hall-algebra and quantum-group relation checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan matrices of quivers and the block constructions.
    Cartan(CartanArgs),
    /// Isomorphism classes of representations of one dimension vector.
    Modules(ModulesArgs),
    /// A single Hall number g^γ_{αβ}.
    Hallnum(HallnumArgs),
    /// Relations and embedding checks in the Hall algebra of the ± quiver.
    Verify(VerifyArgs),
    /// Symbolic identity checks over ranges of parameters.
    Lemmas(LemmasArgs),
    /// Rewrite an expression in E+, E-, K, K- to normal form.
    Reduce(ReduceArgs),
    /// Balanced quantum integer [m] in v^d.
    Qint {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Balanced quantum binomial [m; t] in v^d.
    Qbinom {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Run the full acceptance suite.
    Selftest,
}

#[derive(Debug, Args)]
pub struct CartanArgs {
    /// Inline matrix such as "[2]" or "[[2,-1],[-1,2]]".
    #[arg(long, conflicts_with = "from_quiver")]
    pub matrix: Option<String>,
    /// Quiver-spec JSON file.
    #[arg(long)]
    pub from_quiver: Option<PathBuf>,
    /// Emit [[C, -2 Id], [-2 Id, C]].
    #[arg(long, conflicts_with = "c2n")]
    pub pm: bool,
    /// Emit [[C, -2n Id], [-2n Id, C]].
    #[arg(long)]
    pub c2n: Option<u32>,
    /// Also emit labels and the symmetrizer.
    #[arg(long)]
    pub symmetrizer: bool,
}

#[derive(Debug, Args)]
pub struct QuiverArgs {
    /// Quiver-spec JSON file, optionally carrying "q" and "caps".
    #[arg(long)]
    pub quiver: PathBuf,
    /// Use the ± quiver of the given quiver.
    #[arg(long)]
    pub pm: bool,
    /// Field order; overrides the file.
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub enum_dim: Option<u32>,
    #[arg(long)]
    pub canon_dim: Option<u32>,
    #[arg(long)]
    pub max_points: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ModulesArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    /// Dimension vector, comma separated, in vertex order.
    #[arg(long)]
    pub dim: String,
}

#[derive(Debug, Args)]
pub struct HallnumArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    #[arg(long)]
    pub gamma: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub quiver: QuiverArgs,
    /// Comma-separated relation names (1+,2+,1-,2-,1pm,2pm,3pm) or "all".
    #[arg(long)]
    pub relations: Option<String>,
    /// Check the ± embeddings on all class pairs up to this total dimension.
    #[arg(long)]
    pub embedding: Option<u32>,
    #[arg(long, default_value = "ext-card")]
    pub normalization: String,
    /// Largest degree searched for imaginary generators.
    #[arg(long, default_value_t = 3)]
    pub imaginary_dim: u32,
    /// Record wall-clock milliseconds (reports are no longer byte-stable).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    /// One of 41, 42, sumb, identity, 23, s2, s2red, terma, kchain.
    #[arg(long)]
    pub which: String,
    /// Range such as "1..8" (inclusive).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Expression such as "(1) E+ E- ; (-1) E- E+".
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// Torus exponent; defaults to 2d.
    #[arg(long, allow_negative_numbers = true)]
    pub exponent: Option<i64>,
    /// leftmost, rightmost or shuffled.
    #[arg(long, default_value = "leftmost")]
    pub order: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(CliError::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(CliError::Cap(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_CAP
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let fmt = cli.output;
    match &cli.command {
        Command::Cartan(a) => cmd_cartan(a, fmt, out),
        Command::Modules(a) => cmd_modules(a, fmt, out),
        Command::Hallnum(a) => cmd_hallnum(a, fmt, out),
        Command::Verify(a) => cmd_verify(a, fmt, out),
        Command::Lemmas(a) => cmd_lemmas(a, fmt, out),
        Command::Reduce(a) => cmd_reduce(a, fmt, out),
        Command::Qint { m, d } => {
            let p = qint(*m, *d);
            emit_value(fmt, out, &json!({ "m": m, "d": d, "value": p.to_string() }), &p.to_string())
        }
        Command::Qbinom { m, t, d } => {
            if t > m {
                return Err(CliError::Input(format!("t = {t} exceeds m = {m}")));
            }
            let p = qbinom(*m, *t, *d);
            emit_value(fmt, out, &json!({ "m": m, "t": t, "d": d, "value": p.to_string() }), &p.to_string())
        }
        Command::Selftest => cmd_selftest(fmt, out),
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

fn emit_value(fmt: Format, out: &mut dyn Write, v: &Value, plain: &str) -> CliResult {
    match fmt {
        Format::Json => writeln!(out, "{v}").map_err(io)?,
        Format::Tsv | Format::Text => writeln!(out, "{plain}").map_err(io)?,
    }
    Ok(EXIT_OK)
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_rows(fmt: Format, out: &mut dyn Write, m: &CartanMatrix) -> Result<(), CliError> {
    let sep = if fmt == Format::Tsv { "\t" } else { " " };
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", cells.join(sep)).map_err(io)?;
    }
    Ok(())
}

fn cmd_cartan(a: &CartanArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    let base = match (&a.matrix, &a.from_quiver) {
        (Some(text), None) => CartanMatrix::parse(text)?,
        (None, Some(path)) => {
            let spec = SpeciesFile::from_json(&read_file(path)?)?;
            cartan_from_graph(spec.quiver.to_quiver()?.graph())
        }
        _ => return Err(CliError::Input("give exactly one of --matrix or --from-quiver".into())),
    };
    let m = match (a.pm, a.c2n) {
        (true, _) => c_pm(&base),
        (false, Some(0)) => return Err(CliError::Input("--c2n needs a positive n".into())),
        (false, Some(n)) => c_2n(&base, n),
        (false, None) => base,
    };
    if a.symmetrizer {
        let d = symmetrizer(&m)?;
        match fmt {
            Format::Json => {
                writeln!(out, "{}", json!({ "labels": m.labels(), "matrix": m.rows(), "symmetrizer": d })).map_err(io)?
            }
            _ => {
                write_rows(fmt, out, &m)?;
                let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                writeln!(out, "symmetrizer{}{}", if fmt == Format::Tsv { "\t" } else { " " }, ds.join(" ")).map_err(io)?;
            }
        }
        return Ok(EXIT_OK);
    }
    match fmt {
        Format::Json => writeln!(out, "{}", m.to_json()).map_err(io)?,
        _ => write_rows(fmt, out, &m)?,
    }
    Ok(EXIT_OK)
}

struct Loaded {
    base: ValuedQuiver,
    quiver: ValuedQuiver,
    q: u32,
    caps: Caps,
}

fn load(a: &QuiverArgs) -> Result<Loaded, CliError> {
    let file = SpeciesFile::from_json(&read_file(&a.quiver)?)?;
    let base = file.quiver.to_quiver()?;
    let quiver = if a.pm { pm_quiver(&base) } else { base.clone() };
    let q = a.q.or(file.q).ok_or_else(|| CliError::Input("no field order: pass --q or set \"q\" in the file".into()))?;
    let mut caps = file.caps.unwrap_or_default();
    if let Some(x) = a.enum_dim {
        caps.enum_dim = x;
    }
    if let Some(x) = a.canon_dim {
        caps.canon_dim = x;
    }
    if let Some(x) = a.max_points {
        caps.max_points = x;
    }
    if caps.enum_dim == 0 || caps.canon_dim == 0 || caps.max_points == 0 {
        return Err(CliError::Input("caps must be positive".into()));
    }
    Ok(Loaded { base, quiver, q, caps })
}

fn parse_dims(text: &str, n: usize) -> Result<Vec<u32>, CliError> {
    let dims: Vec<u32> = text
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Input(format!("bad dimension entry {t:?}"))))
        .collect::<Result<_, _>>()?;
    if dims.len() != n {
        return Err(CliError::Input(format!("dimension vector has {} entries, quiver has {n} vertices", dims.len())));
    }
    Ok(dims)
}

fn cmd_modules(a: &ModulesArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    let l = load(&a.quiver)?;
    let cat = ModCat::new(hallgebra::modcat::species_from_quiver(&l.quiver, l.q)?, l.caps);
    let dims = parse_dims(&a.dim, l.quiver.vertices().len())?;
    let rows = cat.module_table(&dims)?;
    match fmt {
        Format::Json => {
            let v = serde_json::to_string_pretty(&rows).expect("module rows serialize");
            writeln!(out, "{v}").map_err(io)?;
        }
        Format::Tsv => {
            writeln!(out, "id\tdimvec\torbit_size\taut_order").map_err(io)?;
            for r in &rows {
                let dv: Vec<String> = r.dimvec.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}\t{}\t{}\t{}", r.id, dv.join(","), r.orbit_size, r.aut_order).map_err(io)?;
            }
        }
        Format::Text => {
            writeln!(out, "{} classes at dimension vector ({})", rows.len(), a.dim).map_err(io)?;
            for r in &rows {
                writeln!(out, "{}  orbit {}  |Aut| {}", r.id, r.orbit_size, r.aut_order).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_hallnum(a: &HallnumArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    let l = load(&a.quiver)?;
    let cat = ModCat::new(hallgebra::modcat::species_from_quiver(&l.quiver, l.q)?, l.caps);
    let (g, x, y) = (IsoClassId::from_hex(&a.gamma)?, IsoClassId::from_hex(&a.alpha)?, IsoClassId::from_hex(&a.beta)?);
    let count = cat.hall_number(&g, &x, &y)?;
    emit_value(
        fmt,
        out,
        &json!({ "gamma": a.gamma, "alpha": a.alpha, "beta": a.beta, "hall_number": count }),
        &count.to_string(),
    )
}

fn emit_reports(fmt: Format, out: &mut dyn Write, lines: &[Value]) -> Result<(), CliError> {
    if fmt == Format::Tsv {
        writeln!(out, "relation\tstatus\tresidue_terms\tmillis\tinstance").map_err(io)?;
    }
    for v in lines {
        match fmt {
            Format::Json => writeln!(out, "{v}").map_err(io)?,
            Format::Tsv => writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                v["relation"].as_str().unwrap_or(""),
                v["status"].as_str().unwrap_or(""),
                v["residue_terms"],
                v["millis"],
                v["instance"]
            )
            .map_err(io)?,
            Format::Text => writeln!(
                out,
                "{:<10} {:<8} residue {:<4} {}",
                v["relation"].as_str().unwrap_or(""),
                v["status"].as_str().unwrap_or(""),
                v["residue_terms"],
                v["instance"]
            )
            .map_err(io)?,
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    if !a.quiver.pm {
        return Err(CliError::Input("verify works in the ± algebra; pass --pm with the base quiver".into()));
    }
    let l = load(&a.quiver)?;
    let normalization = Normalization::parse(&a.normalization)
        .ok_or_else(|| CliError::Input(format!("unknown normalization {:?}", a.normalization)))?;
    let opts = VerifyOptions { normalization, imaginary_dim: a.imaginary_dim, timings: a.timings };
    let ctx = PmContext::new(&l.base, l.q, l.caps)?;
    let relations = match (&a.relations, a.embedding) {
        (Some(r), _) => Relation::parse_list(r)?,
        (None, Some(_)) => Vec::new(),
        (None, None) => Relation::ALL.to_vec(),
    };
    let mut reports = ctx.verify_relations(&relations, &opts)?;
    if let Some(k) = a.embedding {
        reports.extend(ctx.verify_embedding(k, a.timings)?);
    }
    let violated = reports.iter().any(|r| r.status == Status::Violated);
    let lines: Vec<Value> = reports.iter().map(|r| serde_json::to_value(r).expect("report serializes")).collect();
    emit_reports(fmt, out, &lines)?;
    Ok(if violated { EXIT_VIOLATED } else { EXIT_OK })
}

/// Parses "a..b", "a..=b" (both inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Input(format!("bad range {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let r = match text.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi.trim_start_matches('='))?,
        None => {
            let x = num(text)?;
            x..=x
        }
    };
    if r.is_empty() {
        return Err(bad());
    }
    Ok(r)
}

fn range_or(text: &Option<String>, default: RangeInclusive<u32>) -> Result<RangeInclusive<u32>, CliError> {
    match text {
        Some(t) => parse_range(t),
        None => Ok(default),
    }
}

fn report_line(relation: &str, instance: Value, holds: bool, residue_terms: usize, trace_len: Option<usize>) -> Value {
    let mut v = json!({
        "relation": relation,
        "instance": instance,
        "status": if holds { "ok" } else { "violated" },
        "residue_terms": residue_terms,
        "millis": 0,
    });
    if let Some(t) = trace_len {
        v["trace_len"] = json!(t);
    }
    v
}

fn require_positive(r: &RangeInclusive<u32>, what: &str) -> Result<(), CliError> {
    if *r.start() == 0 {
        return Err(CliError::Input(format!("{what} must start at 1 or more")));
    }
    Ok(())
}

/// Report lines of one `lemmas` run.
pub fn lemma_lines(which: &str, n: Option<&str>, d: Option<&str>, m: Option<&str>) -> Result<Vec<Value>, CliError> {
    let n = n.map(str::to_string);
    let d = d.map(str::to_string);
    let m = m.map(str::to_string);
    let mut lines = Vec::new();
    match which.to_ascii_lowercase().as_str() {
        "41" => {
            let (nr, dr) = (range_or(&n, 1..=8)?, range_or(&d, 1..=3)?);
            require_positive(&nr, "n")?;
            require_positive(&dr, "d")?;
            for n in nr {
                for d in dr.clone() {
                    let o = check_lemma_41_traced(n, d)?;
                    let residue = o.residue.len() + o.mirrored_residue.len();
                    lines.push(report_line("lemma41", json!({ "n": n, "d": d }), o.holds, residue, Some(o.trace_len)));
                }
            }
        }
        "42" => {
            let nr = range_or(&n, 1..=12)?;
            require_positive(&nr, "n")?;
            for n in nr {
                for i in 1..=n {
                    let partial = b_partial_sum(n, i);
                    let (holds, residue) = match b_closed_form(n, i) {
                        Ok(c) => {
                            let diff = &partial - &c;
                            (diff.is_zero(), diff.len())
                        }
                        Err(_) => (false, partial.len()),
                    };
                    lines.push(report_line("lemma42", json!({ "n": n, "i": i }), holds, residue, None));
                }
            }
        }
        "sumb" => {
            let nr = range_or(&n, 1..=20)?;
            require_positive(&nr, "n")?;
            for n in nr {
                let s = &qint(2 * n as i64 + 1, 1) + &b_partial_sum(n, n);
                lines.push(report_line("sum-b", json!({ "n": n }), s.is_zero(), s.len(), None));
            }
        }
        "identity" => {
            let nr = range_or(&n, 1..=12)?;
            require_positive(&nr, "n")?;
            for n in nr {
                for i in 1..=n {
                    let ok = check_identity_4_2(n, i);
                    lines.push(report_line("identity", json!({ "n": n, "i": i }), ok, usize::from(!ok), None));
                }
            }
        }
        "23" => {
            let dr = range_or(&d, 1..=2)?;
            require_positive(&dr, "d")?;
            for d in dr {
                let e = 2 * d as i64;
                let plus = reduce_mixed_traced(&serre_mixed_expr(1, d), d, e, RewriteOrder::Leftmost)?;
                let minus = reduce(&serre_mixed_expr_mirrored(1, d), d, e, RewriteOrder::Leftmost, TRACE_CAP)?;
                for (form, r) in [("+-", plus), ("-+", minus)] {
                    let inst = json!({ "d": d, "form": form });
                    lines.push(report_line("lemma23", inst, r.normal.is_zero(), r.normal.len(), Some(r.trace.len())));
                }
            }
        }
        "s2" => {
            let mr = range_or(&m, 1..=10)?;
            require_positive(&mr, "m")?;
            for m in mr {
                let ok = check_s2(m);
                lines.push(report_line("s2", json!({ "m": m }), ok, usize::from(!ok), None));
            }
        }
        "s2red" => {
            let (nr, dr) = (range_or(&n, 1..=5)?, range_or(&d, 1..=2)?);
            require_positive(&nr, "n")?;
            require_positive(&dr, "d")?;
            for n in nr {
                for d in dr.clone() {
                    let ok = check_s2_reduction(n, d);
                    lines.push(report_line("s2-reduction", json!({ "n": n, "d": d }), ok, usize::from(!ok), None));
                }
            }
        }
        "terma" => {
            let nr = range_or(&n, 1..=5)?;
            require_positive(&nr, "n")?;
            for n in nr {
                for p in 0..=n {
                    let ok = check_term_a(n, p);
                    lines.push(report_line("term-a", json!({ "n": n, "p": p }), ok, usize::from(!ok), None));
                }
            }
        }
        "kchain" => {
            let nr = range_or(&n, 1..=8)?;
            require_positive(&nr, "n")?;
            for n in nr {
                let ok = check_k_coefficient_chain(n);
                lines.push(report_line("k-chain", json!({ "n": n }), ok, usize::from(!ok), None));
            }
        }
        other => return Err(CliError::Input(format!("unknown lemma {other:?}"))),
    }
    Ok(lines)
}

fn cmd_lemmas(a: &LemmasArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    let lines = lemma_lines(&a.which, a.n.as_deref(), a.d.as_deref(), a.m.as_deref())?;
    emit_reports(fmt, out, &lines)?;
    let ok = lines.iter().all(|v| v["status"] == "ok");
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATED })
}

fn cmd_reduce(a: &ReduceArgs, fmt: Format, out: &mut dyn Write) -> CliResult {
    if a.d == 0 {
        return Err(CliError::Input("d must be positive".into()));
    }
    let expr = parse_expr(&a.expr)?;
    let order = match a.order.as_str() {
        "leftmost" => RewriteOrder::Leftmost,
        "rightmost" => RewriteOrder::Rightmost,
        "shuffled" => RewriteOrder::Shuffled(a.seed),
        other => return Err(CliError::Input(format!("unknown rewrite order {other:?}"))),
    };
    let exponent = a.exponent.unwrap_or(2 * a.d as i64);
    let r = reduce(&expr, a.d, exponent, order, TRACE_CAP)?;
    let normal = r.normal.to_string();
    let mut v = report_line(
        "reduce",
        json!({ "expr": a.expr, "d": a.d, "exponent": exponent }),
        true,
        r.normal.len(),
        Some(r.trace.len()),
    );
    v["normal_form"] = json!(normal);
    match fmt {
        Format::Json => writeln!(out, "{v}").map_err(io)?,
        Format::Tsv => writeln!(out, "{normal}\t{}", r.trace.len()).map_err(io)?,
        Format::Text => writeln!(out, "{normal}  ({} rewrite steps)", r.trace.len()).map_err(io)?,
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(fmt: Format, out: &mut dyn Write) -> CliResult {
    let results = selftest::run_all();
    for r in &results {
        match fmt {
            Format::Json => writeln!(out, "{}", r.to_json()).map_err(io)?,
            Format::Tsv => writeln!(out, "{}\t{}\t{}\t{}", r.id, r.name, r.verdict(), r.detail).map_err(io)?,
            Format::Text => writeln!(out, "criterion {:>2} {:<4} {}", r.id, r.verdict(), r.name).map_err(io)?,
        }
    }
    Ok(if results.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_VIOLATED })
}
