//! Batch command-line frontend. Every subcommand maps to one library
//! operation and emits a deterministic report: identical inputs produce
//! identical bytes (the version string lives in its own header field and no
//! timestamps appear anywhere).
//!
//! Exit codes: 0 ok, 1 usage, 2 the tool cannot decide (divisible residues
//! over R or C), 3 outside the exact classification tables, 4 error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use zeroline::etalocal::{self, BiDeg};
use zeroline::field;
use zeroline::literal;
use zeroline::milnor::{MilnorNf, Mod2Nf, Nf2Data, NfData, Residue};
use zeroline::milnorwitt::scan::{nishida_scan, ScanBudget};
use zeroline::milnorwitt::MWElt;
use zeroline::powerops;
use zeroline::quadform::DEFAULT_WITNESS_CAP;
use zeroline::verdict::NilpotenceVerdict;
use zeroline::Error;

#[derive(Parser)]
#[command(
    name = "zeroline",
    version,
    about = "Exact Witt, Grothendieck-Witt, Milnor and Milnor-Witt arithmetic over Q, R, C and odd finite fields",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Optional TOML config for enumeration budgets and witness caps.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    witness_cap: Option<u32>,
    scan_max_elements: Option<usize>,
    scan_rank_cap: Option<i64>,
    seed: Option<u64>,
}

impl Config {
    fn witness_cap(&self) -> u32 {
        self.witness_cap.unwrap_or(DEFAULT_WITNESS_CAP)
    }

    fn budget(&self) -> ScanBudget {
        let mut b = ScanBudget::default();
        if let Some(m) = self.scan_max_elements {
            b.max_elements = m;
        }
        if let Some(r) = self.scan_rank_cap {
            b.rank_cap = r;
        }
        if let Some(s) = self.seed {
            b.seed = s;
        }
        b.witness_cap = self.witness_cap();
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Base fields: info, square classes, residue and Hilbert symbols.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Diagonal quadratic forms and their Witt classes.
    #[command(subcommand)]
    Form(FormCmd),
    /// Grothendieck-Witt classes.
    #[command(subcommand)]
    Gw(GwCmd),
    /// Milnor K-theory elements.
    #[command(subcommand)]
    Km(KmCmd),
    /// Milnor-Witt K-theory elements.
    #[command(subcommand)]
    Mw(MwCmd),
    /// The eta-inverted bigraded ring and its Witt-theory comparison.
    #[command(subcommand)]
    Etalocal(EtaCmd),
    /// Binomial valuations, exponent bounds, extended-power bidegrees.
    #[command(subcommand)]
    Powerops(PowCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Describe a field: kind, orderings, square-class data.
    Info { field: String },
    /// Canonical square class of a nonzero element.
    Sqclass { field: String, element: String },
    /// Legendre symbol (a/p) for an odd prime p.
    Legendre {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        p: u64,
    },
    /// Hilbert symbol (a, b)_v over Q; the place is a prime or "inf".
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        place: String,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// Rank, determinant, signed discriminant, Hasse data, signatures.
    Invariants { form: String },
    /// Canonical anisotropic representative of the Witt class.
    Witt { form: String },
    /// Torsion status and additive order in W(F).
    Torsion { form: String },
    /// Nilpotence in W(F) with a verified witness exponent.
    Nilpotent { form: String },
    /// Membership in the n-th power of the fundamental ideal.
    Ipower { form: String, n: u32 },
    /// The degree-n invariant of a class in I^n, as a mod-two Milnor element.
    Einv { form: String, n: u32 },
}

#[derive(Subcommand)]
enum GwCmd {
    /// Canonicalize a Grothendieck-Witt expression.
    Class { expr: String },
    Add { left: String, right: String },
    Mul { left: String, right: String },
    Torsion { expr: String },
    Nilpotent { expr: String },
}

#[derive(Subcommand)]
enum KmCmd {
    /// Field-specific normal form; `--mod2` for the mod-two coordinates.
    Nf {
        expr: String,
        #[arg(long)]
        mod2: bool,
    },
    Mul { left: String, right: String },
    /// Find (m, gamma) with expr^m = {-1} gamma, verified exactly.
    PowerForm { expr: String },
    /// Nilpotence decision with rule chain and verified witness.
    Nilpotent { expr: String },
}

#[derive(Subcommand)]
enum MwCmd {
    /// Validate and canonicalize an element literal.
    Make { expr: String },
    Mul { left: String, right: String },
    Torsion { expr: String },
    Nilpotent { expr: String },
    /// Enumerate a degree, decide every element, cross-check by iteration.
    Scan {
        field: String,
        #[arg(allow_hyphen_values = true)]
        degree: i64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum EtaCmd {
    /// Monomial-basis dimension of a bidegree.
    Dim {
        #[arg(allow_hyphen_values = true)]
        stem: i64,
        #[arg(allow_hyphen_values = true)]
        weight: i64,
        #[arg(long)]
        localized: bool,
    },
    /// Dimension of the Witt-theory ring in a bidegree.
    Ktdim {
        #[arg(allow_hyphen_values = true)]
        stem: i64,
        #[arg(allow_hyphen_values = true)]
        weight: i64,
    },
    /// Image of an element under the comparison map (mu9 inverted).
    Map { expr: String },
    /// Verify surjectivity and the kernel shift over a window.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Subcommand)]
enum PowCmd {
    /// Exact p-adic valuation of C(p^i v, p).
    Binom {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        v: u64,
    },
    /// Nilpotence exponent bound (1 + m(p+1))^i with its derivation trace.
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        m: u64,
    },
    /// Extended-power bidegree bookkeeping.
    Kp {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
    },
}

struct Outcome {
    payload: Value,
    provenance: Option<Value>,
    /// Extra TSV body for table-shaped reports.
    chart: Option<String>,
}

impl Outcome {
    fn of(payload: Value) -> Outcome {
        Outcome { payload, provenance: None, chart: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version on stdout with success; usage errors
            // go to stderr with code 1
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(&cli.command, &config) {
        Ok(out) => {
            emit(cli.format, "ok", &out);
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (status, code) = match &err {
                Error::Unknown(_) => ("unknown", 2),
                Error::Unsupported(_) => ("unsupported", 3),
                _ => ("error", 4),
            };
            let out = Outcome::of(json!({ "message": err.to_string() }));
            emit(cli.format, status, &out);
            ExitCode::from(code)
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let Some(path) = &cli.config else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

fn emit(format: Format, status: &str, out: &Outcome) {
    let mut report = serde_json::Map::new();
    report.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    report.insert("status".into(), json!(status));
    report.insert("payload".into(), out.payload.clone());
    if let Some(p) = &out.provenance {
        report.insert("provenance".into(), p.clone());
    }
    let report = Value::Object(report);
    let mut buf = String::new();
    match format {
        Format::Json => {
            buf.push_str(&serde_json::to_string_pretty(&report).expect("serializable"));
            buf.push('\n');
        }
        Format::Tsv => {
            buf.push_str(&format!("status\t{status}\n"));
            flatten("payload", &out.payload, &mut |k, v| {
                buf.push_str(&format!("{k}\t{v}\n"))
            });
            if let Some(p) = &out.provenance {
                flatten("provenance", p, &mut |k, v| buf.push_str(&format!("{k}\t{v}\n")));
            }
            if let Some(chart) = &out.chart {
                buf.push_str(chart);
                buf.push('\n');
            }
        }
        Format::Text => {
            buf.push_str(&format!("status: {status}\n"));
            flatten("", &out.payload, &mut |k, v| {
                buf.push_str(&format!("{}: {v}\n", k.trim_start_matches('.')))
            });
            if let Some(p) = &out.provenance {
                flatten("provenance", p, &mut |k, v| buf.push_str(&format!("{k}: {v}\n")));
            }
            if let Some(chart) = &out.chart {
                buf.push_str(chart);
                buf.push('\n');
            }
        }
    }
    // downstream tools may close the pipe early; that is not an error
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(buf.as_bytes());
}

fn flatten(prefix: &str, v: &Value, sink: &mut dyn FnMut(&str, String)) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, sink);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))) {
                let joined: Vec<String> = items.iter().map(render_scalar).collect();
                sink(prefix, joined.join(","));
            } else {
                for (i, inner) in items.iter().enumerate() {
                    flatten(&format!("{prefix}.{i}"), inner, sink);
                }
            }
        }
        _ => sink(prefix, render_scalar(v)),
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn verdict_json(v: &NilpotenceVerdict) -> (Value, Value) {
    let payload = json!({
        "is_torsion": v.is_torsion,
        "torsion_order": v.torsion_order.to_string(),
        "is_nilpotent": v.is_nilpotent.to_string(),
        "witness_exponent": v.witness_exponent,
        "witness_cap": v.witness_cap,
    });
    let provenance = json!({ "rule_chain": v.rule_chain });
    (payload, provenance)
}

fn nf_json(nf: &MilnorNf) -> (Value, bool) {
    // second component: fully decided?
    match &nf.data {
        NfData::Int(c) => (json!({ "kind": "integer", "value": c }), true),
        NfData::QUnits { neg, exps } => {
            let exps: serde_json::Map<String, Value> =
                exps.iter().map(|(p, e)| (p.to_string(), json!(e))).collect();
            (json!({ "kind": "rational-units", "negative": neg, "exponents": exps }), true)
        }
        NfData::QTwo { wild2, tame } => {
            let tame: serde_json::Map<String, Value> =
                tame.iter().map(|(p, t)| (p.to_string(), json!(t))).collect();
            (
                json!({ "kind": "rational-degree-two", "wild_bit_at_2": wild2, "tame": tame }),
                true,
            )
        }
        NfData::QHigh { real } => (json!({ "kind": "rational-high", "real_bit": real }), true),
        NfData::FqUnits { dlog } => (json!({ "kind": "finite-units", "dlog": dlog }), true),
        NfData::TrivialGroup => (json!({ "kind": "trivial-group" }), true),
        NfData::Real { neg, residue } => {
            let (residue_v, decided) = residue_json(residue);
            (json!({ "kind": "real", "sign_bit": neg, "residue": residue_v }), decided)
        }
        NfData::Complex { residue } => {
            let (residue_v, decided) = residue_json(residue);
            (json!({ "kind": "complex", "residue": residue_v }), decided)
        }
    }
}

fn residue_json(r: &Residue) -> (Value, bool) {
    match r {
        Residue::Zero => (json!("zero"), true),
        Residue::Value(v) => (json!(v.to_string()), true),
        Residue::Formal(terms) => {
            let rendered: Vec<String> = terms
                .iter()
                .map(|(entries, c)| {
                    let inner: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
                    format!("{c}*{{{}}}", inner.join(","))
                })
                .collect();
            (json!({ "uncertified": rendered }), false)
        }
    }
}

fn nf2_json(nf: &Mod2Nf) -> Value {
    match &nf.data {
        Nf2Data::Bit(b) => json!({ "kind": "bit", "value": b }),
        Nf2Data::QUnits2 { neg, primes } => {
            json!({ "kind": "rational-units", "negative": neg, "odd_primes": primes })
        }
        Nf2Data::QTwo2 { wild2, odd } => {
            json!({ "kind": "rational-degree-two", "wild_bit_at_2": wild2, "odd_primes": odd })
        }
        Nf2Data::Zero => json!({ "kind": "zero" }),
    }
}

fn bideg_json(d: BiDeg) -> Value {
    json!([d.stem, d.weight])
}

fn run(cmd: &Command, config: &Config) -> zeroline::Result<Outcome> {
    let cap = config.witness_cap();
    match cmd {
        Command::Field(c) => run_field(c),
        Command::Form(c) => run_form(c, cap),
        Command::Gw(c) => run_gw(c, cap),
        Command::Km(c) => run_km(c, cap),
        Command::Mw(c) => run_mw(c, cap, config),
        Command::Etalocal(c) => run_eta(c),
        Command::Powerops(c) => run_pow(c),
    }
}

fn run_field(cmd: &FieldCmd) -> zeroline::Result<Outcome> {
    Ok(match cmd {
        FieldCmd::Info { field } => {
            let f = literal::parse_field(field)?;
            let orderings: Vec<String> = f.orderings().iter().map(|p| p.to_string()).collect();
            let mut payload = json!({
                "field": f.to_string(),
                "formally_real": f.is_formally_real(),
                "orderings": orderings,
            });
            if let Some(fq) = f.fq() {
                payload["characteristic"] = json!(fq.p);
                payload["order"] = json!(fq.q);
                payload["least_nonresidue"] = json!(fq.nonresidue);
                payload["generator"] = json!(fq.generator);
            }
            Outcome::of(payload)
        }
        FieldCmd::Sqclass { field, element } => {
            let f = literal::parse_field(field)?;
            let e = f.parse_element(element)?;
            let c = field::square_class(&f, &e)?;
            Outcome::of(json!({
                "field": f.to_string(),
                "element": e.render(),
                "square_class": c.render(),
                "is_trivial": c.is_one(),
            }))
        }
        FieldCmd::Legendre { a, p } => {
            let s = field::legendre(*a, *p)?;
            Outcome::of(json!({ "a": a, "p": p, "symbol": s }))
        }
        FieldCmd::Hilbert { a, b, place } => {
            let ra = field::parse_rational(a)?;
            let rb = field::parse_rational(b)?;
            let v = field::Place::parse(place)?;
            let s = field::hilbert_symbol(&ra, &rb, &v)?;
            Outcome::of(json!({
                "a": a, "b": b, "place": v.to_string(), "symbol": s,
            }))
        }
    })
}

fn run_form(cmd: &FormCmd, cap: u32) -> zeroline::Result<Outcome> {
    Ok(match cmd {
        FormCmd::Invariants { form } => {
            let f = literal::parse_form(form)?;
            let inv = f.invariants();
            let hasse: Vec<String> = inv.hasse_minus.iter().map(|p| p.to_string()).collect();
            let signatures: serde_json::Map<String, Value> =
                inv.signatures.iter().map(|(p, s)| (p.to_string(), json!(s))).collect();
            Outcome::of(json!({
                "form": f.render(),
                "rank": inv.rank,
                "det": inv.det.render(),
                "signed_disc": inv.signed_disc.render(),
                "hasse_minus_places": hasse,
                "signatures": signatures,
            }))
        }
        FormCmd::Witt { form } => {
            let f = literal::parse_form(form)?;
            let w = f.witt_class()?;
            Outcome::of(json!({
                "form": f.render(),
                "witt_representative": w.render(),
                "anisotropic_rank": w.aniso().rank(),
                "is_zero": w.is_zero(),
            }))
        }
        FormCmd::Torsion { form } => {
            let f = literal::parse_form(form)?;
            let t = f.witt_class()?.torsion()?;
            Outcome::of(json!({
                "form": f.render(),
                "is_torsion": t.torsion,
                "order": t.order.to_string(),
            }))
        }
        FormCmd::Nilpotent { form } => {
            let f = literal::parse_form(form)?;
            let n = f.witt_class()?.nilpotence(cap)?;
            Outcome::of(json!({
                "form": f.render(),
                "is_nilpotent": n.nilpotent,
                "witness_exponent": n.exponent,
                "witness_cap": cap,
            }))
        }
        FormCmd::Ipower { form, n } => {
            let f = literal::parse_form(form)?;
            let member = f.witt_class()?.in_ideal_power(*n)?;
            Outcome::of(json!({ "form": f.render(), "n": n, "in_ideal_power": member }))
        }
        FormCmd::Einv { form, n } => {
            let f = literal::parse_form(form)?;
            let e = f.witt_class()?.en_invariant(*n)?;
            Outcome::of(json!({
                "form": f.render(),
                "n": n,
                "invariant": e.render(),
                "mod2": nf2_json(&e.mod2_form()?),
            }))
        }
    })
}

fn run_gw(cmd: &GwCmd, cap: u32) -> zeroline::Result<Outcome> {
    let class_json = |g: &zeroline::quadform::GWClass| {
        json!({
            "witt_representative": g.witt().render(),
            "rank": g.rank(),
            "literal": format!("{}:{}", g.field(), zeroline::milnorwitt::render_gw_body(g)),
        })
    };
    Ok(match cmd {
        GwCmd::Class { expr } => Outcome::of(class_json(&literal::parse_gw(expr)?)),
        GwCmd::Add { left, right } => {
            let a = literal::parse_gw(left)?;
            let b = literal::parse_gw(right)?;
            Outcome::of(class_json(&a.add(&b)?))
        }
        GwCmd::Mul { left, right } => {
            let a = literal::parse_gw(left)?;
            let b = literal::parse_gw(right)?;
            Outcome::of(class_json(&a.mul(&b)?))
        }
        GwCmd::Torsion { expr } => {
            let g = literal::parse_gw(expr)?;
            let t = g.torsion()?;
            Outcome::of(json!({
                "class": class_json(&g),
                "is_torsion": t.torsion,
                "order": t.order.to_string(),
            }))
        }
        GwCmd::Nilpotent { expr } => {
            let g = literal::parse_gw(expr)?;
            let n = g.nilpotence(cap)?;
            Outcome::of(json!({
                "class": class_json(&g),
                "is_nilpotent": n.nilpotent,
                "witness_exponent": n.exponent,
                "witness_cap": cap,
            }))
        }
    })
}

fn run_km(cmd: &KmCmd, cap: u32) -> zeroline::Result<Outcome> {
    Ok(match cmd {
        KmCmd::Nf { expr, mod2 } => {
            let x = literal::parse_milnor(expr)?;
            if *mod2 {
                let nf = x.mod2_form()?;
                Outcome::of(json!({
                    "element": x.render(),
                    "degree": x.degree(),
                    "mod2": nf2_json(&nf),
                    "is_zero_mod2": nf.is_zero(),
                }))
            } else {
                let nf = x.normal_form()?;
                let (coords, decided) = nf_json(&nf);
                if !decided {
                    return Err(Error::Unknown(
                        "the divisible residue cannot be certified zero or nonzero".into(),
                    ));
                }
                Outcome::of(json!({
                    "element": x.render(),
                    "degree": x.degree(),
                    "normal_form": coords,
                    "is_zero": nf.is_zero()?,
                }))
            }
        }
        KmCmd::Mul { left, right } => {
            let a = literal::parse_milnor(left)?;
            let b = literal::parse_milnor(right)?;
            let p = a.mul(&b)?;
            Outcome::of(json!({
                "product": p.render(),
                "degree": p.degree(),
            }))
        }
        KmCmd::PowerForm { expr } => {
            let x = literal::parse_milnor(expr)?;
            let (m, gamma) = x.power_form()?;
            Outcome::of(json!({
                "element": x.render(),
                "m": m,
                "gamma": gamma.render(),
                "identity": format!("x^{m} = {{-1}} * ({})", gamma.render()),
                "verified": true,
            }))
        }
        KmCmd::Nilpotent { expr } => {
            let x = literal::parse_milnor(expr)?;
            let v = x.nilpotence(cap)?;
            let (payload, provenance) = verdict_json(&v);
            let mut payload = payload;
            payload["element"] = json!(x.render());
            Outcome { payload, provenance: Some(provenance), chart: None }
        }
    })
}

fn run_mw(cmd: &MwCmd, cap: u32, config: &Config) -> zeroline::Result<Outcome> {
    let elt_json = |x: &MWElt| {
        json!({
            "literal": x.render(),
            "degree": x.degree(),
            "sphere_bidegree": [x.sphere_bidegree().0, x.sphere_bidegree().1],
        })
    };
    Ok(match cmd {
        MwCmd::Make { expr } => Outcome::of(elt_json(&literal::parse_mw(expr)?)),
        MwCmd::Mul { left, right } => {
            let a = literal::parse_mw(left)?;
            let b = literal::parse_mw(right)?;
            let p = a.mul(&b)?;
            let mut payload = elt_json(&p.value);
            payload["via_witt_shadow"] = json!(p.via_witt_shadow);
            Outcome::of(payload)
        }
        MwCmd::Torsion { expr } => {
            let x = literal::parse_mw(expr)?;
            let t = x.torsion()?;
            let mut payload = elt_json(&x);
            payload["is_torsion"] = json!(t.torsion);
            payload["order"] = json!(t.order.to_string());
            Outcome::of(payload)
        }
        MwCmd::Nilpotent { expr } => {
            let x = literal::parse_mw(expr)?;
            let v = x.nilpotence(cap)?;
            let (verdict, provenance) = verdict_json(&v);
            let mut payload = elt_json(&x);
            for (k, val) in verdict.as_object().expect("object").iter() {
                payload[k] = val.clone();
            }
            Outcome { payload, provenance: Some(provenance), chart: None }
        }
        MwCmd::Scan { field, degree, budget, seed } => {
            let f = literal::parse_field(field)?;
            let mut b = config.budget();
            if let Some(m) = budget {
                b.max_elements = *m;
            }
            if let Some(s) = seed {
                b.seed = *s;
            }
            let report = nishida_scan(&f, *degree, &b)?;
            let counterexamples: Vec<Value> = report
                .counterexamples
                .iter()
                .map(|c| {
                    json!({
                        "literal": c.literal,
                        "torsion_order": c.torsion_order.to_string(),
                        "is_nilpotent": c.is_nilpotent.to_string(),
                    })
                })
                .collect();
            Outcome::of(json!({
                "field": report.field,
                "degree": report.degree,
                "sphere_bidegree": [report.sphere_bidegree.0, report.sphere_bidegree.1],
                "checked": report.checked,
                "torsion_count": report.torsion_count,
                "nilpotent_count": report.nilpotent_count,
                "counterexamples": counterexamples,
                "mismatches": report.mismatches,
                "unknowns": report.unknowns,
                "budget_exhausted": report.budget_exhausted,
            }))
        }
    })
}

fn run_eta(cmd: &EtaCmd) -> zeroline::Result<Outcome> {
    Ok(match cmd {
        EtaCmd::Dim { stem, weight, localized } => {
            let d = BiDeg::new(*stem, *weight);
            Outcome::of(json!({
                "bidegree": bideg_json(d),
                "localized": localized,
                "dim": etalocal::r_dim(d, *localized),
            }))
        }
        EtaCmd::Ktdim { stem, weight } => {
            let d = BiDeg::new(*stem, *weight);
            Outcome::of(json!({ "bidegree": bideg_json(d), "dim": etalocal::kt_dim(d) }))
        }
        EtaCmd::Map { expr } => {
            let x = literal::parse_eta_elt(expr, true)?;
            let image = etalocal::unit_map(&x)?;
            let bits: Vec<Value> = image.bits().map(|d| bideg_json(*d)).collect();
            Outcome::of(json!({
                "element": x.render(),
                "image_bidegrees": bits,
                "image_is_zero": image.is_zero(),
            }))
        }
        EtaCmd::Verify { window } => {
            let (stems, weights) = literal::parse_window(window)?;
            let report = etalocal::verify_window(stems, weights)?;
            // TSV chart of kernel dimensions: rows are stems, columns weights
            let mut chart = String::from("kernel_dim");
            for w in weights.0..=weights.1 {
                chart.push_str(&format!("\t{w}"));
            }
            chart.push('\n');
            for s in stems.0..=stems.1 {
                chart.push_str(&s.to_string());
                for w in weights.0..=weights.1 {
                    let cell = report
                        .cells
                        .iter()
                        .find(|c| c.bidegree == BiDeg::new(s, w))
                        .expect("cell in window");
                    chart.push_str(&format!("\t{}", cell.kernel_dim));
                }
                chart.push('\n');
            }
            let kernel_total: usize = report.cells.iter().map(|c| c.kernel_dim).sum();
            Outcome {
                payload: json!({
                    "stem_range": [report.stem_range.0, report.stem_range.1],
                    "weight_range": [report.weight_range.0, report.weight_range.1],
                    "bidegrees_checked": report.cells.len(),
                    "surjective_everywhere": report.surjective_everywhere,
                    "shift_match": report.shift_match,
                    "kernel_dimension_total": kernel_total,
                }),
                provenance: None,
                chart: Some(chart),
            }
        }
    })
}

fn run_pow(cmd: &PowCmd) -> zeroline::Result<Outcome> {
    Ok(match cmd {
        PowCmd::Binom { p, i, v } => {
            let r = powerops::binom_valuation(*p, *i, *v)?;
            Outcome::of(json!({
                "p": r.p,
                "i": r.i,
                "v": r.v,
                "r": r.r.to_string(),
                "binomial": r.binomial.to_string(),
                "valuation": r.valuation,
                "satisfies_bound": r.satisfies_bound,
            }))
        }
        PowCmd::Bound { p, i, m } => {
            let h = powerops::TorsionHypothesis::new(*p, *i, *m)?;
            let b = powerops::exponent_bound(h);
            Outcome {
                payload: json!({
                    "p": p,
                    "i": i,
                    "m": m,
                    "exponent": b.exponent.to_string(),
                    "label": "upper bound from the torsion-step induction",
                }),
                provenance: Some(json!({ "steps": b.steps })),
                chart: None,
            }
        }
        PowCmd::Kp { p, q, w, s, t } => {
            let r = powerops::kp_bidegrees(powerops::KPInstance {
                p: *p,
                q: *q,
                w: *w,
                s: *s,
                t: *t,
            });
            Outcome::of(json!({
                "source_total": bideg_json(r.source_total),
                "target_sphere": bideg_json(r.target_sphere),
                "map_bidegree": bideg_json(r.map_bidegree),
            }))
        }
    })
}
