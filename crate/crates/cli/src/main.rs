//! Command-line front end for the finite-field toolkit: field and
//! polynomial queries, minimal-value-set enumeration and certification,
//! Frobenius-nonclassicality tests, and the exhaustive verification
//! harnesses.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error. Reports
//! go to stdout or `--out` as JSON (default), CSV, or a table. With
//! `--workers 1` output is byte-for-byte deterministic; any worker count
//! yields the same report content. The env var `MVSP_MAX_Q` lowers the
//! field-size guards (it never raises them).

mod report;

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fqtk::{
    family_membership, fnc_bivariate_test, mills_certificate, mills_structural_check,
    schmidt_irreducibility, superelliptic_fnc_test, verify_mills_certificate, verify_theorem_a,
    verify_theorem_b, verify_type_i, AffineType, CurveRecord, Field, TheoremBReport, UniPoly,
    MAX_HARNESS_Q, MAX_Q, MAX_TYPE_I_Q,
};
use report::{Column, Format, Report, LIST_SEP};

#[derive(Parser)]
#[command(
    name = "fqtk",
    version,
    about = "Value sets and Frobenius-nonclassical curves over GF(p^n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Args)]
struct FieldArg {
    /// Field spec "p^n", or "p^n:c0,c1,...,1" with an explicit modulus.
    #[arg(long, value_name = "SPEC")]
    field: String,
}

#[derive(Subcommand)]
enum Command {
    /// Field facts.
    Field {
        #[command(subcommand)]
        sub: FieldCmd,
    },
    /// Polynomial value-set queries.
    Poly {
        #[command(subcommand)]
        sub: PolyCmd,
    },
    /// Minimal-value-set enumeration and certification.
    Mvsp {
        #[command(subcommand)]
        sub: MvspCmd,
    },
    /// Frobenius-nonclassicality tests for separated curves.
    Curve {
        #[command(subcommand)]
        sub: CurveCmd,
    },
    /// Exhaustive verification harnesses.
    Verify {
        #[command(subcommand)]
        sub: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Characteristic, degree, modulus, generator, subfields.
    Info(FieldArg),
}

#[derive(Subcommand)]
enum PolyCmd {
    /// The value set of a polynomial as a map on GF(q).
    Valueset {
        #[command(flatten)]
        field: FieldArg,
        /// Polynomial in x, e.g. "x^3+g*x+1".
        poly: String,
    },
    /// Minimal-value-set verdict with the fiber decomposition.
    Mvsp {
        #[command(flatten)]
        field: FieldArg,
        poly: String,
    },
}

#[derive(Subcommand)]
enum MvspCmd {
    /// All minimal-value-set binomials x^a + beta x^b up to a degree.
    Enumerate {
        #[command(flatten)]
        field: FieldArg,
        /// Degree window (default q - 1).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Search for a Mills certificate and check it structurally.
    Certify {
        #[command(flatten)]
        field: FieldArg,
        poly: String,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Both Frobenius-nonclassicality tests for "g(y) = f(x)".
    Fnc {
        #[command(flatten)]
        field: FieldArg,
        /// Curve equation, e.g. "y^3 = x^2+x+1".
        curve: String,
    },
    /// Affine type, family membership, and irreducibility.
    Classify {
        #[command(flatten)]
        field: FieldArg,
        curve: String,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Brute-force minimal-value-set binomials vs the six families, for
    /// every prime power q up to the bound.
    TheoremA {
        #[arg(long, value_name = "Q")]
        max_q: u64,
        /// Degree window per field (default q - 1).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Exhaustive quadrinomial classification for separated curve types.
    TheoremB {
        #[arg(long, value_name = "Q")]
        max_q: u64,
        /// Comma-separated affine types to scan.
        #[arg(long, default_value = "ii,iii")]
        types: String,
    },
    /// One-value binomial pairs g(y) = alpha f(x) within the degree window.
    TypeI {
        #[arg(long, value_name = "Q", default_value_t = 9)]
        max_q: u64,
        /// Cap on the low exponents b, d (default 2(q - 1)).
        #[arg(long, default_value_t = 0)]
        cap: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let format = cli.format.into();
    let workers = cli.workers.map(|w| w as usize);
    let outcome = match run(cli.command, workers) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    };
    let rendered = outcome.report.emit(format);
    if let Some(path) = cli.out {
        if let Err(e) = std::fs::write(&path, rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            std::process::exit(2);
        }
    } else {
        print!("{rendered}");
    }
    std::process::exit(if outcome.mismatch { 1 } else { 0 });
}

struct Outcome {
    report: Report,
    /// Some verification match flag is false.
    mismatch: bool,
}

impl Outcome {
    fn ok(report: Report) -> Outcome {
        Outcome {
            report,
            mismatch: false,
        }
    }
}

fn run(command: Command, workers: Option<usize>) -> Result<Outcome> {
    match command {
        Command::Field {
            sub: FieldCmd::Info(f),
        } => field_info(&f.field),
        Command::Poly { sub } => match sub {
            PolyCmd::Valueset { field, poly } => poly_valueset(&field.field, &poly),
            PolyCmd::Mvsp { field, poly } => poly_mvsp(&field.field, &poly),
        },
        Command::Mvsp { sub } => match sub {
            MvspCmd::Enumerate { field, max_degree } => {
                mvsp_enumerate(&field.field, max_degree, workers)
            }
            MvspCmd::Certify { field, poly } => mvsp_certify(&field.field, &poly),
        },
        Command::Curve { sub } => match sub {
            CurveCmd::Fnc { field, curve } => curve_fnc(&field.field, &curve),
            CurveCmd::Classify { field, curve } => curve_classify(&field.field, &curve),
        },
        Command::Verify { sub } => match sub {
            VerifyCmd::TheoremA { max_q, max_degree } => run_theorem_a(max_q, max_degree, workers),
            VerifyCmd::TheoremB { max_q, types } => run_theorem_b(max_q, &types, workers),
            VerifyCmd::TypeI { max_q, cap } => run_type_i(max_q, cap, workers),
        },
    }
}

/// The env var MVSP_MAX_Q lowers a guard; larger or unparseable values are
/// ignored.
fn guarded(library_guard: u64) -> u64 {
    match std::env::var("MVSP_MAX_Q")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        Some(env) => library_guard.min(env),
        None => library_guard,
    }
}

fn load_field(spec: &str) -> Result<Arc<Field>> {
    let field = Field::parse_spec(spec).with_context(|| format!("field spec '{spec}'"))?;
    let guard = guarded(MAX_Q);
    if field.q() > guard {
        bail!("q = {} exceeds the size guard {guard}", field.q());
    }
    Ok(Arc::new(field))
}

fn parse_poly(field: &Arc<Field>, text: &str) -> Result<UniPoly> {
    UniPoly::parse(field, text).map_err(|e| anyhow!("polynomial '{text}': {e}"))
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut n = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                n += 1;
            }
            return (m == 1).then_some((p, n));
        }
        p += 1;
    }
    (q > 1).then_some((q, 1))
}

fn shared_fields_through(max_q: u64) -> Result<Vec<Arc<Field>>> {
    (2..=max_q)
        .filter_map(prime_power)
        .map(|(p, n)| Field::shared(p, n).map_err(Into::into))
        .collect()
}

// ---------------------------------------------------------------------------
// field info
// ---------------------------------------------------------------------------

fn field_info(spec: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let subfields: Vec<String> = (1..=field.n())
        .filter(|m| field.n() % m == 0)
        .map(|m| format!("{}^{m}", field.p()))
        .collect();
    let facts: Vec<(&str, Value)> = vec![
        ("spec", json!(field.spec_string())),
        ("p", json!(field.p())),
        ("n", json!(field.n())),
        ("q", json!(field.q())),
        ("modulus", json!(field.modulus_string())),
        ("generator", json!(field.render(field.xi()))),
        ("generator_vector", json!(field.render_vector(field.xi()))),
        ("generator_order", json!(field.q() - 1)),
        ("subfields", json!(subfields)),
    ];
    let json = Value::Object(
        facts
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
    );
    let rows = facts
        .iter()
        .map(|(k, v)| vec![k.to_string(), scalar(v)])
        .collect();
    Ok(Outcome::ok(Report {
        json,
        columns: vec![Column::plain("fact"), Column::list("value")],
        rows,
    }))
}

/// Flat cell text for a JSON value.
fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(LIST_SEP),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// poly valueset / poly mvsp
// ---------------------------------------------------------------------------

fn minimal_bound(q: u64, degree: usize) -> usize {
    if degree == 0 {
        1
    } else {
        ((q - 1) / degree as u64 + 1) as usize
    }
}

fn poly_valueset(spec: &str, text: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let poly = parse_poly(&field, text)?;
    let values: Vec<String> = poly.values().iter().map(|&v| field.render(v)).collect();
    let degree = poly.degree().unwrap_or(0);
    let bound = minimal_bound(field.q(), degree);
    let json = json!({
        "field": field.spec_string(),
        "poly": poly.render(),
        "degree": degree,
        "num_values": values.len(),
        "minimal_bound": bound,
        "minimal": values.len() == bound,
        "values": values,
    });
    let rows = vec![vec![
        poly.render(),
        degree.to_string(),
        values.len().to_string(),
        bound.to_string(),
        (values.len() == bound).to_string(),
        values.join(LIST_SEP),
    ]];
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("poly"),
            Column::plain("degree"),
            Column::plain("num_values"),
            Column::plain("minimal_bound"),
            Column::plain("minimal"),
            Column::list("values"),
        ],
        rows,
    }))
}

fn poly_mvsp(spec: &str, text: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let poly = parse_poly(&field, text)?;
    let vs = poly.value_set_report()?;
    let degree = poly.degree().unwrap_or(0);
    let bound = minimal_bound(field.q(), degree);
    let minimal = vs.fibers.len() == bound;
    let fibers: Vec<Value> = vs
        .fibers
        .iter()
        .map(|f| {
            json!({
                "value": field.render(f.value),
                "span": f.span(),
                "min_multiplicity": f.roots.iter().map(|&(_, m)| m).min().unwrap_or(0),
            })
        })
        .collect();
    let json = json!({
        "field": field.spec_string(),
        "poly": poly.render(),
        "degree": degree,
        "num_values": vs.fibers.len(),
        "minimal_bound": bound,
        "minimal": minimal,
        "gamma0": field.render(vs.gamma0()),
        "nu": vs.nu,
        "fibers": fibers,
    });
    let rows = vs
        .fibers
        .iter()
        .map(|f| {
            vec![
                field.render(f.value),
                f.span().to_string(),
                f.roots
                    .iter()
                    .map(|&(_, m)| m)
                    .min()
                    .unwrap_or(0)
                    .to_string(),
            ]
        })
        .collect();
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("value"),
            Column::plain("span"),
            Column::plain("min_multiplicity"),
        ],
        rows,
    }))
}

// ---------------------------------------------------------------------------
// mvsp enumerate / mvsp certify
// ---------------------------------------------------------------------------

fn mvsp_enumerate(
    spec: &str,
    max_degree: Option<usize>,
    workers: Option<usize>,
) -> Result<Outcome> {
    let field = load_field(spec)?;
    let max_degree = max_degree.unwrap_or((field.q() - 1).max(1) as usize);
    let entries = fqtk::enumerate_mvsp_binomials(&field, max_degree, workers);
    let mut rows = Vec::with_capacity(entries.len());
    let mut items = Vec::with_capacity(entries.len());
    for e in &entries {
        let poly = e.poly(&field);
        let family = e.family.map(|f| f.tag().to_string()).unwrap_or_default();
        let overlaps: Vec<String> = e.overlaps.iter().map(|f| f.tag().to_string()).collect();
        items.push(json!({
            "poly": poly.render(),
            "a": e.a,
            "b": e.b,
            "beta": field.render(e.beta),
            "num_values": e.num_values,
            "family": e.family.map(|f| f.tag()),
            "overlaps": overlaps,
        }));
        rows.push(vec![
            poly.render(),
            e.a.to_string(),
            e.b.to_string(),
            field.render(e.beta),
            e.num_values.to_string(),
            family,
            overlaps.join(LIST_SEP),
        ]);
    }
    let json = json!({
        "field": field.spec_string(),
        "max_degree": max_degree,
        "count": entries.len(),
        "entries": items,
    });
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("poly"),
            Column::plain("a"),
            Column::plain("b"),
            Column::plain("beta"),
            Column::plain("num_values"),
            Column::plain("family"),
            Column::list("overlaps"),
        ],
        rows,
    }))
}

fn mvsp_certify(spec: &str, text: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let poly = parse_poly(&field, text)?;
    let cert = mills_certificate(&poly)?;
    let (cert_json, verified, structure) = match &cert {
        None => (Value::Null, Value::Null, Value::Null),
        Some(c) => {
            let verified = verify_mills_certificate(&poly, c)?;
            let structure = if c.m == 0 {
                Value::Null
            } else {
                let st = mills_structural_check(&poly, c)?;
                json!({
                    "item_b": st.item_b,
                    "item_c": st.item_c,
                    "item_d": st.item_d,
                    "item_e": st.item_e,
                    "all_hold": st.all_hold(),
                })
            };
            let omega: Vec<String> = c.omega.iter().map(|&w| field.render(w)).collect();
            (
                json!({
                    "gamma0": field.render(c.gamma0),
                    "nu": c.nu,
                    "k": c.k,
                    "m": c.m,
                    "omega": omega,
                    "exponents": c.exponents(field.p()),
                }),
                json!(verified),
                structure,
            )
        }
    };
    let json = json!({
        "field": field.spec_string(),
        "poly": poly.render(),
        "certificate": cert_json,
        "identity_verified": verified,
        "structure": structure,
    });
    let row = match &cert {
        None => vec![poly.render(), "none".into(), String::new(), String::new()],
        Some(c) => vec![
            poly.render(),
            format!("nu={} k={} m={}", c.nu, c.k, c.m),
            json["identity_verified"].to_string(),
            if json["structure"].is_null() {
                String::new()
            } else {
                json["structure"]["all_hold"].to_string()
            },
        ],
    };
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("poly"),
            Column::plain("certificate"),
            Column::plain("identity"),
            Column::plain("structure"),
        ],
        rows: vec![row],
    }))
}

// ---------------------------------------------------------------------------
// curve fnc / curve classify
// ---------------------------------------------------------------------------

fn parse_curve(field: &Arc<Field>, text: &str) -> Result<CurveRecord> {
    CurveRecord::parse(field, text).map_err(|e| anyhow!("curve '{text}': {e}"))
}

/// Both tests plus irreducibility; the univariate pieces apply only to the
/// superelliptic types ii/iii.
fn curve_verdicts(curve: &CurveRecord) -> Result<(bool, Value, Value)> {
    let bivariate = fnc_bivariate_test(&curve.bivariate())?;
    let (supertest, schmidt) = match curve.superelliptic() {
        Ok(c) => (
            json!(superelliptic_fnc_test(&c)?),
            json!(schmidt_irreducibility(&c)),
        ),
        Err(_) => (Value::Null, Value::Null),
    };
    Ok((bivariate, supertest, schmidt))
}

fn curve_fnc(spec: &str, text: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let curve = parse_curve(&field, text)?;
    let (bivariate, supertest, schmidt) = curve_verdicts(&curve)?;
    let json = json!({
        "field": field.spec_string(),
        "curve": curve.render(),
        "type": curve.quad_type().tag(),
        "bivariate": bivariate,
        "superelliptic": supertest,
        "schmidt_irreducible": schmidt,
    });
    let rows = vec![vec![
        curve.render(),
        curve.quad_type().tag().to_string(),
        bivariate.to_string(),
        scalar(&supertest),
        scalar(&schmidt),
    ]];
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("curve"),
            Column::plain("type"),
            Column::plain("bivariate"),
            Column::plain("superelliptic"),
            Column::plain("schmidt_irreducible"),
        ],
        rows,
    }))
}

fn curve_classify(spec: &str, text: &str) -> Result<Outcome> {
    let field = load_field(spec)?;
    let curve = parse_curve(&field, text)?;
    let (bivariate, supertest, schmidt) = curve_verdicts(&curve)?;
    let family = family_membership(&curve)?;
    let family_str = family.map(|tag| tag.describe(&field));
    let json = json!({
        "field": field.spec_string(),
        "curve": curve.render(),
        "type": curve.quad_type().tag(),
        "family": family_str,
        "bivariate": bivariate,
        "superelliptic": supertest,
        "schmidt_irreducible": schmidt,
    });
    let rows = vec![vec![
        curve.render(),
        curve.quad_type().tag().to_string(),
        family_str.clone().unwrap_or_default(),
        bivariate.to_string(),
        scalar(&supertest),
        scalar(&schmidt),
    ]];
    Ok(Outcome::ok(Report {
        json,
        columns: vec![
            Column::plain("curve"),
            Column::plain("type"),
            Column::plain("family"),
            Column::plain("bivariate"),
            Column::plain("superelliptic"),
            Column::plain("schmidt_irreducible"),
        ],
        rows,
    }))
}

// ---------------------------------------------------------------------------
// verify theorem-a
// ---------------------------------------------------------------------------

fn run_theorem_a(max_q: u64, max_degree: Option<usize>, workers: Option<usize>) -> Result<Outcome> {
    let guard = guarded(MAX_Q);
    if max_q > guard {
        bail!("--max-q {max_q} exceeds the size guard {guard}");
    }
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut all_match = true;
    for field in shared_fields_through(max_q)? {
        let q = field.q();
        let window = max_degree.unwrap_or((q - 1).max(1) as usize);
        let r = verify_theorem_a(&field, window, workers);
        all_match &= r.matched;
        let families: Vec<String> = r
            .family_counts
            .iter()
            .map(|(fam, count)| format!("{}:{count}", fam.tag()))
            .collect();
        let renders =
            |polys: &[UniPoly]| -> Vec<String> { polys.iter().map(|p| p.render()).collect() };
        reports.push(json!({
            "q": q,
            "max_degree": r.max_degree,
            "universe": r.universe,
            "found": r.found.len(),
            "expected": r.expected_count,
            "families": r.family_counts.iter()
                .map(|(fam, count)| (fam.tag().to_string(), json!(count)))
                .collect::<serde_json::Map<_, _>>(),
            "extras": renders(&r.extras),
            "missing": renders(&r.missing),
            "unclassified": renders(&r.unclassified),
            "value_mismatches": renders(&r.value_mismatches),
            "match": r.matched,
        }));
        rows.push(vec![
            q.to_string(),
            r.universe.to_string(),
            r.found.len().to_string(),
            r.expected_count.to_string(),
            families.join(LIST_SEP),
            r.extras.len().to_string(),
            r.missing.len().to_string(),
            r.matched.to_string(),
        ]);
    }
    let json = json!({
        "max_q": max_q,
        "match": all_match,
        "reports": reports,
    });
    Ok(Outcome {
        report: Report {
            json,
            columns: vec![
                Column::plain("q"),
                Column::plain("universe"),
                Column::plain("found"),
                Column::plain("expected"),
                Column::list("families"),
                Column::plain("extras"),
                Column::plain("missing"),
                Column::plain("match"),
            ],
            rows,
        },
        mismatch: !all_match,
    })
}

// ---------------------------------------------------------------------------
// verify theorem-b
// ---------------------------------------------------------------------------

fn parse_types(text: &str) -> Result<Vec<AffineType>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let tag = part.trim();
        let ty = AffineType::parse(tag).ok_or_else(|| anyhow!("unknown affine type '{tag}'"))?;
        match ty {
            AffineType::II | AffineType::III => out.push(ty),
            AffineType::I => bail!("type i runs under 'verify type-i'"),
            other => bail!("type {} has no exhaustive harness", other.tag()),
        }
    }
    if out.is_empty() {
        bail!("--types lists no affine type");
    }
    Ok(out)
}

fn theorem_b_json(r: &TheoremBReport, field: &Arc<Field>) -> Value {
    let curves = |list: &[fqtk::CanonicalCurve]| -> Vec<String> {
        list.iter().map(|c| c.render(field)).collect()
    };
    json!({
        "q": r.q,
        "type": r.quad_type.tag(),
        "universe_size": r.universe_size,
        "screened_out": r.screened_out,
        "identity_tested": r.identity_tested,
        "fnc_count": r.fnc_count,
        "fnc_orbit_count": r.fnc_orbit_count,
        "irreducible_fnc": curves(&r.irreducible_fnc),
        "reducible_fnc": curves(&r.reducible_fnc),
        "families_expected": r.families_expected.iter().map(|(tag, c)| json!({
            "family": tag.describe(field),
            "curve": c.render(field),
        })).collect::<Vec<_>>(),
        "reducible_expected": curves(&r.reducible_expected),
        "extras": curves(&r.extras),
        "missing": curves(&r.missing),
        "match": r.matched,
        "reducible_match": r.reducible_matched,
        "notes": r.notes,
    })
}

fn run_theorem_b(max_q: u64, types: &str, workers: Option<usize>) -> Result<Outcome> {
    let types = parse_types(types)?;
    let guard = guarded(MAX_HARNESS_Q);
    if max_q > guard {
        bail!("--max-q {max_q} exceeds the harness bound {guard}");
    }
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut all_match = true;
    for field in shared_fields_through(max_q)? {
        for &ty in &types {
            let r = verify_theorem_b(&field, ty, workers)?;
            all_match &= r.matched && r.reducible_matched;
            reports.push(theorem_b_json(&r, &field));

            let summary_match = r.matched && r.reducible_matched;
            rows.push(vec![
                r.q.to_string(),
                ty.tag().into(),
                "summary".into(),
                String::new(),
                String::new(),
                r.universe_size.to_string(),
                r.screened_out.to_string(),
                r.fnc_count.to_string(),
                summary_match.to_string(),
            ]);
            let mut curve_row = |section: &str, family: String, curve: String| {
                rows.push(vec![
                    r.q.to_string(),
                    ty.tag().into(),
                    section.into(),
                    family,
                    curve,
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            };
            for (tag, c) in &r.families_expected {
                curve_row("families-expected", tag.describe(&field), c.render(&field));
            }
            for c in &r.irreducible_fnc {
                curve_row("irreducible-fnc", String::new(), c.render(&field));
            }
            for c in &r.reducible_fnc {
                curve_row("reducible-fnc", String::new(), c.render(&field));
            }
            for c in &r.reducible_expected {
                curve_row("reducible-expected", String::new(), c.render(&field));
            }
            for c in &r.extras {
                curve_row("extras", String::new(), c.render(&field));
            }
            for c in &r.missing {
                curve_row("missing", String::new(), c.render(&field));
            }
        }
    }
    let json = json!({
        "max_q": max_q,
        "types": types.iter().map(|t| t.tag()).collect::<Vec<_>>(),
        "match": all_match,
        "reports": reports,
    });
    Ok(Outcome {
        report: Report {
            json,
            columns: vec![
                Column::plain("q"),
                Column::plain("type"),
                Column::plain("section"),
                Column::plain("family"),
                Column::plain("curve"),
                Column::plain("universe"),
                Column::plain("screened_out"),
                Column::plain("fnc"),
                Column::plain("match"),
            ],
            rows,
        },
        mismatch: !all_match,
    })
}

// ---------------------------------------------------------------------------
// verify type-i
// ---------------------------------------------------------------------------

fn run_type_i(max_q: u64, cap: u64, workers: Option<usize>) -> Result<Outcome> {
    let guard = guarded(MAX_TYPE_I_Q);
    if max_q > guard {
        bail!("--max-q {max_q} exceeds the harness bound {guard}");
    }
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut all_match = true;
    for field in shared_fields_through(max_q)? {
        let r = verify_type_i(&field, cap, workers)?;
        all_match &= r.matched;
        let singles: Vec<Value> = r
            .singleton_found
            .iter()
            .map(|k| {
                json!({
                    "b": k.b, "jb": k.jb, "d": k.d, "jd": k.jd,
                    "alpha_log": k.alpha_log,
                })
            })
            .collect();
        reports.push(json!({
            "q": r.q,
            "cap": r.cap,
            "universe_size": r.universe_size,
            "fnc_count": r.fnc_count,
            "one_value_pairs": singles,
            "one_value_extras": r.singleton_extras.len(),
            "one_value_missing": r.singleton_missing.len(),
            "coprime_degree_certified": r.coprime_degree_certified,
            "reducible_hits": r.multi_value_hits,
            "asymmetric_hits": r.asymmetric_hits,
            "match": r.matched,
        }));
        rows.push(vec![
            r.q.to_string(),
            r.cap.to_string(),
            r.universe_size.to_string(),
            r.fnc_count.to_string(),
            r.singleton_found.len().to_string(),
            r.multi_value_hits.len().to_string(),
            r.asymmetric_hits.len().to_string(),
            r.matched.to_string(),
        ]);
    }
    let json = json!({
        "max_q": max_q,
        "match": all_match,
        "reports": reports,
    });
    Ok(Outcome {
        report: Report {
            json,
            columns: vec![
                Column::plain("q"),
                Column::plain("cap"),
                Column::plain("universe"),
                Column::plain("fnc"),
                Column::plain("one_value_pairs"),
                Column::plain("reducible_hits"),
                Column::plain("asymmetric_hits"),
                Column::plain("match"),
            ],
            rows,
        },
        mismatch: !all_match,
    })
}
