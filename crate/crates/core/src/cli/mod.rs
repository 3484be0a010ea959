//! The `torelli` command line.

pub mod files;

use std::ffi::OsString;
use std::fs;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::kw::{kw_contains, kw_from_unstable, kw_validate};
use crate::projgeom::{Arrangement, ProjPoint};
use crate::steiner::{build_steiner, decompose, hilbert_data, verify_steiner};
use crate::torelli::{decide_torelli, steiner_unstable_profile, verify_certificate, Certificate, Source, TorelliReason, Verdict};
use crate::unstable::{extra_points, is_unstable_matrix, is_unstable_sections, scan_arrangement, witness_matrix, ScanResult};

use files::{kw_json, matrix_json, parse_kw, parse_matrix_file, parse_point, scalars, ArrangementFile};

#[derive(Parser, Debug)]
#[command(name = "torelli", version, about = "Unstable hyperplanes and Torelli certificates for hyperplane arrangements")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputMode,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
#[group(multiple = false)]
pub struct OutputMode {
    /// JSON report (default)
    #[arg(long, global = true)]
    pub json: bool,
    /// Short text summary
    #[arg(long, global = true)]
    pub human: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Steiner matrix of an arrangement with its invariant checks
    BuildMatrix { file: String },
    /// Both instability tests at one hyperplane
    Unstable {
        file: String,
        #[arg(long)]
        point: String,
    },
    /// Exhaustive unstable sets over prime fields
    Scan {
        file: String,
        #[arg(long = "prime", required = true)]
        primes: Vec<u64>,
    },
    /// Torelli verdict with certificate
    Torelli {
        file: String,
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// KW certificate at an unstable point
    KwCertify {
        file: String,
        #[arg(long)]
        point: String,
    },
    /// Filtration along a KW certificate
    Decompose {
        file: String,
        #[arg(long)]
        kw: String,
    },
    /// Resolution ranks and Hilbert polynomial
    Hilbert { file: String },
    /// Unstable profile of an arbitrary Steiner matrix
    SteinerScan {
        #[arg(long)]
        matrix: String,
        #[arg(long = "prime", required = true)]
        primes: Vec<u64>,
    },
    /// Re-verify the certificates of an earlier report
    Verify {
        file: String,
        #[arg(long)]
        certificate: String,
    },
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    #[serde(rename = "input-digest")]
    pub input_digest: String,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub warnings: Vec<String>,
}

/// Text written by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.is_hypothesis() { EXIT_HYPOTHESIS } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Inputs {
        Inputs { hasher: Sha256::new() }
    }

    fn read(&mut self, path: &str) -> Res<String> {
        let text = fs::read_to_string(path).map_err(|e| Failure { code: EXIT_INVALID, message: format!("{path}: {e}") })?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn arrangement(&mut self, path: &str) -> Res<(ArrangementFile, Arrangement)> {
        let f = ArrangementFile::parse(&self.read(path)?)?;
        let z = f.to_arrangement()?;
        Ok((f, z))
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

struct Done {
    result: Value,
    certificates: Vec<Value>,
    warnings: Vec<String>,
    summary: Vec<String>,
    code: i32,
}

impl Done {
    fn new(result: Value) -> Done {
        Done { result, certificates: Vec::new(), warnings: Vec::new(), summary: Vec::new(), code: 0 }
    }
}

fn pt(p: &ProjPoint) -> Value {
    json!(p.to_strings())
}

fn scan_json(scan: &ScanResult) -> Value {
    json!({
        "p": scan.p,
        "count": scan.points.len(),
        "points": scan.points.iter().map(|(q, d)| json!({"point": pt(q), "dim": d})).collect::<Vec<_>>(),
    })
}

fn certificate_json(c: &Certificate) -> Value {
    json!({"y": pt(&c.y), "source": c.source.name(), "kw": kw_json(&c.kw)})
}

fn build_matrix(inp: &mut Inputs, file: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let s = build_steiner(&z)?;
    let r = verify_steiner(&s);
    let mut done = Done::new(json!({
        "n": s.n(),
        "a": s.a(),
        "b": s.b(),
        "matrix": matrix_json(&s.matrix),
        "columns": s.columns.iter().map(pt).collect::<Vec<_>>(),
        "dropped": pt(&s.dropped),
        "order": s.order,
        "beta": s.beta.row_vecs().iter().map(|r| scalars(r)).collect::<Vec<_>>(),
        "verify": {
            "ok": r.ok(),
            "divisibility-violations": r.divisibility_violations,
            "row-sum-violations": r.row_sum_violations,
            "relation-violations": r.relation_violations,
            "expected-rank": r.expected_rank,
            "sampled-ranks": r.sampled_ranks,
        },
    }));
    done.warnings = s.warnings.clone();
    done.summary.push(format!("{}x{} Steiner matrix in {} variables; invariants {}", s.a(), s.b(), s.n() + 1, if r.ok() { "hold" } else { "VIOLATED" }));
    Ok(done)
}

fn unstable(inp: &mut Inputs, file: &str, point: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let y = parse_point(z.field(), z.n(), point)?;
    let s = build_steiner(&z)?;
    let a = is_unstable_matrix(&s.matrix, &y)?;
    let b = is_unstable_sections(&z, &y)?;
    let wit_a = a.witness.as_ref().map(|w| json!({"v": scalars(&w.v), "w": scalars(&w.w)}));
    let wit_b = witness_matrix(&b).map(|m| {
        json!({"h": m[0].iter().map(files::form_json).collect::<Vec<_>>(), "g": m[1].iter().map(files::form_json).collect::<Vec<_>>()})
    });
    let mut done = Done::new(json!({
        "point": pt(&y),
        "in-z": z.contains(&y),
        "matrix-test": {"unstable": a.unstable, "kernel-dim": a.dim, "witness": wit_a},
        "section-test": {"unstable": b.unstable, "section-dim": b.dim, "witness": wit_b},
        "agree": a.unstable == b.unstable,
    }));
    done.summary.push(format!("{y}: matrix test {} (dim {}), section test {} (dim {})", a.unstable, a.dim, b.unstable, b.dim));
    Ok(done)
}

fn scan(inp: &mut Inputs, file: &str, primes: &[u64]) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let mut per = Vec::new();
    let mut summary = Vec::new();
    for &p in primes {
        let (zp, s) = scan_arrangement(&z, p)?;
        let extra = extra_points(&s, &zp);
        let missing: Vec<Value> = zp.points().iter().filter(|q| s.dim_of(q).is_none()).map(pt).collect();
        summary.push(format!("p = {p}: {} unstable points, {} outside Z", s.points.len(), extra.len()));
        let mut v = scan_json(&s);
        v["extra"] = Value::Array(extra.iter().map(|(q, _)| pt(q)).collect());
        v["missing"] = Value::Array(missing);
        per.push(v);
    }
    let mut done = Done::new(json!({"n": z.n(), "scans": per}));
    done.summary = summary;
    Ok(done)
}

fn torelli(inp: &mut Inputs, file: &str, primes: &[u64]) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let d = decide_torelli(&z, primes)?;
    let diag = &d.diagnostics;
    let diagnostics = json!({
        "candidates-tested": diag.candidates_tested,
        "primes-scanned": diag.primes_scanned,
        "clean-primes": diag.clean_primes,
        "bad-primes": diag.bad_primes.iter().map(|(p, r)| json!({"p": p, "reason": r})).collect::<Vec<_>>(),
        "lifted-failed": diag.lifted_failed,
    });
    let mut done = match &d.verdict {
        Verdict::Torelli(reason) => {
            let (r, evidence, primes) = match reason {
                TorelliReason::NoQuadric => ("no-quadric", "exact", Vec::new()),
                TorelliReason::ExhaustiveScan(ps) => ("exhaustive-scan", "scan-based", ps.clone()),
            };
            let mut done = Done::new(json!({"verdict": "torelli", "reason": r, "evidence": evidence, "primes": primes, "diagnostics": diagnostics}));
            done.summary.push(match reason {
                TorelliReason::NoQuadric => "Torelli: Z lies on no quadric (exact)".to_string(),
                TorelliReason::ExhaustiveScan(ps) => format!("Torelli: clean scans mod {ps:?} (scan-based evidence, not a proof)"),
            });
            done
        }
        Verdict::NonTorelli(c) => {
            let mut done = Done::new(json!({
                "verdict": "non-torelli",
                "evidence": "exact",
                "y": pt(&c.y),
                "type": c.kw.kw_type().to_string(),
                "dims": c.kw.kw_type().dims,
                "diagnostics": diagnostics,
            }));
            done.summary.push(format!("not Torelli: {} is unstable; KW certificate of type {} from {}", c.y, c.kw.kw_type(), c.source.name()));
            done.warnings.extend(c.kw.warnings.iter().cloned());
            done.certificates.push(certificate_json(c));
            done
        }
        Verdict::Unknown(_) => {
            let mut done = Done::new(json!({"verdict": "unknown", "diagnostics": diagnostics}));
            done.summary.push(format!("unknown after {} candidates and scans mod {:?}", diag.candidates_tested, diag.primes_scanned));
            done.code = EXIT_UNKNOWN;
            done
        }
    };
    for (p, r) in &diag.bad_primes {
        done.warnings.push(format!("prime {p} skipped: {r}"));
    }
    Ok(done)
}

fn kw_certify(inp: &mut Inputs, file: &str, point: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let y = parse_point(z.field(), z.n(), point)?;
    if z.contains(&y) {
        return Err(Error::Hypothesis(format!("{y} belongs to Z; certificates are for points outside Z")).into());
    }
    let kw = kw_from_unstable(&z, &y)?;
    let t = kw.kw_type();
    let mut done = Done::new(json!({
        "y": pt(&y),
        "type": t.to_string(),
        "dims": t.dims,
        "z-contained": z.points().iter().all(|p| kw_contains(&kw, p)),
        "valid": kw_validate(&kw).ok(),
    }));
    done.summary.push(format!("{y}: KW variety of type {} {}", t, t.with_dims()));
    done.warnings = kw.warnings.clone();
    done.certificates.push(certificate_json(&Certificate { y: y.clone(), kw: kw.clone(), source: Source::Supplied }));
    Ok(done)
}

fn decompose_cmd(inp: &mut Inputs, file: &str, kw_file: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let kw = parse_kw(&inp.read(kw_file)?)?;
    let dec = decompose(&z, &kw)?;
    let pieces: Vec<Value> = dec
        .pieces
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "kind": format!("{:?}", p.kind).to_lowercase(),
                "length": p.length,
                "points": p.points.iter().map(pt).collect::<Vec<_>>(),
                "rank": p.data.rank,
                "c1": p.data.c1,
                "slope": p.data.slope,
                "summand": p.summand,
            })
        })
        .collect();
    let cmp: Vec<Value> = dec.slope_comparison().iter().map(|(l, o)| json!({"label": l, "vs-total": format!("{o:?}").to_lowercase()})).collect();
    let mut done = Done::new(json!({
        "total": dec.total,
        "pieces": pieces,
        "additive": dec.additive(),
        "slopes-equal": dec.slopes_equal(),
        "slope-comparison": cmp,
    }));
    for p in &dec.pieces {
        done.summary.push(format!("{}: rank {}, c1 {}{}", p.label, p.data.rank, p.data.c1, if p.summand { " (summand)" } else { "" }));
    }
    done.warnings = dec.warnings.clone();
    Ok(done)
}

fn hilbert(inp: &mut Inputs, file: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let r = hilbert_data(z.len(), z.n())?;
    let mut done = Done::new(serde_json::to_value(&r).expect("serializable"));
    done.summary.push(format!("rank {}, c1 {}, slope {}", r.rank, r.c1, r.slope));
    Ok(done)
}

fn steiner_scan(inp: &mut Inputs, matrix: &str, primes: &[u64]) -> Res<Done> {
    let m = parse_matrix_file(&inp.read(matrix)?)?;
    let mut per = Vec::new();
    let mut summary = Vec::new();
    for &p in primes {
        let s = steiner_unstable_profile(&m, p)?;
        summary.push(format!("p = {p}: {} unstable points", s.points.len()));
        per.push(scan_json(&s));
    }
    let mut done = Done::new(json!({"n": m.n(), "a": m.rows(), "b": m.cols(), "scans": per}));
    done.summary = summary;
    Ok(done)
}

fn verify(inp: &mut Inputs, file: &str, cert: &str) -> Res<Done> {
    let (_, z) = inp.arrangement(file)?;
    let text = inp.read(cert)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let certs = v.get("certificates").and_then(Value::as_array).cloned().unwrap_or_default();
    if certs.is_empty() {
        return Err(Error::InvalidInput("report carries no certificates".into()).into());
    }
    let mut results = Vec::new();
    let mut all = true;
    for c in &certs {
        let y = c.get("y").ok_or_else(|| Error::Parse("certificate without \"y\"".into()))?;
        let ys: Vec<String> = serde_json::from_value(y.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let refs: Vec<&str> = ys.iter().map(String::as_str).collect();
        let y = ProjPoint::parse(z.field(), &refs)?;
        let kw_text = serde_json::to_string(c.get("kw").unwrap_or(c)).expect("serializable");
        let kw = parse_kw(&kw_text)?;
        let source = c.get("source").and_then(Value::as_str).and_then(Source::from_name).unwrap_or(Source::Supplied);
        let check = verify_certificate(&z, &Certificate { y: y.clone(), kw, source });
        all &= check.is_ok();
        results.push(json!({"y": pt(&y), "ok": check.is_ok(), "reason": check.err()}));
    }
    let mut done = Done::new(json!({"all-verified": all, "checks": results}));
    done.summary.push(format!("{} certificate(s): {}", certs.len(), if all { "verified" } else { "REJECTED" }));
    if !all {
        done.code = EXIT_HYPOTHESIS;
    }
    Ok(done)
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::BuildMatrix { .. } => "build-matrix",
        Command::Unstable { .. } => "unstable",
        Command::Scan { .. } => "scan",
        Command::Torelli { .. } => "torelli",
        Command::KwCertify { .. } => "kw-certify",
        Command::Decompose { .. } => "decompose",
        Command::Hilbert { .. } => "hilbert",
        Command::SteinerScan { .. } => "steiner-scan",
        Command::Verify { .. } => "verify",
    }
}

fn render_human(report: &Report, summary: &[String]) -> String {
    let mut out = format!("{} ({})\n", report.command, &report.input_digest[..12]);
    for l in summary {
        out.push_str(l);
        out.push('\n');
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

pub fn execute(cli: &Cli) -> Output {
    let mut inp = Inputs::new();
    let r = match &cli.command {
        Command::BuildMatrix { file } => build_matrix(&mut inp, file),
        Command::Unstable { file, point } => unstable(&mut inp, file, point),
        Command::Scan { file, primes } => scan(&mut inp, file, primes),
        Command::Torelli { file, primes } => torelli(&mut inp, file, primes),
        Command::KwCertify { file, point } => kw_certify(&mut inp, file, point),
        Command::Decompose { file, kw } => decompose_cmd(&mut inp, file, kw),
        Command::Hilbert { file } => hilbert(&mut inp, file),
        Command::SteinerScan { matrix, primes } => steiner_scan(&mut inp, matrix, primes),
        Command::Verify { file, certificate } => verify(&mut inp, file, certificate),
    };
    match r {
        Ok(done) => {
            let report = Report {
                command: name(&cli.command).into(),
                input_digest: inp.digest(),
                result: done.result,
                certificates: done.certificates,
                warnings: done.warnings,
            };
            let stdout = if cli.output.human {
                render_human(&report, &done.summary)
            } else {
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            };
            Output { stdout, stderr: String::new(), code: done.code }
        }
        Err(f) => Output { stdout: String::new(), stderr: format!("error: {}\n", f.message), code: f.code },
    }
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
