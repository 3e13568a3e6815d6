//! Command-line front end: `eval`, `scan`, `certify` and `report`.
//!
//! Exit codes: 0 when everything checked passes, 1 on a violation or an
//! unfinished certification, 2 on usage and domain errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::inequalities::{
    slope_sign_changes, CertStatus, Certificate, CertifyOptions, ClaimId, ClaimShape, Fault,
    PointRecord, ScanGrid, ScanReport, Spacing, Verifier, DEFAULT_TOLERANCE,
};
use crate::interval::Interval;
use crate::specfun::PolyOrder;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Points in the default scan grids.
pub const DEFAULT_POINTS: usize = 10_000;
/// `(x, y)` pairs in the default convexity scans.
pub const DEFAULT_CONVEXITY_PAIRS: usize = 200;
pub const DEFAULT_EXCLUSION: f64 = 1e-3;
pub const DEFAULT_MAX_DEPTH: u32 = 60;

#[derive(Parser, Debug)]
#[command(
    name = "psi-bounds",
    version,
    about = "Polygamma evaluation and inequality verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Deliberately corrupt an evaluator (verification smoke test).
    #[arg(long, global = true, hide = true, value_enum)]
    inject_fault: Option<FaultArg>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function at z > 0.
    Eval {
        #[arg(value_enum)]
        function: Function,
        #[arg(allow_negative_numbers = true)]
        z: f64,
    },
    /// Evaluate a claim on a grid.
    Scan(ScanArgs),
    /// Prove a claim on a box by interval bisection.
    Certify(CertifyArgs),
    /// Run the default scan and certification battery.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Claim identifier, e.g. TRIGAMMA_HM.
    claim: String,
    /// Lower grid endpoint; defaults depend on the claim.
    #[arg(long, allow_negative_numbers = true)]
    zmin: Option<f64>,
    /// Upper grid endpoint.
    #[arg(long, allow_negative_numbers = true)]
    zmax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<SpacingArg>,
    /// Relative slack allowed before a point counts as a violation.
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Claim identifier, e.g. PHI_NONNEG.
    claim: String,
    /// Lower end of the box.
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Upper end of the box.
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    /// Half-width of the window around z = 1 left out for claims with equality there.
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_EXCLUSION)]
    exclusion: f64,
    /// Maximum bisection depth.
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Run every claim.
    #[arg(long)]
    all: bool,
    /// Claims to run when `--all` is absent.
    claims: Vec<String>,
    #[arg(long, value_enum, default_value_t = TableFormat::Json)]
    format: TableFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Function {
    Gamma,
    Digamma,
    Trigamma,
    Psi2,
    Psi3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SpacingArg {
    Log,
    Linear,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FaultArg {
    Psi2Sign,
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult = std::result::Result<u8, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return EXIT_PASS;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let verifier = match cli.inject_fault {
        Some(FaultArg::Psi2Sign) => Verifier::with_fault(Fault::FlipPsi2Sign),
        None => Verifier::default(),
    };
    let result = match cli.command {
        Command::Eval { function, z } => cmd_eval(&verifier, function, z, out),
        Command::Scan(a) => cmd_scan(&verifier, &a, out),
        Command::Certify(a) => cmd_certify(&verifier, &a, out),
        Command::Report(a) => cmd_report(&verifier, &a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_PASS,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_claim(name: &str) -> Result<ClaimId> {
    name.parse::<ClaimId>().map_err(|_| {
        let names: Vec<&str> = ClaimId::ALL.iter().map(|c| c.name()).collect();
        Error::Precondition(format!(
            "unknown claim {name:?}; expected one of {}",
            names.join(", ")
        ))
    })
}

fn cmd_eval(verifier: &Verifier, function: Function, z: f64, out: &mut dyn Write) -> CliResult {
    let e = &verifier.eval;
    let v = match function {
        Function::Gamma => e.gamma(z)?,
        Function::Digamma => e.digamma(z)?,
        Function::Trigamma => e.trigamma(z)?,
        Function::Psi2 => verifier.psi2(z)?,
        Function::Psi3 => e.polygamma(PolyOrder::PENTAGAMMA, z)?,
    };
    writeln!(out, "{}", num(v))?;
    Ok(EXIT_PASS)
}

/// Grid used when a scan does not override it.
pub fn default_grid(claim: ClaimId) -> ScanGrid {
    let (lo, hi, count, spacing) = match claim {
        ClaimId::GammaHm
        | ClaimId::GammaSum
        | ClaimId::GammaProd
        | ClaimId::DigammaHm
        | ClaimId::DigammaHmRefined
        | ClaimId::ZPsi2Increasing
        | ClaimId::GgSlopeIncreasing
        | ClaimId::FDecreasing => (0.01, 100.0, DEFAULT_POINTS, Spacing::Log),
        ClaimId::GgGap | ClaimId::GaGap => (1e-4, 1e4, DEFAULT_CONVEXITY_PAIRS, Spacing::Log),
        ClaimId::KernelBBounds | ClaimId::KernelBDecreasing => (
            50.0 / DEFAULT_POINTS as f64,
            50.0,
            DEFAULT_POINTS,
            Spacing::Linear,
        ),
        ClaimId::KUnimodal => (0.1, 10.0, DEFAULT_POINTS, Spacing::Linear),
        _ => (1e-4, 1e4, DEFAULT_POINTS, Spacing::Log),
    };
    ScanGrid {
        z_min: lo,
        z_max: hi,
        count,
        spacing,
    }
}

/// Box used when a certification does not override it.
pub fn default_box(claim: ClaimId) -> (f64, f64) {
    match claim {
        ClaimId::KernelBBounds => (1e-3, 50.0),
        _ => (0.01, 100.0),
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    z: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    partner: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    lhs: f64,
    rhs: f64,
    margin: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<&'a str>,
}

impl<'a> From<&'a PointRecord> for RecordOut<'a> {
    fn from(p: &'a PointRecord) -> Self {
        RecordOut {
            z: p.z,
            partner: p.partner,
            k: p.k,
            lhs: p.lhs,
            rhs: p.rhs,
            margin: p.margin,
            status: p.status.label(),
            message: match &p.status {
                crate::inequalities::PointStatus::Error(m) => Some(m.as_str()),
                _ => None,
            },
        }
    }
}

fn outcome(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn scan_summary(r: &ScanReport) -> serde_json::Value {
    json!({
        "samples": r.samples,
        "violations": r.violations.len(),
        "errors": r.errors,
        "worst_margin": r.worst_margin,
        "worst_location": r.worst_location,
        "tolerance": r.tolerance,
        "status": outcome(r.passed()),
    })
}

fn cmd_scan(verifier: &Verifier, a: &ScanArgs, out: &mut dyn Write) -> CliResult {
    let claim = parse_claim(&a.claim)?;
    let d = default_grid(claim);
    let grid = ScanGrid::new(
        a.zmin.unwrap_or(d.z_min),
        a.zmax.unwrap_or(d.z_max),
        a.points.unwrap_or(d.count),
        match a.spacing {
            Some(SpacingArg::Log) => Spacing::Log,
            Some(SpacingArg::Linear) => Spacing::Linear,
            None => d.spacing,
        },
    )?;
    let report = verifier.scan(claim, &grid, a.tolerance)?;
    match a.format {
        TableFormat::Json => {
            let doc = json!({
                "claim": claim,
                "grid": grid,
                "records": report.records.iter().map(RecordOut::from).collect::<Vec<_>>(),
                "summary": scan_summary(&report),
            });
            serde_json::to_writer(&mut *out, &doc).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        TableFormat::Csv => {
            writeln!(out, "claim,z,lhs,rhs,margin,status")?;
            for p in &report.records {
                writeln!(
                    out,
                    "{claim},{},{},{},{},{}",
                    num(p.z),
                    num(p.lhs),
                    num(p.rhs),
                    num(p.margin),
                    p.status.label()
                )?;
            }
            writeln!(
                out,
                "# summary samples={} violations={} errors={} worst_margin={} worst_location={} status={}",
                report.samples,
                report.violations.len(),
                report.errors,
                num(report.worst_margin),
                num(report.worst_location),
                outcome(report.passed())
            )?;
        }
    }
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn status_name(s: CertStatus) -> &'static str {
    match s {
        CertStatus::Proven => "Proven",
        CertStatus::Inconclusive => "Inconclusive",
        CertStatus::Refuted => "Refuted",
    }
}

fn run_certify(
    verifier: &Verifier,
    claim: ClaimId,
    lo: f64,
    hi: f64,
    exclusion: f64,
    max_depth: u32,
) -> Result<Certificate> {
    if !claim.is_certifiable() {
        return Err(Error::NotCertifiable(claim));
    }
    let region = Interval::new(lo, hi)?;
    verifier.certify(
        claim,
        region,
        exclusion,
        CertifyOptions {
            max_depth,
            ..CertifyOptions::default()
        },
    )
}

fn cmd_certify(verifier: &Verifier, a: &CertifyArgs, out: &mut dyn Write) -> CliResult {
    let claim = parse_claim(&a.claim)?;
    let (dlo, dhi) = default_box(claim);
    let (lo, hi) = (a.lo.unwrap_or(dlo), a.hi.unwrap_or(dhi));
    let cert = run_certify(verifier, claim, lo, hi, a.exclusion, a.max_depth)?;
    match a.format {
        Format::Json => {
            let doc = json!({
                "claim": claim,
                "box": cert.region,
                "certificate": cert,
                "summary": { "status": status_name(cert.status) },
            });
            serde_json::to_writer(&mut *out, &doc).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "claim,lo,hi,exclusion_radius,status,min_margin,boxes_examined,max_depth"
            )?;
            writeln!(
                out,
                "{claim},{},{},{},{},{},{},{}",
                num(cert.region.lo()),
                num(cert.region.hi()),
                num(cert.exclusion_radius),
                status_name(cert.status),
                num(cert.min_margin),
                cert.boxes_examined,
                cert.max_depth
            )?;
        }
        Format::Text => {
            writeln!(out, "claim: {claim}")?;
            writeln!(
                out,
                "box: [{}, {}]",
                num(cert.region.lo()),
                num(cert.region.hi())
            )?;
            writeln!(out, "exclusion_radius: {}", num(cert.exclusion_radius))?;
            writeln!(out, "status: {}", status_name(cert.status))?;
            writeln!(out, "min_margin: {}", num(cert.min_margin))?;
            writeln!(out, "boxes_examined: {}", cert.boxes_examined)?;
            writeln!(out, "max_depth: {}", cert.max_depth)?;
            if let Some(w) = cert.witness {
                writeln!(out, "witness: [{}, {}]", num(w.lo()), num(w.hi()))?;
            }
        }
    }
    Ok(if cert.status == CertStatus::Proven {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// Outcome of the default battery for one claim.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub claim: ClaimId,
    pub anchor: &'static str,
    pub outcome: &'static str,
    pub scan: serde_json::Value,
    pub certificate: Option<Certificate>,
    /// Sign changes of consecutive differences (unimodality only).
    pub sign_changes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs the default scan, plus certification where available, for `claim`.
pub fn report_entry(verifier: &Verifier, claim: ClaimId) -> ReportEntry {
    let mut entry = ReportEntry {
        claim,
        anchor: claim.statement(),
        outcome: "fail",
        scan: serde_json::Value::Null,
        certificate: None,
        sign_changes: None,
        error: None,
    };
    let grid = default_grid(claim);
    let report = match verifier.scan(claim, &grid, DEFAULT_TOLERANCE) {
        Ok(r) => r,
        Err(e) => {
            entry.error = Some(e.to_string());
            return entry;
        }
    };
    let mut pass = report.passed();
    entry.scan = scan_summary(&report);
    if let ClaimShape::Monotone(_) = claim.shape() {
        if claim == ClaimId::KUnimodal {
            let zs = grid.points();
            let vals: Result<Vec<f64>> = zs
                .iter()
                .map(|&z| verifier.tracked_value(claim, z))
                .collect();
            match vals.and_then(|v| slope_sign_changes(&zs, &v)) {
                Ok(s) => {
                    let step = grid.step();
                    let at_one = s.locations.len() == 1 && (s.locations[0] - 1.0).abs() <= step;
                    pass &= at_one;
                    entry.sign_changes = Some(s.count);
                }
                Err(e) => {
                    pass = false;
                    entry.error = Some(e.to_string());
                }
            }
        }
    }
    if claim.is_certifiable() {
        let (lo, hi) = default_box(claim);
        let exclusion = if claim.equality_at_one() {
            DEFAULT_EXCLUSION
        } else {
            0.0
        };
        match run_certify(verifier, claim, lo, hi, exclusion, DEFAULT_MAX_DEPTH) {
            Ok(c) => {
                pass &= c.status == CertStatus::Proven;
                entry.certificate = Some(c);
            }
            Err(e) => {
                pass = false;
                entry.error = Some(e.to_string());
            }
        }
    }
    entry.outcome = outcome(pass);
    entry
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn cmd_report(verifier: &Verifier, a: &ReportArgs, out: &mut dyn Write) -> CliResult {
    let claims: Vec<ClaimId> = if a.all {
        ClaimId::ALL.to_vec()
    } else if a.claims.is_empty() {
        return Err(Failure::Usage(
            "report needs --all or at least one claim".into(),
        ));
    } else {
        a.claims
            .iter()
            .map(|c| parse_claim(c))
            .collect::<Result<_>>()?
    };
    let entries: Vec<ReportEntry> = claims.iter().map(|&c| report_entry(verifier, c)).collect();
    let failed: Vec<ClaimId> = entries
        .iter()
        .filter(|e| e.outcome != "pass")
        .map(|e| e.claim)
        .collect();
    match a.format {
        TableFormat::Json => {
            let doc = json!({
                "claim": if a.all { "ALL".to_string() } else { claims.iter().map(|c| c.name()).collect::<Vec<_>>().join(",") },
                "grid": "default",
                "records": entries,
                "summary": {
                    "claims": entries.len(),
                    "passed": entries.len() - failed.len(),
                    "failed": failed,
                    "status": outcome(failed.is_empty()),
                },
            });
            serde_json::to_writer(&mut *out, &doc).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        TableFormat::Csv => {
            writeln!(
                out,
                "claim,outcome,samples,violations,errors,worst_margin,worst_location,cert_status,min_margin,boxes_examined,anchor"
            )?;
            for e in &entries {
                let s = &e.scan;
                let f = |k: &str| {
                    s.get(k)
                        .and_then(|v| v.as_f64())
                        .map_or_else(String::new, num)
                };
                let u = |k: &str| {
                    s.get(k)
                        .and_then(|v| v.as_u64())
                        .map_or_else(String::new, |v| v.to_string())
                };
                let (cs, cm, cb) = match &e.certificate {
                    Some(c) => (
                        status_name(c.status).to_string(),
                        num(c.min_margin),
                        c.boxes_examined.to_string(),
                    ),
                    None => (String::new(), String::new(), String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    e.claim,
                    e.outcome,
                    u("samples"),
                    u("violations"),
                    u("errors"),
                    f("worst_margin"),
                    f("worst_location"),
                    cs,
                    cm,
                    cb,
                    csv_quote(e.anchor)
                )?;
            }
            let names: Vec<&str> = failed.iter().map(|c| c.name()).collect();
            writeln!(
                out,
                "# summary claims={} passed={} failed={} failed_claims={} status={}",
                entries.len(),
                entries.len() - failed.len(),
                failed.len(),
                names.join(";"),
                outcome(failed.is_empty())
            )?;
        }
    }
    Ok(if failed.is_empty() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}
