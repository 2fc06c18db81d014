//! Command-line front end. `run` parses arguments, dispatches, and returns the
//! process exit code; the binary is a thin wrapper around it.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse or usage error,
//! 3 non-integral valuation, 4 fixture missing or malformed.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::cmforms::{coefficient_via_multiplicativity, identity, CmError, IdentityReport};
use crate::exactalg::Rational;
use crate::fixtures::{check_appendix2, check_appendix3, FixtureError, FixtureSet, RowCheck, TableSummary};
use crate::heckeops::{eta_modularity_check, hecke_tp_to, sturm_bound, HeckeError, SpaceDescriptor};
use crate::lacunarity::{
    expand_fb12, format_set, full_scan, lacunary_set, zero_density, DensityMode, LacError, ScanOptions, SweepMode,
};
use crate::qseries::{EtaQuotient, QSeries, SeriesError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALUATION: i32 = 3;
pub const EXIT_FIXTURE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityArg {
    All,
    Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Adaptive,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "lacunary", version, about = "Eta-products, CM forms and the lacunarity of eta(z)^2 eta(bz)^2")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory holding appendix1.txt, appendix2.csv, appendix3.csv and SHA256SUMS.
    #[arg(long, global = true, default_value = "fixtures")]
    pub fixtures: PathBuf,
    /// Worker threads for `scan`; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand an eta quotient such as "eta(12z)^2*eta(48z)^2".
    Expand {
        spec: String,
        /// Number of coefficients past the valuation.
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
    /// Sweep b = 1..=b_max with T_23 and report the lacunary set.
    Scan {
        #[arg(long, default_value_t = 175)]
        b_max: u64,
        /// Sweep prime in place of 23 (47 for 23 | b).
        #[arg(long)]
        prime: Option<u64>,
        /// Also sweep 23 | b with T_47; not validated.
        #[arg(long)]
        include_23: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
        mode: ModeArg,
    },
    /// Check one of the five CM identities through its Sturm bound, and the
    /// reference tables for cases 4 and 5.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        case: u8,
        /// Also compute this coefficient through multiplicativity.
        #[arg(long)]
        coefficient: Option<u64>,
    },
    /// Zero density of f_b(12z), or of a series read from a file, up to X.
    Density {
        #[arg(long, required_unless_present = "input", conflicts_with = "input")]
        b: Option<u64>,
        /// Series in the JSON or text form printed by `expand`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        x: usize,
        #[arg(long, value_enum, default_value_t = DensityArg::Support)]
        mode: DensityArg,
    },
    /// floor(k [SL2(Z) : Gamma0(N)] / 12).
    Sturm {
        #[arg(long, default_value_t = 2)]
        weight: u32,
        #[arg(long)]
        level: u64,
    },
    /// Apply T_p to an eta quotient on Gamma0(level).
    Hecke {
        spec: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        level: u64,
        /// Number of coefficients of the image.
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Valuation(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Valuation(_) => EXIT_VALUATION,
            CliError::Fixture(_) => EXIT_FIXTURE,
            CliError::Other(_) => EXIT_FAILURE,
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Parse(_) => CliError::Parse(e.to_string()),
            SeriesError::NonIntegralValuation(_) | SeriesError::NegativeValuation(_) => {
                CliError::Valuation(e.to_string())
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<HeckeError> for CliError {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Series(s) => s.into(),
            HeckeError::HalfIntegralWeight { .. } => CliError::Valuation(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<CmError> for CliError {
    fn from(e: CmError) -> Self {
        match e {
            CmError::Series(s) => s.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<LacError> for CliError {
    fn from(e: LacError) -> Self {
        match e {
            LacError::Series(s) => s.into(),
            LacError::Hecke(h) => h.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    writeln!(out, "{s}").map_err(|e| CliError::Other(e.to_string()))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), CliError> {
    emit(out, &serde_json::to_string_pretty(v).expect("serializable"))
}

fn decimal(q: &Rational) -> String {
    format!("{:.6}", q.to_f64())
}

fn parse_spec(s: &str) -> Result<EtaQuotient, CliError> {
    s.parse::<EtaQuotient>().map_err(|e| CliError::Parse(e.to_string()))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Expand { spec, terms } => cmd_expand(cli.format, spec, *terms, out),
        Command::Scan { b_max, prime, include_23, mode } => {
            let opts = ScanOptions {
                b_max: *b_max,
                prime: *prime,
                include_23: *include_23,
                mode: match mode {
                    ModeArg::Adaptive => SweepMode::Adaptive,
                    ModeArg::Full => SweepMode::Full,
                },
                jobs: cli.jobs,
            };
            cmd_scan(cli.format, &opts, out)
        }
        Command::Verify { case, coefficient } => cmd_verify(cli.format, *case, *coefficient, &cli.fixtures, out),
        Command::Density { b, input, x, mode } => cmd_density(cli.format, *b, input.as_deref(), *x, *mode, out),
        Command::Sturm { weight, level } => {
            if *level == 0 {
                return Err(CliError::Parse("level must be positive".into()));
            }
            let bound = sturm_bound(*weight, *level);
            match cli.format {
                Format::Json => emit_json(out, &json!({ "weight": weight, "level": level, "bound": bound })),
                Format::Text => emit(out, &bound.to_string()),
            }
        }
        Command::Hecke { spec, p, level, terms } => cmd_hecke(cli.format, spec, *p, *level, *terms, out),
    }
}

fn write_series(format: Format, f: &QSeries<BigInt>, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => emit(out, &f.to_json()),
        Format::Text => emit(out, f.to_text().trim_end()),
    }
}

/// Known through `valuation + terms`, i.e. `terms` coefficients from the leading exponent.
fn expand_series(spec: &str, terms: usize) -> Result<QSeries<BigInt>, CliError> {
    if terms == 0 {
        return Err(CliError::Parse("terms must be at least 1".into()));
    }
    let q = parse_spec(spec)?;
    let v = q.integral_valuation()?;
    Ok(q.expand(&(), v + terms)?)
}

fn cmd_expand(format: Format, spec: &str, terms: usize, out: &mut dyn Write) -> Result<(), CliError> {
    write_series(format, &expand_series(spec, terms)?, out)
}

fn cmd_scan(format: Format, opts: &ScanOptions, out: &mut dyn Write) -> Result<(), CliError> {
    let verdicts = full_scan(opts)?;
    let summary = format!("lacunary: {}", format_set(&lacunary_set(&verdicts)));
    match format {
        Format::Json => emit_json(out, &json!({ "verdicts": verdicts, "summary": summary })),
        Format::Text => {
            for v in &verdicts {
                emit(out, &v.to_string())?;
            }
            emit(out, &summary)
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    case: u8,
    target: String,
    level: u64,
    identity: IdentityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<TableSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    rows: Vec<RowCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficient: Option<(u64, String)>,
}

fn cmd_verify(
    format: Format,
    case: u8,
    coefficient: Option<u64>,
    fixtures: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let id = identity(case)?;
    // load fixtures first, so a missing table fails before any long computation
    let set = if case >= 4 { Some(FixtureSet::load(fixtures)?) } else { None };
    let rep = id.verify()?;
    let rows = match (&set, case) {
        (Some(s), 4) => check_appendix2(&s.appendix2)?,
        (Some(s), _) => check_appendix3(&s.appendix3)?,
        _ => Vec::new(),
    };
    let table = set.as_ref().map(|_| TableSummary::from_checks(&rows));
    let coefficient = match coefficient {
        Some(n) => Some((n, coefficient_via_multiplicativity(&id.combination, n)?.to_string())),
        None => None,
    };
    let report =
        VerifyReport { case, target: id.target.to_string(), level: id.level, identity: rep, table, rows, coefficient };
    match format {
        Format::Json => emit_json(out, &report),
        Format::Text => {
            let i = &report.identity;
            let status = if i.equal {
                "equal".to_string()
            } else {
                format!("first mismatch at n = {}", i.first_mismatch.unwrap_or(0))
            };
            emit(
                out,
                &format!(
                    "case {case}: {} on Gamma0({}) through n <= {}: {status}",
                    report.target, report.level, i.bound
                ),
            )?;
            if let Some(t) = &report.table {
                emit(out, &format!("table rows: {}  matched: {}  mismatched: {:?}", t.rows, t.matched, t.mismatched))?;
                emit(
                    out,
                    &format!("errata confirmed: {:?}  unconfirmed: {:?}", t.errata_confirmed, t.errata_unconfirmed),
                )?;
                emit(out, &format!("quarantined: {:?}", t.quarantined))?;
            }
            if let Some((n, a)) = &report.coefficient {
                emit(out, &format!("a({n}) = {a}"))?;
            }
            Ok(())
        }
    }
}

fn read_series(path: &Path) -> Result<QSeries<Rational>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') {
        QSeries::<BigInt>::from_json(&text)
    } else {
        QSeries::<BigInt>::from_text(&text)
    };
    match parsed {
        Ok(s) => Ok(s.map(&(), |c| Rational::from(c.clone()))?),
        Err(_) if text.trim_start().starts_with('{') => Ok(QSeries::<Rational>::from_json(&text)?),
        Err(_) => Ok(QSeries::<Rational>::from_text(&text)?),
    }
}

fn cmd_density(
    format: Format,
    b: Option<u64>,
    input: Option<&Path>,
    x: usize,
    mode: DensityArg,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (d, mode) = match (b, input) {
        (Some(b), _) => {
            if b == 0 {
                return Err(CliError::Parse("b must be positive".into()));
            }
            let f = expand_fb12(b, x + 1);
            let m = match mode {
                DensityArg::All => DensityMode::All,
                DensityArg::Support => DensityMode::support_of_fb12(b),
            };
            (zero_density(&f, x, m)?, m)
        }
        (None, Some(path)) => {
            let f = read_series(path)?;
            let m = match mode {
                DensityArg::All => DensityMode::All,
                DensityArg::Support => crate::lacunarity::support_progression(&f, 12).unwrap_or(DensityMode::All),
            };
            (zero_density(&f, x, m)?, m)
        }
        (None, None) => return Err(CliError::Parse("density needs --b or --input".into())),
    };
    match format {
        Format::Json => {
            emit_json(out, &json!({ "x": x, "mode": mode, "density": d.to_string(), "decimal": decimal(&d) }))
        }
        Format::Text => emit(out, &format!("{d} ({})", decimal(&d))),
    }
}

fn cmd_hecke(
    format: Format,
    spec: &str,
    p: u64,
    level: u64,
    terms: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if terms == 0 {
        return Err(CliError::Parse("terms must be at least 1".into()));
    }
    let q = parse_spec(spec)?;
    let report = eta_modularity_check(&q, level)?;
    if report.weight < 1 {
        return Err(CliError::Other(format!("weight {} is not positive", report.weight)));
    }
    let space = SpaceDescriptor::new(report.weight as u32, level, report.character);
    let f: QSeries<BigInt> = q.expand(&(), (terms - 1) * p as usize + 1)?;
    write_series(format, &hecke_tp_to(&f, p, &space, terms)?, out)
}
