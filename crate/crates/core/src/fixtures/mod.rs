//! The shipped reference tables: loading, checksum verification, and
//! row-by-row comparison against computed coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cmforms::{cm_expansion_in, identity, CmError};
use crate::exactalg::{Biquad, QuadField, Rational, Ring, TowerElement, TowerParam};
use crate::heckechars::t_scale;
use crate::lacunarity::CoefficientTable;
use crate::qseries::QSeries;
use crate::quadideals::elements_of_norm;

pub const APPENDIX1: &str = "appendix1.txt";
pub const APPENDIX2: &str = "appendix2.csv";
pub const APPENDIX3: &str = "appendix3.csv";
pub const MANIFEST: &str = "SHA256SUMS";

const ROW_WIDTH: usize = 23;
const APPENDIX1_LEN: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("fixture not found: {0}")]
    Missing(PathBuf),
    #[error("{file}:{line}: {msg}")]
    Malformed { file: String, line: usize, msg: String },
    #[error("checksum mismatch for {0}")]
    Checksum(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

fn malformed(file: &str, line: usize, msg: impl Into<String>) -> FixtureError {
    FixtureError::Malformed { file: file.to_string(), line, msg: msg.into() }
}

fn read(path: &Path) -> Result<Vec<u8>, FixtureError> {
    fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => FixtureError::Missing(path.to_path_buf()),
        _ => FixtureError::Io { path: path.to_path_buf(), msg: e.to_string() },
    })
}

fn read_text(path: &Path) -> Result<String, FixtureError> {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    String::from_utf8(read(path)?).map_err(|_| malformed(&name, 0, "not UTF-8"))
}

/// Whitespace-separated integers, row-major with 23 per row; exactly 1000 entries.
pub fn parse_appendix1(text: &str) -> Result<CoefficientTable, FixtureError> {
    let mut values = Vec::with_capacity(APPENDIX1_LEN);
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    for (k, line) in lines.iter().enumerate() {
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| malformed(APPENDIX1, k + 1, format!("bad integer {x:?}"))))
            .collect::<Result<_, _>>()?;
        if row.len() > ROW_WIDTH || (k + 1 < lines.len() && row.len() != ROW_WIDTH) {
            return Err(malformed(APPENDIX1, k + 1, format!("row has {} entries, expected {ROW_WIDTH}", row.len())));
        }
        values.extend(row);
    }
    if values.len() != APPENDIX1_LEN {
        return Err(malformed(APPENDIX1, lines.len(), format!("{} entries, expected {APPENDIX1_LEN}", values.len())));
    }
    Ok(CoefficientTable::new(values))
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
pub struct Appendix2Row {
    pub n: u64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    #[serde(default = "RowStatus::ok")]
    pub status: RowStatus,
    #[serde(default)]
    pub note: String,
}

/// One table 3 entry: skipped, or `coef * sqrt6^e * t^[t] * i^[i]`, or
/// explicit tower coordinates `[c0 ... c7]`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Cell {
    Skip,
    Expr { coef: Rational, sqrt6: i32, t: bool, i: bool },
    Coords([Rational; 8]),
}

impl Cell {
    pub fn int(v: i64) -> Self {
        Cell::Expr { coef: Rational::from(v), sqrt6: 0, t: false, i: false }
    }

    /// `sqrt6 = -i r`, with `r = sqrt(-6)`.
    pub fn to_tower(&self, param: &TowerParam) -> Option<TowerElement> {
        match self {
            Cell::Skip => None,
            Cell::Coords(c) => Some(TowerElement::from_coords(c.clone(), param.clone())),
            Cell::Expr { coef, sqrt6, t, i } => {
                let mut x = TowerElement::from_rational(coef.clone(), param);
                let root = Biquad::from_ints([0, 0, 0, -1]);
                let sixth = Rational::new(1, 6).expect("nonzero");
                for _ in 0..sqrt6.unsigned_abs() {
                    x = x.mul_biquad(&root);
                    if *sqrt6 < 0 {
                        x = x.scale(&sixth);
                    }
                }
                if *t {
                    x = x.mul_ref(&t_scale(param));
                }
                if *i {
                    x = x.mul_biquad(&Biquad::i_pow(1));
                }
                Some(x)
            }
        }
    }

    pub fn rational(&self) -> Option<Rational> {
        match self {
            Cell::Expr { coef, sqrt6: 0, t: false, i: false } => Some(coef.clone()),
            _ => None,
        }
    }
}

impl FromStr for Cell {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "*" {
            return Ok(Cell::Skip);
        }
        if s.starts_with('[') {
            let x = TowerElement::parse_coords(s, &TowerParam::unit()).map_err(|e| e.to_string())?;
            return Ok(Cell::Coords(x.coords()));
        }
        let split = s.find(['*', '/']).unwrap_or(s.len());
        let coef: Rational = s[..split].parse().map_err(|_| format!("bad coefficient in {s:?}"))?;
        let (mut sqrt6, mut t, mut i) = (0, false, false);
        let mut rest = &s[split..];
        while !rest.is_empty() {
            let op = &rest[..1];
            let end = rest[1..].find(['*', '/']).map_or(rest.len(), |k| k + 1);
            match (op, &rest[1..end]) {
                ("*", "sqrt6") => sqrt6 += 1,
                ("/", "sqrt6") => sqrt6 -= 1,
                ("*", "t") if !t => t = true,
                ("*", "i") if !i => i = true,
                _ => return Err(format!("bad factor {:?} in {s:?}", &rest[..end])),
            }
            rest = &rest[end..];
        }
        Ok(Cell::Expr { coef, sqrt6, t, i })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Skip => write!(f, "*"),
            Cell::Coords(c) => {
                let parts: Vec<String> = c.iter().map(Rational::to_string).collect();
                write!(f, "[{}]", parts.join(" "))
            }
            Cell::Expr { coef, sqrt6, t, i } => {
                write!(f, "{coef}")?;
                for _ in 0..*sqrt6 {
                    write!(f, "*sqrt6")?;
                }
                for _ in *sqrt6..0 {
                    write!(f, "/sqrt6")?;
                }
                if *t {
                    write!(f, "*t")?;
                }
                if *i {
                    write!(f, "*i")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    /// Excluded from comparison: the printed row cannot be interpreted.
    Quarantine,
    /// A printed value lacks the factor `t` carried by its column.
    ErratumMissingT,
    /// A printed value has the wrong sign, shown by multiplicativity of other rows.
    ErratumSign,
    /// Printed values contradict the row's own identity.
    ErratumIdentity,
    /// Printed zeros where the ideal is a norm of principal generators.
    ErratumSpuriousZero,
    /// A printed value outside the finite set a coefficient at a split prime can take.
    ErratumValueSet,
}

impl RowStatus {
    fn ok() -> Self {
        RowStatus::Ok
    }

    pub fn is_erratum(self) -> bool {
        !matches!(self, RowStatus::Ok | RowStatus::Quarantine)
    }
}

pub const APPENDIX3_COLUMNS: [&str; 6] = ["b1", "b2", "c1", "c2", "c3", "c4"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Appendix3Row {
    pub n: u64,
    pub a: i64,
    /// `b1, b2, c1, c2, c3, c4`.
    pub cells: [Cell; 6],
    pub status: RowStatus,
    pub note: String,
}

#[derive(Deserialize)]
struct RawRow3 {
    n: u64,
    a: i64,
    b1: String,
    b2: String,
    c1: String,
    c2: String,
    c3: String,
    c4: String,
    status: RowStatus,
    #[serde(default)]
    note: String,
}

fn check_coprime(file: &str, line: usize, n: u64) -> Result<(), FixtureError> {
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return Err(malformed(file, line, format!("n = {n} is not coprime to 6")));
    }
    Ok(())
}

fn csv_rows<T: for<'de> Deserialize<'de>>(file: &str, text: &str) -> Result<Vec<(usize, T)>, FixtureError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in rdr.deserialize().enumerate() {
        let row: T = rec.map_err(|e| malformed(file, k + 2, e.to_string()))?;
        out.push((k + 2, row));
    }
    Ok(out)
}

pub fn parse_appendix2(text: &str) -> Result<Vec<Appendix2Row>, FixtureError> {
    let rows = csv_rows::<Appendix2Row>(APPENDIX2, text)?;
    for (line, r) in &rows {
        check_coprime(APPENDIX2, *line, r.n)?;
    }
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

pub fn parse_appendix3(text: &str) -> Result<Vec<Appendix3Row>, FixtureError> {
    let mut out = Vec::new();
    for (line, r) in csv_rows::<RawRow3>(APPENDIX3, text)? {
        check_coprime(APPENDIX3, line, r.n)?;
        let cell = |s: &str| s.parse::<Cell>().map_err(|e| malformed(APPENDIX3, line, e));
        let cells = [cell(&r.b1)?, cell(&r.b2)?, cell(&r.c1)?, cell(&r.c2)?, cell(&r.c3)?, cell(&r.c4)?];
        out.push(Appendix3Row { n: r.n, a: r.a, cells, status: r.status, note: r.note });
    }
    Ok(out)
}

/// Checks every file listed in `SHA256SUMS`, if the manifest exists.
pub fn verify_manifest(dir: &Path) -> Result<bool, FixtureError> {
    let path = dir.join(MANIFEST);
    if !path.exists() {
        return Ok(false);
    }
    for (k, line) in read_text(&path)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (digest, name) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| malformed(MANIFEST, k + 1, "expected '<sha256>  <file>'"))?;
        let name = name.trim_start().trim_start_matches('*');
        let actual = hex::encode(Sha256::digest(read(&dir.join(name))?));
        if !actual.eq_ignore_ascii_case(digest) {
            return Err(FixtureError::Checksum(name.to_string()));
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub appendix1: CoefficientTable,
    pub appendix2: Vec<Appendix2Row>,
    pub appendix3: Vec<Appendix3Row>,
}

impl FixtureSet {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, FixtureError> {
        let dir = dir.as_ref();
        verify_manifest(dir)?;
        Ok(FixtureSet {
            appendix1: load_appendix1(dir)?,
            appendix2: parse_appendix2(&read_text(&dir.join(APPENDIX2))?)?,
            appendix3: parse_appendix3(&read_text(&dir.join(APPENDIX3))?)?,
        })
    }

    pub fn appendix3_row(&self, n: u64) -> Option<&Appendix3Row> {
        self.appendix3.iter().find(|r| r.n == n)
    }
}

pub fn load_appendix1(dir: &Path) -> Result<CoefficientTable, FixtureError> {
    parse_appendix1(&read_text(&dir.join(APPENDIX1))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub n: u64,
    pub status: RowStatus,
    /// Columns whose printed value differs from the computed one.
    pub mismatches: Vec<String>,
    /// For errata rows: whether the independent consistency check confirms
    /// the printed value is wrong and ours is right.
    pub erratum_confirmed: Option<bool>,
}

/// `{2x : x^2 + y^2 = p}`, the values `2 Re(u pi)` of a rational Gaussian
/// CM coefficient at a split prime `p`.
fn gaussian_trace_set(p: u64) -> Vec<i64> {
    let mut v: Vec<i64> = elements_of_norm(QuadField::Gaussian, p as i64).into_iter().map(|(x, _)| 2 * x).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Table 2 rows against `f_4(12z)` and the two case-4 forms.
pub fn check_appendix2(rows: &[Appendix2Row]) -> Result<Vec<RowCheck>, CmError> {
    let t = rows.iter().map(|r| r.n as usize + 1).max().unwrap_or(1);
    let id = identity(4)?;
    let target = id.target_series(t)?;
    let p = TowerParam::unit();
    let plus = cm_expansion_in(&id.forms["+"], t, &p)?;
    let minus = cm_expansion_in(&id.forms["-"], t, &p)?;
    let int = |s: &QSeries<TowerElement>, n: usize| s.coeff(n).and_then(TowerElement::to_rational);
    Ok(rows
        .iter()
        .map(|r| {
            let n = r.n as usize;
            let mut mismatches = Vec::new();
            if target.coeff(n) != Some(&r.a) {
                mismatches.push("a".to_string());
            }
            let cols = [("b", r.b, int(&plus, n)), ("c", r.c, int(&minus, n))];
            for (name, printed, ours) in &cols {
                if *ours != Some(Rational::from(*printed)) {
                    mismatches.push(name.to_string());
                }
            }
            let erratum_confirmed = r.status.is_erratum().then(|| {
                let set = gaussian_trace_set(r.n);
                r.status == RowStatus::ErratumValueSet
                    && crate::arith::is_prime(r.n)
                    && !mismatches.is_empty()
                    && mismatches.iter().all(|m| m != "a")
                    && cols.iter().filter(|(name, _, _)| mismatches.iter().any(|m| m == name)).all(
                        |(_, printed, ours)| {
                            !set.contains(printed)
                                && ours.as_ref().and_then(Rational::to_i64).is_some_and(|x| set.contains(&x))
                        },
                    )
            });
            RowCheck { n: r.n, status: r.status, mismatches, erratum_confirmed }
        })
        .collect())
}

/// Computed table 3 columns: `a`, then `b1, b2` and the `t`-scaled `c1..c4`.
pub struct Appendix3Computed {
    pub param: TowerParam,
    a: QSeries<i64>,
    cols: Vec<QSeries<TowerElement>>,
}

impl Appendix3Computed {
    pub fn new(t: usize) -> Result<Self, CmError> {
        let id = identity(5)?;
        let param = id.combination.param().clone();
        let ts = t_scale(&param);
        let mut cols = Vec::new();
        for (k, label) in ["603", "203", "130", "130'", "310", "310'"].into_iter().enumerate() {
            let s = cm_expansion_in(&id.forms[label], t, &param)?;
            cols.push(if k >= 2 { s.scale(&ts)? } else { s });
        }
        Ok(Appendix3Computed { param, a: id.target_series(t)?, cols })
    }

    pub fn a(&self, n: u64) -> Option<i64> {
        self.a.coeff(n as usize).copied()
    }

    /// Column `k` of [`APPENDIX3_COLUMNS`] at `n`.
    pub fn col(&self, k: usize, n: u64) -> Option<&TowerElement> {
        self.cols[k].coeff(n as usize)
    }
}

fn row_mismatches(row: &Appendix3Row, comp: &Appendix3Computed) -> Vec<String> {
    let mut out = Vec::new();
    if comp.a(row.n) != Some(row.a) {
        out.push("a".to_string());
    }
    for (k, cell) in row.cells.iter().enumerate() {
        if let Some(v) = cell.to_tower(&comp.param) {
            if comp.col(k, row.n) != Some(&v) {
                out.push(APPENDIX3_COLUMNS[k].to_string());
            }
        }
    }
    out
}

/// Printed value of a cell, read from a row of the table itself.
fn printed(set: &BTreeMap<u64, &Appendix3Row>, n: u64, k: usize, param: &TowerParam) -> Option<TowerElement> {
    set.get(&n).filter(|r| r.status == RowStatus::Ok).and_then(|r| r.cells[k].to_tower(param))
}

fn confirm_erratum(
    row: &Appendix3Row,
    comp: &Appendix3Computed,
    table: &BTreeMap<u64, &Appendix3Row>,
    bad: &[String],
) -> bool {
    let p = &comp.param;
    let ts = t_scale(p);
    let c_cols: Vec<usize> = (0..6).filter(|&k| bad.iter().any(|b| b == APPENDIX3_COLUMNS[k])).collect();
    if c_cols.is_empty() {
        return false;
    }
    let ours = |k: usize| comp.col(k, row.n).cloned();
    let theirs = |k: usize| row.cells[k].to_tower(p);
    match row.status {
        RowStatus::ErratumMissingT => {
            c_cols.iter().all(|&k| matches!((theirs(k), ours(k)), (Some(x), Some(y)) if x.mul_ref(&ts) == y))
        }
        RowStatus::ErratumSign => c_cols.iter().all(|&k| {
            let flipped = matches!((theirs(k), ours(k)), (Some(x), Some(y)) if x.neg() == y);
            // the table's own entries at a coprime factorization n = p^e m
            let (q, e) = crate::arith::factor(row.n)[0];
            let pe = q.pow(e);
            let via_table = match (printed(table, pe, k, p), printed(table, row.n / pe, k, p)) {
                (Some(x), Some(y)) => Some(x.mul_ref(&y)) == ours(k),
                _ => false,
            };
            flipped && via_table
        }),
        RowStatus::ErratumIdentity => {
            let (Some(b1), Some(b2)) = (row.cells[0].rational(), row.cells[1].rational()) else { return false };
            // a = (b1 - b2)/16 - (c1 - c2 + c3 - c4)/16
            let forced = TowerElement::from_rational(&(&b1 - &b2) - &Rational::from(16 * row.a), p);
            let alt = |f: &dyn Fn(usize) -> Option<TowerElement>| -> Option<TowerElement> {
                Some(f(2)?.sub_ref(&f(3)?).add_ref(&f(4)?).sub_ref(&f(5)?))
            };
            alt(&ours) == Some(forced.clone()) && alt(&theirs) == Some(forced.neg()) && !forced.is_zero()
        }
        RowStatus::ErratumSpuriousZero => {
            let principal = !elements_of_norm(QuadField::SqrtMinus6, row.n as i64).is_empty();
            let printed_zero = c_cols.iter().all(|&k| theirs(k).is_some_and(|x| x.is_zero()));
            let ours_nonzero = c_cols.iter().all(|&k| ours(k).is_some_and(|x| !x.is_zero()));
            principal && printed_zero && ours_nonzero
        }
        RowStatus::Ok | RowStatus::Quarantine | RowStatus::ErratumValueSet => false,
    }
}

/// Table 3 rows against the case-5 forms. Errata rows carry the result of
/// their independent check; columns outside the erratum must still match.
pub fn check_appendix3(rows: &[Appendix3Row]) -> Result<Vec<RowCheck>, CmError> {
    let t = rows.iter().map(|r| r.n as usize + 1).max().unwrap_or(1);
    let comp = Appendix3Computed::new(t)?;
    let table: BTreeMap<u64, &Appendix3Row> = rows.iter().map(|r| (r.n, r)).collect();
    Ok(rows
        .iter()
        .map(|r| {
            let mismatches = row_mismatches(r, &comp);
            let erratum_confirmed = r
                .status
                .is_erratum()
                .then(|| mismatches.iter().all(|m| m != "a") && confirm_erratum(r, &comp, &table, &mismatches));
            RowCheck { n: r.n, status: r.status, mismatches, erratum_confirmed }
        })
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableSummary {
    pub rows: usize,
    /// `ok` rows agreeing in every column.
    pub matched: usize,
    /// `ok` rows with a disagreement.
    pub mismatched: Vec<u64>,
    pub errata_confirmed: Vec<u64>,
    pub errata_unconfirmed: Vec<u64>,
    pub quarantined: Vec<u64>,
}

impl TableSummary {
    pub fn from_checks(checks: &[RowCheck]) -> Self {
        let mut s = TableSummary { rows: checks.len(), ..Default::default() };
        for c in checks {
            match (c.status, c.erratum_confirmed) {
                (RowStatus::Quarantine, _) => s.quarantined.push(c.n),
                (_, Some(true)) => s.errata_confirmed.push(c.n),
                (_, Some(false)) => s.errata_unconfirmed.push(c.n),
                _ if c.mismatches.is_empty() => s.matched += 1,
                _ => s.mismatched.push(c.n),
            }
        }
        s
    }

    /// Every non-quarantined row agrees or is a confirmed erratum.
    pub fn passes(&self) -> bool {
        self.mismatched.is_empty() && self.errata_unconfirmed.is_empty()
    }
}

#[cfg(test)]
mod tests;
