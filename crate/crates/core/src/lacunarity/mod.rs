//! Deciding which `f_b(z) = eta(z)^2 eta(bz)^2` are lacunary: eligibility,
//! the CM field filter, the large-`b` witness search, the `T_p` sweep for
//! small `b`, and zero-density measurement.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factor, is_prime};
use crate::exactalg::{Rational, Ring};
use crate::heckeops::{eta_modularity_check, hecke_tp, sturm_bound, HeckeError, SpaceDescriptor};
use crate::qseries::{apply_eta_factor, eta_factor, EtaQuotient, QSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LacError {
    #[error("{p} is not a prime coprime to the level {level}")]
    BadPrime { p: u64, level: u64 },
    #[error("b must be positive")]
    ZeroB,
    #[error("coefficient table ends at b({len}); b({needed}) is needed to conclude")]
    Inconclusive { needed: usize, len: usize },
    #[error("series known below q^{truncation}, density needs q^{x}")]
    InsufficientTruncation { x: usize, truncation: usize },
    #[error("zero-density progression has modulus 0")]
    ZeroModulus,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Eligibility for the classification: `23 ∤ b` and `p^2 ∤ b` for every prime `p >= 5`.
/// Powers of 2 and 3 are unrestricted.
pub fn eligible(b: u64) -> bool {
    b >= 1 && exclusion_reason(b).is_none()
}

fn exclusion_reason(b: u64) -> Option<String> {
    if b.is_multiple_of(23) {
        return Some("23 | b".into());
    }
    square_reason(b)
}

fn square_reason(b: u64) -> Option<String> {
    factor(b).into_iter().find(|&(p, e)| p >= 5 && e >= 2).map(|(p, _)| format!("{p}^2 | b"))
}

/// Fundamental discriminants `D < 0` with `|D|` dividing `144 b`.
pub fn divisor_discriminants(b: u64) -> Vec<i64> {
    let level = 144 * b;
    let mut out = Vec::new();
    for d in 3..=level {
        if level.is_multiple_of(d) && is_fundamental(-(d as i64)) {
            out.push(-(d as i64));
        }
    }
    out
}

fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: i64| factor(n.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// CM fields a newform component of `f_b(12z)` can have. A prime `p >= 5`
/// dividing `D` would have to divide the conductor norm as well, forcing
/// `p^2 | 144 b`, which eligibility rules out.
pub fn candidate_cm_fields(b: u64) -> Vec<i64> {
    let level = 144 * b;
    divisor_discriminants(b)
        .into_iter()
        .filter(|&d| factor(d.unsigned_abs()).into_iter().all(|(p, _)| p <= 3 || level.is_multiple_of(p * p)))
        .collect()
}

/// Coefficients `b(m)` of `prod (1 - q^n)^2` for `1 <= m <= len`, with `b(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    values: Vec<i64>,
}

impl CoefficientTable {
    /// From `b(1), b(2), ...`.
    pub fn new(values: Vec<i64>) -> Self {
        CoefficientTable { values }
    }

    /// Computed directly from the pentagonal expansion.
    pub fn computed(len: usize) -> Self {
        let s = eta_factor::<i64>(&(), 1, 2, len + 1);
        CoefficientTable { values: (1..=len).map(|m| *s.coeff(m).expect("within truncation")).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Option<i64> {
        if m == 0 {
            Some(1)
        } else {
            self.values.get(m - 1).copied()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// `b(m) != 0` for the table index, confirmed by the full convolution.
    TableRule,
    /// Full convolution only; the table entry at the index is zero or its
    /// candidate failed confirmation.
    Convolution,
}

/// `n` with `c(n) = a(23 n) != 0` for `T_23 f_b(12z) = sum c(n) q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    /// `m = (23 n - (1 + b)) / 12`.
    pub table_index: usize,
    pub table_value: i64,
    /// `a(23 n)`, from `sum_k b(k) b(m - b k)`.
    pub value: i64,
    pub source: WitnessSource,
}

/// Coefficient of `q^m` in `prod (1 - q^n)^2 (1 - q^{bn})^2`, i.e. `a(12 m + 1 + b)`.
fn convolved(table: &CoefficientTable, b: u64, m: usize) -> Result<i64, LacError> {
    let len = table.len();
    let get = |k: usize| table.get(k).ok_or(LacError::Inconclusive { needed: k, len });
    let b = b as usize;
    let mut acc = 0i64;
    for k in 0..=m / b {
        acc += get(k)? * get(m - b * k)?;
    }
    Ok(acc)
}

/// Indices `n` with `1 + b <= n < 12 b`, `23 ∤ n` and `n = -(1 + b) mod 12`.
fn qualifying(b: u64) -> impl Iterator<Item = (u64, usize)> {
    (1 + b..12 * b)
        .filter(move |&n| n % 23 != 0 && (n + 1 + b).is_multiple_of(12))
        .map(move |n| (n, ((23 * n - (1 + b)) / 12) as usize))
}

/// The smallest qualifying `n` whose table entry `b(m)` is nonzero and whose
/// true coefficient `a(23 n)` is nonzero; failing that, the smallest qualifying
/// `n` with `a(23 n) != 0`. `Ok(None)` means every qualifying `n` was checked
/// and none works, `Inconclusive` that the table ran out first.
pub fn witness_search(b: u64, table: &CoefficientTable) -> Result<Option<Witness>, LacError> {
    if b == 0 {
        return Err(LacError::ZeroB);
    }
    let len = table.len();
    for (n, m) in qualifying(b) {
        let Some(tv) = table.get(m) else { break };
        if tv == 0 {
            continue;
        }
        let Ok(value) = convolved(table, b, m) else { break };
        if value != 0 {
            return Ok(Some(Witness { n, table_index: m, table_value: tv, value, source: WitnessSource::TableRule }));
        }
    }
    for (n, m) in qualifying(b) {
        if m > len {
            return Err(LacError::Inconclusive { needed: m, len });
        }
        let value = convolved(table, b, m)?;
        if value != 0 {
            let table_value = table.get(m).expect("m <= len");
            return Ok(Some(Witness { n, table_index: m, table_value, value, source: WitnessSource::Convolution }));
        }
    }
    Ok(None)
}

/// `f_b(12 z) = q^{1+b} prod (1 - q^{12 n})^2 (1 - q^{12 b n})^2` known below `q^t`,
/// expanded in `Q = q^12` and spread out afterwards.
pub fn expand_fb12(b: u64, t: usize) -> QSeries<i64> {
    let s = 1 + b as usize;
    if t <= s {
        return QSeries::zero(&(), t);
    }
    let tq = (t - s).div_ceil(12);
    let mut g = QSeries::one(&(), tq);
    apply_eta_factor(&mut g, 1, 2);
    apply_eta_factor(&mut g, b as usize, 2);
    g.rescale(12).shift(s).truncate(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Start at `q^4096` and double until a nonzero `T_p` coefficient appears
    /// or the Sturm requirement is met.
    Adaptive,
    /// Expand straight to the Sturm requirement.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// `c(n) = value` is a nonzero coefficient of `T_p f_b(12z)`.
    Witness {
        prime: u64,
        n: u64,
        value: i64,
    },
    /// `T_p` annihilates `f_b(12z)` through the Sturm bound.
    HeckeVanishing {
        prime: u64,
        bound: u64,
    },
    Excluded {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanVerdict {
    pub b: u64,
    pub lacunary: bool,
    pub evidence: Evidence,
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.evidence {
            Evidence::Witness { prime, n, value } => {
                write!(f, "b={:<4} non-lacunary  T_{prime} c({n}) = {value}", self.b)
            }
            Evidence::HeckeVanishing { prime, bound } => {
                write!(f, "b={:<4} lacunary      T_{prime} f = 0 through n <= {bound}", self.b)
            }
            Evidence::Excluded { reason } => write!(f, "b={:<4} excluded      {reason}", self.b),
        }
    }
}

const ADAPTIVE_START: usize = 4096;

/// Tests whether `T_p f_b(12z)` vanishes through `sturm_bound(2, 144 b)`.
pub fn hecke_vanishing_test(b: u64, p: u64, mode: SweepMode) -> Result<ScanVerdict, LacError> {
    if b == 0 {
        return Err(LacError::ZeroB);
    }
    let level = 144 * b;
    if !is_prime(p) || level.is_multiple_of(p) {
        return Err(LacError::BadPrime { p, level });
    }
    let report = eta_modularity_check(&EtaQuotient::f_b(b, 12), level)?;
    let space = SpaceDescriptor::new(2, level, report.character);
    let bound = sturm_bound(2, level);
    let need = p as usize * bound as usize + 1;
    let mut t = match mode {
        SweepMode::Adaptive => ADAPTIVE_START.min(need),
        SweepMode::Full => need,
    };
    loop {
        let img = hecke_tp(&expand_fb12(b, t), p, &space)?;
        let upto = (bound as usize).min(img.truncation() - 1);
        if let Some((n, &value)) = img.nonzero_terms().find(|&(n, _)| n <= upto) {
            let evidence = Evidence::Witness { prime: p, n: n as u64, value };
            return Ok(ScanVerdict { b, lacunary: false, evidence });
        }
        if t >= need {
            return Ok(ScanVerdict { b, lacunary: true, evidence: Evidence::HeckeVanishing { prime: p, bound } });
        }
        t = (2 * t).min(need);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub b_max: u64,
    /// Sweep prime; defaults to 23, or 47 for `23 | b`.
    pub prime: Option<u64>,
    /// Sweep `23 | b` with `T_47` instead of excluding it. Not validated
    /// against any classification.
    pub include_23: bool,
    pub mode: SweepMode,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

impl ScanOptions {
    pub fn new(b_max: u64) -> Self {
        ScanOptions { b_max, prime: None, include_23: false, mode: SweepMode::Adaptive, jobs: 0 }
    }
}

fn verdict_for(b: u64, opts: &ScanOptions) -> Result<ScanVerdict, LacError> {
    let excluded = |reason: String| ScanVerdict { b, lacunary: false, evidence: Evidence::Excluded { reason } };
    let multiple_of_23 = b.is_multiple_of(23);
    if let Some(reason) = square_reason(b) {
        return Ok(excluded(reason));
    }
    if multiple_of_23 && !opts.include_23 {
        return Ok(excluded("23 | b".into()));
    }
    let p = opts.prime.unwrap_or(if multiple_of_23 { 47 } else { 23 });
    hecke_vanishing_test(b, p, opts.mode)
}

/// Verdicts for every `1 <= b <= b_max`, in order; ineligible `b` are
/// reported as excluded.
pub fn full_scan(opts: &ScanOptions) -> Result<Vec<ScanVerdict>, LacError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| LacError::ThreadPool(e.to_string()))?;
    pool.install(|| (1..=opts.b_max).into_par_iter().map(|b| verdict_for(b, opts)).collect())
}

/// The `b` with a lacunary verdict.
pub fn lacunary_set(verdicts: &[ScanVerdict]) -> Vec<u64> {
    verdicts.iter().filter(|v| v.lacunary).map(|v| v.b).collect()
}

/// `"{1,2,3}"`.
pub fn format_set(bs: &[u64]) -> String {
    let inner: Vec<String> = bs.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DensityMode {
    /// Every `0 <= n <= X`.
    All,
    /// Only `n = residue mod modulus`.
    Progression { modulus: usize, residue: usize },
}

impl DensityMode {
    /// The progression `n = 1 + b mod 12` carrying the support of `f_b(12z)`.
    pub fn support_of_fb12(b: u64) -> Self {
        DensityMode::Progression { modulus: 12, residue: ((1 + b) % 12) as usize }
    }
}

/// The unique class mod `m` holding every nonzero coefficient, if there is one.
pub fn support_progression<R: Ring>(f: &QSeries<R>, m: usize) -> Option<DensityMode> {
    let res = f.support_residues(m);
    (res.len() == 1).then(|| DensityMode::Progression { modulus: m, residue: *res.iter().next().expect("one residue") })
}

/// `#{n <= X : a(n) = 0} / #{n <= X}` over the chosen index set.
pub fn zero_density<R: Ring>(f: &QSeries<R>, x: usize, mode: DensityMode) -> Result<Rational, LacError> {
    if f.truncation() <= x {
        return Err(LacError::InsufficientTruncation { x, truncation: f.truncation() });
    }
    let (modulus, residue) = match mode {
        DensityMode::All => (1, 0),
        DensityMode::Progression { modulus: 0, .. } => return Err(LacError::ZeroModulus),
        DensityMode::Progression { modulus, residue } => (modulus, residue % modulus),
    };
    let (mut total, mut zeros) = (0i64, 0i64);
    for n in (residue..=x).step_by(modulus) {
        total += 1;
        if f.coeff(n).expect("within truncation").is_zero() {
            zeros += 1;
        }
    }
    if total == 0 {
        return Ok(Rational::one());
    }
    Ok(Rational::new(zeros, total).expect("nonzero total"))
}
