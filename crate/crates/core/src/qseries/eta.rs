use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{QSeries, SeriesError};
use crate::exactalg::{Rational, Ring};

/// Exponents of `prod_{n>=1} (1 - q^n)` below `t`, as `(exponent, negative?)`,
/// ascending. These are the generalized pentagonal numbers `k(3k-1)/2` with
/// sign `(-1)^k`.
pub fn pentagonal_terms(t: usize) -> Vec<(usize, bool)> {
    let mut out = vec![(0, false)];
    for k in 1usize.. {
        let a = k * (3 * k - 1) / 2;
        if a >= t {
            break;
        }
        let neg = k % 2 == 1;
        out.push((a, neg));
        let b = k * (3 * k + 1) / 2;
        if b < t {
            out.push((b, neg));
        }
    }
    out
}

/// Expansion of `prod_{n>=1} (1 - q^{delta n})^r` known for exponents below `t`.
///
/// Positive powers multiply by the sparse pentagonal factor `r` times, negative
/// powers divide by it; both passes are linear in `t` times the factor's
/// `O(sqrt(t / delta))` terms.
pub fn eta_factor<R: Ring>(ctx: &R::Context, delta: usize, r: i64, t: usize) -> QSeries<R> {
    assert!(delta >= 1, "eta factor needs delta >= 1");
    let mut f = QSeries::one(ctx, t);
    apply_eta_factor(&mut f, delta, r);
    f
}

pub(crate) fn apply_eta_factor<R: Ring>(f: &mut QSeries<R>, delta: usize, r: i64) {
    let span = f.truncation() - f.valuation();
    let terms: Vec<(usize, bool)> = pentagonal_terms(span.div_ceil(delta).max(1))
        .into_iter()
        .map(|(e, s)| (e * delta, s))
        .filter(|&(e, _)| e < span.max(1))
        .collect();
    for _ in 0..r.unsigned_abs() {
        if r > 0 {
            f.mul_signed_sparse(&terms);
        } else {
            f.div_signed_sparse(&terms);
        }
    }
}

/// Eta quotient `prod eta(delta z)^{r_delta}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotient {
    /// Builds the quotient, merging repeated `delta` and dropping zero exponents.
    pub fn new(factors: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, SeriesError> {
        let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
        for (d, r) in factors {
            if d == 0 {
                return Err(SeriesError::Parse("eta factor needs delta >= 1".into()));
            }
            *merged.entry(d).or_default() += r;
        }
        Ok(EtaQuotient { factors: merged.into_iter().filter(|&(_, r)| r != 0).collect() })
    }

    /// `eta(m z)^2 eta(m b z)^2`, the family studied throughout the crate.
    pub fn f_b(b: u64, m: u64) -> Self {
        Self::new([(m, 2), (m * b, 2)]).expect("positive deltas")
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// `sum delta r_delta`, i.e. 24 times the valuation.
    pub fn valuation_numerator(&self) -> i64 {
        self.factors.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// `s = sum delta r_delta / 24`.
    pub fn valuation(&self) -> Rational {
        Rational::new(self.valuation_numerator(), 24).expect("nonzero denominator")
    }

    /// The valuation as an exponent, if it is a nonnegative integer.
    pub fn integral_valuation(&self) -> Result<usize, SeriesError> {
        let n = self.valuation_numerator();
        if n % 24 != 0 {
            return Err(SeriesError::NonIntegralValuation(self.valuation()));
        }
        usize::try_from(n / 24).map_err(|_| SeriesError::NegativeValuation(n / 24))
    }

    /// `k = sum r_delta / 2`.
    pub fn weight(&self) -> Rational {
        Rational::new(self.factors.iter().map(|&(_, r)| r).sum::<i64>(), 2).expect("nonzero denominator")
    }

    /// Expansion known for exponents below `t`.
    pub fn expand<R: Ring>(&self, ctx: &R::Context, t: usize) -> Result<QSeries<R>, SeriesError> {
        eta_quotient_expand(self, ctx, t)
    }
}

/// `q^s prod_delta prod_n (1 - q^{delta n})^{r_delta}` known below `t`.
pub fn eta_quotient_expand<R: Ring>(spec: &EtaQuotient, ctx: &R::Context, t: usize) -> Result<QSeries<R>, SeriesError> {
    let s = spec.integral_valuation()?;
    if t <= s {
        return Ok(QSeries::zero(ctx, t));
    }
    let mut f = QSeries::one(ctx, t - s);
    for &(d, r) in &spec.factors {
        apply_eta_factor(&mut f, d as usize, r);
    }
    Ok(f.shift(s))
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, &(d, r)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if d == 1 {
                write!(f, "eta(z)^{r}")?;
            } else {
                write!(f, "eta({d}z)^{r}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = SeriesError;

    /// Grammar: `eta(<m>z)^<r> * ...`; `<m>` and `^<r>` may be omitted, and
    /// the exponent may be written `^-2` or `^(-2)`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| SeriesError::Parse(format!("{why} in {s:?}"));
        if compact.is_empty() {
            return Err(bad("empty eta spec"));
        }
        let mut factors = Vec::new();
        for part in compact.split('*') {
            let rest = part.strip_prefix("eta(").ok_or_else(|| bad("expected 'eta('"))?;
            let (inner, tail) = rest.split_once(')').ok_or_else(|| bad("unclosed parenthesis"))?;
            let m = inner.strip_suffix('z').ok_or_else(|| bad("expected '<m>z'"))?;
            let delta: u64 = if m.is_empty() { 1 } else { m.parse().map_err(|_| bad("bad multiplier"))? };
            if delta == 0 {
                return Err(bad("multiplier must be positive"));
            }
            let r: i64 = match tail {
                "" => 1,
                t => {
                    let e = t.strip_prefix('^').ok_or_else(|| bad("expected '^'"))?;
                    let e = e.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(e);
                    e.parse().map_err(|_| bad("bad exponent"))?
                }
            };
            factors.push((delta, r));
        }
        EtaQuotient::new(factors)
    }
}
