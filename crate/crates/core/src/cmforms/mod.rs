//! CM forms `sum_a c(a) q^{delta N(a)}`, their linear combinations, and the
//! five eta-product identities they satisfy.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::factor;
use crate::exactalg::{QuadField, Rational, Ring, TowerElement, TowerParam};
use crate::heckechars::{t_scale, CharError, CharValue, CharacterCase, CharacterSpec, Sign};
use crate::heckeops::sturm_bound;
use crate::qseries::{EtaQuotient, QSeries, SeriesError};
use crate::quadideals::{epsilon, ideals_of_norm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("coefficient {n} of the combination is not rational: {value}")]
    NonRational { n: usize, value: String },
    #[error("{n} shares a prime with the level {level}")]
    BadPrime { n: u64, level: u64 },
    #[error("combination scalars carry different tower parameters")]
    ParamMismatch,
    #[error("unknown identity case {0}; expected 1..=5")]
    UnknownCase(u8),
}

/// `phi_{K,c,delta}` of weight 2.
#[derive(Clone, Debug)]
pub struct CmFormSpec {
    character: Arc<CharacterSpec>,
    delta: u64,
}

impl CmFormSpec {
    pub fn new(character: CharacterSpec, delta: u64) -> Self {
        assert!(delta >= 1, "delta must be positive");
        CmFormSpec { character: Arc::new(character), delta }
    }

    pub fn from_case(case: CharacterCase) -> Result<Self, CmError> {
        Ok(Self::new(CharacterSpec::new(case)?, 1))
    }

    pub fn character(&self) -> &CharacterSpec {
        &self.character
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn weight(&self) -> u32 {
        2
    }

    /// `delta |D| N(f_c)`.
    pub fn level(&self) -> u64 {
        self.delta * self.character.level()
    }

    /// `sum_{N(a) = m} c(a)` over ideals coprime to the conductor, in the native field.
    fn ideal_sum(&self, m: u64) -> Result<Option<CharValue>, CmError> {
        let ch = &*self.character;
        let mut acc: Option<CharValue> = None;
        for i in ideals_of_norm(ch.field(), m) {
            if !i.is_coprime(ch.conductor()).map_err(CharError::from)? {
                continue;
            }
            let v = ch.evaluate(&i)?;
            acc = Some(match acc {
                None => v,
                Some(a) => a.checked_add(&v)?,
            });
        }
        Ok(acc)
    }

    fn ideal_sum_in(&self, m: u64, param: &TowerParam) -> Result<TowerElement, CmError> {
        match self.ideal_sum(m)? {
            None => Ok(TowerElement::zero(param)),
            Some(v) => Ok(v.to_tower(param)?),
        }
    }

    /// Coefficient `a(p)` of the form at a prime, as a tower element.
    pub fn coefficient_at_prime(&self, p: u64, param: &TowerParam) -> Result<TowerElement, CmError> {
        if !p.is_multiple_of(self.delta) {
            return Ok(TowerElement::zero(param));
        }
        self.ideal_sum_in(p / self.delta, param)
    }

    /// Nebentypus value `omega_c(p) epsilon_K(p)` at a good prime.
    pub fn nebentypus(&self, p: u64, param: &TowerParam) -> Result<TowerElement, CmError> {
        let w = self.character.dirichlet_omega(p as i64)?;
        let e = epsilon(self.character.field(), p as i64);
        Ok(w.scale(&Rational::from(e as i64)).to_tower(param)?)
    }
}

/// `sum_a c(a) q^{delta N(a)}` known below `q^t`, in the character's own tower.
pub fn cm_expansion(spec: &CmFormSpec, t: usize) -> Result<QSeries<TowerElement>, CmError> {
    cm_expansion_in(spec, t, spec.character.tower_param())
}

/// As [`cm_expansion`], with coefficients placed in the tower over `param`.
pub fn cm_expansion_in(spec: &CmFormSpec, t: usize, param: &TowerParam) -> Result<QSeries<TowerElement>, CmError> {
    let d = spec.delta as usize;
    let mut terms = Vec::new();
    for n in (d..t).step_by(d) {
        let c = spec.ideal_sum_in((n / d) as u64, param)?;
        if !c.is_zero() {
            terms.push((n, c));
        }
    }
    Ok(QSeries::from_terms(param, t, terms))
}

/// Tower-scalar linear combination of CM forms.
#[derive(Clone, Debug)]
pub struct Combination {
    terms: Vec<(TowerElement, CmFormSpec)>,
    param: TowerParam,
}

impl Combination {
    /// The tower parameter comes from any Q(sqrt(-6)) character among the
    /// terms, else it is the unit parameter.
    pub fn new(terms: Vec<(TowerElement, CmFormSpec)>) -> Result<Self, CmError> {
        let param = terms
            .iter()
            .find(|(_, f)| f.character.field() == QuadField::SqrtMinus6)
            .map(|(_, f)| f.character.tower_param().clone())
            .unwrap_or_else(TowerParam::unit);
        let mut rebased = Vec::with_capacity(terms.len());
        for (c, f) in terms {
            if f.character.field() == QuadField::SqrtMinus6 && f.character.tower_param() != &param {
                return Err(CmError::ParamMismatch);
            }
            let c = CharValue::Tower(c).to_tower(&param).map_err(|_| CmError::ParamMismatch)?;
            rebased.push((c, f));
        }
        Ok(Combination { terms: rebased, param })
    }

    /// Rational-scalar convenience constructor.
    pub fn rational(terms: Vec<(Rational, CmFormSpec)>) -> Result<Self, CmError> {
        let param = terms
            .iter()
            .find(|(_, f)| f.character.field() == QuadField::SqrtMinus6)
            .map(|(_, f)| f.character.tower_param().clone())
            .unwrap_or_else(TowerParam::unit);
        Self::new(terms.into_iter().map(|(c, f)| (TowerElement::from_rational(c, &param), f)).collect())
    }

    pub fn terms(&self) -> &[(TowerElement, CmFormSpec)] {
        &self.terms
    }

    pub fn param(&self) -> &TowerParam {
        &self.param
    }

    /// Largest level among the terms.
    pub fn level(&self) -> u64 {
        self.terms.iter().map(|(_, f)| f.level()).max().unwrap_or(1)
    }

    /// Tower-valued sum, before the rationality check.
    pub fn expand_tower(&self, t: usize) -> Result<QSeries<TowerElement>, CmError> {
        let mut acc = QSeries::zero(&self.param, t);
        for (c, f) in &self.terms {
            let s = cm_expansion_in(f, t, &self.param)?.scale(c)?;
            acc = acc.add(&s)?;
        }
        Ok(acc)
    }
}

/// The combination as a rational series; any coefficient outside Q is an error.
pub fn combine(c: &Combination, t: usize) -> Result<QSeries<Rational>, CmError> {
    let s = c.expand_tower(t)?;
    let mut coeffs = Vec::with_capacity(s.coeffs().len());
    for (k, x) in s.coeffs().iter().enumerate() {
        match x.to_rational() {
            Some(q) => coeffs.push(q),
            None => return Err(CmError::NonRational { n: s.valuation() + k, value: x.to_string() }),
        }
    }
    Ok(QSeries::new((), s.valuation(), s.truncation(), coeffs)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub equal: bool,
    pub bound: usize,
    pub first_mismatch: Option<usize>,
}

/// Exact comparison of `target` with the combination for every `n <= bound`.
pub fn verify_identity<R: Ring>(
    target: &QSeries<R>,
    combo: &Combination,
    bound: usize,
    to_rational: impl Fn(&R) -> Rational,
) -> Result<IdentityReport, CmError> {
    if target.truncation() <= bound {
        return Err(SeriesError::InsufficientTruncation { needed: bound + 1, available: target.truncation() }.into());
    }
    let rhs = combine(combo, bound + 1)?;
    let first_mismatch =
        (0..=bound).find(|&n| to_rational(target.coeff(n).expect("checked")) != *rhs.coeff(n).expect("checked"));
    Ok(IdentityReport { equal: first_mismatch.is_none(), bound, first_mismatch })
}

/// Coefficient of the form at `n`, built from prime coefficients through
/// `a(p^r) = a(p) a(p^{r-1}) - chi(p) p a(p^{r-2})`.
pub fn form_coefficient_via_multiplicativity(
    form: &CmFormSpec,
    n: u64,
    param: &TowerParam,
) -> Result<TowerElement, CmError> {
    let level = form.level();
    if crate::arith::gcd(n as i64, level as i64) != 1 {
        return Err(CmError::BadPrime { n, level });
    }
    let mut acc = TowerElement::one(param);
    for (p, e) in factor(n) {
        let ap = form.coefficient_at_prime(p, param)?;
        let chi_p = form.nebentypus(p, param)?.scale(&Rational::from(p as i64));
        let mut prev = TowerElement::one(param);
        let mut cur = ap.clone();
        for _ in 1..e {
            let next = ap.mul_ref(&cur).sub_ref(&chi_p.mul_ref(&prev));
            prev = cur;
            cur = next;
        }
        acc = acc.mul_ref(&cur);
    }
    Ok(acc)
}

/// The combination's coefficient at `n` through multiplicativity of each form.
pub fn coefficient_via_multiplicativity(combo: &Combination, n: u64) -> Result<Rational, CmError> {
    let mut acc = TowerElement::zero(&combo.param);
    for (c, f) in &combo.terms {
        let a = form_coefficient_via_multiplicativity(f, n, &combo.param)?;
        acc = acc.add_ref(&c.mul_ref(&a));
    }
    acc.to_rational().ok_or_else(|| CmError::NonRational { n: n as usize, value: acc.to_string() })
}

/// One of the five identities `eta-product = combination of CM forms`.
#[derive(Clone, Debug)]
pub struct CmIdentity {
    pub case: u8,
    pub target: EtaQuotient,
    pub level: u64,
    pub combination: Combination,
    /// Named forms, in the column order of the reference tables.
    pub forms: BTreeMap<String, CmFormSpec>,
}

impl CmIdentity {
    pub fn sturm_bound(&self) -> u64 {
        sturm_bound(2, self.level)
    }

    pub fn target_series(&self, t: usize) -> Result<QSeries<i64>, CmError> {
        Ok(self.target.expand(&(), t)?)
    }

    /// Checks the identity through the Sturm bound of its level.
    pub fn verify(&self) -> Result<IdentityReport, CmError> {
        let b = self.sturm_bound() as usize;
        verify_identity(&self.target_series(b + 1)?, &self.combination, b, |x| Rational::from(*x))
    }
}

const CASE5_FORMS: [(&str, CharacterCase); 6] = [
    ("603", CharacterCase::Case5Gauss { r: 6, s: 0, t: 3 }),
    ("203", CharacterCase::Case5Gauss { r: 2, s: 0, t: 3 }),
    ("130", CharacterCase::Case5Real { r: 1, s: 3, t: 0, primed: false }),
    ("130'", CharacterCase::Case5Real { r: 1, s: 3, t: 0, primed: true }),
    ("310", CharacterCase::Case5Real { r: 3, s: 1, t: 0, primed: false }),
    ("310'", CharacterCase::Case5Real { r: 3, s: 1, t: 0, primed: true }),
];

/// Builds identity `case` in `1..=5`.
pub fn identity(case: u8) -> Result<CmIdentity, CmError> {
    let single = |label: &str, cc: CharacterCase, target: &str, level: u64| -> Result<CmIdentity, CmError> {
        let f = CmFormSpec::from_case(cc)?;
        Ok(CmIdentity {
            case,
            target: target.parse().expect("static eta spec"),
            level,
            combination: Combination::rational(vec![(Rational::one(), f.clone())])?,
            forms: BTreeMap::from([(label.to_string(), f)]),
        })
    };
    match case {
        1 => single("case1", CharacterCase::Case1, "eta(6z)^4", 36),
        2 => single("case2", CharacterCase::Case2, "eta(4z)^2*eta(8z)^2", 32),
        3 => single("case3", CharacterCase::Case3, "eta(3z)^2*eta(9z)^2", 27),
        4 => {
            let plus = CmFormSpec::from_case(CharacterCase::Case4(Sign::Plus))?;
            let minus = CmFormSpec::from_case(CharacterCase::Case4(Sign::Minus))?;
            let eighth = Rational::new(1, 8).expect("nonzero");
            Ok(CmIdentity {
                case,
                target: EtaQuotient::f_b(4, 12),
                level: 576,
                combination: Combination::rational(vec![(eighth.clone(), minus.clone()), (-eighth, plus.clone())])?,
                forms: BTreeMap::from([("+".to_string(), plus), ("-".to_string(), minus)]),
            })
        }
        5 => {
            let mut forms = BTreeMap::new();
            for (label, cc) in CASE5_FORMS {
                forms.insert(label.to_string(), CmFormSpec::from_case(cc)?);
            }
            let param = forms["130"].character().tower_param().clone();
            let sixteenth = Rational::new(1, 16).expect("nonzero");
            let r = |q: &Rational| TowerElement::from_rational(q.clone(), &param);
            let t16 = t_scale(&param).scale(&sixteenth);
            let terms = vec![
                (r(&sixteenth), forms["603"].clone()),
                (r(&-&sixteenth), forms["203"].clone()),
                (t16.neg(), forms["130"].clone()),
                (t16.clone(), forms["130'"].clone()),
                (t16.neg(), forms["310"].clone()),
                (t16, forms["310'"].clone()),
            ];
            Ok(CmIdentity {
                case,
                target: EtaQuotient::f_b(16, 12),
                level: 2304,
                combination: Combination::new(terms)?,
                forms,
            })
        }
        _ => Err(CmError::UnknownCase(case)),
    }
}
