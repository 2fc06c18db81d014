//! The Hecke characters behind the CM forms for `eta(z)^2 eta(bz)^2`:
//! unit normalization, residue exponents, root-of-unity prefactors, and the
//! square-root branch on the non-principal class of Q(sqrt(-6)).

mod residues;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{AlgebraError, Biquad, QuadElement, QuadField, Rational, TowerElement, TowerParam};
use crate::quadideals::{classify, IdealClass, IdealError, QuadIdeal};
use residues::ResidueTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("ideal lives in {got}, character is defined on {want}")]
    FieldMismatch { want: QuadField, got: QuadField },
    #[error("ideal {0} is not coprime to the conductor")]
    NotCoprime(QuadIdeal),
    #[error("{0} is not coprime to the conductor norm")]
    NotCoprimeInteger(i64),
    #[error("{count} associates of {g} satisfy the normalization (expected exactly one)")]
    Normalization { g: String, count: usize },
    #[error("residue of {0} is not in the generated group")]
    Decomposition(String),
    #[error("residue tables do not cover the unit group: {0}")]
    IncompleteTable(String),
    #[error("odd eighth-root index {0} needs sqrt(2), which is not adjoined")]
    OddZetaIndex(u32),
    #[error("ideal {0} * alpha is not principal")]
    NotPrincipal(QuadIdeal),
    #[error("character value {0} does not lie in Q(i, sqrt(-6))")]
    NotEmbeddable(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// The six character families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CharacterCase {
    /// Q(sqrt(-3)), conductor (2 sqrt(-3)): `c((a)) = a` for `a = 1 mod f`.
    Case1,
    /// Q(i), conductor (2(1+i)): `c((a)) = a` for primary `a`.
    Case2,
    /// Q(sqrt(-3)), conductor (3): `c((a)) = -a` for `a = 2 mod 3`.
    Case3,
    /// Q(i), conductor (12): `c((a)) = (+-i)^u (-1)^v a`.
    Case4(Sign),
    /// Q(i), conductor (24): `c((a)) = zeta8^{ru} i^{sv} i^{tw} a`.
    Case5Gauss { r: u32, s: u32, t: u32 },
    /// Q(sqrt(-6)), conductor (4 sqrt(-6)): `c((a)) = i^{ru} i^{sv} (-1)^{tw} a`.
    Case5Real { r: u32, s: u32, t: u32, primed: bool },
}

impl CharacterCase {
    pub fn field(&self) -> QuadField {
        match self {
            CharacterCase::Case1 | CharacterCase::Case3 => QuadField::Eisenstein,
            CharacterCase::Case2 | CharacterCase::Case4(_) | CharacterCase::Case5Gauss { .. } => QuadField::Gaussian,
            CharacterCase::Case5Real { .. } => QuadField::SqrtMinus6,
        }
    }

    /// Generators of the conductor ideal.
    fn conductor_gens(&self) -> &'static [(i64, i64)] {
        match self {
            // 2 sqrt(-3) = 2 + 4 omega
            CharacterCase::Case1 => &[(2, 4)],
            CharacterCase::Case2 => &[(2, 2)],
            CharacterCase::Case3 => &[(3, 0)],
            CharacterCase::Case4(_) => &[(12, 0)],
            CharacterCase::Case5Gauss { .. } => &[(24, 0)],
            CharacterCase::Case5Real { .. } => &[(0, 4)],
        }
    }

    pub fn label(&self) -> String {
        match *self {
            CharacterCase::Case1 => "case1".into(),
            CharacterCase::Case2 => "case2".into(),
            CharacterCase::Case3 => "case3".into(),
            CharacterCase::Case4(Sign::Plus) => "case4+".into(),
            CharacterCase::Case4(Sign::Minus) => "case4-".into(),
            CharacterCase::Case5Gauss { r, s, t } => format!("c{r}{s}{t}"),
            CharacterCase::Case5Real { r, s, t, primed } => format!("c{r}{s}{t}{}", if primed { "'" } else { "" }),
        }
    }
}

impl fmt::Display for CharacterCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A character value in its native field. Eisenstein values are kept in
/// Q(omega), which does not embed into the tower; everything else lives in
/// the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum CharValue {
    Quad(QuadElement),
    Tower(TowerElement),
}

impl CharValue {
    pub fn to_tower(&self, param: &TowerParam) -> Result<TowerElement, CharError> {
        match self {
            CharValue::Quad(q) => {
                TowerElement::from_quad(q, param).map_err(|_| CharError::NotEmbeddable(q.to_string()))
            }
            CharValue::Tower(t) if t.param() == param => Ok(t.clone()),
            CharValue::Tower(t) if t.hi().is_zero() => Ok(TowerElement::from_biquad(t.lo().clone(), param)),
            CharValue::Tower(_) => Err(AlgebraError::TowerParamMismatch.into()),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            CharValue::Quad(q) => q.is_rational().then(|| q.a().clone()),
            CharValue::Tower(t) => t.to_rational(),
        }
    }

    pub fn checked_mul(&self, o: &CharValue) -> Result<CharValue, CharError> {
        Ok(match (self, o) {
            (CharValue::Quad(a), CharValue::Quad(b)) => CharValue::Quad(a.checked_mul(b)?),
            (CharValue::Tower(a), CharValue::Tower(b)) => CharValue::Tower(a.checked_mul(b)?),
            (CharValue::Tower(a), b) | (b, CharValue::Tower(a)) => {
                CharValue::Tower(a.checked_mul(&b.to_tower(a.param())?)?)
            }
        })
    }

    pub fn checked_add(&self, o: &CharValue) -> Result<CharValue, CharError> {
        Ok(match (self, o) {
            (CharValue::Quad(a), CharValue::Quad(b)) => CharValue::Quad(a.checked_add(b)?),
            (CharValue::Tower(a), CharValue::Tower(b)) => CharValue::Tower(a.checked_add(b)?),
            (CharValue::Tower(a), b) | (b, CharValue::Tower(a)) => {
                CharValue::Tower(a.checked_add(&b.to_tower(a.param())?)?)
            }
        })
    }

    pub fn scale(&self, c: &Rational) -> CharValue {
        match self {
            CharValue::Quad(q) => CharValue::Quad(q.scale(c)),
            CharValue::Tower(t) => CharValue::Tower(t.scale(c)),
        }
    }

    /// Squared complex absolute value, exact where the value is quadratic.
    pub fn abs_squared(&self) -> f64 {
        match self {
            CharValue::Quad(q) => q.norm().to_f64(),
            CharValue::Tower(t) => t.abs_squared_approx(),
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Quad(q) => write!(f, "{q}"),
            CharValue::Tower(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug)]
enum Tables {
    None,
    /// dlog base (1 - i) mod 3, and the `{1, -1+2i}` split mod 4.
    Case4 {
        mod3: ResidueTable,
        mod4: ResidueTable,
    },
    /// dlog mod 3, and `(2+i)^v (4+i)^w` mod 8.
    Case5Gauss {
        mod3: ResidueTable,
        mod8: ResidueTable,
    },
    /// `(1+r)^u (1-r)^v 5^w` mod 4 sqrt(-6).
    Case5Real {
        group: ResidueTable,
    },
}

/// A fully determined character: conductor, residue tables, tower parameter
/// and, on Q(sqrt(-6)), the frozen value at the non-principal `alpha`.
#[derive(Clone, Debug)]
pub struct CharacterSpec {
    case: CharacterCase,
    field: QuadField,
    conductor: QuadIdeal,
    tables: Tables,
    param: TowerParam,
    alpha: Option<QuadIdeal>,
    branch: Option<TowerElement>,
}

fn gauss_mod3_table() -> ResidueTable {
    let k = QuadField::Gaussian;
    ResidueTable::build(k, QuadIdeal::principal(k, (3, 0)).expect("ideal"), &[((1, -1), 8)])
}

/// The norm-5 ideal `(5, 2 + sqrt(-6))` generating the class group of Q(sqrt(-6)).
pub fn alpha_ideal() -> QuadIdeal {
    QuadIdeal::generated_by(QuadField::SqrtMinus6, &[(5, 0), (2, 1)]).expect("ideal")
}

/// `sqrt(1 - 2 sqrt(-6)) / (6 - 2 sqrt(-6))` in the tower over `u = 1 - 2r`;
/// the scaling used for the Q(sqrt(-6)) columns of the case-5 tables.
pub fn t_scale(param: &TowerParam) -> TowerElement {
    let d = Biquad::from_ints([6, 0, -2, 0]).inverse().expect("nonzero");
    TowerElement::s(param).mul_biquad(&d)
}

impl CharacterSpec {
    pub fn new(case: CharacterCase) -> Result<Self, CharError> {
        let field = case.field();
        let conductor = QuadIdeal::generated_by(field, case.conductor_gens())?;
        let tables = match case {
            CharacterCase::Case1 | CharacterCase::Case2 | CharacterCase::Case3 => Tables::None,
            CharacterCase::Case4(_) => {
                let mod3 = gauss_mod3_table();
                let mod4 = ResidueTable::build(field, QuadIdeal::principal(field, (4, 0))?, &[((-1, 2), 2)]);
                if mod3.len() != 8 || mod4.len() != 2 {
                    return Err(CharError::IncompleteTable(format!("mod 3: {}, mod 4: {}", mod3.len(), mod4.len())));
                }
                Tables::Case4 { mod3, mod4 }
            }
            CharacterCase::Case5Gauss { r, .. } => {
                if r % 2 == 1 {
                    return Err(CharError::OddZetaIndex(r));
                }
                let mod3 = gauss_mod3_table();
                let mod8 =
                    ResidueTable::build(field, QuadIdeal::principal(field, (8, 0))?, &[((2, 1), 4), ((4, 1), 2)]);
                if mod3.len() != 8 || mod8.len() != 8 {
                    return Err(CharError::IncompleteTable(format!("mod 3: {}, mod 8: {}", mod3.len(), mod8.len())));
                }
                Tables::Case5Gauss { mod3, mod8 }
            }
            CharacterCase::Case5Real { .. } => {
                let group = ResidueTable::build(field, conductor, &[((1, 1), 4), ((1, -1), 4), ((5, 0), 2)]);
                // half of the 32 residues; -1 must fall in the other half
                if group.len() != 16 || group.contains((-1, 0)) {
                    return Err(CharError::IncompleteTable(format!("group of order {}", group.len())));
                }
                Tables::Case5Real { group }
            }
        };
        let mut spec =
            CharacterSpec { case, field, conductor, tables, param: TowerParam::unit(), alpha: None, branch: None };
        if let CharacterCase::Case5Real { primed, .. } = case {
            // u = c((-1 + 2 sqrt(-6))) = c(alpha)^2, since alpha^2 = (-1 + 2 sqrt(-6))
            let u = spec.principal_biquad(&QuadElement::from_ints(field, -1, 2))?;
            spec.param = TowerParam::new(u)?;
            let s = TowerElement::s(&spec.param);
            spec.branch = Some(if primed { s.neg() } else { s });
            spec.alpha = Some(alpha_ideal());
        }
        Ok(spec)
    }

    /// The seven characters used by the five CM identities.
    pub fn all_cases() -> Vec<CharacterCase> {
        vec![
            CharacterCase::Case1,
            CharacterCase::Case2,
            CharacterCase::Case3,
            CharacterCase::Case4(Sign::Plus),
            CharacterCase::Case4(Sign::Minus),
            CharacterCase::Case5Gauss { r: 6, s: 0, t: 3 },
            CharacterCase::Case5Gauss { r: 2, s: 0, t: 3 },
            CharacterCase::Case5Real { r: 1, s: 3, t: 0, primed: false },
            CharacterCase::Case5Real { r: 1, s: 3, t: 0, primed: true },
            CharacterCase::Case5Real { r: 3, s: 1, t: 0, primed: false },
            CharacterCase::Case5Real { r: 3, s: 1, t: 0, primed: true },
        ]
    }

    pub fn case(&self) -> CharacterCase {
        self.case
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn conductor(&self) -> &QuadIdeal {
        &self.conductor
    }

    /// Tower parameter `u = s^2`; the unit parameter unless the field is Q(sqrt(-6)).
    pub fn tower_param(&self) -> &TowerParam {
        &self.param
    }

    /// The value assigned to `c(alpha)` (Q(sqrt(-6)) only).
    pub fn branch(&self) -> Option<&TowerElement> {
        self.branch.as_ref()
    }

    /// Level `|D| N(f)` of the CM form with `delta = 1`.
    pub fn level(&self) -> u64 {
        (-self.field.discriminant()) as u64 * self.conductor.norm() as u64
    }

    /// The unique unit multiple of `g` satisfying the case's normalization.
    pub fn primary_representative(&self, g: &QuadElement) -> Result<QuadElement, CharError> {
        if g.field() != self.field {
            return Err(CharError::FieldMismatch { want: self.field, got: g.field() });
        }
        let c = g.to_int_coords().ok_or_else(|| CharError::Normalization { g: g.to_string(), count: 0 })?;
        let ok = |x: (i64, i64)| -> bool {
            let (a, b) = x;
            match (&self.case, &self.tables) {
                // a + b omega = 1 mod 2 and mod sqrt(-3) (where omega = 1)
                (CharacterCase::Case1, _) => a.rem_euclid(2) == 1 && b.rem_euclid(2) == 0 && (a + b).rem_euclid(3) == 1,
                (CharacterCase::Case3, _) => a.rem_euclid(3) == 2 && b.rem_euclid(3) == 0,
                (_, Tables::Case5Gauss { mod8, .. }) => mod8.contains(x),
                (_, Tables::Case5Real { group }) => group.contains(x),
                _ => primary_gaussian(a, b),
            }
        };
        let hits: Vec<(i64, i64)> =
            self.field.units().iter().map(|&u| self.field.mul_int(c, u)).filter(|&x| ok(x)).collect();
        match hits.as_slice() {
            [x] => Ok(QuadElement::from_ints(self.field, x.0, x.1)),
            _ => Err(CharError::Normalization { g: g.to_string(), count: hits.len() }),
        }
    }

    /// Residue exponents `(u, v, w)` of a normalized generator; zero where a
    /// case has no such index.
    pub fn exponents(&self, g: &QuadElement) -> Result<(u32, u32, u32), CharError> {
        let x = g.to_int_coords().ok_or_else(|| CharError::Decomposition(g.to_string()))?;
        let miss = || CharError::Decomposition(g.to_string());
        match &self.tables {
            Tables::None => Ok((0, 0, 0)),
            Tables::Case4 { mod3, mod4 } => {
                let u = mod3.lookup(x).ok_or_else(miss)?[0];
                let v = mod4.lookup(x).ok_or_else(miss)?[0];
                Ok((u, v, 0))
            }
            Tables::Case5Gauss { mod3, mod8 } => {
                let u = mod3.lookup(x).ok_or_else(miss)?[0];
                let [v, w, _] = mod8.lookup(x).ok_or_else(miss)?;
                Ok((u, v, w))
            }
            Tables::Case5Real { group } => {
                let [u, v, w] = group.lookup(x).ok_or_else(miss)?;
                Ok((u, v, w))
            }
        }
    }

    /// Power of `i` multiplying the normalized generator.
    fn i_exponent(&self, (u, v, w): (u32, u32, u32)) -> u32 {
        let e = match self.case {
            CharacterCase::Case4(Sign::Plus) => u + 2 * v,
            CharacterCase::Case4(Sign::Minus) => 3 * u + 2 * v,
            // zeta8^{ru} = i^{ru/2}; r is even by construction
            CharacterCase::Case5Gauss { r, s, t } => r * u / 2 + s * v + t * w,
            CharacterCase::Case5Real { r, s, t, .. } => r * u + s * v + 2 * t * w,
            _ => 0,
        };
        e % 4
    }

    /// Value on a principal ideal `(g)`, for fields embedding in Q(i, sqrt(-6)).
    fn principal_biquad(&self, g: &QuadElement) -> Result<Biquad, CharError> {
        let p = self.primary_representative(g)?;
        let e = self.i_exponent(self.exponents(&p)?);
        Ok(Biquad::i_pow(e as i64).mul(&Biquad::embed(&p)?))
    }

    fn principal_value(&self, g: &QuadElement) -> Result<CharValue, CharError> {
        match self.case {
            CharacterCase::Case1 => Ok(CharValue::Quad(self.primary_representative(g)?)),
            CharacterCase::Case3 => Ok(CharValue::Quad(self.primary_representative(g)?.neg())),
            CharacterCase::Case5Real { .. } => {
                Ok(CharValue::Tower(TowerElement::from_biquad(self.principal_biquad(g)?, &self.param)))
            }
            _ => {
                let p = self.primary_representative(g)?;
                let e = self.i_exponent(self.exponents(&p)?) as i64;
                let ip = QuadElement::from_ints(self.field, [1, 0, -1, 0][e as usize], [0, 1, 0, -1][e as usize]);
                Ok(CharValue::Quad(ip.checked_mul(&p)?))
            }
        }
    }

    fn check_ideal(&self, ideal: &QuadIdeal) -> Result<(), CharError> {
        if ideal.field() != self.field {
            return Err(CharError::FieldMismatch { want: self.field, got: ideal.field() });
        }
        if !ideal.is_coprime(&self.conductor)? {
            return Err(CharError::NotCoprime(*ideal));
        }
        Ok(())
    }

    /// `c(I)` for an ideal coprime to the conductor. A non-principal `I` is
    /// evaluated as `c(I alpha) / c(alpha)`.
    pub fn evaluate(&self, ideal: &QuadIdeal) -> Result<CharValue, CharError> {
        self.check_ideal(ideal)?;
        match classify(ideal) {
            IdealClass::Principal(g) => self.principal_value(&g),
            IdealClass::NonPrincipal => {
                let (alpha, branch) = match (&self.alpha, &self.branch) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(CharError::NotPrincipal(*ideal)),
                };
                let j = ideal.mul(alpha)?;
                let IdealClass::Principal(g) = classify(&j) else {
                    return Err(CharError::NotPrincipal(*ideal));
                };
                let num = TowerElement::from_biquad(self.principal_biquad(&g)?, &self.param);
                Ok(CharValue::Tower(num.checked_mul(&branch.inverse()?)?))
            }
        }
    }

    /// `c` on the principal ideal generated by `g`.
    pub fn evaluate_element(&self, g: &QuadElement) -> Result<CharValue, CharError> {
        let ideal = QuadIdeal::principal_of(g)?;
        self.check_ideal(&ideal)?;
        self.principal_value(g)
    }

    /// `omega_c(n) = c((n)) / n`.
    pub fn dirichlet_omega(&self, n: i64) -> Result<CharValue, CharError> {
        if crate::arith::gcd(n, self.conductor.norm()) != 1 {
            return Err(CharError::NotCoprimeInteger(n));
        }
        let v = self.evaluate_element(&QuadElement::from_ints(self.field, n, 0))?;
        Ok(v.scale(&Rational::new(1, n).expect("nonzero")))
    }
}

fn primary_gaussian(a: i64, b: i64) -> bool {
    matches!((a.rem_euclid(4), b.rem_euclid(4)), (1, 0) | (3, 2))
}

#[cfg(test)]
mod tests;
