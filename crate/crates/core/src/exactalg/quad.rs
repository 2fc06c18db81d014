use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Rational};

/// The four imaginary quadratic fields that can carry CM forms for `eta(z)^2 eta(bz)^2`.
///
/// Each field is presented as `Z[theta]` for a canonical generator `theta`
/// satisfying `theta^2 = trace*theta - norm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuadField {
    /// Q(i), discriminant -4.
    Gaussian,
    /// Q(sqrt(-2)), discriminant -8.
    SqrtMinus2,
    /// Q(omega) with omega^2 + omega + 1 = 0, discriminant -3.
    Eisenstein,
    /// Q(sqrt(-6)), discriminant -24, class number 2.
    SqrtMinus6,
}

impl QuadField {
    pub const ALL: [QuadField; 4] =
        [QuadField::Gaussian, QuadField::SqrtMinus2, QuadField::Eisenstein, QuadField::SqrtMinus6];

    pub fn discriminant(self) -> i64 {
        match self {
            QuadField::Gaussian => -4,
            QuadField::SqrtMinus2 => -8,
            QuadField::Eisenstein => -3,
            QuadField::SqrtMinus6 => -24,
        }
    }

    pub fn from_discriminant(d: i64) -> Option<QuadField> {
        QuadField::ALL.into_iter().find(|f| f.discriminant() == d)
    }

    pub fn class_number(self) -> u32 {
        match self {
            QuadField::SqrtMinus6 => 2,
            _ => 1,
        }
    }

    /// Trace of `theta`.
    pub fn theta_trace(self) -> i64 {
        match self {
            QuadField::Eisenstein => -1,
            _ => 0,
        }
    }

    /// Norm of `theta`.
    pub fn theta_norm(self) -> i64 {
        match self {
            QuadField::Gaussian => 1,
            QuadField::SqrtMinus2 => 2,
            QuadField::Eisenstein => 1,
            QuadField::SqrtMinus6 => 6,
        }
    }

    pub fn theta_symbol(self) -> &'static str {
        match self {
            QuadField::Gaussian => "i",
            QuadField::SqrtMinus2 => "sqrt(-2)",
            QuadField::Eisenstein => "omega",
            QuadField::SqrtMinus6 => "sqrt(-6)",
        }
    }

    /// Units of the ring of integers as integer coordinates `(a, b)` for `a + b*theta`.
    pub fn units(self) -> &'static [(i64, i64)] {
        match self {
            QuadField::Gaussian => &[(1, 0), (0, 1), (-1, 0), (0, -1)],
            QuadField::Eisenstein => &[(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)],
            QuadField::SqrtMinus2 | QuadField::SqrtMinus6 => &[(1, 0), (-1, 0)],
        }
    }

    /// Norm of the integral element `a + b*theta`.
    pub fn norm_int(self, a: i64, b: i64) -> i64 {
        a * a + self.theta_trace() * a * b + self.theta_norm() * b * b
    }

    /// Product of integral elements in coordinates.
    pub fn mul_int(self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let (a, b) = x;
        let (c, d) = y;
        let bd = b * d;
        (a * c - self.theta_norm() * bd, a * d + b * c + self.theta_trace() * bd)
    }

    pub fn conj_int(self, x: (i64, i64)) -> (i64, i64) {
        (x.0 + self.theta_trace() * x.1, -x.1)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}) [D={}]", self.theta_symbol(), self.discriminant())
    }
}

/// Element `a + b*theta` of one of the four quadratic fields.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadElement {
    field: QuadField,
    a: Rational,
    b: Rational,
}

impl QuadElement {
    pub fn new(field: QuadField, a: Rational, b: Rational) -> Self {
        QuadElement { field, a, b }
    }

    pub fn from_ints(field: QuadField, a: i64, b: i64) -> Self {
        QuadElement::new(field, Rational::from(a), Rational::from(b))
    }

    pub fn zero(field: QuadField) -> Self {
        QuadElement::from_ints(field, 0, 0)
    }

    pub fn one(field: QuadField) -> Self {
        QuadElement::from_ints(field, 1, 0)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Integer coordinates, when both are integral and fit in `i64`.
    pub fn to_int_coords(&self) -> Option<(i64, i64)> {
        Some((self.a.to_i64()?, self.b.to_i64()?))
    }

    fn check(&self, other: &QuadElement) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QuadElement) -> Result<QuadElement, AlgebraError> {
        self.check(other)?;
        Ok(QuadElement::new(self.field, &self.a + &other.a, &self.b + &other.b))
    }

    pub fn checked_sub(&self, other: &QuadElement) -> Result<QuadElement, AlgebraError> {
        self.check(other)?;
        Ok(QuadElement::new(self.field, &self.a - &other.a, &self.b - &other.b))
    }

    pub fn checked_mul(&self, other: &QuadElement) -> Result<QuadElement, AlgebraError> {
        self.check(other)?;
        let tr = Rational::from(self.field.theta_trace());
        let nm = Rational::from(self.field.theta_norm());
        let bd = &self.b * &other.b;
        let a = &(&self.a * &other.a) - &(&nm * &bd);
        let b = &(&(&self.a * &other.b) + &(&self.b * &other.a)) + &(&tr * &bd);
        Ok(QuadElement::new(self.field, a, b))
    }

    pub fn neg(&self) -> QuadElement {
        QuadElement::new(self.field, -&self.a, -&self.b)
    }

    pub fn scale(&self, c: &Rational) -> QuadElement {
        QuadElement::new(self.field, &self.a * c, &self.b * c)
    }

    /// Galois conjugate; preserves the norm.
    pub fn conjugate(&self) -> QuadElement {
        let tr = Rational::from(self.field.theta_trace());
        QuadElement::new(self.field, &self.a + &(&tr * &self.b), -&self.b)
    }

    pub fn norm(&self) -> Rational {
        let tr = Rational::from(self.field.theta_trace());
        let nm = Rational::from(self.field.theta_norm());
        &(&(&self.a * &self.a) + &(&tr * &(&self.a * &self.b))) + &(&nm * &(&self.b * &self.b))
    }

    pub fn trace(&self) -> Rational {
        let tr = Rational::from(self.field.theta_trace());
        &(&self.a + &self.a) + &(&tr * &self.b)
    }

    pub fn inverse(&self) -> Result<QuadElement, AlgebraError> {
        let n = self.norm().recip()?;
        Ok(self.conjugate().scale(&n))
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*theta({})", self.a, sign, self.b.abs(), self.field.discriminant())
    }
}

impl FromStr for QuadElement {
    type Err = AlgebraError;

    /// Parses `a+b*theta(D)` (also `a-b*theta(D)`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlgebraError::Parse(s.to_string());
        let (head, tail) = s.split_once("*theta(").ok_or_else(bad)?;
        let disc: i64 = tail.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let field = QuadField::from_discriminant(disc).ok_or_else(bad)?;
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let a: Rational = head[..split].parse()?;
        let b_str = &head[split..];
        let b: Rational = b_str.strip_prefix('+').unwrap_or(b_str).parse()?;
        Ok(QuadElement::new(field, a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        let g = QuadElement::from_ints(QuadField::Gaussian, 2, 1);
        assert_eq!(g.conjugate(), QuadElement::from_ints(QuadField::Gaussian, 2, -1));
        let x = QuadElement::from_ints(QuadField::SqrtMinus6, -5, 2);
        assert_eq!(x.conjugate(), QuadElement::from_ints(QuadField::SqrtMinus6, -5, -2));
        let w = QuadElement::from_ints(QuadField::Eisenstein, 3, 1);
        assert_eq!(w.conjugate(), QuadElement::from_ints(QuadField::Eisenstein, 2, -1));
        assert_eq!(w.norm(), w.conjugate().norm());
    }

    #[test]
    fn norms() {
        assert_eq!(QuadElement::from_ints(QuadField::Gaussian, -1, 2).norm(), Rational::from(5));
        assert_eq!(QuadElement::from_ints(QuadField::Gaussian, 2, 1).norm(), Rational::from(5));
        assert_eq!(QuadElement::from_ints(QuadField::SqrtMinus6, -5, 2).norm(), Rational::from(49));
        assert_eq!(QuadElement::from_ints(QuadField::SqrtMinus6, 5, 4).norm(), Rational::from(121));
        assert_eq!(QuadElement::from_ints(QuadField::Eisenstein, 1, 1).norm(), Rational::from(1));
    }

    #[test]
    fn omega_relation() {
        let w = QuadElement::from_ints(QuadField::Eisenstein, 0, 1);
        let w2 = w.checked_mul(&w).unwrap();
        // omega^2 = -1 - omega
        assert_eq!(w2, QuadElement::from_ints(QuadField::Eisenstein, -1, -1));
    }

    #[test]
    fn mismatched_fields_error() {
        let x = QuadElement::one(QuadField::Gaussian);
        let y = QuadElement::one(QuadField::SqrtMinus6);
        assert!(matches!(x.checked_mul(&y), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn string_round_trip() {
        for x in [
            QuadElement::from_ints(QuadField::Gaussian, 2, -1),
            QuadElement::new(QuadField::Eisenstein, Rational::new(-1, 2).unwrap(), Rational::new(3, 4).unwrap()),
            QuadElement::from_ints(QuadField::SqrtMinus6, 0, 0),
        ] {
            let s = x.to_string();
            assert_eq!(s.parse::<QuadElement>().unwrap(), x, "{s}");
        }
        assert_eq!("2+1*theta(-4)".parse::<QuadElement>().unwrap(), QuadElement::from_ints(QuadField::Gaussian, 2, 1));
    }
}
