//! The field Q(i, r) with r^2 = -6 and the quadratic extension by a square
//! root `s` of a fixed element `u` of Q(i, r).
//!
//! Tower coordinates are ordered `1, i, r, ir, s, is, rs, irs`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{AlgebraError, QuadElement, QuadField, Rational};

/// Element `c0 + c1*i + c2*r + c3*i*r` of Q(i, sqrt(-6)).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Biquad([Rational; 4]);

fn gmul(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> (Rational, Rational) {
    (&(a * c) - &(b * d), &(a * d) + &(b * c))
}

impl Biquad {
    pub fn new(coords: [Rational; 4]) -> Self {
        Biquad(coords)
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Biquad(c.map(Rational::from))
    }

    pub fn zero() -> Self {
        Biquad::default()
    }

    pub fn one() -> Self {
        Biquad::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Biquad([q, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    /// Power of `i`, exponent taken mod 4.
    pub fn i_pow(e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => Biquad::from_ints([1, 0, 0, 0]),
            1 => Biquad::from_ints([0, 1, 0, 0]),
            2 => Biquad::from_ints([-1, 0, 0, 0]),
            _ => Biquad::from_ints([0, -1, 0, 0]),
        }
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.0[1..].iter().all(Rational::is_zero)
    }

    pub fn add(&self, o: &Biquad) -> Biquad {
        Biquad(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    pub fn sub(&self, o: &Biquad) -> Biquad {
        Biquad(std::array::from_fn(|k| &self.0[k] - &o.0[k]))
    }

    pub fn neg(&self) -> Biquad {
        Biquad(std::array::from_fn(|k| -&self.0[k]))
    }

    pub fn scale(&self, c: &Rational) -> Biquad {
        Biquad(std::array::from_fn(|k| &self.0[k] * c))
    }

    pub fn mul(&self, o: &Biquad) -> Biquad {
        // (P + Q r)(P' + Q' r) = PP' - 6 QQ' + (PQ' + QP') r, with P, Q Gaussian
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        let pp = gmul(a, b, e, f);
        let qq = gmul(c, d, g, h);
        let pq = gmul(a, b, g, h);
        let qp = gmul(c, d, e, f);
        let six = Rational::from(6);
        Biquad([&pp.0 - &(&six * &qq.0), &pp.1 - &(&six * &qq.1), &pq.0 + &qp.0, &pq.1 + &qp.1])
    }

    /// Conjugation `r -> -r` (fixes i).
    pub fn conj_r(&self) -> Biquad {
        let [a, b, c, d] = &self.0;
        Biquad([a.clone(), b.clone(), -c, -d])
    }

    /// Complex conjugation `i -> -i`, `r -> -r`.
    pub fn conj_complex(&self) -> Biquad {
        let [a, b, c, d] = &self.0;
        Biquad([a.clone(), -b, -c, d.clone()])
    }

    pub fn inverse(&self) -> Result<Biquad, AlgebraError> {
        // x * conj_r(x) = P^2 + 6 Q^2 lies in Q(i)
        let conj = self.conj_r();
        let n = self.mul(&conj);
        debug_assert!(n.0[2].is_zero() && n.0[3].is_zero());
        let (re, im) = (&n.0[0], &n.0[1]);
        let gn = &(re * re) + &(im * im);
        if gn.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let inv = Biquad([re / &gn, -(im / &gn), Rational::zero(), Rational::zero()]);
        Ok(conj.mul(&inv))
    }

    /// Embeds an element of Q(i) or Q(sqrt(-6)); other fields embed only when rational.
    pub fn embed(x: &QuadElement) -> Result<Biquad, AlgebraError> {
        let z = Rational::zero;
        match x.field() {
            QuadField::Gaussian => Ok(Biquad([x.a().clone(), x.b().clone(), z(), z()])),
            QuadField::SqrtMinus6 => Ok(Biquad([x.a().clone(), z(), x.b().clone(), z()])),
            _ if x.is_rational() => Ok(Biquad::from_rational(x.a().clone())),
            f => Err(AlgebraError::NotEmbeddable(f)),
        }
    }

    /// Complex value under `i -> i`, `r -> i*sqrt(6)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let s6 = 6f64.sqrt();
        let [a, b, c, d] = self.0.each_ref().map(Rational::to_f64);
        // c*r = c*i*sqrt6, d*i*r = -d*sqrt6
        (a - d * s6, b + c * s6)
    }
}

impl fmt::Debug for Biquad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "[{a} {b} {c} {d}]")
    }
}

/// The frozen parameter `u = s^2` of a tower. Compared by value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerParam(Arc<Biquad>);

impl TowerParam {
    pub fn new(u: Biquad) -> Result<Self, AlgebraError> {
        if u.is_zero() {
            return Err(AlgebraError::InvalidParameter("tower parameter must be nonzero".into()));
        }
        Ok(TowerParam(Arc::new(u)))
    }

    /// The degenerate parameter `u = 1`, used when no square-root branch is needed.
    pub fn unit() -> Self {
        TowerParam(Arc::new(Biquad::one()))
    }

    pub fn u(&self) -> &Biquad {
        &self.0
    }

    fn same(&self, other: &TowerParam) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for TowerParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={:?}", self.0)
    }
}

impl fmt::Display for TowerParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for TowerParam {
    type Err = AlgebraError;

    /// Parses `u=[c0 c1 c2 c3]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().strip_prefix("u=").ok_or_else(|| AlgebraError::Parse(s.to_string()))?;
        let coords = parse_bracketed::<4>(body)?;
        TowerParam::new(Biquad(coords))
    }
}

fn parse_bracketed<const N: usize>(s: &str) -> Result<[Rational; N], AlgebraError> {
    let bad = || AlgebraError::Parse(s.to_string());
    let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
    let parts: Vec<Rational> = inner.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| bad())
}

/// Element `lo + hi*s` of Q(i, r, s) with `s^2 = u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerElement {
    lo: Biquad,
    hi: Biquad,
    param: TowerParam,
}

impl TowerElement {
    pub fn new(lo: Biquad, hi: Biquad, param: TowerParam) -> Self {
        TowerElement { lo, hi, param }
    }

    pub fn from_coords(coords: [Rational; 8], param: TowerParam) -> Self {
        let [a, b, c, d, e, f, g, h] = coords;
        TowerElement::new(Biquad([a, b, c, d]), Biquad([e, f, g, h]), param)
    }

    pub fn zero(param: &TowerParam) -> Self {
        TowerElement::new(Biquad::zero(), Biquad::zero(), param.clone())
    }

    pub fn one(param: &TowerParam) -> Self {
        TowerElement::from_biquad(Biquad::one(), param)
    }

    pub fn from_rational(q: Rational, param: &TowerParam) -> Self {
        TowerElement::from_biquad(Biquad::from_rational(q), param)
    }

    pub fn from_biquad(x: Biquad, param: &TowerParam) -> Self {
        TowerElement::new(x, Biquad::zero(), param.clone())
    }

    pub fn from_quad(x: &QuadElement, param: &TowerParam) -> Result<Self, AlgebraError> {
        Ok(TowerElement::from_biquad(Biquad::embed(x)?, param))
    }

    /// The adjoined square root `s`.
    pub fn s(param: &TowerParam) -> Self {
        TowerElement::new(Biquad::zero(), Biquad::one(), param.clone())
    }

    pub fn param(&self) -> &TowerParam {
        &self.param
    }

    pub fn lo(&self) -> &Biquad {
        &self.lo
    }

    pub fn hi(&self) -> &Biquad {
        &self.hi
    }

    pub fn coords(&self) -> [Rational; 8] {
        let [a, b, c, d] = self.lo.0.clone();
        let [e, f, g, h] = self.hi.0.clone();
        [a, b, c, d, e, f, g, h]
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.hi.is_zero() && self.lo.is_rational()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.lo.0[0].clone())
    }

    fn check(&self, o: &TowerElement) -> Result<(), AlgebraError> {
        if self.param.same(&o.param) {
            Ok(())
        } else {
            Err(AlgebraError::TowerParamMismatch)
        }
    }

    pub fn checked_add(&self, o: &TowerElement) -> Result<TowerElement, AlgebraError> {
        self.check(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn checked_sub(&self, o: &TowerElement) -> Result<TowerElement, AlgebraError> {
        self.check(o)?;
        Ok(self.sub_unchecked(o))
    }

    pub fn checked_mul(&self, o: &TowerElement) -> Result<TowerElement, AlgebraError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn add_unchecked(&self, o: &TowerElement) -> TowerElement {
        TowerElement::new(self.lo.add(&o.lo), self.hi.add(&o.hi), self.param.clone())
    }

    pub(crate) fn sub_unchecked(&self, o: &TowerElement) -> TowerElement {
        TowerElement::new(self.lo.sub(&o.lo), self.hi.sub(&o.hi), self.param.clone())
    }

    pub(crate) fn mul_unchecked(&self, o: &TowerElement) -> TowerElement {
        let mut lo = self.lo.mul(&o.lo);
        if !self.hi.is_zero() && !o.hi.is_zero() {
            lo = lo.add(&self.hi.mul(&o.hi).mul(self.param.u()));
        }
        let hi = if self.hi.is_zero() && o.hi.is_zero() {
            Biquad::zero()
        } else {
            self.lo.mul(&o.hi).add(&self.hi.mul(&o.lo))
        };
        TowerElement::new(lo, hi, self.param.clone())
    }

    pub fn neg(&self) -> TowerElement {
        TowerElement::new(self.lo.neg(), self.hi.neg(), self.param.clone())
    }

    pub fn scale(&self, c: &Rational) -> TowerElement {
        TowerElement::new(self.lo.scale(c), self.hi.scale(c), self.param.clone())
    }

    pub fn mul_biquad(&self, c: &Biquad) -> TowerElement {
        TowerElement::new(self.lo.mul(c), self.hi.mul(c), self.param.clone())
    }

    pub fn inverse(&self) -> Result<TowerElement, AlgebraError> {
        // (A + B s)^-1 = (A - B s) / (A^2 - B^2 u)
        let d = self.lo.mul(&self.lo).sub(&self.hi.mul(&self.hi).mul(self.param.u()));
        let di = d.inverse()?;
        Ok(TowerElement::new(self.lo.mul(&di), self.hi.neg().mul(&di), self.param.clone()))
    }

    /// Complex value under `i -> i`, `r -> i*sqrt(6)`, `s -> principal sqrt(u)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let (ur, ui) = self.param.u().to_complex();
        let m = (ur * ur + ui * ui).sqrt();
        let sr = ((m + ur) / 2.0).sqrt();
        let si = ((m - ur) / 2.0).sqrt().copysign(ui);
        let (ar, ai) = self.lo.to_complex();
        let (br, bi) = self.hi.to_complex();
        (ar + br * sr - bi * si, ai + br * si + bi * sr)
    }

    pub fn abs_squared_approx(&self) -> f64 {
        let (re, im) = self.to_complex();
        re * re + im * im
    }

    /// Parses the bracketed 8-coordinate form under a known parameter.
    pub fn parse_coords(s: &str, param: &TowerParam) -> Result<TowerElement, AlgebraError> {
        Ok(TowerElement::from_coords(parse_bracketed::<8>(s)?, param.clone()))
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords();
        write!(f, "[")?;
        for (k, x) in c.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn param() -> TowerParam {
        TowerParam::new(Biquad::from_ints([1, 0, -2, 0])).unwrap()
    }

    fn tw(c: [i64; 8]) -> TowerElement {
        TowerElement::from_coords(c.map(Rational::from), param())
    }

    #[test]
    fn defining_relations() {
        let one_i = tw([1, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(one_i.checked_mul(&one_i).unwrap(), tw([0, 2, 0, 0, 0, 0, 0, 0]));
        let r = tw([0, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(r.checked_mul(&r).unwrap(), tw([-6, 0, 0, 0, 0, 0, 0, 0]));
        let s = TowerElement::s(&param());
        assert_eq!(s.checked_mul(&s).unwrap(), tw([1, 0, -2, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn mismatched_param_rejected() {
        let a = TowerElement::one(&param());
        let b = TowerElement::one(&TowerParam::unit());
        assert_eq!(a.checked_mul(&b), Err(AlgebraError::TowerParamMismatch));
    }

    #[test]
    fn inverse_round_trip() {
        let x = tw([3, -1, 2, 5, 1, 0, -4, 2]);
        let y = x.inverse().unwrap();
        assert_eq!(x.checked_mul(&y).unwrap(), TowerElement::one(&param()));
        let b = Biquad::from_ints([6, 0, -2, 0]);
        assert_eq!(b.mul(&b.inverse().unwrap()), Biquad::one());
    }

    #[test]
    fn coordinate_string_round_trip() {
        let x = TowerElement::from_coords(
            [1, 0, 0, 0, 0, 0, 0, 0].map(Rational::from).map(|r| &r / &Rational::from(10)),
            param(),
        );
        let s = x.to_string();
        assert_eq!(TowerElement::parse_coords(&s, &param()).unwrap(), x);
        let p: TowerParam = format!("{}", param()).parse().unwrap();
        assert_eq!(p, param());
    }

    #[test]
    fn complex_embedding_squares() {
        let s = TowerElement::s(&param());
        let (re, im) = s.checked_mul(&s).unwrap().to_complex();
        let (ur, ui) = param().u().to_complex();
        assert!((re - ur).abs() < 1e-12 && (im - ui).abs() < 1e-12);
        assert!((s.abs_squared_approx() - 5.0).abs() < 1e-12);
    }
}
