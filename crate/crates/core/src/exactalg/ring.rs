use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{AlgebraError, QuadElement, QuadField, Rational, TowerElement, TowerParam};

/// Coefficient ring for q-series.
///
/// `Context` carries whatever is needed to build a zero (the field tag of a
/// quadratic element, the parameter of a tower element). Operands are assumed
/// to share a context; series code checks that once per operation.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Context: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(ctx: &Self::Context) -> Self;
    fn from_i64(ctx: &Self::Context, v: i64) -> Self;
    fn context(&self) -> Self::Context;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn add_assign_ref(&mut self, o: &Self) {
        *self = self.add_ref(o);
    }

    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if !a.is_zero() && !b.is_zero() {
            *self = self.add_ref(&a.mul_ref(b));
        }
    }

    fn ring_tag(ctx: &Self::Context) -> String;
    fn context_from_tag(tag: &str) -> Result<Self::Context, AlgebraError>;
    fn to_scalar_string(&self) -> String;
    fn parse_scalar(ctx: &Self::Context, s: &str) -> Result<Self, AlgebraError>;
}

/// Machine integers. Overflow is a hard error: it panics rather than wrap.
impl Ring for i64 {
    type Context = ();

    fn zero(_: &()) -> Self {
        0
    }
    fn from_i64(_: &(), v: i64) -> Self {
        v
    }
    fn context(&self) {}
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("i64 coefficient overflow")
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("i64 coefficient overflow")
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("i64 coefficient overflow")
    }
    fn neg_ref(&self) -> Self {
        self.checked_neg().expect("i64 coefficient overflow")
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self = self.add_ref(o);
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add_ref(&a.mul_ref(b));
    }
    fn ring_tag(_: &()) -> String {
        "Z".into()
    }
    fn context_from_tag(tag: &str) -> Result<(), AlgebraError> {
        match tag {
            "Z" => Ok(()),
            _ => Err(AlgebraError::UnknownRing(tag.into())),
        }
    }
    fn to_scalar_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(_: &(), s: &str) -> Result<Self, AlgebraError> {
        s.trim().parse().map_err(|_| AlgebraError::Parse(s.into()))
    }
}

impl Ring for BigInt {
    type Context = ();

    fn zero(_: &()) -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        BigInt::from(v)
    }
    fn context(&self) {}
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += a * b;
        }
    }
    fn ring_tag(_: &()) -> String {
        "Z".into()
    }
    fn context_from_tag(tag: &str) -> Result<(), AlgebraError> {
        match tag {
            "Z" => Ok(()),
            _ => Err(AlgebraError::UnknownRing(tag.into())),
        }
    }
    fn to_scalar_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(_: &(), s: &str) -> Result<Self, AlgebraError> {
        s.trim().parse().map_err(|_| AlgebraError::Parse(s.into()))
    }
}

impl Ring for Rational {
    type Context = ();

    fn zero(_: &()) -> Self {
        Rational::zero()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from(v)
    }
    fn context(&self) {}
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.add_mul_assign(a, b);
    }
    fn ring_tag(_: &()) -> String {
        "Q".into()
    }
    fn context_from_tag(tag: &str) -> Result<(), AlgebraError> {
        match tag {
            "Q" => Ok(()),
            _ => Err(AlgebraError::UnknownRing(tag.into())),
        }
    }
    fn to_scalar_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(_: &(), s: &str) -> Result<Self, AlgebraError> {
        s.parse()
    }
}

impl Ring for QuadElement {
    type Context = QuadField;

    fn zero(ctx: &QuadField) -> Self {
        QuadElement::zero(*ctx)
    }
    fn from_i64(ctx: &QuadField, v: i64) -> Self {
        QuadElement::from_ints(*ctx, v, 0)
    }
    fn context(&self) -> QuadField {
        self.field()
    }
    fn is_zero(&self) -> bool {
        QuadElement::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.checked_add(o).expect("quadratic field mismatch")
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("quadratic field mismatch")
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("quadratic field mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn ring_tag(ctx: &QuadField) -> String {
        format!("quad({})", ctx.discriminant())
    }
    fn context_from_tag(tag: &str) -> Result<QuadField, AlgebraError> {
        tag.strip_prefix("quad(")
            .and_then(|t| t.strip_suffix(')'))
            .and_then(|d| d.parse().ok())
            .and_then(QuadField::from_discriminant)
            .ok_or_else(|| AlgebraError::UnknownRing(tag.into()))
    }
    fn to_scalar_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(ctx: &QuadField, s: &str) -> Result<Self, AlgebraError> {
        let x: QuadElement = s.parse()?;
        if x.field() != *ctx {
            return Err(AlgebraError::FieldMismatch(x.field(), *ctx));
        }
        Ok(x)
    }
}

impl Ring for TowerElement {
    type Context = TowerParam;

    fn zero(ctx: &TowerParam) -> Self {
        TowerElement::zero(ctx)
    }
    fn from_i64(ctx: &TowerParam, v: i64) -> Self {
        TowerElement::from_rational(Rational::from(v), ctx)
    }
    fn context(&self) -> TowerParam {
        self.param().clone()
    }
    fn is_zero(&self) -> bool {
        TowerElement::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add_unchecked(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub_unchecked(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul_unchecked(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn ring_tag(ctx: &TowerParam) -> String {
        format!("tower({ctx})")
    }
    fn context_from_tag(tag: &str) -> Result<TowerParam, AlgebraError> {
        tag.strip_prefix("tower(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| AlgebraError::UnknownRing(tag.into()))?
            .parse()
    }
    fn to_scalar_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(ctx: &TowerParam, s: &str) -> Result<Self, AlgebraError> {
        TowerElement::parse_coords(s, ctx)
    }
}
