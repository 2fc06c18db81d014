use std::fmt;

use num_integer::Integer;

use super::IdealError;
use crate::exactalg::{QuadElement, QuadField};

/// Integral ideal `d * (a Z + (b + theta) Z)` with `0 <= b < a` and `a | N(b + theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    field: QuadField,
    d: i64,
    a: i64,
    b: i64,
}

/// Hermite basis `{(A, 0), (B, C)}` of the lattice spanned by `gens`, with
/// `A, C > 0` and `0 <= B < A`. Coordinates are on the basis `1, theta`.
fn hnf(gens: &[(i128, i128)]) -> Option<(i128, i128, i128)> {
    let mut pivot: (i128, i128) = (0, 0);
    let mut axis: i128 = 0;
    for &g in gens {
        let mut v = g;
        while v.1 != 0 {
            let q = Integer::div_floor(&pivot.1, &v.1);
            pivot = (pivot.0 - q * v.0, pivot.1 - q * v.1);
            std::mem::swap(&mut pivot, &mut v);
        }
        axis = axis.gcd(&v.0);
    }
    if pivot.1 < 0 {
        pivot = (-pivot.0, -pivot.1);
    }
    if axis == 0 || pivot.1 == 0 {
        return None;
    }
    Some((axis, pivot.0.rem_euclid(axis), pivot.1))
}

fn mul128(field: QuadField, x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    let tr = field.theta_trace() as i128;
    let nm = field.theta_norm() as i128;
    let bd = x.1 * y.1;
    (x.0 * y.0 - nm * bd, x.0 * y.1 + x.1 * y.0 + tr * bd)
}

impl QuadIdeal {
    pub fn new(field: QuadField, d: i64, a: i64, b: i64) -> Result<Self, IdealError> {
        if d < 1 || a < 1 || b < 0 || b >= a || field.norm_int(b, 1) % a != 0 {
            return Err(IdealError::NotNormalForm { d, a, b });
        }
        Ok(QuadIdeal { field, d, a, b })
    }

    pub fn unit(field: QuadField) -> Self {
        QuadIdeal { field, d: 1, a: 1, b: 0 }
    }

    /// The ideal spanned (as an ideal) by the given integral elements.
    pub fn generated_by(field: QuadField, gens: &[(i64, i64)]) -> Result<Self, IdealError> {
        let mut basis = Vec::with_capacity(2 * gens.len());
        for &(x, y) in gens {
            let g = (x as i128, y as i128);
            basis.push(g);
            basis.push(mul128(field, g, (0, 1)));
        }
        Self::from_lattice(field, &basis)
    }

    pub fn principal(field: QuadField, g: (i64, i64)) -> Result<Self, IdealError> {
        Self::generated_by(field, &[g])
    }

    /// Principal ideal of a quadratic element with integral coordinates.
    pub fn principal_of(g: &QuadElement) -> Result<Self, IdealError> {
        let c = g.to_int_coords().ok_or(IdealError::NonIntegral)?;
        Self::principal(g.field(), c)
    }

    fn from_lattice(field: QuadField, gens: &[(i128, i128)]) -> Result<Self, IdealError> {
        let (big_a, big_b, c) = hnf(gens).ok_or(IdealError::ZeroIdeal)?;
        let narrow = |x: i128| i64::try_from(x).map_err(|_| IdealError::Overflow);
        let (d, a, b) = (narrow(c)?, narrow(big_a / c)?, narrow(big_b / c)?);
        if big_a % c != 0 || big_b % c != 0 {
            return Err(IdealError::NotNormalForm { d, a, b });
        }
        Self::new(field, d, a, b)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// `(d, a, b)`.
    pub fn normal_form(&self) -> (i64, i64, i64) {
        (self.d, self.a, self.b)
    }

    pub fn norm(&self) -> i64 {
        self.d * self.d * self.a
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Z-basis `d*a` and `d*(b + theta)`.
    pub fn basis(&self) -> [(i64, i64); 2] {
        [(self.d * self.a, 0), (self.d * self.b, self.d)]
    }

    fn basis128(&self) -> [(i128, i128); 2] {
        self.basis().map(|(x, y)| (x as i128, y as i128))
    }

    fn check(&self, o: &QuadIdeal) -> Result<(), IdealError> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(IdealError::FieldMismatch(self.field, o.field))
        }
    }

    pub fn mul(&self, o: &QuadIdeal) -> Result<QuadIdeal, IdealError> {
        self.check(o)?;
        let mut gens = Vec::with_capacity(4);
        for x in self.basis128() {
            for y in o.basis128() {
                gens.push(mul128(self.field, x, y));
            }
        }
        Self::from_lattice(self.field, &gens)
    }

    pub fn pow(&self, e: u32) -> QuadIdeal {
        let mut acc = QuadIdeal::unit(self.field);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// `I + J`, the gcd of the two ideals.
    pub fn sum(&self, o: &QuadIdeal) -> Result<QuadIdeal, IdealError> {
        self.check(o)?;
        let gens: Vec<(i128, i128)> = self.basis128().into_iter().chain(o.basis128()).collect();
        Self::from_lattice(self.field, &gens)
    }

    pub fn contains(&self, x: (i64, i64)) -> bool {
        let (d, a, b) = (self.d as i128, self.a as i128, self.b as i128);
        let (u, v) = (x.0 as i128, x.1 as i128);
        if v % d != 0 {
            return false;
        }
        (u - (v / d) * b * d) % (d * a) == 0
    }

    /// Canonical representative of `x` modulo the ideal: `(u, v)` with
    /// `0 <= v < d` and `0 <= u < d*a`.
    pub fn reduce(&self, x: (i64, i64)) -> (i64, i64) {
        let k = x.1.div_euclid(self.d);
        let v = x.1 - k * self.d;
        let u = (x.0 - k * self.d * self.b).rem_euclid(self.d * self.a);
        (u, v)
    }

    pub fn contains_element(&self, x: &QuadElement) -> bool {
        x.field() == self.field && x.to_int_coords().is_some_and(|c| self.contains(c))
    }

    /// `I | J` iff `J` is contained in `I`.
    pub fn divides(&self, o: &QuadIdeal) -> bool {
        self.field == o.field && o.basis().into_iter().all(|g| self.contains(g))
    }

    pub fn conjugate(&self) -> QuadIdeal {
        let gens: Vec<(i128, i128)> = self
            .basis()
            .into_iter()
            .map(|g| {
                let (x, y) = self.field.conj_int(g);
                (x as i128, y as i128)
            })
            .collect();
        Self::from_lattice(self.field, &gens).expect("conjugate of an ideal is an ideal")
    }

    /// `I + J = (1)`.
    pub fn is_coprime(&self, o: &QuadIdeal) -> Result<bool, IdealError> {
        Ok(self.sum(o)?.is_unit())
    }

    /// Exact quotient `I / J` for `J | I`; found by searching ideals of the
    /// quotient norm, which is adequate for the small conductors used here.
    pub fn div_exact(&self, j: &QuadIdeal) -> Result<QuadIdeal, IdealError> {
        self.check(j)?;
        if self.norm() % j.norm() != 0 || !j.divides(self) {
            return Err(IdealError::NotDivisible);
        }
        super::ideals_of_norm(self.field, (self.norm() / j.norm()) as u64)
            .into_iter()
            .find(|q| q.mul(j).as_ref() == Ok(self))
            .ok_or(IdealError::NotDivisible)
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.field.theta_symbol();
        write!(f, "{}*({}, {}+{})", self.d, self.a, self.b, sym)
    }
}
