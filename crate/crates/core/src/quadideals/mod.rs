//! Integral ideals of the four imaginary quadratic fields in Hermite normal form.

mod ideal;

pub use crate::exactalg::QuadField;
pub use ideal::QuadIdeal;

use num_integer::Roots;
use thiserror::Error;

use crate::arith::{factor, kronecker, sqrt_mod_prime};
use crate::exactalg::QuadElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("({d}, {a}, {b}) is not an ideal normal form")]
    NotNormalForm { d: i64, a: i64, b: i64 },
    #[error("ideals live in different fields: {0} vs {1}")]
    FieldMismatch(QuadField, QuadField),
    #[error("the zero ideal is not supported")]
    ZeroIdeal,
    #[error("generator is not integral")]
    NonIntegral,
    #[error("ideal coordinates overflow")]
    Overflow,
    #[error("ideal is not divisible by the given ideal")]
    NotDivisible,
    #[error("{p} is ramified in {field}")]
    Ramified { field: QuadField, p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealClass {
    Principal(QuadElement),
    NonPrincipal,
}

impl IdealClass {
    pub fn is_principal(&self) -> bool {
        matches!(self, IdealClass::Principal(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Ramified,
    Inert,
}

/// `epsilon_K(n) = (D / n)`.
pub fn epsilon(field: QuadField, n: i64) -> i32 {
    kronecker(field.discriminant(), n)
}

pub fn splitting(field: QuadField, p: u64) -> Splitting {
    match epsilon(field, p as i64) {
        1 => Splitting::Split,
        0 => Splitting::Ramified,
        _ => Splitting::Inert,
    }
}

/// True iff `p` stays prime. A ramified `p` is reported as an error rather
/// than silently as "not inert".
pub fn is_inert(field: QuadField, p: u64) -> Result<bool, IdealError> {
    match splitting(field, p) {
        Splitting::Ramified => Err(IdealError::Ramified { field, p }),
        s => Ok(s == Splitting::Inert),
    }
}

/// All `x + y theta` of norm `m`, ordered by `(y, x)`.
pub fn elements_of_norm(field: QuadField, m: i64) -> Vec<(i64, i64)> {
    let tr = field.theta_trace();
    let disc = -field.discriminant(); // 4 n - tr^2
    let ymax = (4 * m / disc).sqrt();
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        // x^2 + tr y x + n y^2 - m = 0
        let delta = 4 * m - disc * y * y;
        if delta < 0 {
            continue;
        }
        let s = delta.sqrt();
        if s * s != delta {
            continue;
        }
        for sgn in [-1, 1] {
            let num = -tr * y + sgn * s;
            if num % 2 == 0 && (sgn == -1 || s != 0) {
                out.push((num / 2, y));
            }
        }
    }
    out.sort_by_key(|&(x, y)| (y, x));
    out
}

/// Principal with an explicit generator, or non-principal. The generator is
/// the first element of the right norm lying in the ideal.
pub fn classify(ideal: &QuadIdeal) -> IdealClass {
    let k = ideal.field();
    elements_of_norm(k, ideal.norm())
        .into_iter()
        .find(|&g| ideal.contains(g))
        .map(|(x, y)| IdealClass::Principal(QuadElement::from_ints(k, x, y)))
        .unwrap_or(IdealClass::NonPrincipal)
}

/// Prime ideals above the rational prime `p`, with their residue degree.
pub fn primes_above(field: QuadField, p: u64) -> Vec<(QuadIdeal, u32)> {
    let pi = p as i64;
    if splitting(field, p) == Splitting::Inert {
        return vec![(QuadIdeal::new(field, pi, 1, 0).expect("(p) is an ideal"), 2)];
    }
    let roots: Vec<i64> = if p == 2 {
        (0..2).filter(|&b| field.norm_int(b, 1) % 2 == 0).collect()
    } else {
        // N(b + theta) = 0 mod p  <=>  (2b + tr)^2 = D mod p
        let r = sqrt_mod_prime(field.discriminant(), p).expect("split or ramified prime") as i64;
        let half = (pi + 1) / 2;
        let tr = field.theta_trace();
        let mut v: Vec<i64> =
            [r, pi - r].into_iter().map(|s| ((s - tr).rem_euclid(pi) * half).rem_euclid(pi)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    roots.into_iter().map(|b| (QuadIdeal::new(field, 1, pi, b).expect("root gives an ideal"), 1)).collect()
}

/// Every integral ideal of norm exactly `m`, without duplicates.
pub fn ideals_of_norm(field: QuadField, m: u64) -> Vec<QuadIdeal> {
    assert!(m >= 1, "norm must be positive");
    let mut acc = vec![QuadIdeal::unit(field)];
    for (p, e) in factor(m) {
        let local = ideals_of_prime_power_norm(field, p, e);
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for a in &acc {
            for b in &local {
                next.push(a.mul(b).expect("same field"));
            }
        }
        acc = next;
    }
    acc.sort();
    acc
}

fn ideals_of_prime_power_norm(field: QuadField, p: u64, e: u32) -> Vec<QuadIdeal> {
    let primes = primes_above(field, p);
    match primes.as_slice() {
        [(q, 2)] => {
            if e.is_multiple_of(2) {
                vec![q.pow(e / 2)]
            } else {
                Vec::new()
            }
        }
        [(q, 1)] => vec![q.pow(e)],
        [(q1, 1), (q2, 1)] => (0..=e).map(|i| q1.pow(i).mul(&q2.pow(e - i)).expect("same field")).collect(),
        _ => unreachable!("a rational prime has one or two primes above it"),
    }
}

/// Number of ideals of norm `m`, from the splitting of each prime factor.
pub fn ideal_count_oracle(field: QuadField, m: u64) -> u64 {
    factor(m)
        .into_iter()
        .map(|(p, e)| match splitting(field, p) {
            Splitting::Split => e as u64 + 1,
            Splitting::Ramified => 1,
            Splitting::Inert => u64::from(e % 2 == 0),
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(field: QuadField, m: u64) -> Vec<Option<(i64, i64)>> {
        ideals_of_norm(field, m)
            .iter()
            .map(|i| match classify(i) {
                IdealClass::Principal(g) => g.to_int_coords(),
                IdealClass::NonPrincipal => None,
            })
            .collect()
    }

    #[test]
    fn norm_49_and_121_in_sqrt_minus_6() {
        let k = QuadField::SqrtMinus6;
        let i49 = ideals_of_norm(k, 49);
        assert_eq!(i49.len(), 3);
        for g in [(-5, 2), (-5, -2), (7, 0)] {
            let want = QuadIdeal::principal(k, g).unwrap();
            assert!(i49.contains(&want), "{g:?}");
        }
        let i121 = ideals_of_norm(k, 121);
        for g in [(5, 4), (5, -4), (11, 0)] {
            assert!(i121.contains(&QuadIdeal::principal(k, g).unwrap()));
        }
        assert!(gens(k, 49).iter().all(Option::is_some));
    }

    #[test]
    fn ramified_two_in_gaussian() {
        let v = ideals_of_norm(QuadField::Gaussian, 2);
        assert_eq!(v, vec![QuadIdeal::principal(QuadField::Gaussian, (1, 1)).unwrap()]);
    }

    #[test]
    fn non_principal_ideals_of_norm_five() {
        let k = QuadField::SqrtMinus6;
        let alpha = QuadIdeal::generated_by(k, &[(5, 0), (2, 1)]).unwrap();
        let alpha_bar = QuadIdeal::generated_by(k, &[(5, 0), (-2, 1)]).unwrap();
        assert_eq!(classify(&alpha), IdealClass::NonPrincipal);
        assert_eq!(classify(&alpha_bar), IdealClass::NonPrincipal);
        assert_eq!(ideals_of_norm(k, 5), {
            let mut v = vec![alpha, alpha_bar];
            v.sort();
            v
        });
    }

    #[test]
    fn counts() {
        assert_eq!(ideal_count_oracle(QuadField::SqrtMinus6, 49), 3);
        assert_eq!(ideal_count_oracle(QuadField::Gaussian, 3), 0);
        assert_eq!(ideal_count_oracle(QuadField::Eisenstein, 7), 2);
    }

    #[test]
    fn inertness() {
        for k in QuadField::ALL {
            assert_eq!(is_inert(k, 23), Ok(true));
        }
        assert_eq!(is_inert(QuadField::Gaussian, 5), Ok(false));
        assert!(is_inert(QuadField::Gaussian, 2).is_err());
    }

    #[test]
    fn elements_of_norm_gaussian() {
        assert_eq!(elements_of_norm(QuadField::Gaussian, 5).len(), 8);
        assert_eq!(elements_of_norm(QuadField::Eisenstein, 1).len(), 6);
        assert_eq!(elements_of_norm(QuadField::SqrtMinus6, 5).len(), 0);
    }
}
