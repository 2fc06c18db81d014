//! Hecke operators on q-expansions, Sturm bounds and the eta-quotient
//! modularity conditions.

use serde::Serialize;
use thiserror::Error;

use crate::arith::factor;
pub use crate::arith::kronecker;
use crate::exactalg::Ring;
use crate::qseries::{EtaQuotient, QSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("{delta} does not divide the level {level}")]
    Level { delta: u64, level: u64 },
    /// The congruence conditions are still reported for diagnostics.
    #[error("half-integral weight {weight} is not supported")]
    HalfIntegralWeight { weight: String, cond24_a: bool, cond24_b: bool },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Dirichlet character of the space, given as a Kronecker symbol `(m / .)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Nebentypus {
    Trivial,
    Kronecker(i64),
}

impl Nebentypus {
    pub fn eval(&self, n: i64) -> i32 {
        match *self {
            Nebentypus::Trivial => 1,
            Nebentypus::Kronecker(m) => kronecker(m, n),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Nebentypus::Trivial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceDescriptor {
    pub weight: u32,
    pub level: u64,
    pub character: Nebentypus,
}

impl SpaceDescriptor {
    pub fn new(weight: u32, level: u64, character: Nebentypus) -> Self {
        assert!(weight >= 1 && level >= 1, "weight and level must be positive");
        SpaceDescriptor { weight, level, character }
    }

    /// Weight `k`, trivial character.
    pub fn trivial(weight: u32, level: u64) -> Self {
        Self::new(weight, level, Nebentypus::Trivial)
    }

    pub fn sturm_bound(&self) -> u64 {
        sturm_bound(self.weight, self.level)
    }
}

/// `[SL2(Z) : Gamma0(N)] = N prod_{l | N} (1 + 1/l)`.
pub fn gamma0_index(n: u64) -> u64 {
    factor(n).into_iter().map(|(p, e)| p.pow(e - 1) * (p + 1)).product()
}

/// `floor(k [SL2(Z) : Gamma0(N)] / 12)`.
pub fn sturm_bound(k: u32, n: u64) -> u64 {
    k as u64 * gamma0_index(n) / 12
}

/// `T_p f` with `c(n) = a(np) + chi(p) p^{k-1} a(n/p)`.
///
/// If `f` is known below `q^t`, the image is known below `q^{ceil(t/p)}`:
/// that is the largest index whose `a(np)` is available.
pub fn hecke_tp<R: Ring>(f: &QSeries<R>, p: u64, space: &SpaceDescriptor) -> Result<QSeries<R>, HeckeError> {
    if !crate::arith::is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let pu = p as usize;
    let t = f.truncation().div_ceil(pu);
    let v = f.valuation().div_ceil(pu).min(t);
    let ctx = f.context();
    // characters mod N vanish on primes dividing N
    let chi = if space.level.is_multiple_of(p) { 0 } else { space.character.eval(p as i64) as i64 };
    let scalar = if chi == 0 {
        None
    } else {
        let pk = (p as i64).checked_pow(space.weight - 1).expect("p^(k-1) fits in i64");
        Some(R::from_i64(ctx, chi * pk))
    };
    let coeffs = (v..t)
        .map(|n| {
            let mut c = f.coeff(n * pu).expect("within truncation").clone();
            if let Some(s) = &scalar {
                if n % pu == 0 {
                    let a = f.coeff(n / pu).expect("within truncation");
                    c.mul_add_assign(s, a);
                }
            }
            c
        })
        .collect();
    Ok(QSeries::new(ctx.clone(), v, t, coeffs)?)
}

/// Like [`hecke_tp`], but demands the image be known below `q^t_out`.
pub fn hecke_tp_to<R: Ring>(
    f: &QSeries<R>,
    p: u64,
    space: &SpaceDescriptor,
    t_out: usize,
) -> Result<QSeries<R>, HeckeError> {
    let needed = (t_out.max(1) - 1) * p as usize + 1;
    if f.truncation() < needed {
        return Err(SeriesError::InsufficientTruncation { needed, available: f.truncation() }.into());
    }
    Ok(hecke_tp(f, p, space)?.truncate(t_out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularityReport {
    pub weight: i64,
    pub character: Nebentypus,
    /// `sum delta r_delta = 0 mod 24`.
    pub cond24_a: bool,
    /// `sum (N / delta) r_delta = 0 mod 24`.
    pub cond24_b: bool,
}

impl ModularityReport {
    pub fn holds(&self) -> bool {
        self.cond24_a && self.cond24_b
    }
}

/// Arithmetic conditions for `prod eta(delta z)^{r_delta}` to be modular on
/// `Gamma0(N)`, with character `((-1)^k prod delta^{r_delta} / .)`.
pub fn eta_modularity_check(spec: &EtaQuotient, n: u64) -> Result<ModularityReport, HeckeError> {
    for &(d, _) in spec.factors() {
        if !n.is_multiple_of(d) {
            return Err(HeckeError::Level { delta: d, level: n });
        }
    }
    let a: i64 = spec.factors().iter().map(|&(d, r)| d as i64 * r).sum();
    let b: i64 = spec.factors().iter().map(|&(d, r)| (n / d) as i64 * r).sum();
    let (cond24_a, cond24_b) = (a % 24 == 0, b % 24 == 0);
    let w = spec.weight();
    let weight =
        w.to_i64().ok_or_else(|| HeckeError::HalfIntegralWeight { weight: w.to_string(), cond24_a, cond24_b })?;
    // only the squarefree kernel of prod delta^{|r|} matters off the level
    let mut odd: std::collections::BTreeMap<u64, u64> = Default::default();
    for &(d, r) in spec.factors() {
        for (p, e) in factor(d) {
            *odd.entry(p).or_default() += e as u64 * r.unsigned_abs();
        }
    }
    let kernel: i64 = odd.into_iter().filter(|&(_, e)| e % 2 == 1).map(|(p, _)| p as i64).product();
    let m = if weight % 2 == 0 { kernel } else { -kernel };
    let character = if m == 1 { Nebentypus::Trivial } else { Nebentypus::Kronecker(m) };
    Ok(ModularityReport { weight, character, cond24_a, cond24_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_reference_values() {
        assert_eq!(sturm_bound(2, 576), 192);
        assert_eq!(sturm_bound(2, 2304), 768);
        assert_eq!(sturm_bound(2, 36), 12);
        assert_eq!(sturm_bound(2, 1), 0);
    }

    #[test]
    fn tp_of_zero_is_zero() {
        let z = QSeries::<i64>::zero(&(), 100);
        let out = hecke_tp(&z, 23, &SpaceDescriptor::trivial(2, 576)).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.truncation(), 5);
    }

    #[test]
    fn tp_formula_on_small_series() {
        // a(n) = n for n < 20; T_2 c(n) = a(2n) + 2 a(n/2)
        let f = QSeries::<i64>::from_dense(&(), (0..20).collect()).unwrap();
        let g = hecke_tp(&f, 2, &SpaceDescriptor::trivial(2, 1)).unwrap();
        assert_eq!(g.truncation(), 10);
        assert_eq!(g.coeff(3), Some(&6));
        assert_eq!(g.coeff(4), Some(&(8 + 2 * 2)));
        assert!(hecke_tp_to(&f, 2, &SpaceDescriptor::trivial(2, 1), 11).is_err());
        assert!(hecke_tp(&f, 4, &SpaceDescriptor::trivial(2, 1)).is_err());
    }

    #[test]
    fn modularity_conditions() {
        for b in [1u64, 2, 5, 16] {
            let r = eta_modularity_check(&EtaQuotient::f_b(b, 12), 144 * b).unwrap();
            assert_eq!(r.weight, 2);
            assert!(r.holds());
            assert!(r.character.is_trivial());
        }
        let e1: EtaQuotient = "eta(z)".parse().unwrap();
        assert!(matches!(eta_modularity_check(&e1, 1), Err(HeckeError::HalfIntegralWeight { cond24_a: false, .. })));
        let e2: EtaQuotient = "eta(z)^2".parse().unwrap();
        assert!(!eta_modularity_check(&e2, 1).unwrap().cond24_a);
        let e6: EtaQuotient = "eta(6z)^4".parse().unwrap();
        let r = eta_modularity_check(&e6, 36).unwrap();
        assert!(r.holds() && r.weight == 2);
        assert!(eta_modularity_check(&e6, 4).is_err());
    }

    #[test]
    fn kronecker_of_squares_is_trivial() {
        for s in 1i64..20 {
            for d in 1i64..200 {
                if crate::arith::gcd(s, d) == 1 {
                    assert_eq!(kronecker(s * s, d), 1);
                }
            }
        }
    }
}
