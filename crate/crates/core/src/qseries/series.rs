use std::collections::BTreeSet;

use super::SeriesError;
use crate::exactalg::Ring;

/// Truncated power series `sum_{v <= n < t} c(n) q^n`.
///
/// Coefficients below `valuation` are known to vanish; coefficients at or
/// beyond `truncation` are unknown. The first stored coefficient may be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R: Ring> {
    valuation: usize,
    truncation: usize,
    coeffs: Vec<R>,
    ctx: R::Context,
    zero: R,
}

impl<R: Ring> QSeries<R> {
    pub fn new(ctx: R::Context, valuation: usize, truncation: usize, coeffs: Vec<R>) -> Result<Self, SeriesError> {
        if truncation < valuation || coeffs.len() != truncation - valuation {
            return Err(SeriesError::Shape { valuation, truncation, len: coeffs.len() });
        }
        if coeffs.iter().any(|c| c.context() != ctx) {
            return Err(SeriesError::RingMismatch);
        }
        Ok(Self::from_parts(ctx, valuation, truncation, coeffs))
    }

    fn from_parts(ctx: R::Context, valuation: usize, truncation: usize, coeffs: Vec<R>) -> Self {
        debug_assert_eq!(coeffs.len(), truncation - valuation);
        let zero = R::zero(&ctx);
        QSeries { valuation, truncation, coeffs, ctx, zero }
    }

    /// The zero series known through `truncation`.
    pub fn zero(ctx: &R::Context, truncation: usize) -> Self {
        Self::from_parts(ctx.clone(), truncation, truncation, Vec::new())
    }

    pub fn one(ctx: &R::Context, truncation: usize) -> Self {
        Self::monomial(ctx, 0, R::from_i64(ctx, 1), truncation)
    }

    /// `c q^e + O(q^truncation)`.
    pub fn monomial(ctx: &R::Context, e: usize, c: R, truncation: usize) -> Self {
        if e >= truncation {
            return Self::zero(ctx, truncation);
        }
        let mut coeffs = vec![R::zero(ctx); truncation - e];
        coeffs[0] = c;
        Self::from_parts(ctx.clone(), e, truncation, coeffs)
    }

    /// Builds a series from `(exponent, coefficient)` terms; terms at or beyond
    /// `truncation` are dropped and repeated exponents accumulate.
    pub fn from_terms(ctx: &R::Context, truncation: usize, terms: impl IntoIterator<Item = (usize, R)>) -> Self {
        let mut coeffs = vec![R::zero(ctx); truncation];
        for (e, c) in terms {
            if e < truncation {
                coeffs[e].add_assign_ref(&c);
            }
        }
        Self::from_parts(ctx.clone(), 0, truncation, coeffs)
    }

    /// Dense coefficients from exponent 0.
    pub fn from_dense(ctx: &R::Context, coeffs: Vec<R>) -> Result<Self, SeriesError> {
        let t = coeffs.len();
        Self::new(ctx.clone(), 0, t, coeffs)
    }

    pub fn valuation(&self) -> usize {
        self.valuation
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    /// Stored coefficients for exponents `valuation..truncation`.
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<&R> {
        if n >= self.truncation {
            None
        } else if n < self.valuation {
            Some(&self.zero)
        } else {
            Some(&self.coeffs[n - self.valuation])
        }
    }

    /// Like [`coeff`](Self::coeff) but errors past the truncation.
    pub fn coeff_checked(&self, n: usize) -> Result<&R, SeriesError> {
        self.coeff(n).ok_or(SeriesError::InsufficientTruncation { needed: n + 1, available: self.truncation })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, &R)> + '_ {
        let v = self.valuation;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (v + i, c))
    }

    /// Dense vector of coefficients for exponents `0..truncation`.
    pub fn to_dense(&self) -> Vec<R> {
        let mut out = vec![self.zero.clone(); self.valuation];
        out.extend(self.coeffs.iter().cloned());
        out
    }

    fn check_ctx(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    /// Drops every coefficient at or beyond `t` (no-op if `t` exceeds the truncation).
    pub fn truncate(&self, t: usize) -> Self {
        if t >= self.truncation {
            return self.clone();
        }
        if t <= self.valuation {
            return Self::zero(&self.ctx, t);
        }
        Self::from_parts(self.ctx.clone(), self.valuation, t, self.coeffs[..t - self.valuation].to_vec())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        let t = self.truncation.min(other.truncation);
        let v = self.valuation.min(other.valuation).min(t);
        let coeffs = (v..t).map(|n| f(self.coeff(n).unwrap(), other.coeff(n).unwrap())).collect();
        Ok(Self::from_parts(self.ctx.clone(), v, t, coeffs))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, R::add_ref)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, R::sub_ref)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(R::neg_ref)
    }

    pub fn scale(&self, c: &R) -> Result<Self, SeriesError> {
        if c.context() != self.ctx {
            return Err(SeriesError::RingMismatch);
        }
        Ok(self.map_coeffs(|x| c.mul_ref(x)))
    }

    fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        Self::from_parts(self.ctx.clone(), self.valuation, self.truncation, self.coeffs.iter().map(f).collect())
    }

    /// Changes the coefficient ring.
    pub fn map<S: Ring>(&self, ctx: &S::Context, f: impl Fn(&R) -> S) -> Result<QSeries<S>, SeriesError> {
        QSeries::new(ctx.clone(), self.valuation, self.truncation, self.coeffs.iter().map(f).collect())
    }

    /// Fallible ring change.
    pub fn try_map<S: Ring, E>(
        &self,
        ctx: &S::Context,
        f: impl Fn(&R) -> Result<S, E>,
    ) -> Result<QSeries<S>, SeriesError>
    where
        SeriesError: From<E>,
    {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        QSeries::new(ctx.clone(), self.valuation, self.truncation, coeffs)
    }

    /// Product. The truncation is `min(v_f + t_g, v_g + t_f)`.
    ///
    /// The loop runs over the nonzero terms of both operands, so pairs of
    /// sparse series (pentagonal factors, q^12-supported expansions) cost
    /// `nnz(f) * nnz(g)` rather than the full quadratic product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        let t = (self.valuation + other.truncation).min(other.valuation + self.truncation);
        let v = (self.valuation + other.valuation).min(t);
        let mut out = vec![self.zero.clone(); t - v];
        let fa: Vec<(usize, &R)> = self.nonzero_terms().collect();
        let ga: Vec<(usize, &R)> = other.nonzero_terms().collect();
        let (outer, inner) = if fa.len() <= ga.len() { (&fa, &ga) } else { (&ga, &fa) };
        for &(i, a) in outer {
            for &(j, b) in inner {
                let e = i + j;
                if e >= t {
                    break;
                }
                out[e - v].mul_add_assign(a, b);
            }
        }
        Ok(Self::from_parts(self.ctx.clone(), v, t, out))
    }

    /// Substitutes `q -> q^m`.
    pub fn rescale(&self, m: usize) -> Self {
        assert!(m >= 1, "rescale factor must be positive");
        if m == 1 {
            return self.clone();
        }
        let v = self.valuation * m;
        // known for n < m*t: every exponent m*(t-1)+1 .. m*t-1 is a non-multiple
        let t = self.truncation * m;
        let mut coeffs = vec![self.zero.clone(); t - v];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * m] = c.clone();
        }
        Self::from_parts(self.ctx.clone(), v, t, coeffs)
    }

    /// Residues mod `m` of exponents carrying a nonzero coefficient.
    pub fn support_residues(&self, m: usize) -> BTreeSet<usize> {
        assert!(m >= 1, "modulus must be positive");
        self.nonzero_terms().map(|(n, _)| n % m).collect()
    }

    /// In-place product with a sparse polynomial whose terms are
    /// `(exponent, negative?)` with unit coefficients and constant term 1.
    /// Indices are relative to the valuation, which is sound because the
    /// factor starts with 1.
    pub(crate) fn mul_signed_sparse(&mut self, terms: &[(usize, bool)]) {
        let n = self.coeffs.len();
        for idx in (0..n).rev() {
            let mut acc: Option<R> = None;
            for &(e, neg) in terms {
                if e == 0 {
                    continue;
                }
                if e > idx {
                    break;
                }
                let src = &self.coeffs[idx - e];
                if src.is_zero() {
                    continue;
                }
                let cur = acc.get_or_insert_with(|| self.coeffs[idx].clone());
                *cur = if neg { cur.sub_ref(src) } else { cur.add_ref(src) };
            }
            if let Some(a) = acc {
                self.coeffs[idx] = a;
            }
        }
    }

    /// In-place division by a sparse factor with constant term 1.
    pub(crate) fn div_signed_sparse(&mut self, terms: &[(usize, bool)]) {
        let n = self.coeffs.len();
        for idx in 0..n {
            let mut acc: Option<R> = None;
            for &(e, neg) in terms {
                if e == 0 {
                    continue;
                }
                if e > idx {
                    break;
                }
                let src = &self.coeffs[idx - e];
                if src.is_zero() {
                    continue;
                }
                let cur = acc.get_or_insert_with(|| self.coeffs[idx].clone());
                *cur = if neg { cur.add_ref(src) } else { cur.sub_ref(src) };
            }
            if let Some(a) = acc {
                self.coeffs[idx] = a;
            }
        }
    }

    /// Multiplies by `q^s`, extending the truncation by `s`.
    pub fn shift(&self, s: usize) -> Self {
        Self::from_parts(self.ctx.clone(), self.valuation + s, self.truncation + s, self.coeffs.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zs(c: &[i64]) -> QSeries<i64> {
        QSeries::from_dense(&(), c.to_vec()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = zs(&[1, -1, 0, 0]);
        let g = zs(&[1, 1, 0, 0]);
        assert_eq!(f.mul(&g).unwrap().to_dense(), vec![1, 0, -1, 0]);
    }

    #[test]
    fn product_with_zero_series() {
        let f = zs(&[3, 1, 4, 1]);
        let z = QSeries::<i64>::zero(&(), 4);
        let p = f.mul(&z).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.truncation(), 4);
    }

    #[test]
    fn truncation_follows_min_rule() {
        let f = zs(&[1, 2, 3]).shift(2); // q^2.., known < 5
        let g = zs(&[1, 1, 1, 1, 1, 1, 1]); // known < 7
        let p = f.mul(&g).unwrap();
        assert_eq!(p.valuation(), 2);
        assert_eq!(p.truncation(), 5);
    }

    #[test]
    fn rescale_spreads_exponents() {
        let f = zs(&[1, -2]);
        let g = f.rescale(12);
        assert_eq!(g.truncation(), 24);
        assert_eq!(g.coeff(12), Some(&-2));
        assert_eq!(g.coeff(13), Some(&0));
        assert_eq!(f.rescale(1), f);
    }

    #[test]
    fn support_residues_basic() {
        assert!(QSeries::<i64>::zero(&(), 10).support_residues(12).is_empty());
        assert_eq!(zs(&[1, 1, 1]).support_residues(1), BTreeSet::from([0]));
    }

    #[test]
    fn sparse_mul_then_div_is_identity() {
        let terms = [(0, false), (1, true), (2, true), (5, false), (7, false)];
        let mut f = zs(&[2, 0, 5, -1, 3, 0, 0, 1, 9, 4]);
        let orig = f.clone();
        f.mul_signed_sparse(&terms);
        assert_ne!(f, orig);
        f.div_signed_sparse(&terms);
        assert_eq!(f, orig);
    }

    #[test]
    fn add_keeps_smallest_valuation() {
        let f = zs(&[0, 0, 1, 1]).truncate(3);
        let g = zs(&[5, 0, 0, 0]);
        let s = f.add(&g).unwrap();
        assert_eq!(s.truncation(), 3);
        assert_eq!(s.to_dense(), vec![5, 0, 1]);
    }
}
