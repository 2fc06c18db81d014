use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{QSeries, SeriesError};
use crate::exactalg::Ring;

/// Wire form of a series: scalars are strings so every ring round-trips exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub valuation: usize,
    pub truncation: usize,
    pub ring: String,
    pub coeffs: Vec<String>,
}

impl<R: Ring> QSeries<R> {
    pub fn to_wire(&self) -> SeriesJson {
        SeriesJson {
            valuation: self.valuation(),
            truncation: self.truncation(),
            ring: R::ring_tag(self.context()),
            coeffs: self.coeffs().iter().map(R::to_scalar_string).collect(),
        }
    }

    pub fn from_wire(w: &SeriesJson) -> Result<Self, SeriesError> {
        let ctx = R::context_from_tag(&w.ring)?;
        let coeffs = w.coeffs.iter().map(|s| R::parse_scalar(&ctx, s)).collect::<Result<Vec<_>, _>>()?;
        QSeries::new(ctx, w.valuation, w.truncation, coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SeriesError> {
        let w: SeriesJson = serde_json::from_str(s).map_err(|e| SeriesError::Parse(e.to_string()))?;
        Self::from_wire(&w)
    }

    /// One `exponent coefficient` line per stored exponent, ascending, after a
    /// `#` header carrying the ring and bounds.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# ring {} valuation {} truncation {}\n",
            R::ring_tag(self.context()),
            self.valuation(),
            self.truncation()
        );
        for (k, c) in self.coeffs().iter().enumerate() {
            writeln!(out, "{} {}", self.valuation() + k, c.to_scalar_string()).expect("string write");
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, SeriesError> {
        let bad = |why: &str| SeriesError::Parse(why.to_string());
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty series text"))?;
        // the ring tag may itself contain spaces, so anchor on the trailing fields
        let body = header.trim_start_matches('#').trim();
        let (ring, bounds) = body
            .strip_prefix("ring ")
            .and_then(|b| b.rsplit_once(" valuation "))
            .ok_or_else(|| bad("malformed series header"))?;
        let (v, t) = bounds.split_once(" truncation ").ok_or_else(|| bad("malformed series header"))?;
        let ctx = R::context_from_tag(ring.trim())?;
        let v: usize = v.trim().parse().map_err(|_| bad("bad valuation"))?;
        let t: usize = t.trim().parse().map_err(|_| bad("bad truncation"))?;
        let mut coeffs = Vec::new();
        for (k, line) in lines.enumerate() {
            let (e, c) =
                line.trim().split_once(char::is_whitespace).ok_or_else(|| bad("expected 'exponent coefficient'"))?;
            if e.parse::<usize>().ok() != Some(v + k) {
                return Err(bad("exponents must be consecutive from the valuation"));
            }
            coeffs.push(R::parse_scalar(&ctx, c.trim())?);
        }
        QSeries::new(ctx, v, t, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Biquad, QuadElement, QuadField, Rational, TowerElement, TowerParam};

    #[test]
    fn json_round_trip_integers() {
        let f = QSeries::<i64>::from_dense(&(), vec![0, 1, -2, 0, 5]).unwrap().shift(3);
        let back = QSeries::<i64>::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn text_round_trip_tower() {
        let p = TowerParam::new(Biquad::from_ints([1, 0, -2, 0])).unwrap();
        let c = TowerElement::s(&p).scale(&Rational::new(-3, 7).unwrap());
        let f = QSeries::from_terms(&p, 4, [(1, c), (3, TowerElement::one(&p))]);
        let back = QSeries::<TowerElement>::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        let back = QSeries::<TowerElement>::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn quad_ring_tag() {
        let k = QuadField::SqrtMinus6;
        let f = QSeries::from_terms(&k, 3, [(2, QuadElement::from_ints(k, 1, -1))]);
        assert!(f.to_json().contains("\"ring\":\"quad(-24)\""));
        assert_eq!(QSeries::<QuadElement>::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects_shape_errors() {
        let j = r#"{"valuation":2,"truncation":5,"ring":"Z","coeffs":["1"]}"#;
        assert!(QSeries::<i64>::from_json(j).is_err());
        let j = r#"{"valuation":0,"truncation":1,"ring":"Q","coeffs":["1"]}"#;
        assert!(QSeries::<i64>::from_json(j).is_err());
    }
}
