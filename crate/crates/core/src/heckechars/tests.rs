use super::*;
use crate::quadideals::{epsilon, ideals_of_norm};

const C603: CharacterCase = CharacterCase::Case5Gauss { r: 6, s: 0, t: 3 };
const C203: CharacterCase = CharacterCase::Case5Gauss { r: 2, s: 0, t: 3 };
const C130: CharacterCase = CharacterCase::Case5Real { r: 1, s: 3, t: 0, primed: false };
const C310: CharacterCase = CharacterCase::Case5Real { r: 3, s: 1, t: 0, primed: false };

fn spec(c: CharacterCase) -> CharacterSpec {
    CharacterSpec::new(c).unwrap()
}

fn norm_sum(sp: &CharacterSpec, n: u64) -> CharValue {
    let param = sp.tower_param().clone();
    let mut acc = CharValue::Tower(TowerElement::zero(&param));
    for i in ideals_of_norm(sp.field(), n) {
        acc = acc.checked_add(&sp.evaluate(&i).unwrap()).unwrap();
    }
    acc
}

#[test]
fn primary_representatives() {
    let g = QuadField::Gaussian;
    assert_eq!(
        spec(CharacterCase::Case2).primary_representative(&QuadElement::from_ints(g, 2, 1)).unwrap(),
        QuadElement::from_ints(g, -1, 2)
    );
    let e = QuadField::Eisenstein;
    assert_eq!(
        spec(CharacterCase::Case3).primary_representative(&QuadElement::from_ints(e, 2, 0)).unwrap(),
        QuadElement::from_ints(e, 2, 0)
    );
    assert_eq!(spec(C603).primary_representative(&QuadElement::one(g)).unwrap(), QuadElement::one(g));
}

#[test]
fn normalization_failure_is_reported() {
    // 1 + i is not coprime to the conductor, and no associate is primary
    let r = spec(CharacterCase::Case2).primary_representative(&QuadElement::from_ints(QuadField::Gaussian, 1, 1));
    assert!(matches!(r, Err(CharError::Normalization { count: 0, .. })));
}

#[test]
fn exponent_tuples() {
    let g = QuadField::Gaussian;
    let c4 = spec(CharacterCase::Case4(Sign::Plus));
    assert_eq!(c4.exponents(&QuadElement::one(g)).unwrap(), (0, 0, 0));
    let c130 = spec(C130);
    assert_eq!(c130.exponents(&QuadElement::from_ints(QuadField::SqrtMinus6, 1, 1)).unwrap(), (1, 0, 0));
}

#[test]
fn case2_values_above_five() {
    let sp = spec(CharacterCase::Case2);
    let p = QuadIdeal::principal(QuadField::Gaussian, (2, 1)).unwrap();
    assert_eq!(sp.evaluate(&p).unwrap(), CharValue::Quad(QuadElement::from_ints(QuadField::Gaussian, -1, 2)));
    assert_eq!(norm_sum(&sp, 5).to_rational(), Some(Rational::from(-2)));
}

#[test]
fn gaussian_case5_sums_at_five_and_49() {
    assert_eq!(norm_sum(&spec(C603), 5).to_rational(), Some(Rational::from(2)));
    assert_eq!(norm_sum(&spec(C203), 5).to_rational(), Some(Rational::from(-2)));
    assert_eq!(norm_sum(&spec(C603), 49).to_rational(), Some(Rational::from(-7)));
}

#[test]
fn tower_parameter_is_one_minus_two_r() {
    for c in [C130, C310] {
        let sp = spec(c);
        assert_eq!(sp.tower_param().u(), &Biquad::from_ints([1, 0, -2, 0]));
        let b = sp.branch().unwrap();
        let sq = b.checked_mul(b).unwrap();
        let direct = sp.evaluate_element(&QuadElement::from_ints(QuadField::SqrtMinus6, -1, 2)).unwrap();
        assert_eq!(CharValue::Tower(sq), direct);
    }
}

#[test]
fn scaled_norm_five_coefficient_is_one() {
    let sp = spec(C130);
    let t = t_scale(sp.tower_param());
    let CharValue::Tower(a5) = norm_sum(&sp, 5) else { panic!("tower value expected") };
    assert_eq!(t.checked_mul(&a5).unwrap().to_rational(), Some(Rational::one()));
    let CharValue::Tower(a49) = norm_sum(&sp, 49) else { panic!("tower value expected") };
    assert_eq!(a49.to_rational(), Some(Rational::from(17)));
}

#[test]
fn omega_times_epsilon_is_trivial() {
    for c in [CharacterCase::Case3, CharacterCase::Case4(Sign::Plus), CharacterCase::Case4(Sign::Minus)] {
        let sp = spec(c);
        let k = sp.field();
        for n in 1..=100i64 {
            if crate::arith::gcd(n, sp.conductor().norm()) != 1 {
                assert!(sp.dirichlet_omega(n).is_err());
                continue;
            }
            let w = sp.dirichlet_omega(n).unwrap();
            let prod = w.scale(&Rational::from(epsilon(k, n) as i64));
            assert_eq!(prod.to_rational(), Some(Rational::one()), "{c} n={n}");
        }
    }
}

#[test]
fn odd_zeta_index_rejected() {
    assert!(matches!(
        CharacterSpec::new(CharacterCase::Case5Gauss { r: 1, s: 0, t: 3 }),
        Err(CharError::OddZetaIndex(1))
    ));
}

#[test]
fn conductors_and_levels() {
    let want = [36, 32, 27, 576, 576, 2304, 2304, 2304, 2304, 2304, 2304];
    for (c, n) in CharacterSpec::all_cases().into_iter().zip(want) {
        assert_eq!(spec(c).level(), n, "{c}");
    }
}

#[test]
fn non_coprime_ideal_rejected() {
    let sp = spec(C130);
    let two = ideals_of_norm(QuadField::SqrtMinus6, 2)[0];
    assert!(matches!(sp.evaluate(&two), Err(CharError::NotCoprime(_))));
}
