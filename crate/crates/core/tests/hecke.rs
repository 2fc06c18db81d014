mod common;

use lacunary::arith::kronecker;
use lacunary::heckeops::{gamma0_index, hecke_tp, hecke_tp_to, sturm_bound, Nebentypus, SpaceDescriptor};
use lacunary::qseries::{EtaQuotient, QSeries};
use proptest::prelude::*;

#[test]
fn linear_on_random_series() {
    assert_eq!(common::check_hecke_linearity(400, 0xbeef), Ok(400));
}

const FUNDAMENTAL: [i64; 10] = [-3, -4, -7, -8, -24, 5, 8, 12, 13, -20];

proptest! {
    #[test]
    fn kronecker_is_periodic_modulo_the_discriminant(i in 0usize..FUNDAMENTAL.len(), n in 1i64..10_000) {
        let d = FUNDAMENTAL[i];
        prop_assert_eq!(kronecker(d, n), kronecker(d, n + d.abs()));
    }

    #[test]
    fn kronecker_is_completely_multiplicative(i in 0usize..FUNDAMENTAL.len(), m in 1i64..500, n in 1i64..500) {
        let d = FUNDAMENTAL[i];
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }

    #[test]
    fn sturm_bound_is_monotone(k in 1u32..12, n in 1u64..2000, m in 1u64..20) {
        prop_assert!(sturm_bound(k, n) <= sturm_bound(k, n * m));
        prop_assert!(sturm_bound(k, n) <= sturm_bound(k + 1, n));
    }

    #[test]
    fn index_is_multiplicative_on_coprime_levels(a in 1u64..300, b in 1u64..300) {
        prop_assume!(num_integer::Integer::gcd(&a, &b) == 1);
        prop_assert_eq!(gamma0_index(a * b), gamma0_index(a) * gamma0_index(b));
    }
}

#[test]
fn truncation_shrinks_to_ceiling() {
    let f: QSeries<i64> = EtaQuotient::new([(1, 2), (11, 2)]).unwrap().expand(&(), 101).unwrap();
    let space = SpaceDescriptor::trivial(2, 11);
    assert_eq!(hecke_tp(&f, 7, &space).unwrap().truncation(), 15);
    assert!(hecke_tp_to(&f, 7, &space, 16).is_err());
    assert!(hecke_tp(&f, 9, &space).is_err());
}

/// eta(z)^2 eta(11z)^2 spans S_2(Gamma0(11)), so it is an eigenform for every T_p.
#[test]
fn level_eleven_eigenform() {
    let f: QSeries<i64> = EtaQuotient::new([(1, 2), (11, 2)]).unwrap().expand(&(), 2000).unwrap();
    let space = SpaceDescriptor::trivial(2, 11);
    for p in [2u64, 3, 5, 7, 13, 17, 19] {
        let tp = hecke_tp(&f, p, &space).unwrap();
        let ap = *f.coeff(p as usize).unwrap();
        assert_eq!(tp, f.truncate(tp.truncation()).scale(&ap).unwrap(), "p={p}");
    }
    // p | N: T_11 is U_11 with eigenvalue a(11) = 1
    let t11 = hecke_tp(&f, 11, &space).unwrap();
    assert_eq!(t11, f.truncate(t11.truncation()));
    let twisted = SpaceDescriptor::new(2, 11, Nebentypus::Kronecker(-4));
    assert_eq!(hecke_tp(&f, 11, &twisted).unwrap(), t11);
}
