//! Independent oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

use lacunary::arith::{is_prime, kronecker, primes_up_to};
use lacunary::cmforms::{cm_expansion, identity, CmFormSpec};
use lacunary::exactalg::{QuadField, Rational, Ring};
use lacunary::heckechars::CharacterSpec;
use lacunary::heckeops::{hecke_tp, Nebentypus, SpaceDescriptor};
use lacunary::qseries::QSeries;
use lacunary::quadideals::{ideal_count_oracle, ideals_of_norm, QuadIdeal};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Counts ideals of norm `m` by enumerating Hermite normal forms
/// `[a, b + c theta]` with `ac = m`, `c | a`, `c | b`, `0 <= b < a`,
/// keeping those closed under multiplication by `theta`.
pub fn brute_ideal_count(field: QuadField, m: u64) -> u64 {
    let (tr, nm) = (field.theta_trace(), field.theta_norm());
    let m = m as i64;
    let mut count = 0;
    for c in (1..=m).filter(|c| m % c == 0) {
        let a = m / c;
        if a % c != 0 {
            continue;
        }
        // (x, y) = x + y theta lies in the lattice iff c | y and a | x - (y/c) b
        let contains = |b: i64, x: i64, y: i64| y % c == 0 && (x - (y / c) * b).rem_euclid(a) == 0;
        for b in (0..a).step_by(c as usize) {
            // theta * a = a theta, theta (b + c theta) = -c N + (b + c T) theta
            if contains(b, 0, a) && contains(b, -c * nm, b + c * tr) {
                count += 1;
            }
        }
    }
    count
}

pub fn check_ideal_counts(max: u64) -> Result<usize, String> {
    let mut checked = 0;
    for field in QuadField::ALL {
        for m in 1..=max {
            let listed = ideals_of_norm(field, m).len() as u64;
            let oracle = ideal_count_oracle(field, m);
            let brute = brute_ideal_count(field, m);
            if listed != oracle || listed != brute {
                return Err(format!("{field} m={m}: listed {listed}, oracle {oracle}, lattice {brute}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn random_ideal(sp: &CharacterSpec, rng: &mut StdRng) -> QuadIdeal {
    loop {
        let m = rng.gen_range(1..=400);
        let ideals = ideals_of_norm(sp.field(), m);
        if ideals.is_empty() {
            continue;
        }
        let i = ideals[rng.gen_range(0..ideals.len())];
        if i.is_coprime(sp.conductor()).unwrap() {
            return i;
        }
    }
}

/// `c(IJ) = c(I) c(J)` on `pairs` random pairs of mutually coprime ideals
/// prime to the conductor, for every character.
pub fn check_character_multiplicativity(pairs: usize, seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checked = 0;
    for case in CharacterSpec::all_cases() {
        let sp = CharacterSpec::new(case).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < pairs {
            let (i, j) = (random_ideal(&sp, &mut rng), random_ideal(&sp, &mut rng));
            if !i.is_coprime(&j).unwrap() {
                continue;
            }
            let prod = sp.evaluate(&i.mul(&j).unwrap()).map_err(|e| e.to_string())?;
            let split = sp.evaluate(&i).and_then(|a| a.checked_mul(&sp.evaluate(&j)?)).map_err(|e| e.to_string())?;
            if prod != split {
                return Err(format!("{case}: c({i:?} {j:?}) = {prod:?} but c(I)c(J) = {split:?}"));
            }
            done += 1;
        }
        checked += done;
    }
    Ok(checked)
}

/// Every CM form appearing in the five identities.
pub fn all_forms() -> Vec<(String, CmFormSpec)> {
    let mut out = Vec::new();
    for case in 1..=5 {
        for (name, f) in identity(case).unwrap().forms {
            out.push((format!("case{case}/{name}"), f));
        }
    }
    out
}

fn field_of(f: &CmFormSpec) -> QuadField {
    f.character().field()
}

/// Inert primes give `a(p) = 0`, and `|a(p)| <= 2 sqrt(p)` for all good `p <= pmax`.
pub fn check_inert_and_hasse(pmax: u64) -> Result<usize, String> {
    let mut checked = 0;
    for (name, f) in all_forms() {
        let s = cm_expansion(&f, pmax as usize + 1).map_err(|e| e.to_string())?;
        let d = field_of(&f).discriminant();
        for p in primes_up_to(pmax as usize) {
            if f.level() % p == 0 {
                continue;
            }
            let a = s.coeff(p as usize).unwrap();
            if kronecker(d, p as i64) == -1 && !a.is_zero() {
                return Err(format!("{name}: inert p={p} has a(p) = {a}"));
            }
            if a.abs_squared_approx() > 4.0 * p as f64 * (1.0 + 1e-12) {
                return Err(format!("{name}: |a({p})|^2 = {} exceeds 4p", a.abs_squared_approx()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `T_p phi = a(p) phi` at the first `count` good split primes of each form.
///
/// The operator is applied from its definition with `chi(p) p` read off the
/// form itself as `a(p)^2 - a(p^2)`, then cross-checked against the nebentypus
/// value the form reports.
pub fn check_eigenforms(count: usize) -> Result<usize, String> {
    let mut checked = 0;
    for (name, f) in all_forms() {
        let d = field_of(&f).discriminant();
        let primes: Vec<u64> =
            (5..).filter(|&p| is_prime(p) && f.level() % p != 0 && kronecker(d, p as i64) == 1).take(count).collect();
        let pmax = *primes.last().unwrap() as usize;
        let m = pmax + 6;
        let s = cm_expansion(&f, pmax * m + 1).map_err(|e| e.to_string())?;
        let param = s.context().clone();
        for &p in &primes {
            let pu = p as usize;
            let ap = s.coeff(pu).unwrap().clone();
            let chi_p = ap.mul_ref(&ap).sub_ref(s.coeff(pu * pu).unwrap());
            let reported = f.nebentypus(p, &param).map_err(|e| e.to_string())?;
            if chi_p != reported.scale(&Rational::from(p as i64)) {
                return Err(format!("{name}: p={p} gives chi(p) p = {chi_p}, form reports chi(p) = {reported}"));
            }
            for n in 0..m {
                let mut c = s.coeff(n * pu).unwrap().clone();
                if n % pu == 0 {
                    c = c.add_ref(&chi_p.mul_ref(s.coeff(n / pu).unwrap()));
                }
                if c != ap.mul_ref(s.coeff(n).unwrap()) {
                    return Err(format!("{name}: (T_{p} phi)({n}) = {c} differs from a(p) a(n)"));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn random_series(rng: &mut StdRng, t: usize) -> QSeries<i64> {
    let v = rng.gen_range(0..4.min(t));
    let coeffs = (0..t).map(|n| if n < v { 0 } else { rng.gen_range(-50..=50) }).collect();
    QSeries::from_dense(&(), coeffs).unwrap()
}

/// `T_p(x f + y g) = x T_p f + y T_p g` on random integer series.
pub fn check_hecke_linearity(trials: usize, seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let primes = [2u64, 3, 5, 7, 11, 13, 23];
    let chars = [Nebentypus::Trivial, Nebentypus::Kronecker(-4), Nebentypus::Kronecker(-3), Nebentypus::Kronecker(8)];
    for k in 0..trials {
        let t = rng.gen_range(1..300);
        let (f, g) = (random_series(&mut rng, t), random_series(&mut rng, t));
        let (x, y) = (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        let p = primes[rng.gen_range(0..primes.len())];
        let space = SpaceDescriptor::new(rng.gen_range(1..=4), 1, chars[rng.gen_range(0..chars.len())]);
        let lhs = hecke_tp(&f.scale(&x).unwrap().add(&g.scale(&y).unwrap()).unwrap(), p, &space).unwrap();
        let tf = hecke_tp(&f, p, &space).unwrap();
        let tg = hecke_tp(&g, p, &space).unwrap();
        let rhs = tf.scale(&x).unwrap().add(&tg.scale(&y).unwrap()).unwrap();
        if lhs != rhs {
            return Err(format!("trial {k}: p={p} {space:?} breaks linearity"));
        }
    }
    Ok(trials)
}
