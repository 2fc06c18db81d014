//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lacunary::cmforms::{coefficient_via_multiplicativity, identity, verify_identity};
use lacunary::exactalg::{QuadField, Rational};
use lacunary::fixtures::{check_appendix2, check_appendix3, load_appendix1, FixtureSet, TableSummary};
use lacunary::heckeops::sturm_bound;
use lacunary::lacunarity::{
    eligible, expand_fb12, full_scan, lacunary_set, witness_search, zero_density, DensityMode, Evidence, ScanOptions,
};
use lacunary::qseries::{eta_factor, QSeries};
use lacunary::quadideals::QuadIdeal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn describe_errata(s: &TableSummary) -> String {
    if s.errata_confirmed.is_empty() {
        String::new()
    } else {
        format!(", printed misprints confirmed independently at n = {:?}", s.errata_confirmed)
    }
}

fn table_ok(s: &TableSummary, name: &str) -> Result<(), String> {
    ensure(s.mismatched.is_empty(), format!("{name} rows disagree at n = {:?}", s.mismatched))?;
    ensure(
        s.errata_unconfirmed.is_empty(),
        format!("{name} errata at n = {:?} are not confirmed by their consistency checks", s.errata_unconfirmed),
    )
}

fn c1() -> Outcome {
    let table = load_appendix1(&fixtures()).map_err(err)?;
    let f: QSeries<i64> = eta_factor(&(), 1, 2, 1001);
    let bad: Vec<usize> = (1..=1000).filter(|&m| table.get(m) != f.coeff(m).copied()).collect();
    ensure(bad.is_empty(), format!("mismatches at {bad:?}"))?;
    Ok("b(1..1000) match the fixture, 0 mismatches".into())
}

fn c2() -> Outcome {
    let id = identity(4).map_err(err)?;
    let target = expand_fb12(4, 193);
    let rep = verify_identity(&target, &id.combination, 192, |x| Rational::from(*x)).map_err(err)?;
    ensure(rep.equal, format!("identity fails at {:?}", rep.first_mismatch))?;
    let set = FixtureSet::load(fixtures()).map_err(err)?;
    let s = TableSummary::from_checks(&check_appendix2(&set.appendix2).map_err(err)?);
    table_ok(&s, "table 2")?;
    ensure(s.rows == 64, format!("{} rows", s.rows))?;
    Ok(format!(
        "f_4(12z) = (1/8)(phi- - phi+) through 192; table 2: {}/{} rows exact{}",
        s.matched,
        s.rows,
        describe_errata(&s)
    ))
}

fn c3() -> Outcome {
    let id = identity(5).map_err(err)?;
    let rep = id.verify().map_err(err)?;
    ensure(rep.equal && rep.bound == 768, format!("identity fails at {:?} (bound {})", rep.first_mismatch, rep.bound))?;
    let set = FixtureSet::load(fixtures()).map_err(err)?;
    let s = TableSummary::from_checks(&check_appendix3(&set.appendix3).map_err(err)?);
    table_ok(&s, "table 3")?;
    ensure(s.quarantined == [637, 683], format!("quarantine is {:?}", s.quarantined))?;
    Ok(format!(
        "case 5 equal through 768 in the tower; table 3: {}/{} non-quarantined rows exact{}; quarantined {:?}",
        s.matched,
        s.rows - s.quarantined.len(),
        describe_errata(&s),
        s.quarantined
    ))
}

fn c4() -> Outcome {
    let id = identity(5).map_err(err)?;
    let via = coefficient_via_multiplicativity(&id.combination, 29645).map_err(err)?;
    ensure(via == Rational::from(-70), format!("multiplicativity gives {via}"))?;
    let direct = *expand_fb12(16, 29646).coeff(29645).unwrap();
    ensure(direct == -70, format!("direct expansion gives {direct}"))?;
    Ok("a(29645) = -70 by multiplicativity and by direct expansion".into())
}

fn c5() -> Outcome {
    let verdicts = full_scan(&ScanOptions::new(175)).map_err(err)?;
    let set = lacunary_set(&verdicts);
    ensure(set == [1, 2, 3, 4, 16], format!("lacunary set {set:?}"))?;
    let mut witnesses = 0;
    for v in verdicts.iter().filter(|v| eligible(v.b) && !v.lacunary) {
        match v.evidence {
            Evidence::Witness { prime: 23, value, .. } if value != 0 => witnesses += 1,
            ref e => return Err(format!("b={} carries {e:?}", v.b)),
        }
    }
    Ok(format!("lacunary set {{1,2,3,4,16}}; {witnesses} non-lacunary b with nonzero T_23 witnesses"))
}

fn c6() -> Outcome {
    let table = load_appendix1(&fixtures()).map_err(err)?;
    let mut count = 0;
    for b in (176..=500).filter(|&b| eligible(b)) {
        match witness_search(b, &table).map_err(err)? {
            Some(w) if w.value != 0 => count += 1,
            other => return Err(format!("b={b}: {other:?}")),
        }
    }
    let w = witness_search(200, &table).map_err(err)?.ok_or("no witness for b=200")?;
    ensure(w.n == 231, format!("b=200 witness n={}", w.n))?;
    ensure(table.get(w.table_index) == Some(w.table_value), "table value not from the fixture")?;
    let direct = *expand_fb12(200, 23 * 231 + 1).coeff(23 * 231).unwrap();
    ensure(direct == w.value, format!("direct a(23*231) = {direct}, witness says {}", w.value))?;
    Ok(format!(
        "{count} eligible b in [176,500] have witnesses; b=200: n=231, b({}) = {}, a(5313) = {direct}",
        w.table_index, w.table_value
    ))
}

fn c7() -> Outcome {
    let (a, b) = (sturm_bound(2, 576), sturm_bound(2, 2304));
    ensure(a == 192 && b == 768, format!("got {a} and {b}"))?;
    Ok("sturm_bound(2,576) = 192, sturm_bound(2,2304) = 768".into())
}

fn c8() -> Outcome {
    let expected = [
        (1u8, 36u64, QuadField::Eisenstein, (2i64, 4i64)),
        (2, 32, QuadField::Gaussian, (2, 2)),
        (3, 27, QuadField::Eisenstein, (3, 0)),
    ];
    for (case, level, field, gen) in expected {
        let id = identity(case).map_err(err)?;
        ensure(id.level == level, format!("case {case} level {}", id.level))?;
        let want = QuadIdeal::principal(field, gen).map_err(err)?;
        for (_, f) in id.combination.terms() {
            let got = f.character().conductor();
            ensure(got.normal_form() == want.normal_form(), format!("case {case} conductor {got:?}"))?;
        }
        let rep = id.verify().map_err(err)?;
        let bound = sturm_bound(2, level) as usize;
        ensure(rep.equal && rep.bound == bound, format!("case {case} fails at {:?}", rep.first_mismatch))?;
    }
    Ok("cases 1-3 equal through 12, 8, 6 with conductors (2 sqrt(-3)), (2(1+i)), (3)".into())
}

fn c9() -> Outcome {
    let ideals = common::check_ideal_counts(2000)?;
    let chars = common::check_character_multiplicativity(500, 0xacce)?;
    let primes = common::check_inert_and_hasse(1000)?;
    let eigen = common::check_eigenforms(5)?;
    let lin = common::check_hecke_linearity(500, 0xacce)?;
    Ok(format!(
        "0 failures: {ideals} ideal counts, {chars} character pairs, {primes} prime coefficients, \
         {eigen} eigenform relations, {lin} linearity trials"
    ))
}

fn c10() -> Outcome {
    let xs = [1000usize, 5000, 10000];
    let density = |b: u64, f: &QSeries<i64>, x: usize| zero_density(f, x, DensityMode::support_of_fb12(b)).map_err(err);
    let mut floor: Option<Rational> = None;
    let mut report = Vec::new();
    for b in [1u64, 2, 3, 4, 16] {
        let f = expand_fb12(b, 10001);
        let ds = xs.iter().map(|&x| density(b, &f, x)).collect::<Result<Vec<_>, _>>()?;
        ensure(ds.windows(2).all(|w| w[0] <= w[1]), format!("b={b} densities decrease: {ds:?}"))?;
        let last = ds[2].clone();
        report.push(format!("b={b} {}", last.to_decimal_string(3)));
        floor = Some(floor.map_or(last.clone(), |m| m.min(last)));
    }
    let floor = floor.unwrap();
    for b in [5u64, 7, 10] {
        let d = density(b, &expand_fb12(b, 10001), 10000)?;
        ensure(d < floor, format!("b={b} density {d} is not below {floor}"))?;
        report.push(format!("b={b} {}", d.to_decimal_string(3)));
    }
    Ok(format!("nondecreasing for lacunary b; at X=10^4: {}", report.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table 1 regression", c1, Duration::from_secs(1)),
        ("case 4 identity and table 2", c2, Duration::from_secs(10)),
        ("case 5 identity and table 3", c3, Duration::from_secs(60)),
        ("a(29645) = -70", c4, Duration::from_secs(60)),
        ("classification b <= 175", c5, Duration::from_secs(300)),
        ("witnesses for b in [176,500]", c6, Duration::from_secs(5)),
        ("Sturm bounds", c7, Duration::from_secs(1)),
        ("cases 1-3", c8, Duration::from_secs(60)),
        ("property suites", c9, Duration::from_secs(600)),
        ("density monotonicity", c10, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {took:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{took:.2?}]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{took:.2?}]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
