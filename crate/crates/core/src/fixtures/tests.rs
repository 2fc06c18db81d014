use super::*;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn cell_grammar() {
    assert_eq!("*".parse::<Cell>().unwrap(), Cell::Skip);
    assert_eq!("-3".parse::<Cell>().unwrap(), Cell::int(-3));
    let c: Cell = "-2*sqrt6*t".parse().unwrap();
    assert_eq!(c, Cell::Expr { coef: Rational::from(-2), sqrt6: 1, t: true, i: false });
    assert_eq!(c.to_string(), "-2*sqrt6*t");
    assert_eq!("4/sqrt6".parse::<Cell>().unwrap().to_string(), "4/sqrt6");
    assert!("3*t*t".parse::<Cell>().is_err());
    assert!("3*x".parse::<Cell>().is_err());
    let p = TowerParam::unit();
    let six = "1*sqrt6".parse::<Cell>().unwrap().to_tower(&p).unwrap();
    assert_eq!(six.mul_ref(&six).to_rational(), Some(Rational::from(6)));
    let inv = "6/sqrt6".parse::<Cell>().unwrap().to_tower(&p).unwrap();
    assert_eq!(inv, six);
}

#[test]
fn appendix1_length_enforced() {
    let good: Vec<String> = (0..1000).map(|k| (k % 3).to_string()).collect();
    let text = good.chunks(23).map(|r| r.join(" ")).collect::<Vec<_>>().join("\n");
    assert_eq!(parse_appendix1(&text).unwrap().len(), 1000);
    let short = good[..999].chunks(23).map(|r| r.join(" ")).collect::<Vec<_>>().join("\n");
    assert!(matches!(parse_appendix1(&short), Err(FixtureError::Malformed { .. })));
    assert!(parse_appendix1("1 2 x").is_err());
}

#[test]
fn rows_must_be_coprime_to_six() {
    assert_eq!(parse_appendix2("n,a,b,c\n1,0,1,1\n").unwrap()[0].status, RowStatus::Ok);
    assert!(matches!(parse_appendix2("n,a,b,c\n4,0,1,1\n"), Err(FixtureError::Malformed { line: 2, .. })));
}

#[test]
fn missing_directory_reported() {
    assert!(matches!(FixtureSet::load("/nonexistent/fixtures"), Err(FixtureError::Missing(_))));
}

#[test]
fn shipped_fixtures_load_and_verify() {
    assert!(verify_manifest(&dir()).unwrap());
    let set = FixtureSet::load(dir()).unwrap();
    assert_eq!(set.appendix1, CoefficientTable::computed(1000));
    assert_eq!(set.appendix2.len(), 64);
    assert_eq!(set.appendix3.len(), 256);
}

#[test]
fn tampered_file_fails_checksum() {
    let tmp = std::env::temp_dir().join(format!("lacunary-fixtures-{}", std::process::id()));
    fs::create_dir_all(&tmp).unwrap();
    for f in [APPENDIX1, APPENDIX2, APPENDIX3, MANIFEST] {
        fs::copy(dir().join(f), tmp.join(f)).unwrap();
    }
    let mut a2 = fs::read_to_string(tmp.join(APPENDIX2)).unwrap();
    a2 = a2.replacen("5,1,-4,4", "5,1,-4,5", 1);
    fs::write(tmp.join(APPENDIX2), a2).unwrap();
    assert_eq!(FixtureSet::load(&tmp).unwrap_err(), FixtureError::Checksum(APPENDIX2.into()));
    fs::remove_dir_all(&tmp).unwrap();
}

#[test]
fn appendix2_matches() {
    let set = FixtureSet::load(dir()).unwrap();
    let s = TableSummary::from_checks(&check_appendix2(&set.appendix2).unwrap());
    assert_eq!(s.matched, 63);
    assert_eq!(s.errata_confirmed, vec![109]);
    assert!(s.passes());
}

#[test]
fn appendix3_matches_up_to_confirmed_errata() {
    let set = FixtureSet::load(dir()).unwrap();
    let checks = check_appendix3(&set.appendix3).unwrap();
    let s = TableSummary::from_checks(&checks);
    assert_eq!(s.mismatched, Vec::<u64>::new());
    assert_eq!(s.errata_confirmed, vec![1, 265, 269, 289, 337]);
    assert_eq!(s.quarantined, vec![637, 683]);
    assert_eq!(s.matched, 256 - 7);
    assert!(s.passes());
}

#[test]
fn corrupted_cell_is_caught() {
    let set = FixtureSet::load(dir()).unwrap();
    let mut rows = set.appendix3.clone();
    let r = rows.iter_mut().find(|r| r.n == 29).unwrap();
    r.cells[2] = Cell::int(2);
    let s = TableSummary::from_checks(&check_appendix3(&rows).unwrap());
    assert_eq!(s.mismatched, vec![29]);
    // an erratum whose printed value is changed no longer passes its check
    let r = rows.iter_mut().find(|r| r.n == 289).unwrap();
    r.cells[2] = Cell::int(17);
    let s = TableSummary::from_checks(&check_appendix3(&rows).unwrap());
    assert!(s.errata_unconfirmed.contains(&289));
}
