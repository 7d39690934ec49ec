use std::collections::BTreeSet;

use fano::catalog::{canonical_json, Catalog, Filter, Flag, Predicate};

fn cat() -> &'static Catalog {
    Catalog::builtin()
}

#[test]
fn zero_failures() {
    let failures: Vec<String> = cat()
        .verify_all()
        .iter()
        .flat_map(|r| r.failures().map(move |c| format!("{} {}", r.subject, c.name)))
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn four_without_intermediate_jacobian() {
    let ids: BTreeSet<&str> =
        cat().list(&Filter { rho: Some(1), h12: Some(0), ..Filter::default() }).iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, BTreeSet::from(["P3", "Q", "V5", "X22"]));
}

#[test]
fn cube_bounds() {
    assert!(cat().entries.iter().filter(|e| e.rho == 1).all(|e| e.antik_cube <= 72));
    assert_eq!(cat().entries.iter().map(|e| e.antik_cube).max(), Some(64));
}

#[test]
fn index_one_identities() {
    for e in cat().list(&Filter { index: Some(1), ..Filter::default() }) {
        assert_eq!(e.antik_cube, 2 * e.genus.unwrap() - 2, "{}", e.id);
    }
    for e in cat().list(&Filter { index: Some(2), ..Filter::default() }) {
        assert_eq!(e.antik_cube % 8, 0, "{}", e.id);
    }
}

#[test]
fn chi_top_identity() {
    for e in &cat().entries {
        assert_eq!(e.chi_top, 2 + 2 * e.rho - 2 * e.h12, "{}", e.id);
    }
}

#[test]
fn families_share_ids() {
    let fams: Vec<(i64, String)> = cat()
        .entries
        .iter()
        .filter_map(|e| Some((e.genus?, e.family.clone()?)))
        .collect();
    assert_eq!(fams.len(), 4);
    assert!(fams.iter().all(|(g, _)| *g == 3 || *g == 6));
}

#[test]
fn facts() {
    let preds = |id: &str| cat().facts_for(id).iter().map(|f| f.predicate).collect::<BTreeSet<_>>();
    assert_eq!(preds("V3"), BTreeSet::from([Predicate::Irrational]));
    let g7 = preds("X12");
    assert!(g7.contains(&Predicate::Rational) && g7.contains(&Predicate::EulerNumber));
    assert_eq!(cat().euler_number("X12"), Some(-10));
    assert!(preds("unknown").is_empty());
}

#[test]
fn primitive_rank_two_count() {
    let n = cat().list(&Filter { rho: Some(2), flag: Some(Flag::Primitive), ..Filter::default() }).len();
    assert_eq!(n, 9);
}

#[test]
fn broken_entries_are_reported() {
    let mut e = cat().entry("rho2-21").unwrap().clone();
    e.antik_cube += 2;
    let names: Vec<String> = cat().verify(&e).failures().map(|c| c.name.clone()).collect();
    assert!(names.contains(&"construction-cube".to_string()), "{names:?}");
    let mut e = cat().entry("trig-g8").unwrap().clone();
    e.h12 = 4;
    e.chi_top = 0;
    let names: Vec<String> = cat().verify(&e).failures().map(|c| c.name.clone()).collect();
    assert_eq!(names, ["scroll-euler-trigonal"]);
}

#[test]
fn rejects_other_schema_versions() {
    let mut v: serde_json::Value = serde_json::from_str(&canonical_json(cat())).unwrap();
    v["schema_version"] = serde_json::json!(2);
    assert!(Catalog::parse(&v.to_string()).is_err());
}

#[test]
fn mukai_table() {
    let n: Vec<(i64, i64)> = cat().mukai.iter().map(|m| (m.genus, m.dimension)).collect();
    assert_eq!(n, [(6, 6), (7, 10), (8, 8), (9, 6), (10, 5)]);
}
