#![allow(dead_code)]

use fano::catalog::Catalog;
use fano::sarkisov::{enumerate_links, filter_links, Center, LinkCandidate, LinkStatus, TargetInvariants};

/// `(g, type, a, b, target, status)`. The target is a catalog id for
/// birational types, `conic-bundle:deg` or `dP:deg` otherwise; the status
/// is `confirmed` or the name of the excluding rule.
pub type Row = (i64, &'static str, i64, i64, &'static str, &'static str);

pub const LINE: &[Row] = &[
    (7, "D1", 1, 1, "dP:5", "confirmed"),
    (8, "C1", 1, 1, "conic-bundle:5", "confirmed"),
    (9, "B1", 3, 4, "P3", "confirmed"),
    (10, "B1", 2, 3, "Q", "confirmed"),
    (12, "B1", 1, 2, "V5", "confirmed"),
];

pub const CONIC: &[Row] = &[
    (7, "B1", 3, 2, "V3", "rationality"),
    (7, "B1", 5, 3, "Q", "confirmed"),
    (8, "B1", 1, 1, "X14", "confirmed"),
    (8, "B2", 1, 1, "X16", "euler"),
    (9, "D1", 1, 1, "dP:6", "confirmed"),
    (10, "C1", 1, 1, "conic-bundle:4", "confirmed"),
    (11, "B1", 3, 4, "P3", "genus-bound"),
    (12, "B1", 2, 3, "Q", "confirmed"),
];

pub const POINT: &[Row] = &[
    (7, "B1", 2, 1, "X10-gm", "geometric:empty-double-anticanonical-system"),
    (7, "B1", 5, 2, "V5", "confirmed"),
    (7, "B2", 2, 1, "X12", "geometric:empty-double-anticanonical-system"),
    (8, "B1", 3, 2, "V3", "confirmed"),
    (8, "B1", 5, 3, "Q", "euler"),
    (9, "B1", 1, 1, "X14", "rationality"),
    (9, "B2", 1, 1, "X16", "confirmed"),
    (10, "D1", 1, 1, "dP:6", "confirmed"),
    (11, "C1", 1, 1, "conic-bundle:4", "genus-bound"),
    (12, "B1", 3, 4, "P3", "confirmed"),
    (13, "B1", 2, 3, "Q", "genus-bound"),
];

pub fn expected(center: Center) -> &'static [Row] {
    match center {
        Center::Line => LINE,
        Center::Conic => CONIC,
        Center::Point => POINT,
        Center::Curve { .. } => &[],
    }
}

pub fn genera() -> Vec<i64> {
    (7..=40).collect()
}

pub fn filtered(center: Center) -> Vec<LinkCandidate> {
    filter_links(enumerate_links(center, &genera()).unwrap(), Catalog::builtin())
}

pub fn row_of(c: &LinkCandidate) -> (i64, String, i64, i64, String, String) {
    let target = match &c.target {
        TargetInvariants::Blowdown { target, .. } | TargetInvariants::SmoothPoint { target, .. } => target.clone(),
        TargetInvariants::SingularPoint { iota, degree, .. } => format!("singular:{iota}:{degree}"),
        TargetInvariants::ConicBundle { discriminant_degree } => format!("conic-bundle:{discriminant_degree}"),
        TargetInvariants::DelPezzoFibration { fiber_degree } => format!("dP:{fiber_degree}"),
    };
    let status = match &c.status {
        LinkStatus::Confirmed => "confirmed".to_string(),
        LinkStatus::Excluded { rule, .. } => rule.clone(),
    };
    (c.genus, c.ctype.to_string(), c.a, c.b, target, status)
}

pub fn rows(cands: &[LinkCandidate]) -> Vec<(i64, String, i64, i64, String, String)> {
    cands.iter().map(row_of).collect()
}

pub fn owned(rows: &[Row]) -> Vec<(i64, String, i64, i64, String, String)> {
    rows.iter().map(|&(g, t, a, b, y, s)| (g, t.into(), a, b, y.into(), s.into())).collect()
}

/// `E-^3` recomputed on the far side of the link: `X-` is the blowup of
/// `Z` on `Y`, so on `(M-, F-)` the form is `(d, 0, -deg Z, 2 - 2g(Z) - iota deg Z)`,
/// and `E-` is recovered from `F- = p(-K) - qE-` with `-K = iota M- - F-`.
pub fn far_side_ebar_cube(c: &LinkCandidate) -> Option<fano::Rational> {
    use fano::{DivisorClass, Rational, TrilinearForm};
    let TargetInvariants::Blowdown { iota, degree, deg_z, genus_z, .. } = &c.target else { return None };
    let form = TrilinearForm::mf(*degree, 0, -deg_z, 2 - 2 * genus_z - iota * deg_z);
    let f = c.f_bar.as_ref()?;
    let (p, q) = (&f.coords[0], -&f.coords[1]);
    // E- = (p(-K) - F-) / q = (p iota M- - (p + 1) F-) / q on the (M-, F-) basis.
    let e = DivisorClass::mf(p * Rational::integer(*iota) / &q, -(p + Rational::one()) / &q);
    form.cube(&e).ok()
}
