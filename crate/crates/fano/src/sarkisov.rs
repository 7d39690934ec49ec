//! Numerical enumeration of Sarkisov links.
//!
//! A link starts with the blowup `X~ -> X` of a line, conic or point on an
//! index-1 Fano threefold of genus `g`, flops to `X-`, and ends with a
//! second extremal contraction of `X-`. The flop preserves every
//! intersection number that involves `-K` at least once, so the midpoint
//! form is known except for `E-^3`. Each contraction type imposes a small
//! system of exact equations on the classes
//!
//! ```text
//! M- = a(-K) - mu E-            pullback of the ample generator downstairs
//! F- = ((iota a - 1)(-K) - iota mu E-) / alpha    exceptional divisor
//! ```
//!
//! and every solution inside the search box is reported, together with the
//! rule that excludes it when the catalog knows better.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blowup::{blowup_curve, blowup_point, CurveCenter};
use crate::catalog::{Catalog, CatalogEntry, Predicate};
use crate::error::{FanoError, Result};
use crate::exactcore::{eval_form, DivisorClass, Rational, TrilinearForm};

/// Default bound on the `-K` coefficient of `M-`.
pub const SEARCH_BOUND: i64 = 20;

/// Smallest genus for which the dimension estimates on `|-K - E|` used by
/// the enumeration are valid.
pub const MIN_GENUS: i64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContractionTag {
    C1,
    C2,
    D1,
    D2,
    D3,
    B1,
    B2,
    B3,
    B4,
    B5,
}

impl ContractionTag {
    pub const ALL: [ContractionTag; 10] = [
        ContractionTag::C1,
        ContractionTag::C2,
        ContractionTag::D1,
        ContractionTag::D2,
        ContractionTag::D3,
        ContractionTag::B1,
        ContractionTag::B2,
        ContractionTag::B3,
        ContractionTag::B4,
        ContractionTag::B5,
    ];

    pub fn info(self) -> ContractionType {
        use ContractionTag::*;
        let (mu, alpha, k) = match self {
            C1 | D1 => (1, None, None),
            C2 | D2 => (2, None, None),
            D3 => (3, None, None),
            B1 => (1, Some(Rational::one()), None),
            B2 => (2, Some(Rational::integer(2)), Some(4)),
            B3 | B4 => (1, Some(Rational::one()), Some(2)),
            B5 => (1, Some(Rational::new(1, 2)), Some(1)),
        };
        ContractionType { tag: self, mu, alpha, k }
    }

    pub fn is_birational(self) -> bool {
        matches!(self, ContractionTag::B1 | ContractionTag::B2 | ContractionTag::B3 | ContractionTag::B4 | ContractionTag::B5)
    }

    /// The birational type contracting to a point with `(-K)^2 . F = k`.
    pub fn point_types_for_k(k: i64) -> Vec<ContractionTag> {
        match k {
            4 => vec![ContractionTag::B2],
            2 => vec![ContractionTag::B3, ContractionTag::B4],
            1 => vec![ContractionTag::B5],
            _ => vec![],
        }
    }

    /// Singularity of the image point for types B2 to B5.
    pub fn singularity(self) -> Option<&'static str> {
        match self {
            ContractionTag::B2 => Some("smooth point"),
            ContractionTag::B3 => Some("ordinary double point"),
            ContractionTag::B4 => Some("double point x^2+y^2+z^2+t^3"),
            ContractionTag::B5 => Some("quotient point 1/2(1,1,1)"),
            _ => None,
        }
    }

    pub fn fiber_degree_allowed(self, d: i64) -> bool {
        match self {
            ContractionTag::D1 => (1..=6).contains(&d),
            ContractionTag::D2 => d == 8,
            ContractionTag::D3 => d == 9,
            _ => false,
        }
    }

    pub fn discriminant_allowed(self, delta: i64) -> bool {
        match self {
            ContractionTag::C1 => delta >= 3,
            ContractionTag::C2 => delta == 0,
            _ => false,
        }
    }
}

impl fmt::Display for ContractionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Length `mu`, discrepancy `alpha` and `k = (-K)^2 . F` of a contraction type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionType {
    pub tag: ContractionTag,
    pub mu: i64,
    pub alpha: Option<Rational>,
    pub k: Option<i64>,
}

/// Center of the first blowup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Center {
    Line,
    Conic,
    Point,
    Curve { deg_antik: i64, genus: i64 },
}

impl Center {
    pub fn parse(s: &str) -> Result<Center> {
        match s {
            "line" => Ok(Center::Line),
            "conic" => Ok(Center::Conic),
            "point" => Ok(Center::Point),
            _ => Err(FanoError::InvalidInput(format!("unknown center {s:?}"))),
        }
    }

    /// Lower bound for `dim |-K - E|` on the blowup of a genus-`g` threefold.
    fn anticanonical_minus_e_dim(self, g: i64) -> Option<i64> {
        match self {
            Center::Line => Some(g - 6),
            Center::Conic => Some(g - 8),
            Center::Point => Some(g - 9),
            Center::Curve { .. } => None,
        }
    }

    fn euler(self) -> EulerCenter {
        match self {
            Center::Line | Center::Conic => EulerCenter::Curve { genus: 0 },
            Center::Point => EulerCenter::Point,
            Center::Curve { genus, .. } => EulerCenter::Curve { genus },
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Line => write!(f, "line"),
            Center::Conic => write!(f, "conic"),
            Center::Point => write!(f, "point"),
            Center::Curve { deg_antik, genus } => write!(f, "curve(deg {deg_antik}, genus {genus})"),
        }
    }
}

/// The `(-K, E)` form at the midpoint of a link with `E-^3` still unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidpointForm {
    /// `(-K)^3`, `(-K)^2 E`, `(-K) E^2`.
    pub known: [Rational; 3],
    /// `E^3` on the blowup side, before the flop.
    pub blowup_e_cube: Rational,
}

impl MidpointForm {
    pub fn with_ebar_cube(&self, e: Rational) -> TrilinearForm {
        let [a, b, c] = self.known.clone();
        TrilinearForm::ke(a, b, c, e)
    }

    pub fn blowup_form(&self) -> TrilinearForm {
        self.with_ebar_cube(self.blowup_e_cube.clone())
    }
}

pub fn midpoint_form(center: Center, antik_cube: impl Into<Rational>) -> Result<MidpointForm> {
    let c = antik_cube.into();
    let b = match center {
        Center::Line => blowup_curve(c, CurveCenter::new(1, 0)?)?,
        Center::Conic => blowup_curve(c, CurveCenter::new(2, 0)?)?,
        Center::Point => blowup_point(c)?,
        Center::Curve { deg_antik, genus } => blowup_curve(c, CurveCenter::new(deg_antik, genus)?)?,
    };
    let v = b.form.values().expect("rank-2 form").clone();
    Ok(MidpointForm { known: [v[0].clone(), v[1].clone(), v[2].clone()], blowup_e_cube: v[3].clone() })
}

pub fn midpoint_for_genus(center: Center, g: i64) -> Result<MidpointForm> {
    midpoint_form(center, 2 * g - 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetInvariants {
    /// B1: blowup of a smooth curve `Z` on a Fano threefold `Y`.
    Blowdown { target: String, iota: i64, degree: i64, deg_z: i64, genus_z: i64 },
    /// B2: blowup of a smooth point on `Y`.
    SmoothPoint { target: String, iota: i64, degree: i64 },
    /// B3, B4, B5: contraction to a singular point on a Fano `Y` with
    /// `-K_Y = iota M` and `M^3 = degree`.
    SingularPoint { iota: i64, degree: i64, k: i64, singularity: String },
    ConicBundle { discriminant_degree: i64 },
    DelPezzoFibration { fiber_degree: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LinkStatus {
    Confirmed,
    Excluded { rule: String, detail: String },
}

impl LinkStatus {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, LinkStatus::Confirmed)
    }

    pub fn rule(&self) -> Option<&str> {
        match self {
            LinkStatus::Confirmed => None,
            LinkStatus::Excluded { rule, .. } => Some(rule),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCandidate {
    pub center: Center,
    pub genus: i64,
    pub ctype: ContractionTag,
    /// `M- = a(-K) - bE-` for fiber types, `F- = a(-K) - bE-` for birational ones.
    pub a: i64,
    pub b: i64,
    pub m_bar: DivisorClass,
    pub f_bar: Option<DivisorClass>,
    pub midpoint: TrilinearForm,
    pub target: TargetInvariants,
    pub ebar_cube: Rational,
    pub defect: Rational,
    /// Values of `m >= 1` compatible with `|-K - E| = (m-1)E + |-K - mE|`.
    pub surviving_m: Vec<i64>,
    #[serde(flatten)]
    pub status: LinkStatus,
}

impl LinkCandidate {
    fn sort_key(&self) -> (i64, ContractionTag, i64, i64, String) {
        let t = serde_json::to_string(&self.target).expect("target serializes");
        (self.genus, self.ctype, self.a, self.b, t)
    }

    /// The class whose coefficients are reported in `a`, `b`.
    pub fn reported_class(&self) -> &DivisorClass {
        self.f_bar.as_ref().unwrap_or(&self.m_bar)
    }
}

fn int_coeffs(d: &DivisorClass) -> Option<(i64, i64)> {
    Some((d.coords[0].to_i64()?, -d.coords[1].to_i64()?))
}

struct Cell<'a> {
    center: Center,
    g: i64,
    mid: MidpointForm,
    targets: &'a [(i64, i64, String)],
}

impl Cell<'_> {
    fn k() -> DivisorClass {
        DivisorClass::ke(1, 0)
    }

    /// Solves `X^3 = value` for `E-^3` where `X = p(-K) - qE-`, `q != 0`.
    fn solve_cube(&self, x: &DivisorClass, value: &Rational) -> Rational {
        let zero = self.mid.with_ebar_cube(Rational::zero());
        let base = zero.cube(x).expect("same basis");
        let q3 = x.coords[1].pow(3);
        (value - base) / q3
    }

    fn candidates(&self, bound: i64) -> Vec<LinkCandidate> {
        let mut out = Vec::new();
        for a in 1..=bound {
            for tag in ContractionTag::ALL {
                self.try_type(a, tag, &mut out);
            }
        }
        out
    }

    /// Cheap integer test on the `E-^3`-free relations, run before any
    /// exact evaluation.
    fn may_admit(&self, a: i64, tag: ContractionTag) -> bool {
        let [ka, kb, kc] = self.mid.known.clone().map(|v| v.to_i64().expect("integral midpoint") as i128);
        let quad = |p: i128, q: i128| p * p * ka - 2 * p * q * kb + q * q * kc;
        let lin = |p: i128, q: i128| p * ka - q * kb;
        let (a, mu) = (a as i128, tag.info().mu as i128);
        let kmm = quad(a, mu);
        match tag {
            ContractionTag::D1 | ContractionTag::D2 | ContractionTag::D3 => kmm == 0,
            ContractionTag::C1 | ContractionTag::C2 => kmm == 2,
            ContractionTag::B1 | ContractionTag::B2 => self.targets.iter().any(|(i, d, _)| (i * d) as i128 == kmm),
            ContractionTag::B3 | ContractionTag::B4 | ContractionTag::B5 => {
                let k = tag.info().k.expect("point type") as i128;
                // alpha is 1 or 1/2, so F- = s((iota a - 1)(-K) - iota mu E-) with s = 1/alpha.
                let s = if tag == ContractionTag::B5 { 2 } else { 1 };
                (1..=4).any(|iota| {
                    let (p, q) = (s * (iota * a - 1), s * iota * mu);
                    p > 0 && quad(p, q) == -2 && lin(p, q) == k && kmm % iota == 0
                })
            }
        }
    }

    fn try_type(&self, a: i64, tag: ContractionTag, out: &mut Vec<LinkCandidate>) {
        let info = tag.info();
        let mu = info.mu;
        if !self.may_admit(a, tag) {
            return;
        }
        let m = DivisorClass::ke(a, -mu);
        let k = Self::k();
        let zero = self.mid.with_ebar_cube(Rational::zero());
        let kkm = eval_form(&zero, &k, &k, &m).expect("same basis");
        let kmm = eval_form(&zero, &k, &m, &m).expect("same basis");
        match tag {
            ContractionTag::D1 | ContractionTag::D2 | ContractionTag::D3 => {
                if !kmm.is_zero() {
                    return;
                }
                let Some(dp) = kkm.to_i64() else { return };
                if !tag.fiber_degree_allowed(dp) {
                    return;
                }
                let e = self.solve_cube(&m, &Rational::zero());
                self.push(out, tag, a, m, None, e, TargetInvariants::DelPezzoFibration { fiber_degree: dp });
            }
            ContractionTag::C1 | ContractionTag::C2 => {
                if kmm != 2 {
                    return;
                }
                let Some(kkm) = kkm.to_i64() else { return };
                let delta = 12 - kkm;
                if !tag.discriminant_allowed(delta) {
                    return;
                }
                let e = self.solve_cube(&m, &Rational::zero());
                self.push(out, tag, a, m, None, e, TargetInvariants::ConicBundle { discriminant_degree: delta });
            }
            ContractionTag::B1 | ContractionTag::B2 => {
                for (iota, d, id) in self.targets {
                    let Some(f) = exceptional_class(a, mu, *iota, info.alpha.as_ref().expect("birational")) else {
                        continue;
                    };
                    if kmm != iota * d {
                        continue;
                    }
                    let e = self.solve_cube(&m, &Rational::integer(*d));
                    let form = self.mid.with_ebar_cube(e.clone());
                    let target = if tag == ContractionTag::B1 {
                        let deg_z = eval_form(&form, &m, &f, &k).expect("same basis");
                        let ffk = eval_form(&form, &f, &f, &k).expect("same basis");
                        let (Some(deg_z), Some(ffk)) = (deg_z.to_i64(), ffk.to_i64()) else { continue };
                        if deg_z < 1 || ffk < -2 || ffk % 2 != 0 {
                            continue;
                        }
                        TargetInvariants::Blowdown {
                            target: id.clone(),
                            iota: *iota,
                            degree: *d,
                            deg_z,
                            genus_z: (ffk + 2) / 2,
                        }
                    } else {
                        let kk = info.k.expect("point type");
                        if !point_relations_hold(&form, &f, kk) {
                            continue;
                        }
                        TargetInvariants::SmoothPoint { target: id.clone(), iota: *iota, degree: *d }
                    };
                    self.push(out, tag, a, m.clone(), Some(f), e, target);
                }
            }
            ContractionTag::B3 | ContractionTag::B4 | ContractionTag::B5 => {
                let kk = info.k.expect("point type");
                for iota in 1..=4 {
                    let Some(f) = exceptional_class(a, mu, iota, info.alpha.as_ref().expect("birational")) else {
                        continue;
                    };
                    let ffk = eval_form(&zero, &f, &f, &k).expect("same basis");
                    let fkk = eval_form(&zero, &f, &k, &k).expect("same basis");
                    if ffk != -2 || fkk != kk {
                        continue;
                    }
                    let e = self.solve_cube(&f, &Rational::new(4, kk));
                    let form = self.mid.with_ebar_cube(e.clone());
                    let d = form.cube(&m).expect("same basis");
                    let Some(d) = d.to_i64() else { continue };
                    if d <= 0 || kmm != iota * d {
                        continue;
                    }
                    let target = TargetInvariants::SingularPoint {
                        iota,
                        degree: d,
                        k: kk,
                        singularity: tag.singularity().expect("point type").to_string(),
                    };
                    self.push(out, tag, a, m.clone(), Some(f), e, target);
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &self,
        out: &mut Vec<LinkCandidate>,
        tag: ContractionTag,
        a_m: i64,
        m_bar: DivisorClass,
        f_bar: Option<DivisorClass>,
        ebar_cube: Rational,
        target: TargetInvariants,
    ) {
        let defect = &self.mid.blowup_e_cube - &ebar_cube;
        // A flop never increases E^3, and for these centers it is never an
        // isomorphism, so only a positive defect is admissible.
        if !defect.is_positive() {
            return;
        }
        let dim_ke = self.center.anticanonical_minus_e_dim(self.g);
        let mu = tag.info().mu;
        if matches!(dim_ke, Some(d) if d >= 1) && mu == 1 && a_m != 1 {
            return;
        }
        let reported = f_bar.as_ref().unwrap_or(&m_bar);
        let Some((ra, rb)) = int_coeffs(reported) else { return };
        let strict = tag.is_birational() && matches!(dim_ke, Some(d) if d >= 1);
        if dim_ke.is_some_and(|d| d >= 0) {
            let ok = if strict { rb > ra } else { rb >= ra };
            if !ok {
                return;
            }
        }
        let form = self.mid.with_ebar_cube(ebar_cube.clone());
        let surviving_m = match dim_ke {
            Some(d) if d >= 1 => {
                let ms = surviving_multiplicities(&form, reported, ra, rb, tag.is_birational());
                if ms.is_empty() {
                    return;
                }
                ms
            }
            _ => Vec::new(),
        };
        out.push(LinkCandidate {
            center: self.center,
            genus: self.g,
            ctype: tag,
            a: ra,
            b: rb,
            m_bar,
            f_bar,
            midpoint: form,
            target,
            ebar_cube,
            defect,
            surviving_m,
            status: LinkStatus::Confirmed,
        });
    }
}

/// `F- = ((iota a - 1)(-K) - iota mu E-) / alpha`, if integral with a
/// positive `-K` coefficient.
fn exceptional_class(a: i64, mu: i64, iota: i64, alpha: &Rational) -> Option<DivisorClass> {
    let p = Rational::integer(iota * a - 1) / alpha;
    let q = Rational::integer(iota * mu) / alpha;
    if !p.is_integer() || !q.is_integer() || !p.is_positive() {
        return None;
    }
    Some(DivisorClass::ke(p, -q))
}

fn point_relations_hold(form: &TrilinearForm, f: &DivisorClass, k: i64) -> bool {
    let kc = DivisorClass::ke(1, 0);
    eval_form(form, f, f, &kc).expect("same basis") == -2
        && eval_form(form, f, &kc, &kc).expect("same basis") == k
        && form.cube(f).expect("same basis") == Rational::new(4, k)
}

fn surviving_multiplicities(form: &TrilinearForm, f: &DivisorClass, a: i64, b: i64, strict: bool) -> Vec<i64> {
    let k = DivisorClass::ke(1, 0);
    (1..)
        .take_while(|m| if strict { b > m * a } else { b >= m * a })
        .filter(|&m| {
            let d = DivisorClass::ke(1, -m);
            !eval_form(form, &d, f, &k).expect("same basis").is_negative()
        })
        .collect()
}

fn b1_targets(catalog: &Catalog) -> Vec<(i64, i64, String)> {
    let mut out: Vec<(i64, i64, String)> = Vec::new();
    for e in catalog.entries.iter().filter(|e| e.rho == 1) {
        let d = e.fundamental_degree.unwrap_or(e.antik_cube);
        if !out.iter().any(|(i, dd, _)| *i == e.index && *dd == d) {
            out.push((e.index, d, e.id.clone()));
        }
    }
    out.sort();
    out
}

fn check_genera(g_range: &[i64]) -> Result<()> {
    if let Some(g) = g_range.iter().find(|&&g| g < MIN_GENUS) {
        return Err(FanoError::InvalidInput(format!("genus {g} is below {MIN_GENUS}")));
    }
    Ok(())
}

/// Enumerates candidates for one center over several genera, with an
/// explicit bound on the `-K` coefficient of `M-`.
pub fn enumerate_links_bounded(catalog: &Catalog, center: Center, g_range: &[i64], bound: i64) -> Result<Vec<LinkCandidate>> {
    check_genera(g_range)?;
    let targets = b1_targets(catalog);
    let cells: Vec<Result<Vec<LinkCandidate>>> = g_range
        .par_iter()
        .map(|&g| {
            let mid = midpoint_for_genus(center, g)?;
            Ok(Cell { center, g, mid, targets: &targets }.candidates(bound))
        })
        .collect();
    let mut out = Vec::new();
    for c in cells {
        out.extend(c?);
    }
    out.sort_by_key(LinkCandidate::sort_key);
    out.dedup();
    Ok(out)
}

/// All numerically consistent links from `center` for the genera in
/// `g_range`, before any exclusion rule is applied.
pub fn enumerate_links(center: Center, g_range: &[i64]) -> Result<Vec<LinkCandidate>> {
    enumerate_links_bounded(Catalog::builtin(), center, g_range, SEARCH_BOUND)
}

/// Runs the enumeration and the exclusion rules inside a dedicated pool of
/// `threads` workers.
pub fn enumerate_links_with_threads(center: Center, g_range: &[i64], threads: usize) -> Result<Vec<LinkCandidate>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| FanoError::InvalidInput(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        let cands = enumerate_links(center, g_range)?;
        Ok(filter_links(cands, Catalog::builtin()))
    })
}

/// `E^3 - E-^3`.
pub fn defect(candidate: &LinkCandidate) -> Result<Rational> {
    let e3 = match candidate.center {
        Center::Line | Center::Conic | Center::Point => midpoint_for_genus(candidate.center, candidate.genus)?.blowup_e_cube,
        Center::Curve { deg_antik, genus } => Rational::integer(2 - 2 * genus - deg_antik),
    };
    let d = e3 - &candidate.ebar_cube;
    if d.is_negative() {
        return Err(FanoError::InconsistentCandidate(format!("negative defect {d}")));
    }
    Ok(d)
}

/// Re-evaluates the defining relations of a candidate on its solved form.
pub fn relations_hold(c: &LinkCandidate) -> bool {
    let k = DivisorClass::ke(1, 0);
    let form = &c.midpoint;
    let m = &c.m_bar;
    let ev = |x: &DivisorClass, y: &DivisorClass, z: &DivisorClass| eval_form(form, x, y, z).expect("same basis");
    match &c.target {
        TargetInvariants::DelPezzoFibration { fiber_degree } => {
            ev(&k, m, m).is_zero() && ev(&k, &k, m) == *fiber_degree && form.cube(m).unwrap().is_zero()
        }
        TargetInvariants::ConicBundle { discriminant_degree } => {
            ev(&k, m, m) == 2 && ev(&k, &k, m) == 12 - discriminant_degree && form.cube(m).unwrap().is_zero()
        }
        TargetInvariants::Blowdown { iota, degree, deg_z, genus_z, .. } => {
            let f = c.f_bar.as_ref().expect("birational");
            let minus_k = m.scale(&Rational::integer(*iota)).sub(f).unwrap();
            minus_k == k
                && form.cube(m).unwrap() == *degree
                && ev(&k, m, m) == iota * degree
                && ev(m, f, &k) == *deg_z
                && ev(f, f, &k) == 2 * genus_z - 2
        }
        TargetInvariants::SmoothPoint { degree, .. } => {
            let f = c.f_bar.as_ref().expect("birational");
            form.cube(m).unwrap() == *degree && point_relations_hold(form, f, 4)
        }
        TargetInvariants::SingularPoint { iota, degree, k: kk, .. } => {
            let f = c.f_bar.as_ref().expect("birational");
            form.cube(m).unwrap() == *degree && ev(&k, m, m) == iota * degree && point_relations_hold(form, f, *kk)
        }
    }
}

/// Euler-number contribution of a blowup center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EulerCenter {
    Curve { genus: i64 },
    Point,
}

impl EulerCenter {
    /// Blowing up the center raises the topological Euler number by this much.
    pub fn contribution(self) -> i64 {
        match self {
            EulerCenter::Curve { genus } => 2 - 2 * genus,
            EulerCenter::Point => 2,
        }
    }
}

/// `chi(X) = chi(Y) + e(center on Y) - e(center on X)`, since both sides
/// blow up to flop-equivalent threefolds with equal Euler numbers.
pub fn euler_propagate(chi_y: i64, center_on_y: EulerCenter, center_on_x: EulerCenter) -> i64 {
    chi_y + center_on_y.contribution() - center_on_x.contribution()
}

/// `chi_top(X)` predicted by a birational candidate from catalog data on
/// its target.
pub fn predicted_euler(c: &LinkCandidate, catalog: &Catalog) -> Option<i64> {
    let (target, y_center) = match &c.target {
        TargetInvariants::Blowdown { target, genus_z, .. } => (target, EulerCenter::Curve { genus: *genus_z }),
        TargetInvariants::SmoothPoint { target, .. } => (target, EulerCenter::Point),
        _ => return None,
    };
    let y = catalog.entry(target)?;
    Some(euler_propagate(y.chi_top, y_center, c.center.euler()))
}

fn source_entry(catalog: &Catalog, g: i64) -> Option<&CatalogEntry> {
    catalog.entries.iter().find(|e| e.rho == 1 && e.index == 1 && e.genus == Some(g))
}

fn target_id(c: &LinkCandidate) -> Option<&str> {
    match &c.target {
        TargetInvariants::Blowdown { target, .. } | TargetInvariants::SmoothPoint { target, .. } => Some(target),
        _ => None,
    }
}

/// Marks every candidate `Confirmed` or excluded by a named rule. Rules are
/// tried in the order genus bound, geometric, rationality, Euler number.
pub fn filter_links(mut candidates: Vec<LinkCandidate>, catalog: &Catalog) -> Vec<LinkCandidate> {
    for c in candidates.iter_mut() {
        c.status = classify(c, catalog);
    }
    candidates
}

fn classify(c: &LinkCandidate, catalog: &Catalog) -> LinkStatus {
    let Some(x) = source_entry(catalog, c.genus) else {
        return LinkStatus::Excluded {
            rule: "genus-bound".into(),
            detail: format!("no Fano threefold with rho = 1, index 1 and genus {}", c.genus),
        };
    };
    let center = c.center.to_string();
    for f in catalog.facts_for(&x.id) {
        if f.predicate != Predicate::NoLink {
            continue;
        }
        let Some(link) = &f.link else { continue };
        if link.center == center && link.ctype == c.ctype && Some(link.target.as_str()) == target_id(c) {
            let reason = f.reason.clone().unwrap_or_else(|| "geometric".into());
            return LinkStatus::Excluded { rule: reason, detail: format!("no such link from {}", x.id) };
        }
    }
    if let Some(t) = target_id(c) {
        let x_rational = catalog.has_fact(&x.id, Predicate::Rational);
        let y_irrational = catalog.has_fact(t, Predicate::Irrational);
        if x_rational && y_irrational {
            return LinkStatus::Excluded {
                rule: "rationality".into(),
                detail: format!("{} is rational but {t} is not", x.id),
            };
        }
    }
    if let Some(predicted) = predicted_euler(c, catalog) {
        let known = catalog.euler_number(&x.id).unwrap_or(x.chi_top);
        if predicted != known {
            return LinkStatus::Excluded {
                rule: "euler".into(),
                detail: format!("link predicts chi_top = {predicted}, catalog has {known}"),
            };
        }
    }
    LinkStatus::Confirmed
}

/// One solution of the rho = 2 primitive systems: `X` carries a conic
/// bundle with discriminant of degree `d` and a second ray with invariant
/// `second_invariant` (fiber degree, discriminant degree or `k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rho2Solution {
    pub first: ContractionTag,
    pub d: i64,
    pub second: Vec<ContractionTag>,
    pub second_invariant: i64,
    pub a: Rational,
    pub b: Rational,
    pub antik_cube: i64,
    pub genus: i64,
}

impl Rho2Solution {
    /// The two rays as unordered `(types, invariant)` pairs, for comparing
    /// with tables that list the rays in either order.
    pub fn ray_pair(&self) -> [(Vec<ContractionTag>, i64); 2] {
        let mut p = [(vec![self.first], self.d), (self.second.clone(), self.second_invariant)];
        p.sort();
        p
    }
}

/// Solves the primitive rho = 2 systems.
///
/// With `M` the pullback of a line under the conic bundle, the lattice
/// carries the form `(-K)^3 = 2g-2`, `(-K)^2 M = 12 - d`, `(-K) M^2 = 2`,
/// `M^3 = 0`, and the second ray is spanned by `D = a(-K) - bM`. When
/// `d = 0` the bundle is a `P^1`-bundle and `a`, `b` may be half-integers.
pub fn rho2_primitive_enumerate() -> Vec<Rho2Solution> {
    rho2_primitive_enumerate_bounded(SEARCH_BOUND)
}

pub fn rho2_primitive_enumerate_bounded(bound: i64) -> Vec<Rho2Solution> {
    let mut out = Vec::new();
    for d in 0..=11 {
        let step = if d == 0 { 2 } else { 1 };
        let first = if d == 0 { ContractionTag::C2 } else { ContractionTag::C1 };
        let c = Rational::integer(12 - d);
        for an in 1..=bound * step {
            for bn in 1..=bound * step {
                let a = Rational::new(an, step);
                let b = Rational::new(bn, step);
                rho2_cell(d, first, &c, &a, &b, &mut out);
            }
        }
    }
    out.sort_by(|x, y| (x.antik_cube, &x.first, &x.second).cmp(&(y.antik_cube, &y.first, &y.second)));
    out.dedup();
    out
}

fn rho2_cell(d: i64, first: ContractionTag, c: &Rational, a: &Rational, b: &Rational, out: &mut Vec<Rho2Solution>) {
    // q2 = D^2 (-K), q3 = D^3, l = D (-K)^2, each affine in x = 2g - 2.
    let q2 = |x: &Rational| x * a * a - Rational::integer(2) * c * a * b + Rational::integer(2) * b * b;
    let q3 = |x: &Rational| x * a.pow(3) - Rational::integer(3) * c * a * a * b + Rational::integer(6) * a * b * b;
    let l = |x: &Rational| x * a - c * b;
    // Solve q2(x) = target for x.
    let solve = |target: i64| -> Option<i64> {
        let x = (Rational::integer(target) - q2(&Rational::zero())) / (a * a);
        let x = x.to_i64()?;
        (x > 0 && x % 2 == 0).then_some(x)
    };
    // Fiber types need -K in the lattice spanned by M and D.
    let lattice_a = if d == 0 { Rational::new(1, 2) } else { Rational::one() };
    let push = |out: &mut Vec<Rho2Solution>, second: Vec<ContractionTag>, inv: i64, x: i64| {
        out.push(Rho2Solution {
            first,
            d,
            second,
            second_invariant: inv,
            a: a.clone(),
            b: b.clone(),
            antik_cube: x,
            genus: x / 2 + 1,
        })
    };

    if *a == lattice_a {
        if let Some(x) = solve(0) {
            let xr = Rational::integer(x);
            if q3(&xr).is_zero() {
                if let Some(dp) = l(&xr).to_i64() {
                    let tags: Vec<_> = [ContractionTag::D1, ContractionTag::D2, ContractionTag::D3]
                        .into_iter()
                        .filter(|t| t.fiber_degree_allowed(dp))
                        .collect();
                    if !tags.is_empty() {
                        push(out, tags, dp, x);
                    }
                }
            }
        }
        if let Some(x) = solve(2) {
            let xr = Rational::integer(x);
            if q3(&xr).is_zero() {
                if let Some(lv) = l(&xr).to_i64() {
                    let dp = 12 - lv;
                    let tag = if dp == 0 { ContractionTag::C2 } else { ContractionTag::C1 };
                    if tag.discriminant_allowed(dp) && d >= dp {
                        push(out, vec![tag], dp, x);
                    }
                }
            }
        }
    }
    if let Some(x) = solve(-2) {
        let xr = Rational::integer(x);
        if let Some(k) = l(&xr).to_i64() {
            let tags = ContractionTag::point_types_for_k(k);
            if !tags.is_empty() && q3(&xr) == Rational::new(4, k) {
                push(out, tags, k, x);
            }
        }
    }
}
