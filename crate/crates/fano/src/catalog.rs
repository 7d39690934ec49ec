//! The classification tables as data, plus a verifier that re-derives every
//! recorded invariant from the others.
//!
//! The data file is embedded at compile time and parsed once.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::blowup::{anticanonical_cube_after_curve, CurveCenter};
use crate::error::{FanoError, Result};
use crate::exactcore::{DivisorClass, Rational};
use crate::riemannroch::{hilbert_polynomial, FanoNumerics};
use crate::sarkisov::ContractionTag;
use crate::scrolls::{euler_number_of_divisor, ScrollData};

pub const SCHEMA_VERSION: u32 = 1;

/// Upper bound on `(-K)^3` for Picard rank one.
pub const RHO1_CUBE_BOUND: i64 = 72;

/// Largest `(-K)^3` of any smooth Fano threefold.
pub const GLOBAL_CUBE_MAX: i64 = 64;

/// `(-K) . c_2` for every Fano threefold.
pub const ANTIK_C2: i64 = 24;

const DATA: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    Primitive,
    Imprimitive,
    HyperellipticModel,
    TrigonalModel,
    BasePointModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CenterSpec {
    /// A curve of the given degree with respect to the fundamental divisor.
    Curve { degree: i64, genus: i64 },
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub source: String,
    pub center: CenterSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayData {
    pub types: Vec<ContractionTag>,
    pub invariant: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub rho: i64,
    pub index: i64,
    pub antik_cube: i64,
    pub genus: Option<i64>,
    pub h12: i64,
    pub chi_top: i64,
    pub description: String,
    pub flags: BTreeSet<Flag>,
    pub tables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<RayData>>,
    /// Degree of a del Pezzo surface `S` with `X` fibred over or built from `S`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub del_pezzo_surface_factor: Option<i64>,
}

impl CatalogEntry {
    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    /// `h^1(T) - h^0(T) = h12 + 19 - g - rho`.
    pub fn moduli_dimension(&self) -> Option<i64> {
        Some(self.h12 + 19 - self.genus? - self.rho)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Predicate {
    Rational,
    Irrational,
    EulerNumber,
    HasLine,
    HasConic,
    NoLink,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRef {
    pub center: String,
    pub ctype: ContractionTag,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactRecord {
    pub subject: String,
    pub predicate: Predicate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<LinkRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScrollModelKind {
    Hyperelliptic,
    Trigonal,
}

/// A realized row of the hyperelliptic or trigonal tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollModel {
    pub kind: ScrollModelKind,
    pub genus: i64,
    pub splitting: Vec<i64>,
    pub entry: String,
    pub rho: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiAmbient {
    pub genus: i64,
    pub dimension: i64,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
    pub facts: Vec<FactRecord>,
    pub scroll_models: Vec<ScrollModel>,
    pub mukai: Vec<MukaiAmbient>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filter {
    pub rho: Option<i64>,
    pub index: Option<i64>,
    pub genus: Option<i64>,
    pub h12: Option<i64>,
    pub table: Option<String>,
    pub flag: Option<Flag>,
}

impl Filter {
    pub fn matches(&self, e: &CatalogEntry) -> bool {
        self.rho.is_none_or(|r| e.rho == r)
            && self.index.is_none_or(|i| e.index == i)
            && self.genus.is_none_or(|g| e.genus == Some(g))
            && self.h12.is_none_or(|h| e.h12 == h)
            && self.table.as_ref().is_none_or(|t| e.tables.contains(t))
            && self.flag.is_none_or(|f| e.has_flag(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    fn eq(name: &str, lhs: impl ToString, rhs: impl ToString) -> Check {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Check { name: name.into(), pass: lhs == rhs, lhs, rhs }
    }

    fn holds(name: &str, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Check {
        Check { name: name.into(), pass, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let c: Catalog = serde_json::from_str(text).map_err(|e| FanoError::Catalog(e.to_string()))?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(FanoError::Catalog(format!("unsupported schema version {}", c.schema_version)));
        }
        Ok(c)
    }

    /// The shipped catalog.
    pub fn builtin() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::parse(DATA).expect("shipped catalog parses"))
    }

    pub fn list(&self, filter: &Filter) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| filter.matches(e)).collect()
    }

    pub fn entry(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn facts_for(&self, subject: &str) -> Vec<&FactRecord> {
        self.facts.iter().filter(|f| f.subject == subject).collect()
    }

    pub fn has_fact(&self, subject: &str, p: Predicate) -> bool {
        self.facts.iter().any(|f| f.subject == subject && f.predicate == p)
    }

    pub fn euler_number(&self, subject: &str) -> Option<i64> {
        self.facts
            .iter()
            .find(|f| f.subject == subject && f.predicate == Predicate::EulerNumber)
            .and_then(|f| f.value)
    }

    pub fn verify(&self, e: &CatalogEntry) -> Report {
        let mut checks = Vec::new();
        if let Some(g) = e.genus {
            checks.push(Check::eq("genus-degree", e.antik_cube, 2 * g - 2));
        }
        if let Some(fd) = e.fundamental_degree {
            checks.push(Check::eq("index-degree", e.index.pow(3) * fd, e.antik_cube));
        }
        checks.push(Check::eq("chi-top", e.chi_top, 2 + 2 * e.rho - 2 * e.h12));
        checks.extend(self.riemann_roch_checks(e));
        if let Some(g) = e.genus {
            // Hirzebruch-Riemann-Roch for the tangent bundle.
            let lhs = Rational::new(e.antik_cube, 2) - Rational::new(19 * ANTIK_C2, 24) + Rational::new(e.chi_top, 2);
            checks.push(Check::eq("tangent-euler", lhs, g + e.rho - e.h12 - 19));
        }
        if e.index == 2 {
            let d = Rational::new(e.antik_cube, 8);
            let ok = d.is_integer() && (1..=8).contains(&d.to_i64().unwrap_or(0));
            checks.push(Check::holds("del-pezzo-degree", ok, d, "1..=8"));
        }
        if let Some(d) = e.del_pezzo_surface_factor {
            checks.push(Check::eq("surface-cube", e.antik_cube, 6 * d));
            checks.push(Check::eq("surface-noether", d + (e.rho - 1), 10));
        }
        if let Some(c) = &e.construction {
            checks.extend(self.construction_checks(e, c));
        }
        for m in self.scroll_models.iter().filter(|m| m.entry == e.id) {
            checks.push(scroll_model_check(e, m));
        }
        for f in self.facts_for(&e.id) {
            if f.predicate == Predicate::EulerNumber {
                checks.push(Check::eq("euler-fact", f.value.map_or("missing".into(), |v| v.to_string()), e.chi_top));
            }
        }
        let contradictory = self.has_fact(&e.id, Predicate::Rational) && self.has_fact(&e.id, Predicate::Irrational);
        checks.push(Check::holds("rationality-facts", !contradictory, contradictory, false));
        Report { subject: e.id.clone(), checks }
    }

    fn riemann_roch_checks(&self, e: &CatalogEntry) -> Vec<Check> {
        let Some(g) = e.genus else { return vec![] };
        let (fv, t) = match (e.rho, e.fundamental_degree) {
            (1, Some(fd)) => (FanoNumerics::new(3, e.index as u32, fd), e.index),
            _ => (FanoNumerics::from_genus(3, g), 1),
        };
        let chi = fv.and_then(|fv| hilbert_polynomial(&fv));
        match chi {
            Ok(chi) => vec![
                Check::eq("h0-anticanonical", chi.eval_int(t), g + 2),
                Check::eq("todd-c2", chi.eval_int(0) * ANTIK_C2, ANTIK_C2),
            ],
            Err(err) => vec![Check::holds("h0-anticanonical", false, err, g + 2)],
        }
    }

    fn construction_checks(&self, e: &CatalogEntry, c: &Construction) -> Vec<Check> {
        let Some(src) = self.entry(&c.source) else {
            return vec![Check::holds("construction-source", false, &c.source, "known id")];
        };
        match &c.center {
            CenterSpec::Point => vec![
                Check::eq("construction-cube", e.antik_cube, src.antik_cube - 8),
                Check::eq("construction-euler", e.chi_top, src.chi_top + 2),
            ],
            CenterSpec::Curve { degree, genus } => {
                let cube = CurveCenter::new(src.index * degree, *genus)
                    .and_then(|z| anticanonical_cube_after_curve(src.antik_cube, z));
                let cube = cube.map_or_else(|err| err.to_string(), |v| v.to_string());
                vec![
                    Check::eq("construction-cube", e.antik_cube, cube),
                    Check::eq("construction-euler", e.chi_top, src.chi_top + 2 - 2 * genus),
                    Check::eq("construction-h12", e.h12, src.h12 + genus),
                ]
            }
        }
    }

    /// Checks that span the whole catalog rather than one entry.
    pub fn global_report(&self) -> Report {
        let mut checks = Vec::new();
        let mut seen = BTreeMap::new();
        for e in &self.entries {
            *seen.entry(e.id.as_str()).or_insert(0) += 1;
        }
        let dups: Vec<&str> = seen.iter().filter(|(_, &n)| n > 1).map(|(k, _)| *k).collect();
        checks.push(Check::eq("unique-ids", dups.join(","), ""));
        let unknown: Vec<&str> = self
            .facts
            .iter()
            .flat_map(|f| std::iter::once(&f.subject).chain(f.link.as_ref().map(|l| &l.target)))
            .filter(|s| self.entry(s).is_none())
            .map(String::as_str)
            .collect();
        checks.push(Check::eq("fact-subjects", unknown.join(","), ""));
        let no_h3 = self.list(&Filter { rho: Some(1), h12: Some(0), ..Filter::default() }).len();
        checks.push(Check::eq("rho1-h12-zero-count", no_h3, 4));
        let rho1_max = self.entries.iter().filter(|e| e.rho == 1).map(|e| e.antik_cube).max().unwrap_or(0);
        checks.push(Check::holds("rho1-cube-bound", rho1_max <= RHO1_CUBE_BOUND, rho1_max, RHO1_CUBE_BOUND));
        let max = self.entries.iter().map(|e| e.antik_cube).max().unwrap_or(0);
        checks.push(Check::eq("global-cube-max", max, GLOBAL_CUBE_MAX));
        let prim: Vec<i64> = self
            .list(&Filter { rho: Some(2), flag: Some(Flag::Primitive), ..Filter::default() })
            .iter()
            .map(|e| e.antik_cube)
            .collect();
        checks.push(Check::eq("rho2-primitive-count", prim.len(), 9));
        Report { subject: "catalog".into(), checks }
    }

    /// One report per entry followed by the global report.
    pub fn verify_all(&self) -> Vec<Report> {
        let mut out: Vec<Report> = self.entries.iter().map(|e| self.verify(e)).collect();
        out.push(self.global_report());
        out
    }
}

fn scroll_model_check(e: &CatalogEntry, m: &ScrollModel) -> Check {
    let name = match m.kind {
        ScrollModelKind::Hyperelliptic => "scroll-euler-hyperelliptic",
        ScrollModelKind::Trigonal => "scroll-euler-trigonal",
    };
    let Ok(s) = ScrollData::new(m.splitting.clone()) else {
        return Check::holds(name, false, format!("{:?}", m.splitting), "valid splitting");
    };
    let value = match m.kind {
        ScrollModelKind::Trigonal => {
            euler_number_of_divisor(&s, &DivisorClass::mf(3, 2 - s.degree())).map(|v| v.to_string())
        }
        ScrollModelKind::Hyperelliptic => {
            // X is a double cover of the scroll branched in B, so
            // chi(X) = 2 chi(scroll) - chi(B) with chi(scroll) = 2 rank.
            let b = DivisorClass::mf(4, 2 * (2 - s.degree()));
            let chi_scroll = 2 * s.rank() as i64;
            euler_number_of_divisor(&s, &b).map(|v| (Rational::integer(2 * chi_scroll) - v).to_string())
        }
    };
    let value = value.unwrap_or_else(|err| err.to_string());
    let mut c = Check::eq(name, value, e.chi_top);
    if m.rho != e.rho {
        c.pass = false;
    }
    c
}

/// Serializes through `serde_json::Value`, whose maps are sorted, so that
/// parsing and re-serializing gives identical bytes.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    serde_json::to_string_pretty(&v).expect("value serializes")
}
