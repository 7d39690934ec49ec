use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fano::blowup::{blowup_curve, blowup_point, CurveCenter};
use fano::catalog::{canonical_json, Catalog, Filter, Flag};
use fano::riemannroch::{degree_from_genus, hilbert_polynomial, FanoNumerics};
use fano::sarkisov::{enumerate_links_with_threads, rho2_primitive_enumerate, Center};
use fano::scrolls::{
    euler_number_of_divisor, hyperelliptic_candidates, mark_realized, scroll_canonical, scroll_h0,
    scroll_intersection, trigonal_candidates, ScrollData,
};
use fano::wps::{ci_fano_invariants, is_well_formed, normalize, pic_index, CompleteIntersectionSpec, WeightSystem};
use fano::{DivisorClass, FanoError, Rational};

const USAGE: u8 = 2;
const VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "fano", version, about = "Exact numerics for Fano threefolds")]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the Hilbert polynomial chi(tH).
    Rr(RrArgs),
    /// Intersection form of a blowup on the basis (-K, E).
    Blowup(BlowupArgs),
    /// Intersection numbers on a rational scroll.
    Scroll(ScrollArgs),
    /// Weighted projective spaces and complete intersections in them.
    Wps(WpsArgs),
    /// Enumerate Sarkisov links from a line, conic or point.
    Link(LinkArgs),
    /// Picard rank two enumerations.
    Rho2 {
        #[command(subcommand)]
        cmd: Rho2Cmd,
    },
    /// Query and verify the classification catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Args)]
struct RrArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    index: u32,
    #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
    degree: Option<String>,
    #[arg(long)]
    genus: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
}

#[derive(Args)]
struct BlowupArgs {
    #[arg(long)]
    antik_cube: String,
    #[arg(long, conflicts_with = "curve", required_unless_present = "curve")]
    point: bool,
    /// DEG,GENUS with DEG = (-K).Z
    #[arg(long)]
    curve: Option<String>,
}

#[derive(Args)]
struct ScrollArgs {
    /// Splitting degrees d1,d2,...
    #[arg(long, required_unless_present = "candidates")]
    weights: Option<String>,
    #[arg(long)]
    h0: bool,
    #[arg(long)]
    canonical: bool,
    /// Classes a:b meaning aM+bF, separated by commas, one per factor.
    #[arg(long, allow_hyphen_values = true)]
    intersect: Option<String>,
    /// Euler number of a smooth divisor of class a:b.
    #[arg(long, allow_hyphen_values = true)]
    euler: Option<String>,
    /// List hyperelliptic or trigonal scroll candidates for --genus.
    #[arg(long, requires = "genus")]
    candidates: Option<ModelKind>,
    #[arg(long)]
    genus: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Hyperelliptic,
    Trigonal,
}

#[derive(Args)]
struct WpsArgs {
    #[arg(long)]
    weights: String,
    #[arg(long)]
    degrees: Option<String>,
}

#[derive(Args)]
struct LinkArgs {
    #[arg(long)]
    center: CenterArg,
    /// Inclusive range A..B
    #[arg(long, conflicts_with = "genus", required_unless_present = "genus")]
    genus_range: Option<String>,
    #[arg(long)]
    genus: Option<i64>,
    #[arg(long)]
    show_excluded: bool,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenterArg {
    Line,
    Conic,
    Point,
}

#[derive(Subcommand)]
enum Rho2Cmd {
    EnumeratePrimitive,
}

#[derive(Subcommand)]
enum CatalogCmd {
    List(ListArgs),
    Verify {
        #[arg(long, conflicts_with = "id", required_unless_present = "id")]
        all: bool,
        #[arg(long)]
        id: Option<String>,
    },
    Facts {
        subject: String,
    },
}

#[derive(Args)]
struct ListArgs {
    #[arg(long)]
    rho: Option<i64>,
    #[arg(long)]
    index: Option<i64>,
    #[arg(long)]
    genus: Option<i64>,
    #[arg(long)]
    h12: Option<i64>,
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    flag: Option<String>,
}

struct Output {
    json: Value,
    table: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, table: String) -> Self {
        Output { json, table, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            if cli.json {
                println!("{}", canonical_json(&out.json));
            } else {
                print!("{}", out.table);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cmd: Cmd) -> Result<Output, FanoError> {
    match cmd {
        Cmd::Rr(a) => rr(a),
        Cmd::Blowup(a) => blowup(a),
        Cmd::Scroll(a) => scroll(a),
        Cmd::Wps(a) => wps(a),
        Cmd::Link(a) => link(a),
        Cmd::Rho2 { cmd: Rho2Cmd::EnumeratePrimitive } => rho2(),
        Cmd::Catalog { cmd } => catalog(cmd),
    }
}

fn bad(msg: impl Into<String>) -> FanoError {
    FanoError::InvalidInput(msg.into())
}

fn parse_list(s: &str) -> Result<Vec<i64>, FanoError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad(format!("not an integer: {x:?}"))))
        .collect()
}

fn parse_rational(s: &str) -> Result<Rational, FanoError> {
    s.parse().map_err(|_| bad(format!("not a rational number: {s:?}")))
}

fn parse_class(s: &str) -> Result<DivisorClass, FanoError> {
    let (a, b) = s.split_once(':').ok_or_else(|| bad(format!("expected a:b, got {s:?}")))?;
    Ok(DivisorClass::mf(parse_rational(a.trim())?, parse_rational(b.trim())?))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn rr(a: RrArgs) -> Result<Output, FanoError> {
    let fv = match (&a.degree, a.genus) {
        (Some(d), _) => FanoNumerics::new(a.dim, a.index, parse_rational(d)?)?,
        (None, Some(g)) => {
            if a.dim < 3 || a.index + 2 != a.dim {
                return Err(bad("--genus needs index = dim - 2"));
            }
            FanoNumerics::new(a.dim, a.index, degree_from_genus(g))?
        }
        (None, None) => unreachable!("clap requires one of --degree, --genus"),
    };
    let chi = hilbert_polynomial(&fv)?;
    let value = chi.eval_int(a.t);
    let json = json!({ "numerics": to_value(&fv), "t": a.t, "value": to_value(&value), "coefficients": to_value(&chi.coefficients) });
    Ok(Output::ok(json, format!("{value}\n")))
}

fn blowup(a: BlowupArgs) -> Result<Output, FanoError> {
    let c = parse_rational(&a.antik_cube)?;
    let b = match &a.curve {
        Some(s) => {
            let v = parse_list(s)?;
            let [deg, genus] = v[..] else { return Err(bad("--curve takes DEG,GENUS")) };
            blowup_curve(c, CurveCenter::new(deg, genus)?)?
        }
        None => blowup_point(c)?,
    };
    let v = b.form.values().expect("rank-2 form");
    let mut t = String::new();
    for (name, x) in ["(-K)^3", "(-K)^2.E", "(-K).E^2", "E^3"].iter().zip(v) {
        let _ = writeln!(t, "{name:<10} {x}");
    }
    if b.not_big {
        t.push_str("warning: -K is not big\n");
    }
    Ok(Output::ok(to_value(&b), t))
}

fn scroll(a: ScrollArgs) -> Result<Output, FanoError> {
    if let (Some(kind), Some(g)) = (a.candidates, a.genus) {
        let cat = Catalog::builtin();
        let (mut c, name) = match kind {
            ModelKind::Hyperelliptic => (hyperelliptic_candidates(g), "hyperelliptic"),
            ModelKind::Trigonal => (trigonal_candidates(g), "trigonal"),
        };
        let realized: Vec<Vec<i64>> = cat
            .scroll_models
            .iter()
            .filter(|m| m.genus == g && serde_json::to_value(m.kind).ok() == Some(json!(name)))
            .map(|m| m.splitting.clone())
            .collect();
        mark_realized(&mut c, &realized);
        let mut t = String::new();
        for x in &c {
            let _ = writeln!(t, "{:<14} {:<10} {}", format!("{:?}", x.scroll.splitting), x.divisor.to_string(), status_label(&x.status));
        }
        return Ok(Output::ok(to_value(&c), t));
    }
    let s = ScrollData::new(parse_list(a.weights.as_deref().unwrap_or_default())?)?;
    let mut json = serde_json::Map::new();
    json.insert("splitting".into(), to_value(&s.splitting));
    let mut t = String::new();
    if a.h0 {
        let h = scroll_h0(&s);
        json.insert("h0".into(), json!(h));
        let _ = writeln!(t, "h0(M) = {h}");
    }
    if a.canonical {
        let k = scroll_canonical(&s);
        json.insert("canonical".into(), to_value(&k));
        let _ = writeln!(t, "K = {k}");
    }
    if let Some(list) = &a.intersect {
        let cls = list.split(',').map(parse_class).collect::<Result<Vec<_>, _>>()?;
        let v = scroll_intersection(&s, &cls)?;
        json.insert("intersection".into(), to_value(&v));
        let _ = writeln!(t, "intersection = {v}");
    }
    if let Some(c) = &a.euler {
        let v = euler_number_of_divisor(&s, &parse_class(c)?)?;
        json.insert("euler".into(), to_value(&v));
        let _ = writeln!(t, "euler = {v}");
    }
    if json.len() == 1 {
        return Err(bad("scroll needs one of --h0, --canonical, --intersect, --euler"));
    }
    Ok(Output::ok(Value::Object(json), t))
}

fn status_label(s: &fano::scrolls::CandidateStatus) -> String {
    use fano::scrolls::CandidateStatus::*;
    match s {
        Admissible => "admissible".into(),
        Realized => "realized".into(),
        NumericOnly => "numeric-only".into(),
        Excluded { k, witness } => format!("excluded (k={k}, witness {witness})"),
    }
}

fn wps(a: WpsArgs) -> Result<Output, FanoError> {
    let raw = parse_list(&a.weights)?;
    if raw.iter().any(|&w| w <= 0) {
        return Err(bad("weights must be positive"));
    }
    let w = WeightSystem::new(raw.iter().map(|&x| x as u64).collect())?;
    let Some(deg) = &a.degrees else {
        let n = normalize(&w);
        let json = json!({
            "weights": w.weights,
            "well_formed": is_well_formed(&w),
            "normalized": n.weights,
            "pic_index": pic_index(&n),
        });
        let t = format!(
            "well-formed  {}\nnormalized   {:?}\npic index    {}\n",
            is_well_formed(&w),
            n.weights,
            pic_index(&n)
        );
        return Ok(Output::ok(json, t));
    };
    let d = parse_list(deg)?;
    if d.iter().any(|&x| x <= 0) {
        return Err(bad("degrees must be positive"));
    }
    let inv = ci_fano_invariants(&CompleteIntersectionSpec { weights: w, degrees: d.iter().map(|&x| x as u64).collect() })?;
    let mut t = format!(
        "dim          {}\nindex        {}\nH^n          {}\n(-K)^n       {}\n",
        inv.dim, inv.index, inv.fundamental_degree, inv.antik_degree
    );
    if let Some(g) = inv.genus {
        let _ = writeln!(t, "genus        {g}");
    }
    if inv.lefschetz_warning {
        t.push_str("warning: ambient dimension below 4, index not forced by Lefschetz\n");
    }
    t.push_str("note: quasi-smoothness is not checked\n");
    Ok(Output::ok(to_value(&inv), t))
}

fn parse_range(s: &str) -> Result<Vec<i64>, FanoError> {
    let (a, b) = s.split_once("..").ok_or_else(|| bad(format!("expected A..B, got {s:?}")))?;
    let a: i64 = a.trim().parse().map_err(|_| bad(format!("bad range start {a:?}")))?;
    let b: i64 = b.trim().parse().map_err(|_| bad(format!("bad range end {b:?}")))?;
    if a > b {
        return Err(bad(format!("empty range {s}")));
    }
    Ok((a..=b).collect())
}

fn link(a: LinkArgs) -> Result<Output, FanoError> {
    let center = match a.center {
        CenterArg::Line => Center::Line,
        CenterArg::Conic => Center::Conic,
        CenterArg::Point => Center::Point,
    };
    let genera = match (&a.genus_range, a.genus) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(g)) => vec![g],
        (None, None) => unreachable!("clap requires one of --genus-range, --genus"),
    };
    let threads = if a.threads == 0 { rayon_default() } else { a.threads };
    let mut cands = enumerate_links_with_threads(center, &genera, threads)?;
    if !a.show_excluded {
        cands.retain(|c| c.status.is_confirmed());
    }
    let mut t = String::new();
    for c in &cands {
        let status = match &c.status {
            fano::sarkisov::LinkStatus::Confirmed => "confirmed".to_string(),
            fano::sarkisov::LinkStatus::Excluded { rule, .. } => format!("excluded: {rule}"),
        };
        let _ = writeln!(
            t,
            "g={:<3} {:<3} {:<16} defect {:<3} {:<45} {}",
            c.genus,
            c.ctype,
            c.reported_class().to_string(),
            c.defect.to_string(),
            target_label(&c.target),
            status
        );
    }
    Ok(Output::ok(to_value(&cands), t))
}

fn rayon_default() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn target_label(t: &fano::sarkisov::TargetInvariants) -> String {
    use fano::sarkisov::TargetInvariants::*;
    match t {
        Blowdown { target, deg_z, genus_z, .. } => format!("{target}, curve of degree {deg_z} and genus {genus_z}"),
        SmoothPoint { target, .. } => format!("{target}, smooth point"),
        SingularPoint { iota, degree, singularity, .. } => format!("index {iota} degree {degree}, {singularity}"),
        ConicBundle { discriminant_degree } => format!("conic bundle, discriminant degree {discriminant_degree}"),
        DelPezzoFibration { fiber_degree } => format!("del Pezzo fibration of degree {fiber_degree}"),
    }
}

fn rho2() -> Result<Output, FanoError> {
    let sols = rho2_primitive_enumerate();
    let mut t = String::new();
    for s in &sols {
        let second: Vec<String> = s.second.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            t,
            "(-K)^3={:<3} g={:<3} {}(d={}) {}({}) a={} b={}",
            s.antik_cube,
            s.genus,
            s.first,
            s.d,
            second.join("/"),
            s.second_invariant,
            s.a,
            s.b
        );
    }
    Ok(Output::ok(to_value(&sols), t))
}

fn catalog(cmd: CatalogCmd) -> Result<Output, FanoError> {
    let cat = Catalog::builtin();
    match cmd {
        CatalogCmd::List(a) => {
            let flag = match &a.flag {
                Some(f) => Some(
                    serde_json::from_value::<Flag>(json!(f)).map_err(|_| bad(format!("unknown flag {f:?}")))?,
                ),
                None => None,
            };
            let filter = Filter { rho: a.rho, index: a.index, genus: a.genus, h12: a.h12, table: a.table, flag };
            let entries = cat.list(&filter);
            let mut t = String::new();
            for e in &entries {
                let _ = writeln!(
                    t,
                    "{:<20} rho={:<2} index={} (-K)^3={:<3} h12={:<3} {}",
                    e.id, e.rho, e.index, e.antik_cube, e.h12, e.description
                );
            }
            Ok(Output::ok(to_value(&entries), t))
        }
        CatalogCmd::Verify { all, id } => {
            let reports = if all {
                cat.verify_all()
            } else {
                let id = id.expect("clap requires --id without --all");
                let e = cat.entry(&id).ok_or_else(|| bad(format!("unknown id {id:?}")))?;
                vec![cat.verify(e)]
            };
            let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
            let failures: usize = reports.iter().map(|r| r.failures().count()).sum();
            let mut t = String::new();
            for r in &reports {
                for c in r.failures() {
                    let _ = writeln!(t, "FAIL {} {}: {} != {}", r.subject, c.name, c.lhs, c.rhs);
                }
            }
            let _ = writeln!(t, "{} entries, {checks} checks, {failures} failures", reports.len());
            let json = json!({ "reports": to_value(&reports), "checks": checks, "failures": failures });
            Ok(Output { json, table: t, code: if failures == 0 { 0 } else { VERIFY_FAILED } })
        }
        CatalogCmd::Facts { subject } => {
            let facts = cat.facts_for(&subject);
            let mut t = String::new();
            for f in &facts {
                let _ = write!(t, "{} {:?}", f.subject, f.predicate);
                if let Some(v) = f.value {
                    let _ = write!(t, " {v}");
                }
                if let Some(l) = &f.link {
                    let _ = write!(t, " {} {} -> {}", l.center, l.ctype, l.target);
                }
                t.push('\n');
            }
            Ok(Output::ok(to_value(&facts), t))
        }
    }
}
