//! The 23 noncompact Coxeter simplices with one or more ideal vertices.
//!
//! Data lives in a versioned JSON document (`data/catalog.json`) that is
//! embedded at build time and can also be loaded from disk. Coordinates are
//! exact expressions evaluated by [`expr::eval_expr`]. Every entry is checked
//! by [`validate_simplex`] on load.

pub mod expr;

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{
    dot, gram_of_simplex, lorentz_inner, GramMatrix, HyperplaneForm, ProjectivePoint, EPS_CLASS,
    EPS_RES,
};
use crate::volume::{closed_form_volume, special, Rational, VolumeExpression};

/// The bundled catalog document.
pub const EMBEDDED_CATALOG: &str = include_str!("../../data/catalog.json");

/// Tolerance of the Gram-versus-diagram check.
pub const GRAM_TOL: f64 = 1e-9;

/// Tolerance of the volume-ratio check along lattice edges.
pub const RATIO_TOL: f64 = 1e-6;

/// Known disagreements between an entry's geometry and its tabulated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anomaly {
    /// The geometric ideal-vertex count differs from the lattice diagram.
    IdealCount,
    /// The optimal density differs from the tabulated one.
    Density,
}

/// Commensurability class of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CommensurabilityClass {
    C336,
    C344,
    C536,
    Standalone(String),
}

impl CommensurabilityClass {
    pub fn parse(s: &str) -> Self {
        match s {
            "[3,3,6]" => Self::C336,
            "[3,4,4]" => Self::C344,
            "[5,3,6]" => Self::C536,
            other => Self::Standalone(other.to_string()),
        }
    }
}

impl fmt::Display for CommensurabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::C336 => f.write_str("[3,3,6]"),
            Self::C344 => f.write_str("[3,4,4]"),
            Self::C536 => f.write_str("[5,3,6]"),
            Self::Standalone(s) => f.write_str(s),
        }
    }
}

/// Tabulated packing density, either one of the named constants or a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PaperDensity {
    /// Simplicial bound `1/(2√3 Λ(π/3))`.
    Theta,
    /// `2/(5√3 Λ(π/3))`.
    Rho,
    /// `3/(4G)`.
    Sigma,
    Value(f64),
}

impl PaperDensity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "theta" => Some(Self::Theta),
            "rho" => Some(Self::Rho),
            "sigma" => Some(Self::Sigma),
            _ => s.parse().ok().map(Self::Value),
        }
    }

    /// The six-digit value as printed.
    pub fn printed(&self) -> f64 {
        match self {
            Self::Theta => 0.853276,
            Self::Rho => 0.682620,
            Self::Sigma => 0.818808,
            Self::Value(v) => *v,
        }
    }

    /// The exact value where one exists, the printed one otherwise.
    pub fn exact(&self) -> f64 {
        match self {
            Self::Theta => special::theta_bound(),
            Self::Rho => special::rho_density(),
            Self::Sigma => special::sigma_density(),
            Self::Value(v) => *v,
        }
    }

    pub fn symbol(&self) -> Option<&'static str> {
        match self {
            Self::Theta => Some("Θ"),
            Self::Rho => Some("ρ"),
            Self::Sigma => Some("σ"),
            Self::Value(_) => None,
        }
    }
}

/// A subgroup relation: `child` has index `index` in `parent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommensurabilityEdge {
    pub parent: String,
    pub child: String,
    pub index: u32,
}

/// Volume entry as stored in the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawVolume {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
}

/// One entry as stored in the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEntry {
    pub witt: String,
    pub display: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub notation: String,
    pub class: String,
    pub arithmetic: bool,
    pub schlafli_edges: Vec<(usize, usize, u32)>,
    pub vertices: Vec<Vec<String>>,
    pub ideal: Vec<bool>,
    pub faces: Vec<Vec<String>>,
    pub volume: RawVolume,
    pub paper_density: String,
    pub figure_ideal_count: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derived_coordinates: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<Anomaly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// The catalog document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogDocument {
    pub version: u32,
    pub entries: Vec<RawEntry>,
    pub lattice_edges: Vec<CommensurabilityEdge>,
}

/// A Coxeter simplex: vertices `A₀..A₃`, faces `u₀..u₃` with `uᵢ` opposite `Aᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterSimplex {
    pub witt: String,
    pub display: String,
    pub aliases: Vec<String>,
    pub notation: String,
    pub class: CommensurabilityClass,
    pub arithmetic: bool,
    /// Coxeter diagram edges `(i, j, label)`; absent pairs carry label 2.
    pub schlafli_edges: Vec<(usize, usize, u32)>,
    pub vertices: [ProjectivePoint; 4],
    pub ideal: [bool; 4],
    pub faces: [HyperplaneForm; 4],
    pub volume: VolumeExpression,
    pub paper_density: PaperDensity,
    /// Ideal-vertex count recorded in the subgroup lattice diagram.
    pub figure_ideal_count: usize,
    pub derived_coordinates: bool,
    pub anomalies: Vec<Anomaly>,
    pub notes: Option<String>,
    raw: RawEntry,
}

impl CoxeterSimplex {
    /// Indices of the ideal vertices, ascending.
    pub fn ideal_vertices(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.ideal[i]).collect()
    }

    pub fn n_ideal(&self) -> usize {
        self.ideal.iter().filter(|&&b| b).count()
    }

    pub fn gram(&self) -> GramMatrix {
        gram_of_simplex(&self.faces)
    }

    /// Diagram labels as a symmetric matrix (2 off the diagram, 1 on the diagonal).
    pub fn diagram_labels(&self) -> [[u32; 4]; 4] {
        let mut m = [[2; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j, k) in &self.schlafli_edges {
            m[i][j] = k;
            m[j][i] = k;
        }
        m
    }

    pub fn has_anomaly(&self, a: Anomaly) -> bool {
        self.anomalies.contains(&a)
    }

    /// The stored form of this entry.
    pub fn raw(&self) -> &RawEntry {
        &self.raw
    }

    /// Matches the ASCII id, the display symbol or an alias.
    pub fn matches(&self, symbol: &str) -> bool {
        let s = symbol.trim();
        self.witt.eq_ignore_ascii_case(s)
            || self.display == s
            || self
                .aliases
                .iter()
                .any(|a| a == s || a.eq_ignore_ascii_case(s))
    }
}

/// Outcome of a single validation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Mismatch recorded as a known anomaly of the entry.
    Flagged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub witt: String,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    /// True when no check failed (flagged checks are allowed).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, residual: f64, tolerance: f64, ok: bool, detail: String) -> ValidationCheck {
    ValidationCheck {
        name: name.to_string(),
        residual,
        tolerance,
        status: if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail,
    }
}

/// All 24 permutations of `0..4`.
pub(crate) fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

/// Smallest deviation, over relabellings of the diagram nodes, between the
/// Gram matrix of the faces and `−cos(π/k)` of the diagram labels.
pub fn gram_diagram_residual(s: &CoxeterSimplex) -> (f64, [usize; 4]) {
    let g = s.gram().entries;
    let labels = s.diagram_labels();
    let mut best = (f64::INFINITY, [0, 1, 2, 3]);
    for p in permutations4() {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let want = -(std::f64::consts::PI / labels[p[i]][p[j]] as f64).cos();
                worst = worst.max((g[i][j] - want).abs());
            }
        }
        if worst < best.0 {
            best = (worst, p);
        }
    }
    best
}

/// Runs every structural check on a simplex.
pub fn validate_simplex(s: &CoxeterSimplex) -> ValidationReport {
    let mut checks = Vec::new();

    let mut worst_ideal: f64 = 0.0;
    let mut bad = Vec::new();
    for (i, v) in s.vertices.iter().enumerate() {
        let x = v.coords();
        let q = lorentz_inner(x, x) / (x[0] * x[0]);
        if s.ideal[i] {
            worst_ideal = worst_ideal.max(q.abs());
            if q.abs() > EPS_CLASS {
                bad.push(format!("A{i} flagged ideal but <A,A> = {q:e}"));
            }
        } else if q >= -EPS_CLASS {
            bad.push(format!("A{i} flagged proper but <A,A> = {q:e}"));
        }
    }
    checks.push(check(
        "classification",
        worst_ideal,
        EPS_CLASS,
        bad.is_empty(),
        bad.join("; "),
    ));

    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (i, u) in s.faces.iter().enumerate() {
        for (j, v) in s.vertices.iter().enumerate() {
            let e = dot(u.coeffs(), v.coords());
            if i == j {
                if e <= EPS_RES {
                    bad.push(format!("u{i}·A{i} = {e:e} is not positive"));
                }
            } else {
                worst = worst.max(e.abs());
            }
        }
    }
    if worst > EPS_RES {
        bad.push(format!("max |uᵢ·Aⱼ| = {worst:e}"));
    }
    checks.push(check(
        "incidence",
        worst,
        EPS_RES,
        bad.is_empty(),
        bad.join("; "),
    ));

    let (res, perm) = gram_diagram_residual(s);
    let hyperbolic = s.gram().is_hyperbolic(1e-9);
    let mut detail = format!("face i ↔ diagram node {perm:?}");
    if !hyperbolic {
        detail.push_str("; Gram signature is not (3,1)");
    }
    checks.push(check(
        "gram",
        res,
        GRAM_TOL,
        res <= GRAM_TOL && hyperbolic,
        detail,
    ));

    let n = s.n_ideal();
    let diff = (n as f64 - s.figure_ideal_count as f64).abs();
    let mut c = check(
        "ideal_count",
        diff,
        0.0,
        diff == 0.0,
        format!(
            "{n} ideal vertices, lattice diagram records {}",
            s.figure_ideal_count
        ),
    );
    if diff > 0.0 && s.has_anomaly(Anomaly::IdealCount) {
        c.status = CheckStatus::Flagged;
    }
    checks.push(c);

    let v = closed_form_volume(&s.volume);
    checks.push(check(
        "volume",
        0.0,
        0.0,
        v.is_finite() && v > 0.0,
        format!("{} = {v:.12}", s.volume),
    ));

    ValidationReport {
        witt: s.witt.clone(),
        checks,
    }
}

/// Comparison of the volume ratio with the index along one lattice edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCheck {
    pub edge: CommensurabilityEdge,
    pub parent_volume: f64,
    pub child_volume: f64,
    pub ratio: f64,
    pub residual: f64,
    /// Both volumes are exact expressions, so the ratio is checked.
    pub closed_form: bool,
    pub ok: bool,
}

/// The loaded catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<CoxeterSimplex>,
    pub lattice_edges: Vec<CommensurabilityEdge>,
}

impl Catalog {
    /// Looks an entry up by ASCII id, display symbol or alias.
    pub fn find(&self, symbol: &str) -> Result<&CoxeterSimplex> {
        self.entries
            .iter()
            .find(|e| e.matches(symbol))
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// The subgroup lattice with the volume ratio along every edge.
    pub fn subgroup_lattice(&self) -> Vec<LatticeCheck> {
        self.lattice_edges
            .iter()
            .map(|e| {
                let p = self.find(&e.parent).expect("validated on load");
                let c = self.find(&e.child).expect("validated on load");
                let pv = closed_form_volume(&p.volume);
                let cv = closed_form_volume(&c.volume);
                let ratio = cv / pv;
                let residual = (ratio - e.index as f64).abs();
                let closed_form = p.volume.is_closed_form() && c.volume.is_closed_form();
                LatticeCheck {
                    edge: e.clone(),
                    parent_volume: pv,
                    child_volume: cv,
                    ratio,
                    residual,
                    closed_form,
                    ok: !closed_form || residual <= RATIO_TOL,
                }
            })
            .collect()
    }

    /// The document this catalog was loaded from.
    pub fn to_document(&self) -> CatalogDocument {
        CatalogDocument {
            version: self.version,
            entries: self.entries.iter().map(|e| e.raw.clone()).collect(),
            lattice_edges: self.lattice_edges.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }
}

fn parse_err(location: String, message: impl Into<String>) -> Error {
    Error::ParseError {
        location,
        message: message.into(),
    }
}

fn eval_at(src: &str, location: String) -> Result<f64> {
    expr::eval_expr(src)
        .map_err(|e| parse_err(location, format!("offset {}: {}", e.offset, e.message)))
}

fn eval_row(row: &[String], location: String) -> Result<[f64; 4]> {
    if row.len() != 4 {
        return Err(parse_err(
            location,
            format!("expected 4 coordinates, found {}", row.len()),
        ));
    }
    let mut out = [0.0; 4];
    for (k, s) in row.iter().enumerate() {
        out[k] = eval_at(s, format!("{location}[{k}]"))?;
    }
    Ok(out)
}

fn parse_rational(s: &str, location: String) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| parse_err(location, format!("'{s}' is not a rational number")))
}

fn parse_volume(v: &RawVolume, at: &str) -> Result<VolumeExpression> {
    let printed = v
        .printed
        .as_deref()
        .map(|p| eval_at(p, format!("{at}.volume.printed")))
        .transpose()?;
    let need = |field: &Option<String>, name: &str| {
        field
            .clone()
            .ok_or_else(|| parse_err(format!("{at}.volume"), format!("missing '{name}'")))
    };
    let mut expr = match v.kind.as_str() {
        "lobachevsky" => {
            let c = parse_rational(&need(&v.coeff, "coeff")?, format!("{at}.volume.coeff"))?;
            let a = parse_rational(&need(&v.angle, "angle")?, format!("{at}.volume.angle"))?;
            VolumeExpression::lobachevsky(c, a)
                .map_err(|e| parse_err(format!("{at}.volume"), e.to_string()))?
        }
        "catalan" => {
            let c = parse_rational(&need(&v.coeff, "coeff")?, format!("{at}.volume.coeff"))?;
            VolumeExpression {
                kind: crate::volume::VolumeKind::CatalanMultiple { coefficient: c },
                printed_value: None,
            }
        }
        "numeric" => {
            let x = eval_at(&need(&v.value, "value")?, format!("{at}.volume.value"))?;
            VolumeExpression::numeric(x, None)
                .map_err(|e| parse_err(format!("{at}.volume"), e.to_string()))?
        }
        other => {
            return Err(parse_err(
                format!("{at}.volume.kind"),
                format!("unknown volume kind '{other}'"),
            ))
        }
    };
    expr.printed_value = printed;
    Ok(expr)
}

fn build_entry(raw: &RawEntry, idx: usize) -> Result<CoxeterSimplex> {
    let at = format!("entries[{idx}] ({})", raw.witt);
    if raw.vertices.len() != 4 || raw.faces.len() != 4 || raw.ideal.len() != 4 {
        return Err(parse_err(at, "need 4 vertices, 4 faces and 4 ideal flags"));
    }
    for &(i, j, k) in &raw.schlafli_edges {
        if i > 3 || j > 3 || i == j || k < 2 {
            return Err(parse_err(
                format!("{at}.schlafli_edges"),
                format!("bad edge ({i},{j},{k})"),
            ));
        }
    }
    let mut vertices = Vec::with_capacity(4);
    for (i, row) in raw.vertices.iter().enumerate() {
        let loc = format!("{at}.vertices[{i}]");
        let x = eval_row(row, loc.clone())?;
        vertices.push(ProjectivePoint::new(x).map_err(|e| parse_err(loc, e.to_string()))?);
    }
    let mut faces = Vec::with_capacity(4);
    for (i, row) in raw.faces.iter().enumerate() {
        let loc = format!("{at}.faces[{i}]");
        let x = eval_row(row, loc.clone())?;
        faces.push(HyperplaneForm::new(x).map_err(|e| parse_err(loc, e.to_string()))?);
    }
    let paper_density = PaperDensity::parse(&raw.paper_density).ok_or_else(|| {
        parse_err(
            format!("{at}.paper_density"),
            format!("'{}' is neither a symbol nor a number", raw.paper_density),
        )
    })?;
    Ok(CoxeterSimplex {
        witt: raw.witt.clone(),
        display: raw.display.clone(),
        aliases: raw.aliases.clone(),
        notation: raw.notation.clone(),
        class: CommensurabilityClass::parse(&raw.class),
        arithmetic: raw.arithmetic,
        schlafli_edges: raw.schlafli_edges.clone(),
        vertices: vertices.try_into().expect("length checked"),
        ideal: [raw.ideal[0], raw.ideal[1], raw.ideal[2], raw.ideal[3]],
        faces: faces.try_into().expect("length checked"),
        volume: parse_volume(&raw.volume, &at)?,
        paper_density,
        figure_ideal_count: raw.figure_ideal_count,
        derived_coordinates: raw.derived_coordinates,
        anomalies: raw.anomalies.clone(),
        notes: raw.notes.clone(),
        raw: raw.clone(),
    })
}

/// Number of entries a complete catalog holds.
pub const CATALOG_SIZE: usize = 23;

/// Parses and validates a catalog document.
pub fn load_catalog_from_str(src: &str) -> Result<Catalog> {
    let doc: CatalogDocument = serde_json::from_str(src).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let entries = doc
        .entries
        .iter()
        .enumerate()
        .map(|(i, r)| build_entry(r, i))
        .collect::<Result<Vec<_>>>()?;
    for e in &entries {
        let report = validate_simplex(e);
        let failure = report
            .failures()
            .next()
            .map(|f| format!("{}: {}", f.name, f.detail));
        if let Some(check) = failure {
            return Err(Error::ValidationError {
                entry: e.witt.clone(),
                check,
            });
        }
    }
    if entries.len() != CATALOG_SIZE {
        return Err(Error::ValidationError {
            entry: "catalog".into(),
            check: format!("expected {CATALOG_SIZE} entries, found {}", entries.len()),
        });
    }
    let catalog = Catalog {
        version: doc.version,
        entries,
        lattice_edges: doc.lattice_edges,
    };
    for (i, a) in catalog.entries.iter().enumerate() {
        if catalog.entries[..i].iter().any(|b| b.witt == a.witt) {
            return Err(Error::ValidationError {
                entry: a.witt.clone(),
                check: "duplicate witt symbol".into(),
            });
        }
    }
    for e in &catalog.lattice_edges {
        for w in [&e.parent, &e.child] {
            if catalog.find(w).is_err() {
                return Err(Error::ValidationError {
                    entry: w.clone(),
                    check: "lattice edge names an unknown entry".into(),
                });
            }
        }
    }
    Ok(catalog)
}

/// Loads the catalog from a file.
pub fn load_catalog_from_path(path: &Path) -> Result<Catalog> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| parse_err(path.display().to_string(), e.to_string()))?;
    load_catalog_from_str(&src)
}

/// Loads the catalog from `path`, or the embedded copy when `path` is `None`.
pub fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        Some(p) => load_catalog_from_path(p),
        None => load_catalog_from_str(EMBEDDED_CATALOG),
    }
}

/// Shared parsed copy of the embedded catalog.
pub fn embedded() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| load_catalog(None).expect("embedded catalog is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_all_entries() {
        let c = load_catalog(None).unwrap();
        assert_eq!(c.entries.len(), 23);
        for e in &c.entries {
            let r = validate_simplex(e);
            assert!(
                r.passed(),
                "{}: {:?}",
                e.witt,
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn lookup_by_alias() {
        let c = embedded();
        assert_eq!(c.find("V̄₃").unwrap().witt, "V3");
        assert_eq!(c.find("pphat3").unwrap().witt, "PPhat3");
        assert_eq!(c.find("PP̄₃").unwrap().witt, "PPhat3");
        assert!(matches!(c.find("BOGUS"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn permutations_are_distinct() {
        let p = permutations4();
        assert_eq!(p.len(), 24);
        for (i, a) in p.iter().enumerate() {
            assert!(p[..i].iter().all(|b| b != a));
        }
    }
}
