//! Registry of continued fractions with their expected limits and convergence rates.

mod builtin;
pub mod observations;
pub mod verify;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cfcore::{CFSpec, Part, RateModel, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::{pi, ConstExpr, Precision, Real};

pub use builtin::builtin_catalog;
pub use observations::{bessel_disambiguation, f_observations, moebius_relations, Disambiguation, FObservations, RelationCheck};
pub use verify::{verify_all, verify_entry, EntryReport, EntryStatus, VerificationReport, VerifyConfig};

pub const CATALOG_FORMAT: &str = "cfvar-catalog/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamName {
    Z,
    S,
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamName::Z => "z",
            ParamName::S => "s",
        })
    }
}

/// The entry parameter and the fixed sample points at which it is checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub name: ParamName,
    #[serde(with = "crate::qser::vec")]
    pub samples: Vec<Q>,
}

/// Closed forms in the parameter that need special handling at removable singularities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZFunction {
    /// -log(1 - z)
    NegLog1Minus,
    /// 2 E(z) / K(z)
    TwoEOverK,
    /// (cosh(pi z) - 1) / (3 z^2), equal to pi^2/6 at 0.
    CoshShift,
}

impl ZFunction {
    pub fn eval(self, z: &Real, prec: Precision) -> Result<Real> {
        let work = prec.guarded();
        let z = z.widen(work);
        let v = match self {
            ZFunction::NegLog1Minus => {
                let w = &Real::one(work) - &z;
                if !w.is_positive() {
                    return Err(Error::Domain("-log(1-z) needs z < 1".into()));
                }
                -w.ln()
            }
            ZFunction::TwoEOverK => {
                let k = crate::numkit::elliptic_k(&z, work)?;
                let e = crate::numkit::elliptic_e(&z, work)?;
                (&e / &k).mul_pow2(1)
            }
            ZFunction::CoshShift => {
                let p = pi(work);
                if z.is_zero() {
                    (&p * &p).div_i64(6)
                } else {
                    let x = &p * &z;
                    let num = &x.cosh() - &Real::one(work);
                    &num / &(&z * &z).mul_i64(3)
                }
            }
        };
        Ok(v.round_to(prec))
    }
}

impl fmt::Display for ZFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZFunction::NegLog1Minus => "-log(1-z)",
            ZFunction::TwoEOverK => "2E(z)/K(z)",
            ZFunction::CoshShift => "(cosh(pi z)-1)/(3z^2)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Expr(ConstExpr),
    Named(ZFunction),
    /// No closed form known; observations are checked instead.
    Exploratory,
}

impl Limit {
    pub fn is_exploratory(&self) -> bool {
        matches!(self, Limit::Exploratory)
    }

    pub fn is_param_free(&self) -> bool {
        match self {
            Limit::Expr(e) => e.is_param_free(),
            Limit::Named(_) => false,
            Limit::Exploratory => true,
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Expr(e) => write!(f, "{e}"),
            Limit::Named(n) => write!(f, "{n}"),
            Limit::Exploratory => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub cf: CFSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<Param>,
    pub limit: Limit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateModel>,
    /// Published decimal expansion of the limit, compared digit for digit when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<String>,
    /// Numerical observations run in place of (or besides) a limit oracle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<ObservationBattery>,
    pub provenance: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationBattery {
    /// Zeros, evenness, curvature at 0 and large-z behaviour of the shifted cosh family.
    ShiftedCosh,
}

impl CatalogEntry {
    /// Sample points as parameter bindings; a single `None` for parameter-free entries.
    pub fn sample_points(&self) -> Vec<Option<Q>> {
        match &self.param {
            Some(p) => p.samples.iter().cloned().map(Some).collect(),
            None => vec![None],
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogDoc {
    format: String,
    entries: Vec<CatalogEntry>,
}

pub fn to_json(entries: &[CatalogEntry]) -> String {
    let doc = CatalogDoc {
        format: CATALOG_FORMAT.to_string(),
        entries: entries.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("catalog serializes")
}

/// Parse a catalog document, reporting the failing field path and position.
pub fn from_json(text: &str) -> Result<Vec<CatalogEntry>> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: CatalogDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        Error::Catalog(format!(
            "line {} column {}: field `{}`: {}",
            inner.line(),
            inner.column(),
            e.path(),
            inner
        ))
    })?;
    if doc.format != CATALOG_FORMAT {
        return Err(Error::Catalog(format!(
            "unsupported format `{}`, expected `{CATALOG_FORMAT}`",
            doc.format
        )));
    }
    Ok(doc.entries)
}

pub fn load(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Catalog(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text).map_err(|e| match e {
        Error::Catalog(m) => Error::Catalog(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save(path: &Path, entries: &[CatalogEntry]) -> Result<()> {
    std::fs::write(path, to_json(entries))
        .map_err(|e| Error::Catalog(format!("cannot write {}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub id: String,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.id, self.field, self.message)
    }
}

/// Structural checks on one entry. An empty list means the entry is well formed.
pub fn validate(entry: &CatalogEntry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |field: &str, message: String| {
        out.push(Diagnostic {
            id: entry.id.clone(),
            field: field.to_string(),
            message,
        })
    };
    if entry.id.trim().is_empty() {
        diag("id", "empty id".into());
    }
    let cf = &entry.cf;
    if cf.a_poly.is_zero() {
        diag("cf.a_poly", "partial numerator polynomial is identically zero".into());
    }
    for (i, h) in cf.b_heads.iter().enumerate() {
        if !h.is_n_free() {
            diag(&format!("cf.b_heads[{i}]"), "head depends on n".into());
        }
    }
    for (i, h) in cf.a_heads.iter().enumerate() {
        if !h.is_n_free() {
            diag(&format!("cf.a_heads[{i}]"), "head depends on n".into());
        }
        if h.is_zero() {
            diag(&format!("cf.a_heads[{i}]"), "zero partial numerator".into());
        }
    }
    match &entry.param {
        None => {
            if cf.requires_z() {
                diag("cf", "fraction depends on the parameter but no parameter is declared".into());
            }
            if !entry.limit.is_param_free() {
                diag("limit", "limit depends on the parameter but no parameter is declared".into());
            }
            if entry.rate.as_ref().is_some_and(|r| !r.is_param_free()) {
                diag("rate", "rate depends on the parameter but no parameter is declared".into());
            }
        }
        Some(p) if p.samples.is_empty() => diag("param.samples", "no sample points".into()),
        Some(_) => {}
    }
    if let Some(p) = &entry.published {
        if Real::parse(p, Precision::new(10).expect("valid")).is_err() {
            diag("published", format!("not a decimal number: `{p}`"));
        }
    }
    if entry.rate.is_none() && !entry.limit.is_exploratory() {
        diag("rate", "missing rate model".into());
    }
    if let Some(rate) = &entry.rate {
        let p30 = Precision::new(30).expect("valid");
        for z in entry.sample_points() {
            let var = z.as_ref().map(|q| Real::from_ratio(q, p30));
            let at = z.as_ref().map_or(String::new(), |q| format!(" at {q}"));
            match rate {
                RateModel::Geometric { rho, .. } => match rho.eval(p30, var.as_ref()) {
                    Ok(r) if r.abs().to_f64() > 1.0 + 1e-12 => {}
                    Ok(r) => diag("rate.rho", format!("|rho| = {} is not above 1{at}", r.to_decimal_string(8))),
                    Err(e) => diag("rate.rho", format!("cannot evaluate{at}: {e}")),
                },
                RateModel::Algebraic { power, .. } => match power.eval(p30, var.as_ref()) {
                    Ok(p) if p.is_positive() => {}
                    Ok(_) => diag("rate.power", format!("power is not positive{at}")),
                    Err(e) => diag("rate.power", format!("cannot evaluate{at}: {e}")),
                },
            }
            if let RateModel::Geometric { slope: 0, .. } = rate {
                diag("rate.slope", "slope must be positive".into());
            }
        }
    }
    // Every sample must yield real terms for the first few indices.
    for z in entry.sample_points().into_iter().flatten() {
        let arg = ZArg::Real(z.clone());
        for n in 1..=4 {
            if let Err(e) = cf.materialize(n, Part::A, Some(&arg)) {
                diag("cf", format!("a_{n} at {z}: {e}"));
                break;
            }
        }
    }
    out.dedup();
    out
}

/// Validate a whole catalog, including id uniqueness.
pub fn validate_all(entries: &[CatalogEntry]) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = entries.iter().flat_map(validate).collect();
    let mut seen = std::collections::BTreeSet::new();
    for e in entries {
        if !seen.insert(e.id.as_str()) {
            out.push(Diagnostic {
                id: e.id.clone(),
                field: "id".into(),
                message: "duplicate id".into(),
            });
        }
    }
    out
}

pub fn find<'a>(entries: &'a [CatalogEntry], id: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.id == id)
}
