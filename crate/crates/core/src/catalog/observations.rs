//! Numerical observations for the exploratory family and cross-checks between entries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{find, CatalogEntry};
use crate::cfcore::{q, qi, CFSpec, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::{ConstExpr, ConstantId, Precision, Real};
use crate::transforms::{moebius_between, MoebiusMap};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObsCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalPoint {
    /// Imaginary sample point, written as y for z = i y.
    pub z: String,
    /// Index n with a_n = 0, when the fraction terminates.
    pub terminates_at: Option<usize>,
    pub exact: Option<String>,
    /// Rational reconstruction of the numerical value with bounded denominator.
    pub reconstructed: Option<String>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FObservations {
    pub checks: Vec<ObsCheck>,
    pub rational_points: Vec<RationalPoint>,
    /// (z, (f(z) + 6z^2 + 113/12) z^2): constant when the remainder is O(1/z^2).
    pub asymptotic_scaled: Vec<(String, f64)>,
    pub passed: bool,
}

impl FObservations {
    pub fn check(&self, name: &str) -> Option<&ObsCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "    {:<28} residual {:>9.1e} tol {:>7.0e} {}\n",
                c.name,
                c.residual,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            ));
        }
        for r in &self.rational_points {
            out.push_str(&format!(
                "    z = {}i: {} {}\n",
                r.z,
                r.exact.as_deref().or(r.reconstructed.as_deref()).unwrap_or("no rational found"),
                if r.agrees { "" } else { "(mismatch)" }
            ));
        }
        for (z, s) in &self.asymptotic_scaled {
            out.push_str(&format!("    z = {z}: (f + 6z^2 + 113/12) z^2 = {s:.4}\n"));
        }
        out
    }
}

pub const ZERO_TOL: f64 = 1e-20;
pub const EVEN_TOL: f64 = 1e-25;
pub const CURVATURE_TOL: f64 = 1e-6;
pub const ASYMPTOTIC_TOL: f64 = 1e-1;
pub const RECONSTRUCTION_BOUND: i64 = 1_000_000;

const MAX_TERMS: usize = 20_000;

fn value_at(cf: &CFSpec, z: &ZArg, p: Precision) -> Result<Real> {
    Ok(cf.limit(p, Some(z), MAX_TERMS)?.value)
}

/// Best rational approximation with denominator at most `bound` agreeing with x to `digits`.
pub fn reconstruct_rational(x: &Real, bound: i64, digits: u32) -> Option<Q> {
    let target = x.to_ratio();
    let bound = BigInt::from(bound);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = target.clone();
    let tol = Q::new(BigInt::one(), BigInt::from(10).pow(digits));
    for _ in 0..200 {
        let a = r.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > bound {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let cand = Q::new(h1.clone(), k1.clone());
        if (&cand - &target).abs() < &tol * cand.abs().max(qi(1)) {
            return Some(cand);
        }
        let frac = &r - Q::from_integer(a);
        if frac.is_zero() {
            break;
        }
        r = frac.recip();
    }
    None
}

fn obs(name: &str, residual: f64, tolerance: f64, detail: String) -> ObsCheck {
    ObsCheck {
        name: name.to_string(),
        residual,
        tolerance,
        passed: residual.is_finite() && residual < tolerance,
        detail,
    }
}

fn failed(name: &str, tolerance: f64, e: Error) -> ObsCheck {
    ObsCheck {
        name: name.to_string(),
        residual: f64::INFINITY,
        tolerance,
        passed: false,
        detail: e.to_string(),
    }
}

/// The first index n <= cap with a_n = 0 at z.
fn termination_index(cf: &CFSpec, z: &ZArg, cap: usize) -> Result<Option<usize>> {
    for n in 1..=cap {
        if cf.a(n, Some(z))?.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn rational_point(cf: &CFSpec, y: Q, p: Precision) -> Result<RationalPoint> {
    let z = ZArg::Imag(y.clone());
    let stop = termination_index(cf, &z, 200)?;
    let exact = match stop {
        Some(n) => Some(cf.convergent(n - 1, Some(&z))?),
        None => None,
    };
    let v = value_at(cf, &z, p)?;
    let rec = reconstruct_rational(&v, RECONSTRUCTION_BOUND, p.digits() - 10);
    let agrees = match (&exact, &rec) {
        (Some(e), Some(r)) => e == r,
        (Some(e), None) => (&Real::from_ratio(e, p) - &v).abs().log10_abs() < -(p.digits() as f64 - 10.0),
        (None, r) => r.is_some(),
    };
    Ok(RationalPoint {
        z: y.to_string(),
        terminates_at: stop,
        exact: exact.map(|e| e.to_string()),
        reconstructed: rec.map(|r| r.to_string()),
        agrees,
    })
}

/// Observation battery for the shifted cosh family f(z).
pub fn f_observations(cf: &CFSpec, prec: u32) -> FObservations {
    let p = Precision::new(prec.max(40)).expect("valid precision");
    let mut checks = Vec::new();

    // f(i/2) = 0
    let name = "f(i/2) = 0";
    checks.push(match value_at(cf, &ZArg::Imag(q(1, 2)), p) {
        Ok(v) => obs(name, v.abs().to_f64(), ZERO_TOL, format!("f(i/2) = {}", v.to_sci_string(6))),
        Err(e) => failed(name, ZERO_TOL, e),
    });

    // evenness
    for (zn, zd) in [(1, 5), (3, 10)] {
        let name = format!("f({zn}/{zd}) = f(-{zn}/{zd})");
        let r = (|| -> Result<Real> {
            let a = value_at(cf, &ZArg::Real(q(zn, zd)), p)?;
            let b = value_at(cf, &ZArg::Real(q(-zn, zd)), p)?;
            Ok((&a - &b).abs())
        })();
        checks.push(match r {
            Ok(d) => obs(&name, d.to_f64(), EVEN_TOL, String::new()),
            Err(e) => failed(&name, EVEN_TOL, e),
        });
    }

    // f''(0) by central differences, Richardson-extrapolated from steps h and 2h
    let name = "f''(0) = (1920-24S)/(7S-528)";
    let r = (|| -> Result<(f64, f64, f64)> {
        let f0 = value_at(cf, &ZArg::Real(qi(0)), p)?;
        let second = |h: &Q| -> Result<Real> {
            let fp = value_at(cf, &ZArg::Real(h.clone()), p)?;
            let fm = value_at(cf, &ZArg::Real(-h.clone()), p)?;
            let num = &(&fp + &fm) - &f0.mul_i64(2);
            Ok(&num / &Real::from_ratio(&(h * h), p))
        };
        let h = q(1, 10_000);
        let d1 = second(&h)?;
        let d2 = second(&(&h * qi(2)))?;
        let rich = &d1 + &(&d1 - &d2).div_i64(3);
        let s = ConstExpr::c(ConstantId::GammaQ4).powi(2).eval(p, None)?;
        let expected = &(&Real::from_i64(1920, p) - &s.mul_i64(24)) / &(&s.mul_i64(7) - &Real::from_i64(528, p));
        Ok((rich.to_f64(), d1.to_f64(), expected.to_f64()))
    })();
    checks.push(match r {
        Ok((rich, raw, expected)) => obs(
            name,
            (rich - expected).abs(),
            CURVATURE_TOL,
            format!("extrapolated {rich:.12}, plain step {raw:.12}, expected {expected:.12}"),
        ),
        Err(e) => failed(name, CURVATURE_TOL, e),
    });

    // f(10) + 600 + 113/12
    let name = "f(10) + 600 + 113/12";
    let mut asymptotic_scaled = Vec::new();
    let remainder = |z: i64| -> Result<Real> {
        let v = value_at(cf, &ZArg::Real(qi(z)), p)?;
        let lead = Real::from_ratio(&(qi(6 * z * z) + q(113, 12)), p);
        Ok(&v + &lead)
    };
    checks.push(match remainder(10) {
        Ok(r) => obs(name, r.abs().to_f64(), ASYMPTOTIC_TOL, format!("remainder {}", r.to_decimal_string(8))),
        Err(e) => failed(name, ASYMPTOTIC_TOL, e),
    });
    for z in [10, 30, 100] {
        if let Ok(r) = remainder(z) {
            asymptotic_scaled.push((z.to_string(), r.mul_i64(z * z).to_f64()));
        }
    }

    let mut rational_points = Vec::new();
    for den in [4, 6] {
        for m in 1..=3 {
            if let Ok(rp) = rational_point(cf, q(2 * m + 1, den), p) {
                rational_points.push(rp);
            }
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    FObservations {
        checks,
        rational_points,
        asymptotic_scaled,
        passed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub from: String,
    pub to: String,
    /// limit(to) = M(limit(from)), derived from the transfer matrices.
    pub map: MoebiusMap,
    pub relation: String,
    pub inverse_relation: String,
    pub derived_residual: f64,
    pub tolerance: f64,
    /// The relation as printed, expressing limit(from) in closed form.
    pub printed: String,
    pub printed_residual: f64,
    pub printed_holds: bool,
    pub passed: bool,
}

/// Printed closed forms for the shifted fractions, as (shifted id, target id, expression, text).
fn printed_relations() -> Vec<(&'static str, &'static str, ConstExpr, &'static str)> {
    let c = ConstExpr::c;
    let int = ConstExpr::int;
    vec![
        (
            "s-small",
            "thm2",
            int(-10) + int(800) * c(ConstantId::GammaQ4).powi(2),
            "S = -10 + 800 (Gamma(1/4)/Gamma(3/4))^4",
        ),
        (
            "s-tiny",
            "thm6",
            int(4) - int(32) / c(ConstantId::GammaQ4),
            "S = 4 - 32 (Gamma(3/4)/Gamma(1/4))^2",
        ),
        (
            "s-big",
            "thm3",
            int(-336) - int(9) * c(ConstantId::EtaPlus) / c(ConstantId::OmegaPlus),
            "S = -336 - 9 eta+/omega+",
        ),
    ]
}

/// Derive the Möbius map between each shifted fraction and its head-edited partner and
/// compare it with the printed closed form.
pub fn moebius_relations(entries: &[CatalogEntry], prec: u32) -> Result<Vec<RelationCheck>> {
    let p = Precision::new(prec)?;
    let mut out = Vec::new();
    for (from_id, to_id, printed, text) in printed_relations() {
        let get = |id: &str| find(entries, id).ok_or_else(|| Error::Catalog(format!("missing entry {id}")));
        let from = get(from_id)?;
        let to = get(to_id)?;
        let map = moebius_between(&from.cf, &to.cf, None)?;
        let s = from.cf.limit(p, None, 5000)?.value;
        let t = to.cf.limit(p, None, 5000)?.value;
        let derived_residual = (&map.apply(&s)? - &t).abs().to_f64() / t.abs().to_f64().max(1.0);
        let tolerance = 10f64.powi(-(prec as i32 - 5));
        let pe = printed.eval_tracked(p, None)?;
        let printed_residual = (&pe.value - &s).abs().to_f64() / s.abs().to_f64().max(1.0);
        let printed_tol = 10f64.powi(-((pe.digits().min(prec) as i32) - 5));
        out.push(RelationCheck {
            from: from_id.to_string(),
            to: to_id.to_string(),
            relation: format!("{to_id} = {map}, x = {from_id}"),
            inverse_relation: format!("{from_id} = {}, x = {to_id}", map.inverse()),
            map,
            derived_residual,
            tolerance,
            printed: text.to_string(),
            printed_residual,
            printed_holds: printed_residual < printed_tol,
            passed: derived_residual < tolerance,
        });
    }
    Ok(out)
}

/// Which reading of an ambiguous fraction matches a quadrature value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Disambiguation {
    pub target_name: String,
    pub target: f64,
    pub target_error: f64,
    /// (entry id, limit, |limit - target|)
    pub candidates: Vec<(String, f64, f64)>,
    pub best: String,
    /// Distance of the runner-up minus distance of the best candidate.
    pub margin: f64,
    pub required_margin: f64,
    pub passed: bool,
}

/// Compare 8 c(4,2)/c(4,0) from quadrature with the quadratic and cubic readings of its fraction.
pub fn bessel_disambiguation(entries: &[CatalogEntry]) -> Result<Disambiguation> {
    use crate::integrals::{bessel_moment, QuadSpec};
    let spec = QuadSpec::one_dim();
    let c40 = bessel_moment(4, 0, &spec)?;
    let c42 = bessel_moment(4, 2, &spec)?;
    let target = 8.0 * c42.value / c40.value;
    let target_error = 8.0 * (c42.error / c40.value + c42.value * c40.error / (c40.value * c40.value));
    let p = Precision::new(20)?;
    let mut candidates = Vec::new();
    for id in ["bessel42", "bessel42-cubic"] {
        let e = find(entries, id).ok_or_else(|| Error::Catalog(format!("entry `{id}` missing")))?;
        let v = e.cf.limit(p, None, 5000)?.value.to_f64();
        candidates.push((id.to_string(), v, (v - target).abs()));
    }
    candidates.sort_by(|a, b| a.2.total_cmp(&b.2));
    let margin = candidates[1].2 - candidates[0].2;
    let required_margin = 1e-4;
    Ok(Disambiguation {
        target_name: "8 c(4,2)/c(4,0)".into(),
        target,
        target_error,
        best: candidates[0].0.clone(),
        margin,
        required_margin,
        passed: margin > required_margin && candidates[0].2 < 1e-10,
        candidates,
    })
}
