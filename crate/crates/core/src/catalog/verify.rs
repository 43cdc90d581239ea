//! Verification harness: limits against oracles, convergence rates, structural identities.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observations::{f_observations, FObservations};
use super::{CatalogEntry, Limit, ObservationBattery};
use crate::cfcore::{rate_fit, CFSpec, RateCheck, RateFit, RateModel, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::{Precision, Real};

pub const REPORT_FORMAT: &str = "cfvar-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Decimal digits for limit checks.
    pub prec: u32,
    /// Term cap for limit evaluation.
    pub max_terms: usize,
    /// Fit window for geometric rate models.
    pub rate_window: (usize, usize),
    /// Fit window for algebraic rate models.
    pub algebraic_window: (usize, usize),
    /// Depth at which algebraically converging fractions are compared to their limit.
    pub algebraic_depth: usize,
    /// Depth of the exact determinant identity check.
    pub determinant_depth: usize,
    /// Limit tolerance exponent override: residual below 10^(-digits).
    #[serde(default)]
    pub limit_tol_digits: Option<u32>,
    #[serde(default)]
    pub skip_rates: bool,
    /// Record wall-clock time per entry (breaks byte stability of the report).
    #[serde(skip)]
    pub timings: bool,
    /// Worker threads; None uses the global pool.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            prec: 40,
            max_terms: 5000,
            rate_window: (40, 80),
            algebraic_window: (200, 400),
            algebraic_depth: 2000,
            determinant_depth: 50,
            limit_tol_digits: None,
            skip_rates: false,
            timings: false,
            jobs: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMethod {
    /// Successive convergents until the oscillation bound is below 10^-prec.
    Converged,
    /// Fixed-depth convergent inside the envelope 100 N^-p of an algebraic rate.
    Envelope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub method: LimitMethod,
    pub value: String,
    /// None for exploratory entries.
    pub expected: Option<String>,
    /// Digits to which the expected value is known.
    pub expected_digits: u32,
    pub residual: f64,
    pub tolerance: f64,
    pub terms: usize,
    pub terminated: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PublishedCheck {
    pub digits: u32,
    pub compared_digits: u32,
    pub agreement_digits: f64,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateReference {
    /// True limit from the closed-form oracle.
    Oracle,
    /// Oracle lacks the digits; the fraction's own high-precision limit is used.
    SelfLimit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateReport {
    pub model: String,
    pub reference: RateReference,
    pub working_digits: u32,
    pub fit: RateFit,
    pub check: RateCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub param: Option<String>,
    pub limit: Option<LimitCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<PublishedCheck>,
    pub rate: Option<RateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Pass,
    Fail,
    Exploratory,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub status: EntryStatus,
    /// Exact determinant identity to the configured depth (first sample for parameter entries).
    pub determinant_ok: bool,
    pub samples: Vec<SampleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<FObservations>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.status != EntryStatus::Fail
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: String,
    pub version: String,
    pub config: VerifyConfig,
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

fn prec(d: u32) -> Result<Precision> {
    Precision::new(d)
}

fn zarg(z: &Option<Q>) -> Option<ZArg> {
    z.clone().map(ZArg::Real)
}

fn var_at(z: &Option<Q>, p: Precision) -> Option<Real> {
    z.as_ref().map(|q| Real::from_ratio(q, p))
}

/// Expected limit with the digits it can be trusted to; None for exploratory entries.
pub fn expected_limit(entry: &CatalogEntry, z: &Option<Q>, p: Precision) -> Result<Option<(Real, u32)>> {
    let var = var_at(z, p.guarded());
    match &entry.limit {
        Limit::Expr(e) => {
            let t = e.eval_tracked(p, var.as_ref())?;
            let d = t.digits().min(p.digits());
            Ok(Some((t.value, d)))
        }
        Limit::Named(f) => {
            let v = var.ok_or(Error::MissingParameter)?;
            Ok(Some((f.eval(&v, p)?, p.digits())))
        }
        Limit::Exploratory => Ok(None),
    }
}

fn tolerance_digits(cfg: &VerifyConfig, expected_digits: u32) -> u32 {
    let d = cfg.limit_tol_digits.unwrap_or(cfg.prec.saturating_sub(5));
    d.min(expected_digits.saturating_sub(5))
}

fn limit_check(entry: &CatalogEntry, z: &Option<Q>, cfg: &VerifyConfig) -> Result<LimitCheck> {
    let p = prec(cfg.prec)?;
    let arg = zarg(z);
    let expected = expected_limit(entry, z, p)?;
    if let Some(RateModel::Algebraic { power, .. }) = &entry.rate {
        let var = var_at(z, prec(30)?);
        let pw = power.eval(prec(30)?, var.as_ref())?.to_f64();
        let n = cfg.algebraic_depth;
        let vals = entry.cf.convergent_values(n, arg.as_ref(), p.plus(10))?;
        let terms = vals.len() - 1;
        let v = vals
            .into_iter()
            .rev()
            .flatten()
            .next()
            .ok_or_else(|| Error::DivisionByZero("no finite convergent".into()))?;
        let tol = 100.0 * (n as f64).powf(-pw);
        let (residual, expected_s, d) = match &expected {
            Some((l, d)) => ((l - &v).abs().to_f64(), Some(l.to_decimal_string(*d as usize)), *d),
            None => (0.0, None, 0),
        };
        return Ok(LimitCheck {
            method: LimitMethod::Envelope,
            value: v.to_decimal_string(20),
            expected: expected_s,
            expected_digits: d,
            residual,
            tolerance: tol,
            terms,
            terminated: terms < n,
            passed: residual < tol,
        });
    }
    let lim = entry.cf.limit(p, arg.as_ref(), cfg.max_terms)?;
    let sig = cfg.prec as usize;
    Ok(match expected {
        Some((l, d)) => {
            let tol_d = tolerance_digits(cfg, d);
            let scale = l.abs().to_f64().max(1.0);
            let residual = (&l - &lim.value).abs().to_f64() / scale;
            let tol = 10f64.powi(-(tol_d as i32));
            LimitCheck {
                method: LimitMethod::Converged,
                value: lim.value.to_decimal_string(sig),
                expected: Some(l.to_decimal_string(d as usize)),
                expected_digits: d,
                residual,
                tolerance: tol,
                terms: lim.terms,
                terminated: lim.terminated,
                passed: residual < tol,
            }
        }
        None => LimitCheck {
            method: LimitMethod::Converged,
            value: lim.value.to_decimal_string(sig),
            expected: None,
            expected_digits: 0,
            residual: lim.error.to_f64(),
            tolerance: 10f64.powi(-(cfg.prec as i32)),
            terms: lim.terms,
            terminated: lim.terminated,
            passed: true,
        },
    })
}

fn significant_digits(decimal: &str) -> u32 {
    let mantissa = decimal.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len() as u32
}

fn published_check(entry: &CatalogEntry, published: &str, cfg: &VerifyConfig) -> Result<PublishedCheck> {
    let digits = significant_digits(published);
    let compared = digits.min(cfg.prec);
    let p = prec(compared.max(10))?;
    let lim = entry.cf.limit(p.plus(5), None, cfg.max_terms)?;
    let reference = Real::parse(published, p.plus(5))?;
    let agreement = lim.value.agreement_digits(&reference);
    Ok(PublishedCheck {
        digits,
        compared_digits: compared,
        agreement_digits: agreement.min(compared as f64 + 5.0),
        passed: agreement >= compared as f64 - 2.0,
    })
}

/// log10 of the predicted |error| at n; the constant is taken as 1 when unknown.
fn predicted_log10(model: &RateModel, n: usize, var: Option<&Real>) -> Result<f64> {
    let p30 = prec(30)?;
    match model {
        RateModel::Geometric {
            c, rho, slope, offset, ..
        } => {
            let r = rho.eval(p30, var)?.abs().log10_abs();
            let lc = match c {
                Some(c) => c.eval(p30, var)?.log10_abs(),
                None => 0.0,
            };
            Ok(lc - r * (*slope as f64 * n as f64 + *offset as f64))
        }
        RateModel::Algebraic { power, .. } => Ok(-power.eval(p30, var)?.to_f64() * (n as f64).log10()),
    }
}

fn rate_report(entry: &CatalogEntry, model: &RateModel, z: &Option<Q>, cfg: &VerifyConfig) -> Result<RateReport> {
    let window = match model {
        RateModel::Geometric { .. } => cfg.rate_window,
        RateModel::Algebraic { .. } => cfg.algebraic_window,
    };
    let var30 = var_at(z, prec(30)?);
    let needed = (-predicted_log10(model, window.1, var30.as_ref())?).max(0.0).ceil() as u32 + 25;
    let needed = needed.max(30);
    let p = prec(needed)?;
    let arg = zarg(z);
    let oracle = expected_limit(entry, z, p)?.filter(|(_, d)| *d >= needed);
    let (limit, reference) = match oracle {
        Some((l, _)) => (l, RateReference::Oracle),
        None => {
            let terms = cfg.max_terms.max(4 * window.1);
            (entry.cf.limit(p, arg.as_ref(), terms)?.value, RateReference::SelfLimit)
        }
    };
    let var = var_at(z, p);
    let fit = rate_fit(&entry.cf, &limit, window.0..=window.1, model, arg.as_ref(), var.as_ref())?;
    let check = fit.check(model, var.as_ref())?;
    Ok(RateReport {
        model: model.to_string(),
        reference,
        working_digits: needed,
        fit,
        check,
    })
}

fn sample_report(entry: &CatalogEntry, z: &Option<Q>, cfg: &VerifyConfig) -> SampleReport {
    let mut rep = SampleReport {
        param: z.as_ref().map(|q| q.to_string()),
        limit: None,
        published: None,
        rate: None,
        error: None,
        passed: false,
    };
    let run = |rep: &mut SampleReport| -> Result<()> {
        rep.limit = Some(limit_check(entry, z, cfg)?);
        if let (Some(p), None) = (&entry.published, z) {
            rep.published = Some(published_check(entry, p, cfg)?);
        }
        if let (Some(model), false) = (&entry.rate, cfg.skip_rates) {
            rep.rate = Some(rate_report(entry, model, z, cfg)?);
        }
        Ok(())
    };
    match run(&mut rep) {
        Ok(()) => {
            rep.passed = rep.limit.as_ref().is_some_and(|l| l.passed)
                && rep.published.as_ref().is_none_or(|p| p.passed)
                && rep.rate.as_ref().is_none_or(|r| r.check.passed);
        }
        Err(e) => rep.error = Some(e.to_string()),
    }
    rep
}

fn determinant_ok(cf: &CFSpec, z: &Option<Q>, depth: usize) -> bool {
    cf.determinant_holds(depth, zarg(z).as_ref()).unwrap_or(false)
}

/// Verify one entry at every sample point.
pub fn verify_entry(entry: &CatalogEntry, cfg: &VerifyConfig) -> EntryReport {
    let start = Instant::now();
    let points = entry.sample_points();
    let samples: Vec<SampleReport> = points.iter().map(|z| sample_report(entry, z, cfg)).collect();
    let det = determinant_ok(&entry.cf, &points[0], cfg.determinant_depth);
    let observations = entry.observations.map(|b| match b {
        ObservationBattery::ShiftedCosh => f_observations(&entry.cf, cfg.prec),
    });
    let status = if entry.limit.is_exploratory() {
        EntryStatus::Exploratory
    } else if det && samples.iter().all(|s| s.passed) {
        EntryStatus::Pass
    } else {
        EntryStatus::Fail
    };
    EntryReport {
        id: entry.id.clone(),
        status,
        determinant_ok: det,
        samples,
        observations,
        elapsed_ms: cfg.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Verify every entry, concurrently; order of the report follows the catalog.
pub fn verify_all(entries: &[CatalogEntry], cfg: &VerifyConfig) -> VerificationReport {
    let run = || entries.par_iter().map(|e| verify_entry(e, cfg)).collect::<Vec<_>>();
    let reports = match cfg.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    let passed = reports.iter().all(|r| r.passed());
    VerificationReport {
        format: REPORT_FORMAT.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        entries: reports,
        passed,
    }
}

fn fmt_exp(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.1e}")
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table, one line per sample.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<15} {:>6} {:>9} {:>9} {:>9} {:>9} {:>4} {:>6}\n",
            "id", "param", "residual", "tol", "rho err", "C err", "det", "status"
        );
        for e in &self.entries {
            for (i, s) in e.samples.iter().enumerate() {
                let (res, tol) = s
                    .limit
                    .as_ref()
                    .map_or(("-".into(), "-".into()), |l| (fmt_exp(l.residual), fmt_exp(l.tolerance)));
                let (rho, c) = match &s.rate {
                    Some(r) => {
                        let a = r
                            .check
                            .rho_rel_err
                            .or(r.check.power_rel_err)
                            .map_or("-".into(), fmt_exp);
                        (a, r.check.c_rel_err.map_or("-".into(), fmt_exp))
                    }
                    None => ("-".into(), "-".into()),
                };
                let status = if s.error.is_some() {
                    "error"
                } else if e.status == EntryStatus::Exploratory {
                    "expl"
                } else if s.passed {
                    "pass"
                } else {
                    "FAIL"
                };
                out.push_str(&format!(
                    "{:<15} {:>6} {:>9} {:>9} {:>9} {:>9} {:>4} {:>6}\n",
                    if i == 0 { e.id.as_str() } else { "" },
                    s.param.as_deref().unwrap_or("-"),
                    res,
                    tol,
                    rho,
                    c,
                    if i == 0 { if e.determinant_ok { "ok" } else { "BAD" } } else { "" },
                    status
                ));
                if let Some(err) = &s.error {
                    out.push_str(&format!("    error: {err}\n"));
                }
            }
            if let Some(obs) = &e.observations {
                out.push_str(&obs.summary_lines());
            }
            if let Some(ms) = e.elapsed_ms {
                out.push_str(&format!("    time: {ms} ms\n"));
            }
        }
        let failed = self.entries.iter().filter(|e| !e.passed()).count();
        out.push_str(&format!(
            "{} entries, {} failed: {}\n",
            self.entries.len(),
            failed,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}
