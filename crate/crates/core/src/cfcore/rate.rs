//! Convergence-rate models and their empirical fit.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::cf::CFSpec;
use super::poly::ZArg;
use crate::error::{Error, Result};
use crate::numkit::{ConstExpr, Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSign {
    /// +1
    Plus,
    /// (-1)^n
    AltN,
    /// (-1)^(n+1)
    AltN1,
}

impl RateSign {
    pub fn at(self, n: usize) -> i32 {
        let odd = n % 2 == 1;
        match self {
            RateSign::Plus => 1,
            RateSign::AltN => {
                if odd {
                    -1
                } else {
                    1
                }
            }
            RateSign::AltN1 => {
                if odd {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn alternates(self) -> bool {
        self != RateSign::Plus
    }
}

impl fmt::Display for RateSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateSign::Plus => "+",
            RateSign::AltN => "(-1)^n",
            RateSign::AltN1 => "(-1)^(n+1)",
        })
    }
}

/// limit - p(n)/q(n) ~ sign(n) C / rho^(e n + f), or sign(n) C / n^power.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RateModel {
    Geometric {
        sign: RateSign,
        /// None when the constant is not known in closed form.
        c: Option<ConstExpr>,
        rho: ConstExpr,
        slope: u32,
        offset: i64,
    },
    Algebraic {
        sign: RateSign,
        power: ConstExpr,
    },
}

impl RateModel {
    pub fn sign(&self) -> RateSign {
        match self {
            RateModel::Geometric { sign, .. } | RateModel::Algebraic { sign, .. } => *sign,
        }
    }

    pub fn is_param_free(&self) -> bool {
        match self {
            RateModel::Geometric { c, rho, .. } => rho.is_param_free() && c.as_ref().is_none_or(|c| c.is_param_free()),
            RateModel::Algebraic { power, .. } => power.is_param_free(),
        }
    }

    /// Predicted error at index n.
    pub fn predicted(&self, n: usize, prec: Precision, var: Option<&Real>) -> Result<Option<Real>> {
        match self {
            RateModel::Geometric {
                sign,
                c: Some(c),
                rho,
                slope,
                offset,
            } => {
                let c = c.eval(prec, var)?;
                let r = rho.eval(prec, var)?;
                let e = *slope as i64 * n as i64 + offset;
                Ok(Some((&c / &r.powi(e)).mul_i64(sign.at(n) as i64)))
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Display for RateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: &RateSign| match s {
            RateSign::Plus => String::new(),
            s => format!("{s}*"),
        };
        match self {
            RateModel::Geometric {
                sign: s,
                c,
                rho,
                slope,
                offset,
            } => {
                let c = c.as_ref().map_or("C".to_string(), |c| format!("({c})"));
                let off = match offset {
                    0 => String::new(),
                    o if *o > 0 => format!("+{o}"),
                    o => format!("{o}"),
                };
                write!(f, "{}{c}/({rho})^({slope}n{off})", sign(s))
            }
            RateModel::Algebraic { sign: s, power } => write!(f, "{}C/n^({power})", sign(s)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateFit {
    pub range: (usize, usize),
    /// Observed sign pattern of the error, with the sign of the constant folded in.
    pub sign_hat: RateSign,
    pub negative_constant: bool,
    /// Observed sign of limit - p(n)/q(n) for each n in the range.
    pub signs: Vec<i32>,
    /// |err(n)/err(n+1)| over the range.
    pub ratios: Vec<f64>,
    /// Geometric: fitted rho (per unit of the model's n-slope).
    pub rho_hat: Option<f64>,
    /// Algebraic: fitted power.
    pub power_hat: Option<f64>,
    /// Fitted constant, extrapolated in 1/n (geometric models only).
    pub c_hat: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateCheck {
    pub sign_ok: bool,
    pub rho_rel_err: Option<f64>,
    pub c_rel_err: Option<f64>,
    pub power_rel_err: Option<f64>,
    pub passed: bool,
}

pub const RHO_TOL: f64 = 0.005;
pub const C_TOL: f64 = 0.02;
pub const POWER_TOL: f64 = 0.05;

/// Errors limit - p(n)/q(n) for n in range at the precision of `true_limit`.
pub fn error_sequence(
    cf: &CFSpec,
    true_limit: &Real,
    range: RangeInclusive<usize>,
    z: Option<&ZArg>,
) -> Result<Vec<(usize, Real)>> {
    let prec = true_limit.precision();
    let digits = prec.digits() as f64;
    let work = prec.plus(10);
    let vals = cf.convergent_values(*range.end(), z, work)?;
    let mut out = Vec::new();
    for n in range {
        let v = vals
            .get(n)
            .cloned()
            .flatten()
            .ok_or_else(|| Error::DivisionByZero(format!("convergent {n} unavailable")))?;
        let err = (true_limit - &v).round_to(prec);
        if err.is_zero() || err.log10_abs() < -(digits - 8.0) {
            return Err(Error::Underflow(format!(
                "error at n = {n} is below the {digits}-digit working precision"
            )));
        }
        out.push((n, err));
    }
    Ok(out)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fit the observed errors over `range` against the shape of `model`.
pub fn rate_fit(
    cf: &CFSpec,
    true_limit: &Real,
    range: RangeInclusive<usize>,
    model: &RateModel,
    z: Option<&ZArg>,
    var: Option<&Real>,
) -> Result<RateFit> {
    let (lo, hi) = (*range.start(), *range.end());
    if hi < lo + 3 {
        return Err(Error::Domain("rate fit needs at least four indices".into()));
    }
    let errs = error_sequence(cf, true_limit, range, z)?;
    let logs: Vec<f64> = errs.iter().map(|(_, e)| e.log10_abs() * std::f64::consts::LN_10).collect();
    let ns: Vec<f64> = errs.iter().map(|(n, _)| *n as f64).collect();
    let ratios: Vec<f64> = logs.windows(2).map(|w| (w[0] - w[1]).exp()).collect();

    let signs: Vec<i32> = errs.iter().map(|(_, e)| e.signum()).collect();
    let alternating = signs.windows(2).all(|w| w[0] != w[1]);
    let (sign_hat, negative_constant) = if alternating {
        let even_positive = errs
            .iter()
            .zip(&signs)
            .find(|((n, _), _)| n % 2 == 0)
            .map(|(_, s)| *s > 0)
            .unwrap_or(true);
        (if even_positive { RateSign::AltN } else { RateSign::AltN1 }, false)
    } else {
        (RateSign::Plus, signs.iter().filter(|s| **s < 0).count() * 2 > signs.len())
    };

    let mut fit = RateFit {
        range: (lo, hi),
        sign_hat,
        negative_constant,
        signs: signs.clone(),
        ratios,
        rho_hat: None,
        power_hat: None,
        c_hat: None,
    };
    match model {
        RateModel::Geometric {
            sign, rho, slope, offset, ..
        } => {
            let (beta, _) = least_squares(&ns, &logs);
            fit.rho_hat = Some((-beta / *slope as f64).exp());
            // C(n) = err(n) sign(n) rho^(e n + f), extrapolated linearly in 1/n.
            let prec = true_limit.precision();
            let r = rho.eval(Precision::new(30)?, var)?.widen(prec);
            let half = errs.len() / 2;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (n, e) in &errs[half..] {
                let k = *slope as i64 * *n as i64 + offset;
                let c = (e * &r.powi(k)).mul_i64(sign.at(*n) as i64);
                xs.push(1.0 / *n as f64);
                ys.push(c.to_f64());
            }
            let (_, c0) = least_squares(&xs, &ys);
            fit.c_hat = Some(c0);
        }
        RateModel::Algebraic { .. } => {
            // local power p(n) = ln|err(n)/err(n+2)| / ln((n+2)/n), extrapolated in 1/n;
            // two-step ratios keep parity-dependent constants apart
            let half = errs.len() / 2;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for i in half..errs.len() - 2 {
                let n = ns[i];
                xs.push(1.0 / n);
                ys.push((logs[i] - logs[i + 2]) / ((n + 2.0) / n).ln());
            }
            let (_, p0) = least_squares(&xs, &ys);
            fit.power_hat = Some(p0);
        }
    }
    Ok(fit)
}

impl RateFit {
    /// Compare against the model: rho within 0.5%, C within 2%, power within 5%.
    pub fn check(&self, model: &RateModel, var: Option<&Real>) -> Result<RateCheck> {
        let p30 = Precision::new(30)?;
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let mut chk = RateCheck {
            sign_ok: true,
            rho_rel_err: None,
            c_rel_err: None,
            power_rel_err: None,
            passed: true,
        };
        match model {
            RateModel::Geometric {
                sign,
                c,
                rho,
                slope,
                offset,
            } => {
                let rho_v = rho.eval(p30, var)?.to_f64();
                chk.rho_rel_err = self.rho_hat.map(|r| rel(r, rho_v.abs()));
                let c_v = match c {
                    Some(c) => Some(c.eval(p30, var)?.to_f64()),
                    None => None,
                };
                chk.c_rel_err = match (c_v, self.c_hat) {
                    (Some(cv), Some(ch)) => Some(rel(ch, cv)),
                    _ => None,
                };
                // predicted sign: sign(n) sgn(C) sgn(rho)^(e n + f)
                let predicted: Vec<i32> = (self.range.0..=self.range.1)
                    .map(|n| {
                        let k = *slope as i64 * n as i64 + offset;
                        let rs = if rho_v < 0.0 && k.rem_euclid(2) == 1 { -1 } else { 1 };
                        let cs = if c_v.is_some_and(|c| c < 0.0) { -1 } else { 1 };
                        sign.at(n) * rs * cs
                    })
                    .collect();
                chk.sign_ok = if c_v.is_some() {
                    predicted == self.signs
                } else {
                    alternates(&predicted) == alternates(&self.signs)
                };
                chk.passed = chk.sign_ok
                    && chk.rho_rel_err.is_some_and(|e| e <= RHO_TOL)
                    && chk.c_rel_err.is_none_or(|e| e <= C_TOL);
            }
            RateModel::Algebraic { sign, power } => {
                let p = power.eval(p30, var)?.to_f64();
                chk.power_rel_err = self.power_hat.map(|x| rel(x, p));
                chk.sign_ok = self.sign_hat == *sign;
                chk.passed = chk.sign_ok && chk.power_rel_err.is_some_and(|e| e <= POWER_TOL);
            }
        }
        Ok(chk)
    }
}

fn alternates(s: &[i32]) -> bool {
    s.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{constant, ConstantId};

    fn silver() -> ConstExpr {
        ConstExpr::int(1) + ConstExpr::int(2).sqrt()
    }

    #[test]
    fn tiny_rate() {
        let cf = CFSpec::parse("[[0,3(2n-1)],[2,-n^2]]").unwrap();
        let p = Precision::new(120).unwrap();
        let l = constant(ConstantId::Log2, p).unwrap().value;
        let model = RateModel::Geometric {
            sign: RateSign::Plus,
            c: Some(ConstExpr::int(2) * ConstExpr::c(ConstantId::Pi)),
            rho: silver(),
            slope: 4,
            offset: 2,
        };
        let fit = rate_fit(&cf, &l, 40..=60, &model, None, None).unwrap();
        let chk = fit.check(&model, None).unwrap();
        assert!(chk.passed, "{fit:?} {chk:?}");
        let s4 = (1.0 + 2f64.sqrt()).powi(4);
        assert!((fit.ratios.last().unwrap() / s4 - 1.0).abs() < 0.005);
    }

    #[test]
    fn small_rate_alternates() {
        let cf = CFSpec::parse("[[0,11n^2-11n+3],[5,n^4]]").unwrap();
        let p = Precision::new(150).unwrap();
        let l = constant(ConstantId::Zeta2, p).unwrap().value;
        let model = RateModel::Geometric {
            sign: RateSign::AltN,
            c: Some(ConstExpr::int(4) * ConstExpr::c(ConstantId::Pi).powi(2)),
            rho: ConstExpr::c(ConstantId::Golden),
            slope: 10,
            offset: 5,
        };
        let fit = rate_fit(&cf, &l, 20..=30, &model, None, None).unwrap();
        assert_eq!(fit.sign_hat, RateSign::AltN);
        assert!(fit.check(&model, None).unwrap().passed);
    }

    #[test]
    fn underflow_detected() {
        let cf = CFSpec::parse("[[0,3(2n-1)],[2,-n^2]]").unwrap();
        let p = Precision::new(30).unwrap();
        let l = constant(ConstantId::Log2, p).unwrap().value;
        let model = RateModel::Geometric {
            sign: RateSign::Plus,
            c: None,
            rho: silver(),
            slope: 4,
            offset: 2,
        };
        assert!(matches!(rate_fit(&cf, &l, 40..=60, &model, None, None), Err(Error::Underflow(_))));
    }

    #[test]
    fn serde_shape() {
        let m = RateModel::Algebraic {
            sign: RateSign::AltN1,
            power: ConstExpr::int(4),
        };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("{\"kind\":\"algebraic\",\"sign\":\"alt_n1\""), "{s}");
        assert_eq!(serde_json::from_str::<RateModel>(&s).unwrap(), m);
    }
}
