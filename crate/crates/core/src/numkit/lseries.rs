//! L-series of the weight-4 level-8 eta product q prod (1-q^{2n})^4 (1-q^{4n})^4.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::agm::pi;
use super::real::{Precision, Real};
use super::special::{gamma, incomplete_gamma_upper};
use crate::error::{Error, Result};

/// Default cap on the number of coefficients used by the smoothed sum.
pub const DEFAULT_COEFF_BUDGET: usize = 4000;

const WEIGHT: i64 = 4;
const LEVEL: i64 = 8;

/// Coefficients a_1..a_n of the eta product.
pub fn eta_product_coefficients(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return Vec::new();
    }
    // p[i] = coefficient of q^i in prod (1-q^{2j})^4 (1-q^{4j})^4, i < n.
    let mut p = vec![BigInt::zero(); n];
    p[0] = BigInt::from(1);
    let mut apply = |step: usize| {
        for _ in 0..4 {
            for i in (step..n).rev() {
                let v = p[i - step].clone();
                p[i] -= v;
            }
        }
    };
    let mut j = 1;
    while 2 * j < n {
        apply(2 * j);
        if 4 * j < n {
            apply(4 * j);
        }
        j += 1;
    }
    p
}

/// Result of an L-value evaluation, with the numerically determined root number.
#[derive(Clone, Debug)]
pub struct LValue {
    pub value: Real,
    /// Functional-equation sign that made the two smoothing parameters agree.
    pub epsilon: i32,
    /// log10 of the relative disagreement between the two smoothing parameters, per sign.
    pub discrepancy_plus: f64,
    pub discrepancy_minus: f64,
    pub coefficients: usize,
}

/// Serializable provenance for reports.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RootNumberCheck {
    pub epsilon: i32,
    pub log10_discrepancy_plus: f64,
    pub log10_discrepancy_minus: f64,
}

impl LValue {
    pub fn root_number_check(&self) -> RootNumberCheck {
        RootNumberCheck {
            epsilon: self.epsilon,
            log10_discrepancy_plus: self.discrepancy_plus,
            log10_discrepancy_minus: self.discrepancy_minus,
        }
    }
}

/// Number of coefficients needed so that exp(-2 pi N t / sqrt 8) < 10^(-digits-5).
pub fn coefficient_count(digits: u32, t: f64) -> usize {
    let a = 2.0 * std::f64::consts::PI / (LEVEL as f64).sqrt();
    (((digits as f64 + 5.0) * std::f64::consts::LN_10) / (a * t)).ceil() as usize + 2
}

/// Lambda(s) split at t: sum a_n [(An)^-s G(s, A n t) + eps (An)^-(k-s) G(k-s, A n / t)].
fn lambda_halves(coeffs: &[BigInt], s: i64, t: &Real, work: Precision) -> Result<(Real, Real)> {
    let a = &pi(work).mul_pow2(1) / &Real::from_i64(LEVEL, work).sqrt();
    let sr = Real::from_i64(s, work);
    let dr = Real::from_i64(WEIGHT - s, work);
    let tinv = t.recip();
    let mut first = Real::zero(work);
    let mut second = Real::zero(work);
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let an = a.mul_i64(i as i64 + 1);
        let cr = Real::from_bigint(c, work);
        let g1 = incomplete_gamma_upper(&sr, &(&an * t), work)?;
        let g2 = incomplete_gamma_upper(&dr, &(&an * &tinv), work)?;
        first = &first + &(&(&cr * &g1) * &an.powi(-s));
        second = &second + &(&(&cr * &g2) * &an.powi(-(WEIGHT - s)));
    }
    Ok((first, second))
}

/// L(f, s) for s in {2, 3} with the default coefficient budget.
pub fn lvalue_eta8(s: i64, prec: Precision) -> Result<LValue> {
    lvalue_eta8_with_budget(s, prec, DEFAULT_COEFF_BUDGET)
}

pub fn lvalue_eta8_with_budget(s: i64, prec: Precision, budget: usize) -> Result<LValue> {
    if !(s == 2 || s == 3) {
        return Err(Error::Domain(format!("lvalue_eta8 supports s in {{2, 3}}, got {s}")));
    }
    let work = prec.guarded();
    let t_check = Real::ratio(6, 5, work);
    // The check parameter uses A n / t with t = 6/5, which decays more slowly.
    let need = coefficient_count(work.digits(), 1.0 / 1.2);
    if need > budget {
        return Err(Error::Budget {
            budget,
            digits: prec.digits(),
        });
    }
    let coeffs = eta_product_coefficients(need);
    let one = Real::one(work);
    let (f1, s1) = lambda_halves(&coeffs, s, &one, work)?;
    let (f2, s2) = lambda_halves(&coeffs, s, &t_check, work)?;
    let rel = |x: Real, y: Real| -> f64 {
        let d = (&x - &y).abs();
        if d.is_zero() {
            -(work.digits() as f64)
        } else {
            d.log10_abs() - x.abs().max(&y.abs()).log10_abs()
        }
    };
    let plus = rel(&f1 + &s1, &f2 + &s2);
    let minus = rel(&f1 - &s1, &f2 - &s2);
    let (epsilon, lam) = if plus <= minus { (1, &f1 + &s1) } else { (-1, &f1 - &s1) };
    let a = &pi(work).mul_pow2(1) / &Real::from_i64(LEVEL, work).sqrt();
    let g = gamma(&Real::from_i64(s, work), work)?;
    let value = (&(&lam * &a.powi(s)) / &g).round_to(prec);
    Ok(LValue {
        value,
        epsilon,
        discrepancy_plus: plus,
        discrepancy_minus: minus,
        coefficients: need,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficients() {
        let a = eta_product_coefficients(15);
        let expect = [1, 0, -4, 0, -2, 0, 24, 0, -11, 0, -44, 0, 22, 0, 8];
        let got: Vec<i64> = a.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect();
        assert_eq!(got, expect);
        assert!(eta_product_coefficients(0).is_empty());
    }

    #[test]
    fn hecke_relations() {
        let a = eta_product_coefficients(200);
        let at = |n: usize| a[n - 1].clone();
        assert_eq!(at(3) * at(5), at(15));
        // weight 4: a_{p^2} = a_p^2 - p^3
        assert_eq!(at(9), &at(3) * &at(3) - BigInt::from(27) * at(1));
        assert_eq!(at(25), &at(5) * &at(5) - BigInt::from(125) * at(1));
        assert_eq!(at(7) * at(11), at(77));
    }

    #[test]
    fn l3_matches_period_digits() {
        let p = Precision::new(30).unwrap();
        let l = lvalue_eta8(3, p).unwrap();
        assert_eq!(l.epsilon, 1);
        let omega = Real::parse("6.9975630166806323595567578268530960", Precision::new(35).unwrap()).unwrap();
        let expect = omega.mul_pow2(-3);
        assert!(l.value.agreement_digits(&expect) > 29.0);
        assert!(l.discrepancy_minus > -5.0);
    }

    #[test]
    fn budget_is_enforced() {
        let p = Precision::new(60).unwrap();
        assert!(matches!(lvalue_eta8_with_budget(3, p, 10), Err(Error::Budget { .. })));
        assert!(lvalue_eta8(4, p).is_err());
    }
}
