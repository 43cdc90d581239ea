//! Generalized hypergeometric series with a tail bound.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::real::{Precision, Real};
use crate::error::{Error, Result};

/// Largest number of terms summed before giving up.
pub const MAX_TERMS: usize = 2_000_000;

fn is_nonpositive_integer(q: &BigRational) -> bool {
    q.is_integer() && !q.is_positive()
}

/// pFq(upper; lower; x).
///
/// Accepts |x| < 1 when p = q + 1, any x when p <= q, and |x| = 1 when the
/// terms decay at least like n^-2.
pub fn hypergeometric_pfq(
    upper: &[BigRational],
    lower: &[BigRational],
    x: &Real,
    prec: Precision,
) -> Result<Real> {
    if let Some(b) = lower.iter().find(|b| is_nonpositive_integer(b)) {
        return Err(Error::Domain(format!("lower parameter {b} is a non-positive integer")));
    }
    let work = prec.guarded();
    if x.is_zero() {
        return Ok(Real::one(prec));
    }
    let terminating = upper.iter().any(is_nonpositive_integer);
    let p = upper.len();
    let q = lower.len();
    let ax = x.abs().to_f64();
    // Decay exponent of |t_n| on the unit circle is sum(a) - sum(b) - 1.
    let sigma: f64 = (lower.iter().cloned().sum::<BigRational>() - upper.iter().cloned().sum::<BigRational>())
        .to_f64()
        .unwrap_or(0.0);
    let mode = if terminating || p <= q {
        Mode::Entire
    } else if p == q + 1 {
        if ax < 1.0 - 1e-12 {
            Mode::Geometric
        } else if (ax - 1.0).abs() <= 1e-12 {
            if sigma < 1.0 {
                return Err(Error::Divergent(format!(
                    "unit-argument series with decay exponent {:.3} > -2",
                    -1.0 - sigma
                )));
            }
            Mode::Unit
        } else {
            return Err(Error::Divergent("|x| > 1".into()));
        }
    } else {
        return Err(Error::Divergent(format!("p = {p} > q + 1 = {}", q + 1)));
    };

    let ups: Vec<Real> = upper.iter().map(|a| Real::from_ratio(a, work)).collect();
    let lows: Vec<Real> = lower.iter().map(|b| Real::from_ratio(b, work)).collect();
    let x = x.widen(work);
    let eps = -(prec.digits() as f64) - 1.0;
    let mut term = Real::one(work);
    let mut sum = Real::one(work);
    for n in 0..MAX_TERMS {
        let nr = Real::from_i64(n as i64, work);
        let mut num = x.clone();
        for a in &ups {
            num = &num * &(a + &nr);
        }
        let mut den = Real::from_i64(n as i64 + 1, work);
        for b in &lows {
            den = &den * &(b + &nr);
        }
        let ratio = &num / &den;
        term = &term * &ratio;
        if term.is_zero() {
            return Ok(sum.round_to(prec));
        }
        sum = &sum + &term;
        let lt = term.log10_abs();
        let tail_lg = match mode {
            Mode::Entire => {
                let r = ratio.abs().to_f64();
                if r < 0.5 {
                    lt + (r / (1.0 - r)).log10()
                } else {
                    f64::INFINITY
                }
            }
            Mode::Geometric => {
                let r = ratio.abs().to_f64().max(ax);
                if r < 1.0 {
                    lt + (r / (1.0 - r)).log10()
                } else {
                    f64::INFINITY
                }
            }
            Mode::Unit => {
                let nn = (n + 1) as f64;
                if nn > 4.0 * (1.0 + sigma) {
                    lt + (nn / sigma).log10()
                } else {
                    f64::INFINITY
                }
            }
        };
        if tail_lg < eps + sum.log10_abs().min(0.0) {
            return Ok(sum.round_to(prec));
        }
    }
    Err(Error::Budget {
        budget: MAX_TERMS,
        digits: prec.digits(),
    })
}

enum Mode {
    Entire,
    Geometric,
    Unit,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::agm::agm;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    #[test]
    fn zero_argument() {
        let v = hypergeometric_pfq(&[q(3, 2)], &[q(5, 7)], &Real::zero(p(20)), p(20)).unwrap();
        assert_eq!(v, Real::one(p(20)));
    }

    #[test]
    fn gauss_k_agm() {
        let pr = p(30);
        let v = hypergeometric_pfq(&[q(1, 2), q(1, 2)], &[q(1, 1)], &Real::ratio(1, 2, pr), pr).unwrap();
        let m = agm(&Real::one(pr), &Real::ratio(1, 2, pr).sqrt(), pr).unwrap();
        assert!((&v - &m.recip()).abs().log10_abs() < -29.0);
    }

    #[test]
    fn exponential_series() {
        let pr = p(25);
        let v = hypergeometric_pfq(&[], &[], &Real::from_i64(3, pr), pr).unwrap();
        assert!((&v - &Real::from_i64(3, pr).exp()).abs().log10_abs() < -23.0);
    }

    #[test]
    fn rejections() {
        let one = Real::one(p(15));
        // 2F1(1,1;2;1) is the harmonic series.
        assert!(matches!(
            hypergeometric_pfq(&[q(1, 1), q(1, 1)], &[q(2, 1)], &one, p(15)),
            Err(Error::Divergent(_))
        ));
        assert!(hypergeometric_pfq(&[q(1, 1)], &[q(-2, 1)], &Real::ratio(1, 2, p(15)), p(15)).is_err());
        assert!(hypergeometric_pfq(&[q(1, 1), q(1, 1)], &[q(1, 1)], &Real::from_i64(2, p(15)), p(15)).is_err());
    }

    #[test]
    fn unit_argument_balanced() {
        // 2F1(1,1;6;1) = Gamma(6)Gamma(4)/(Gamma(5)Gamma(5)) = 5/4
        let pr = p(12);
        let v = hypergeometric_pfq(&[q(1, 1), q(1, 1)], &[q(6, 1)], &Real::one(pr), pr).unwrap();
        assert!((v.to_f64() - 1.25).abs() < 1e-11);
    }
}
