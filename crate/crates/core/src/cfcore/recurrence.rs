//! Three-term recurrences R+(n) y(n+1) = R0(n) y(n) + R-(n) y(n-1) and their CF counterparts.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cf::CFSpec;
use super::poly::{qi, Poly2, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::Real;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermRecurrence {
    pub r_plus: Poly2,
    pub r_zero: Poly2,
    pub r_minus: Poly2,
}

impl ThreeTermRecurrence {
    pub fn new(r_plus: Poly2, r_zero: Poly2, r_minus: Poly2) -> Result<Self> {
        if r_plus.is_zero() {
            return Err(Error::ZeroLeadingCoefficient("R+ is identically zero".into()));
        }
        Ok(ThreeTermRecurrence {
            r_plus,
            r_zero,
            r_minus,
        })
    }

    pub fn parse(r_plus: &str, r_zero: &str, r_minus: &str) -> Result<Self> {
        Self::new(Poly2::parse(r_plus)?, Poly2::parse(r_zero)?, Poly2::parse(r_minus)?)
    }

    pub fn bind_z(&self, z: &ZArg) -> Result<Self> {
        Self::new(self.r_plus.bind_z(z)?, self.r_zero.bind_z(z)?, self.r_minus.bind_z(z)?)
    }

    fn coeffs_at(&self, n: i64, z: Option<&ZArg>) -> Result<(Q, Q, Q)> {
        Ok((
            self.r_plus.eval_i(n, z)?,
            self.r_zero.eval_i(n, z)?,
            self.r_minus.eval_i(n, z)?,
        ))
    }

    /// y(0..=n_max) from y(0), y(1), stepping with R+(n) for n >= 1.
    pub fn propagate(&self, y0: &Q, y1: &Q, n_max: usize, z: Option<&ZArg>) -> Result<Vec<Q>> {
        let mut y = vec![y0.clone(), y1.clone()];
        for n in 1..n_max {
            let (rp, r0, rm) = self.coeffs_at(n as i64, z)?;
            if rp.is_zero() {
                return Err(Error::ZeroLeadingCoefficient(format!("R+({n}) = 0")));
            }
            let next = (&r0 * &y[n] + &rm * &y[n - 1]) / rp;
            y.push(next);
        }
        y.truncate(n_max + 1);
        Ok(y)
    }
}

impl fmt::Display for ThreeTermRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) y(n+1) = ({}) y(n) + ({}) y(n-1)",
            self.r_plus, self.r_zero, self.r_minus
        )
    }
}

impl fmt::Debug for ThreeTermRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThreeTermRecurrence({self})")
    }
}

/// Reduced denominators of y(0..=n_max).
pub fn denominator_profile(rec: &ThreeTermRecurrence, init: (&Q, &Q), n_max: usize) -> Result<Vec<BigInt>> {
    Ok(rec
        .propagate(init.0, init.1, n_max, None)?
        .into_iter()
        .map(|v| v.denom().clone())
        .collect())
}

/// lcm(1, 3, 5, ..., 2n-1); 1 for n = 0.
pub fn odd_lcm(n: usize) -> BigInt {
    use num_integer::Integer;
    (1..=n).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(2 * j - 1)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    /// (center index n, residual); relative to the largest summand for real data.
    pub residuals: Vec<(usize, f64)>,
    pub max_residual: f64,
    pub failures: Vec<usize>,
    pub passed: bool,
}

impl RecurrenceReport {
    fn from_residuals(residuals: Vec<(usize, f64)>, failures: Vec<usize>) -> Self {
        let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
        RecurrenceReport {
            passed: failures.is_empty(),
            residuals,
            max_residual,
            failures,
        }
    }
}

/// Exact residuals R+y(n+1) - R0 y(n) - R- y(n-1) for values[i] = y(start + i).
pub fn check_recurrence_exact(
    rec: &ThreeTermRecurrence,
    start: usize,
    values: &[Q],
    z: Option<&ZArg>,
) -> Result<RecurrenceReport> {
    let mut residuals = Vec::new();
    let mut failures = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let n = start + i;
        let (rp, r0, rm) = rec.coeffs_at(n as i64, z)?;
        let r = rp * &values[i + 1] - r0 * &values[i] - rm * &values[i - 1];
        if !r.is_zero() {
            failures.push(n);
        }
        residuals.push((n, r.abs().to_f64().unwrap_or(f64::INFINITY)));
    }
    Ok(RecurrenceReport::from_residuals(residuals, failures))
}

/// Residuals for floating values, relative to the largest of the three summands.
pub fn check_recurrence_real(
    rec: &ThreeTermRecurrence,
    start: usize,
    values: &[Real],
    tol: f64,
    z: Option<&ZArg>,
) -> Result<RecurrenceReport> {
    let mut residuals = Vec::new();
    let mut failures = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let n = start + i;
        let (rp, r0, rm) = rec.coeffs_at(n as i64, z)?;
        let prec = values[i].precision();
        let t1 = &Real::from_ratio(&rp, prec) * &values[i + 1];
        let t0 = &Real::from_ratio(&r0, prec) * &values[i];
        let tm = &Real::from_ratio(&rm, prec) * &values[i - 1];
        let r = &(&t1 - &t0) - &tm;
        let scale = t1.abs().max(&t0.abs()).max(&tm.abs());
        let rel = if scale.is_zero() { 0.0 } else { (&r / &scale).abs().to_f64() };
        if !(rel <= tol) {
            failures.push(n);
        }
        residuals.push((n, rel));
    }
    Ok(RecurrenceReport::from_residuals(residuals, failures))
}

/// CF tail attached to a recurrence together with its normalization.
#[derive(Clone, Debug)]
pub struct RecurrenceCf {
    pub cf: CFSpec,
    /// s(n) = R+(0) R+(1) ... R+(n-1).
    pub normalizer: Poly2,
    /// CF numerators w_m correspond to s(m + offset) y(m + offset).
    pub offset: usize,
}

impl RecurrenceCf {
    pub fn scale(&self, n: usize) -> Q {
        (0..n).fold(Q::one(), |acc, j| acc * self.normalizer.eval_i(j as i64, None).expect("z-free"))
    }
}

/// Turn a z-free recurrence into a CF with b_m = R0(m), a_m = R-(m) R+(m-1).
///
/// With u(n) = s(n) y(n) the recurrence becomes u(n+1) = R0(n) u(n) + R-(n) R+(n-1) u(n-1),
/// so u(m+1) follows the Wallis recursion of the CF. This needs R+(j) != 0 for all j >= 0.
pub fn recurrence_to_cf(rec: &ThreeTermRecurrence) -> Result<RecurrenceCf> {
    if !(rec.r_plus.is_z_free() && rec.r_zero.is_z_free() && rec.r_minus.is_z_free()) {
        return Err(Error::Unsupported("bind z before converting a recurrence".into()));
    }
    if let Some(j) = nonnegative_integer_root(&rec.r_plus) {
        return Err(Error::Unsupported(format!(
            "R+ vanishes at n = {j}; no product normalization exists"
        )));
    }
    let a_poly = &rec.r_minus.shift_n(&qi(1)) * &rec.r_plus;
    if a_poly.is_zero() {
        return Err(Error::Unsupported("R- is identically zero".into()));
    }
    Ok(RecurrenceCf {
        cf: CFSpec::new(vec![], rec.r_zero.clone(), vec![], a_poly)?,
        normalizer: rec.r_plus.clone(),
        offset: 1,
    })
}

/// Smallest integer j >= 0 with p(j) = 0, searched up to the Cauchy root bound.
fn nonnegative_integer_root(p: &Poly2) -> Option<usize> {
    let deg = p.n_degree()?;
    if deg == 0 {
        return None;
    }
    let lead = p.coeff(deg, 0).abs();
    let bound = (0..deg)
        .map(|i| p.coeff(i, 0).abs() / &lead)
        .fold(Q::zero(), |m, x| if x > m { x } else { m });
    let bound = (bound + Q::one()).ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    (0..=bound.min(1_000_000)).find(|&j| p.eval_i(j as i64, None).map(|v| v.is_zero()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfcore::poly::q;

    fn eq1() -> ThreeTermRecurrence {
        ThreeTermRecurrence::parse("(2n+1)^2", "44n^2+1", "(2n-1)^2").unwrap()
    }

    #[test]
    fn eq1_denominators() {
        let d = denominator_profile(&eq1(), (&qi(0), &qi(1)), 3).unwrap();
        assert_eq!(d[3], BigInt::from(25));
        assert_eq!(BigInt::from(225) % &d[3], BigInt::zero());
        let d = denominator_profile(&eq1(), (&qi(1), &qi(0)), 3).unwrap();
        assert_eq!(BigInt::from(225) % &d[3], BigInt::zero());
        let fib = ThreeTermRecurrence::parse("1", "1", "1").unwrap();
        assert!(denominator_profile(&fib, (&qi(2), &qi(-7)), 20).unwrap().iter().all(|d| d.is_one()));
        assert_eq!(odd_lcm(3), BigInt::from(15));
    }

    #[test]
    fn eq1_to_cf() {
        let r = recurrence_to_cf(&eq1()).unwrap();
        assert_eq!(r.cf.b_poly, Poly2::parse("44n^2+1").unwrap());
        assert_eq!(r.cf.a_poly, Poly2::parse("(2n+1)^4").unwrap());
        assert_eq!(r.offset, 1);
        // w_m = s(m+1) y(m+1) satisfies the CF recursion for any solution y
        let y = eq1().propagate(&q(3, 2), &q(-1, 5), 22, None).unwrap();
        let w: Vec<Q> = (0..=21).map(|m| r.scale(m) * &y[m]).collect();
        for m in 1..=20 {
            let b = r.cf.b(m, None).unwrap();
            let a = r.cf.a(m, None).unwrap();
            assert_eq!(w[m + 1], &b * &w[m] + &a * &w[m - 1], "m = {m}");
        }
    }

    #[test]
    fn eq2_and_fibonacci() {
        let eq2 = ThreeTermRecurrence::parse("(2n+1)^3", "4n(68n^2+3)", "-(2n-1)^3").unwrap();
        let r = recurrence_to_cf(&eq2).unwrap();
        assert_eq!(r.cf.a_poly, Poly2::parse("-(2n+1)^6").unwrap());
        let fib = ThreeTermRecurrence::parse("1", "1", "1").unwrap();
        let r = recurrence_to_cf(&fib).unwrap();
        assert_eq!(r.cf.to_string(), "[[1],[1]]");
        let bad = ThreeTermRecurrence::parse("n-3", "1", "1").unwrap();
        assert!(matches!(recurrence_to_cf(&bad), Err(Error::Unsupported(_))));
    }

    #[test]
    fn big_apery_numbers_satisfy_eq2a() {
        let rec = ThreeTermRecurrence::parse("(n+1)^3", "(2n+1)(17n^2+17n+5)", "-n^3").unwrap();
        let a: Vec<Q> = [1i64, 5, 73, 1445, 33001, 819005].iter().map(|&v| qi(v)).collect();
        let rep = check_recurrence_exact(&rec, 0, &a, None).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.residuals.len(), 4);
        let mut wrong = a.clone();
        wrong[3] = qi(1446);
        assert!(!check_recurrence_exact(&rec, 0, &wrong, None).unwrap().passed);
    }

    #[test]
    fn zero_leading_coefficient() {
        let rec = ThreeTermRecurrence::parse("n-2", "1", "1").unwrap();
        assert!(matches!(
            rec.propagate(&qi(1), &qi(1), 5, None),
            Err(Error::ZeroLeadingCoefficient(_))
        ));
    }
}
