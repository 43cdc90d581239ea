//! AGM-based evaluation of pi and the complete elliptic integrals.

use std::sync::{Mutex, OnceLock};

use super::real::{Precision, Real};
use crate::error::{Error, Result};

fn converged(a: &Real, b: &Real, work: Precision) -> bool {
    let d = (a - b).abs();
    d.is_zero() || d.log10_abs() < a.log10_abs() - work.digits() as f64
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &Real, b: &Real, prec: Precision) -> Result<Real> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain("agm requires positive arguments".into()));
    }
    let work = prec.guarded();
    let mut x = a.widen(work).round_to(work);
    let mut y = b.widen(work).round_to(work);
    for _ in 0..200 {
        if converged(&x, &y, work) {
            break;
        }
        let nx = (&x + &y).mul_pow2(-1);
        let ny = (&x * &y).sqrt();
        x = nx;
        y = ny;
    }
    Ok(x.round_to(prec))
}

static PI_CACHE: OnceLock<Mutex<Option<Real>>> = OnceLock::new();

/// pi by the Brent-Salamin iteration, cached at the highest precision computed so far.
pub fn pi(prec: Precision) -> Real {
    let cache = PI_CACHE.get_or_init(|| Mutex::new(None));
    if let Some(v) = cache.lock().unwrap().as_ref() {
        if v.precision_digits() >= prec.guarded().digits() {
            return v.round_to(prec);
        }
    }
    let work = prec.guarded();
    let one = Real::one(work);
    let mut a = one.clone();
    let mut b = Real::ratio(1, 2, work).sqrt();
    let mut t = Real::ratio(1, 4, work);
    let mut k: i64 = 0;
    while !converged(&a, &b, work) {
        let an = (&a + &b).mul_pow2(-1);
        let bn = (&a * &b).sqrt();
        let d = &a - &an;
        t = &t - &(&d * &d).mul_pow2(k);
        a = an;
        b = bn;
        k += 1;
    }
    let s = &a + &b;
    let v = &(&s * &s) / &t.mul_pow2(2);
    *cache.lock().unwrap() = Some(v.clone());
    v.round_to(prec)
}

fn check_z(z: &Real) -> Result<()> {
    if z >= &Real::one(Precision::new(10).unwrap()) {
        return Err(Error::Domain("elliptic integral requires z < 1".into()));
    }
    Ok(())
}

/// K(z) = (pi/2) 2F1(1/2,1/2;1;z), parameter convention z = k^2.
pub fn elliptic_k(z: &Real, prec: Precision) -> Result<Real> {
    check_z(z)?;
    let work = prec.guarded();
    let one = Real::one(work);
    let b = (&one - &z.widen(work)).sqrt();
    let m = agm(&one, &b, work)?;
    Ok((&pi(work) / &m.mul_pow2(1)).round_to(prec))
}

/// E(z) through the AGM auxiliary sum E = K (1 - sum 2^(n-1) c_n^2), c_0^2 = z.
pub fn elliptic_e(z: &Real, prec: Precision) -> Result<Real> {
    check_z(z)?;
    let work = prec.guarded();
    let one = Real::one(work);
    let z = z.widen(work);
    let mut a = one.clone();
    let mut b = (&one - &z).sqrt();
    let mut sum = z.mul_pow2(-1);
    let mut k: i64 = 0;
    while !converged(&a, &b, work) {
        let c = (&a - &b).mul_pow2(-1);
        let an = (&a + &b).mul_pow2(-1);
        let bn = (&a * &b).sqrt();
        sum = &sum + &(&c * &c).mul_pow2(k);
        a = an;
        b = bn;
        k += 1;
    }
    let kk = &pi(work) / &a.mul_pow2(1);
    Ok((&kk * &(&one - &sum)).round_to(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    const PI_60: &str = "3.14159265358979323846264338327950288419716939937510582097494";

    #[test]
    fn pi_digits() {
        let v = pi(p(55));
        let r = Real::parse(PI_60, p(60)).unwrap();
        assert!((&v - &r).abs().log10_abs() < -54.0);
    }

    #[test]
    fn agm_fixed_point_and_symmetry() {
        let one = Real::one(p(30));
        assert_eq!(agm(&one, &one, p(30)).unwrap().to_decimal_string(20), "1.0000000000000000000");
        let half = Real::ratio(1, 2, p(40));
        let a = agm(&one, &half, p(40)).unwrap();
        let b = agm(&half, &one, p(40)).unwrap();
        assert!((&a - &b).abs().log10_abs() < -39.0);
        assert!(agm(&Real::zero(p(20)), &one, p(20)).is_err());
    }

    #[test]
    fn k_and_e_at_zero() {
        let z = Real::zero(p(30));
        let half_pi = pi(p(30)).mul_pow2(-1);
        assert!((&elliptic_k(&z, p(30)).unwrap() - &half_pi).abs().log10_abs() < -29.0);
        assert!((&elliptic_e(&z, p(30)).unwrap() - &half_pi).abs().log10_abs() < -29.0);
        assert!(elliptic_k(&Real::one(p(20)), p(20)).is_err());
    }

    #[test]
    fn k_half_matches_series() {
        // (pi/2) sum ((1/2)_n / n!)^2 (1/2)^n by direct f64 summation.
        let mut term = 1.0f64;
        let mut s = 0.0;
        for n in 0..200 {
            s += term;
            let nf = n as f64;
            term *= ((nf + 0.5) / (nf + 1.0)).powi(2) * 0.5;
        }
        let k = elliptic_k(&Real::ratio(1, 2, p(20)), p(20)).unwrap().to_f64();
        assert!((k - std::f64::consts::FRAC_PI_2 * s).abs() < 1e-14);
    }
}
