//! Bernoulli numbers, Euler-Maclaurin summation, log-gamma, trigamma and the
//! upper incomplete gamma function.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::agm::pi;
use super::real::{Precision, Real};
use crate::error::{Error, Result};

static BERNOULLI: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

/// B_{2k} for k = 0..=k_max (B_0 = 1, B_2 = 1/6, ...).
pub fn bernoulli_even(k_max: usize) -> Vec<BigRational> {
    with_bernoulli(k_max, |b| b[..=k_max].to_vec())
}

fn with_bernoulli<T>(k_max: usize, f: impl FnOnce(&[BigRational]) -> T) -> T {
    let cache = BERNOULLI.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= k_max {
        let m = 2 * b.len();
        // (m+1) B_m = -sum_{k<m} C(m+1,k) B_k, only B_0, B_1 and even k contribute.
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for k in 0..m {
            if k == 1 {
                let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
                acc += half * BigRational::from_integer(binom.clone());
            } else if k % 2 == 0 {
                acc += &b[k / 2] * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let v = -acc / BigRational::from_integer(BigInt::from(m + 1));
        b.push(v);
    }
    f(&b)
}

fn bern_real(k: usize, prec: Precision) -> Real {
    let b = with_bernoulli(k, |b| b[k].clone());
    Real::from_ratio(&b, prec)
}

/// Working count of directly summed terms for Euler-Maclaurin tails at `digits`.
fn em_cutoff(digits: u32) -> i64 {
    (digits as i64 / 2 + 12).max(20)
}

/// zeta(s) for integer s >= 2 by Euler-Maclaurin summation.
pub fn zeta_int(s: u32, prec: Precision) -> Result<Real> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) diverges")));
    }
    let work = prec.guarded();
    let n = em_cutoff(work.digits());
    let mut sum = Real::zero(work);
    for k in 1..n {
        sum = &sum + &Real::from_i64(k, work).powi(-(s as i64));
    }
    let nr = Real::from_i64(n, work);
    let s_i = s as i64;
    // integral tail and half end term
    sum = &sum + &nr.powi(1 - s_i).div_i64(s_i - 1);
    sum = &sum + &nr.powi(-s_i).mul_pow2(-1);
    // sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1)
    let eps = -(work.digits() as f64) - 2.0;
    let mut rising = Real::from_i64(s_i, work); // s (s+1) ... (s+2j-2)
    let mut fact = Real::from_i64(2, work); // (2j)!
    let mut npow = nr.powi(-s_i - 1);
    let n2 = (&nr * &nr).recip();
    for j in 1..2000usize {
        let t = &(&bern_real(j, work) * &rising) / &fact * &npow;
        sum = &sum + &t;
        if t.log10_abs() < eps + sum.log10_abs() {
            return Ok(sum.round_to(prec));
        }
        let jj = j as i64;
        rising = &rising * &Real::from_i64((s_i + 2 * jj - 1) * (s_i + 2 * jj), work);
        fact = &fact * &Real::from_i64((2 * jj + 1) * (2 * jj + 2), work);
        npow = &npow * &n2;
    }
    Err(Error::NoConvergence {
        terms: 2000,
        estimate: f64::NAN,
    })
}

/// log 2 = sum 1/(k 2^k).
pub fn log2(prec: Precision) -> Real {
    let work = prec.guarded();
    let mut sum = Real::zero(work);
    let bits = work.bits() as i64 + 8;
    for k in 1..=bits {
        sum = &sum + &Real::from_i64(1, work).div_i64(k).mul_pow2(-k);
    }
    sum.round_to(prec)
}

static EULER_GAMMA: OnceLock<Mutex<Option<Real>>> = OnceLock::new();

/// Euler's constant by Euler-Maclaurin on the harmonic sum.
pub fn euler_gamma(prec: Precision) -> Real {
    let cache = EULER_GAMMA.get_or_init(|| Mutex::new(None));
    if let Some(v) = cache.lock().unwrap().as_ref() {
        if v.precision_digits() >= prec.guarded().digits() {
            return v.round_to(prec);
        }
    }
    let work = prec.guarded().plus(10);
    let n = em_cutoff(work.digits());
    let nr = Real::from_i64(n, work);
    let mut h = Real::zero(work);
    for k in 1..n {
        h = &h + &Real::one(work).div_i64(k);
    }
    let mut g = &(&h - &nr.ln()) + &nr.recip().mul_pow2(-1);
    let n2 = (&nr * &nr).recip();
    let mut npow = n2.clone();
    let eps = -(work.digits() as f64) - 2.0;
    for j in 1..2000usize {
        let t = &bern_real(j, work) * &npow / Real::from_i64(2 * j as i64, work);
        g = &g + &t;
        if t.log10_abs() < eps {
            break;
        }
        npow = &npow * &n2;
    }
    *cache.lock().unwrap() = Some(g.clone());
    g.round_to(prec)
}

fn shift_target(work: Precision) -> f64 {
    0.7 * work.digits() as f64 + 12.0
}

/// log Gamma(x) for x > 0: shift to a large argument, then Stirling.
pub fn ln_gamma(x: &Real, prec: Precision) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::Domain("ln_gamma requires x > 0".into()));
    }
    let work = prec.guarded().plus(5);
    let x = x.widen(work);
    let xf = x.to_f64();
    let target = shift_target(work);
    let m = if xf < target { (target - xf).ceil() as i64 } else { 0 };
    let mut prod = Real::one(work);
    for j in 0..m {
        prod = &prod * &(&x + &Real::from_i64(j, work));
    }
    let y = &x + &Real::from_i64(m, work);
    let half = Real::ratio(1, 2, work);
    let two_pi = pi(work).mul_pow2(1);
    let mut s = &(&(&y - &half) * &y.ln()) - &y;
    s = &s + &two_pi.ln().mul_pow2(-1);
    let y2 = (&y * &y).recip();
    let mut ypow = y.recip();
    let eps = -(work.digits() as f64) - 2.0;
    let mut done = false;
    for k in 1..4000usize {
        let kk = k as i64;
        let t = &bern_real(k, work) * &ypow / Real::from_i64(2 * kk * (2 * kk - 1), work);
        s = &s + &t;
        if t.log10_abs() < eps {
            done = true;
            break;
        }
        ypow = &ypow * &y2;
    }
    if !done {
        return Err(Error::NoConvergence {
            terms: 4000,
            estimate: f64::NAN,
        });
    }
    if m > 0 {
        s = &s - &prod.ln();
    }
    Ok(s.round_to(prec))
}

/// Gamma(x) for x > 0.
pub fn gamma(x: &Real, prec: Precision) -> Result<Real> {
    Ok(ln_gamma(x, prec.plus(3))?.exp().round_to(prec))
}

/// Trigamma psi_1(x) for x > 0.
pub fn trigamma(x: &Real, prec: Precision) -> Result<Real> {
    if !x.is_positive() {
        return Err(Error::Domain("trigamma requires x > 0".into()));
    }
    let work = prec.guarded();
    let x = x.widen(work);
    let xf = x.to_f64();
    let target = shift_target(work);
    let m = if xf < target { (target - xf).ceil() as i64 } else { 0 };
    let mut s = Real::zero(work);
    for j in 0..m {
        let t = &x + &Real::from_i64(j, work);
        s = &s + &(&t * &t).recip();
    }
    let y = &x + &Real::from_i64(m, work);
    let yinv = y.recip();
    let y2 = &yinv * &yinv;
    let mut tail = &yinv + &y2.mul_pow2(-1);
    let mut ypow = &y2 * &yinv;
    let eps = -(work.digits() as f64) - 2.0;
    for k in 1..4000usize {
        let t = &bern_real(k, work) * &ypow;
        tail = &tail + &t;
        if t.log10_abs() < eps {
            break;
        }
        ypow = &ypow * &y2;
    }
    Ok((&s + &tail).round_to(prec))
}

/// Upper incomplete gamma Gamma(s, x), x >= 0.
pub fn incomplete_gamma_upper(s: &Real, x: &Real, prec: Precision) -> Result<Real> {
    if x.is_negative() {
        return Err(Error::Domain("incomplete gamma requires x >= 0".into()));
    }
    let work = prec.guarded();
    let s = s.widen(work);
    let x = x.widen(work);
    if x.is_zero() {
        if !s.is_positive() {
            return Err(Error::Domain("Gamma(s, 0) diverges for s <= 0".into()));
        }
        return gamma(&s, prec);
    }
    let sf = s.to_f64();
    let xf = x.to_f64();
    // Positive integer s: (s-1)! e^{-x} sum_{k<s} x^k/k!.
    if let Some(n) = integer_value(&s) {
        if (1..=200).contains(&n) {
            let mut term = Real::one(work);
            let mut sum = Real::one(work);
            for k in 1..n {
                term = &term * &x / Real::from_i64(k, work);
                sum = &sum + &term;
            }
            let mut fact = Real::one(work);
            for k in 2..n {
                fact = fact.mul_i64(k);
            }
            return Ok((&(&fact * &sum) * &(-&x).exp()).round_to(prec));
        }
    }
    if sf > 0.0 && xf < sf + 1.0 {
        // Gamma(s) - gamma(s,x); extra digits cover the cancellation.
        let extra = ((xf.max(1e-300)).log10().abs() + xf / std::f64::consts::LN_10 + 5.0) as u32;
        let w2 = work.plus(extra);
        let s2 = s.widen(w2);
        let x2 = x.widen(w2);
        let mut term = s2.recip();
        let mut sum = term.clone();
        let eps = -(w2.digits() as f64) - 2.0;
        for n in 1..100_000i64 {
            term = &term * &x2 / (&s2 + &Real::from_i64(n, w2));
            sum = &sum + &term;
            if term.log10_abs() < eps + sum.log10_abs() {
                let lower = &(&sum * &x2.pow(&s2)) * &(-&x2).exp();
                let g = gamma(&s2, w2)?;
                return Ok((&g - &lower).round_to(prec));
            }
        }
        return Err(Error::NoConvergence {
            terms: 100_000,
            estimate: f64::NAN,
        });
    }
    // Modified Lentz for the continued fraction.
    let tiny = Real::from_i64(1, work).mul_pow2(-(work.bits() as i64) * 4);
    let one = Real::one(work);
    let mut b = &(&x + &one) - &s;
    let mut c = tiny.recip();
    let mut d = if b.is_zero() { tiny.recip() } else { b.recip() };
    let mut h = d.clone();
    let eps = -(work.digits() as f64) - 1.0;
    let max_iter = 200_000i64;
    for i in 1..max_iter {
        let an = -(&Real::from_i64(i, work) * &(&Real::from_i64(i, work) - &s));
        b = &b + &Real::from_i64(2, work);
        d = &(&an * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        c = &b + &(&an / &c);
        if c.is_zero() {
            c = tiny.clone();
        }
        d = d.recip();
        let del = &d * &c;
        h = &h * &del;
        if (&del - &one).abs().log10_abs() < eps {
            let pre = &(-&x).exp() * &x.pow(&s);
            return Ok((&pre * &h).round_to(prec));
        }
    }
    Err(Error::NoConvergence {
        terms: max_iter as usize,
        estimate: f64::NAN,
    })
}

fn integer_value(s: &Real) -> Option<i64> {
    let r = s.to_ratio();
    if r.is_integer() {
        use num_traits::ToPrimitive;
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    fn close(a: &Real, b: &Real, lg: f64) -> bool {
        (a - b).abs().log10_abs() < lg
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_even(5);
        let expect = [(1, 1), (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66)];
        for (k, (n, d)) in expect.iter().enumerate() {
            assert_eq!(b[k], BigRational::new(BigInt::from(*n), BigInt::from(*d)));
        }
    }

    #[test]
    fn zeta2_is_pi_squared_over_6() {
        let z = zeta_int(2, p(50)).unwrap();
        let pi = pi(p(50));
        assert!(close(&z, &(&pi * &pi).div_i64(6), -49.0));
    }

    #[test]
    fn zeta3_known_digits() {
        let z = zeta_int(3, p(40)).unwrap();
        let r = Real::parse("1.2020569031595942853997381615114499907649862923405", p(50)).unwrap();
        assert!(close(&z, &r, -39.0));
    }

    #[test]
    fn log2_matches_ln() {
        let l = log2(p(60));
        assert!(close(&l, &Real::from_i64(2, p(60)).ln(), -59.0));
    }

    #[test]
    fn euler_gamma_digits() {
        let g = euler_gamma(p(40));
        let r = Real::parse("0.57721566490153286060651209008240243104215933593992", p(50)).unwrap();
        assert!(close(&g, &r, -39.0));
    }

    #[test]
    fn ln_gamma_special_values() {
        let one = Real::one(p(40));
        assert!(ln_gamma(&one, p(40)).unwrap().log10_abs() < -39.0);
        let half = Real::ratio(1, 2, p(40));
        let lsp = pi(p(40)).ln().mul_pow2(-1);
        assert!(close(&ln_gamma(&half, p(40)).unwrap(), &lsp, -39.0));
        assert!(ln_gamma(&Real::zero(p(20)), p(20)).is_err());
    }

    #[test]
    fn gamma_functional_equation() {
        for (n, d) in [(1, 4), (1, 3), (1, 2), (3, 4)] {
            let x = Real::ratio(n, d, p(35));
            let lhs = gamma(&(&x + &Real::one(p(35))), p(35)).unwrap();
            let rhs = &x * &gamma(&x, p(35)).unwrap();
            assert!(close(&lhs, &rhs, -33.0));
        }
    }

    #[test]
    fn trigamma_values() {
        let pi = pi(p(40));
        let pi2 = &pi * &pi;
        let t1 = trigamma(&Real::one(p(40)), p(40)).unwrap();
        assert!(close(&t1, &pi2.div_i64(6), -39.0));
        let th = trigamma(&Real::ratio(1, 2, p(40)), p(40)).unwrap();
        assert!(close(&th, &pi2.mul_pow2(-1), -38.0));
    }

    #[test]
    fn incomplete_gamma_cases() {
        let pr = p(30);
        let x = Real::ratio(7, 3, pr);
        let g1 = incomplete_gamma_upper(&Real::one(pr), &x, pr).unwrap();
        assert!(close(&g1, &(-&x).exp(), -29.0));
        // Gamma(4,5) = 6 e^-5 (1 + 5 + 25/2 + 125/6)
        let five = Real::from_i64(5, pr);
        let g = incomplete_gamma_upper(&Real::from_i64(4, pr), &five, pr).unwrap();
        let poly = Real::ratio(6 * (6 + 6 * 5 + 75 + 125), 6, pr);
        assert!(close(&g, &(&poly * &(-&five).exp()), -28.0));
        // Gamma(s,0) = Gamma(s)
        let s = Real::ratio(5, 2, pr);
        let g0 = incomplete_gamma_upper(&s, &Real::zero(pr), pr).unwrap();
        assert!(close(&g0, &gamma(&s, pr).unwrap(), -28.0));
    }

    #[test]
    fn incomplete_gamma_series_and_cf_agree() {
        // s = 1/2: Gamma(1/2, x) = sqrt(pi) erfc(sqrt x); check continuity across branches.
        let pr = p(30);
        let s = Real::ratio(1, 2, pr);
        let a = incomplete_gamma_upper(&s, &Real::ratio(149, 100, pr), pr).unwrap();
        let b = incomplete_gamma_upper(&s, &Real::ratio(151, 100, pr), pr).unwrap();
        // derivative is -x^{-1/2} e^{-x}, about -0.1825 at 1.5
        let slope = (&b - &a).to_f64() / 0.02;
        assert!((slope + 1.5f64.powf(-0.5) * (-1.5f64).exp()).abs() < 1e-4);
    }
}
