//! Modified Bessel function K0.

use super::agm::pi;
use super::real::{Precision, Real};
use super::special::euler_gamma;
use crate::error::{Error, Result};

/// K0(t) for t > 0: log-series below the crossover, asymptotic expansion above.
pub fn bessel_k0(t: &Real, prec: Precision) -> Result<Real> {
    if !t.is_positive() {
        return Err(Error::Domain("K0 requires t > 0".into()));
    }
    let tf = t.to_f64();
    let d = prec.guarded().digits() as f64;
    if tf > 1.2 * (d + 5.0) {
        k0_asymptotic(t, prec)
    } else {
        k0_series(t, prec)
    }
}

fn k0_series(t: &Real, prec: Precision) -> Result<Real> {
    // The series terms reach e^t while the result is near e^-t.
    let tf = t.to_f64();
    let extra = (2.0 * tf / std::f64::consts::LN_10).ceil() as u32 + 5;
    let work = prec.guarded().plus(extra);
    let t = t.widen(work);
    let y = (&t * &t).mul_pow2(-2);
    let mut term = Real::one(work); // (t^2/4)^k / (k!)^2
    let mut i0 = Real::one(work);
    let mut harm = Real::zero(work);
    let mut rest = Real::zero(work);
    let eps = -(work.digits() as f64) - 2.0;
    for k in 1..100_000i64 {
        term = &term * &y / Real::from_i64(k * k, work);
        harm = &harm + &Real::one(work).div_i64(k);
        i0 = &i0 + &term;
        let c = &term * &harm;
        rest = &rest + &c;
        if c.log10_abs() < eps + rest.log10_abs() && term.log10_abs() < eps {
            break;
        }
    }
    let lg = &t.mul_pow2(-1).ln() + &euler_gamma(work);
    Ok((&rest - &(&lg * &i0)).round_to(prec))
}

fn k0_asymptotic(t: &Real, prec: Precision) -> Result<Real> {
    let work = prec.guarded();
    let t = t.widen(work);
    let eight_t = t.mul_i64(8);
    let mut term = Real::one(work);
    let mut sum = Real::one(work);
    let eps = -(work.digits() as f64) - 2.0;
    let mut prev = f64::INFINITY;
    for k in 1..10_000i64 {
        let f = (2 * k - 1) * (2 * k - 1);
        term = -(&(&term * &Real::from_i64(f, work)) / &(&eight_t * &Real::from_i64(k, work)));
        let lt = term.log10_abs();
        if lt > prev {
            return Err(Error::NoConvergence {
                terms: k as usize,
                estimate: 10f64.powf(prev),
            });
        }
        sum = &sum + &term;
        if lt < eps {
            let pre = (&pi(work) / &t.mul_pow2(1)).sqrt();
            return Ok((&(&pre * &(-&t).exp()) * &sum).round_to(prec));
        }
        prev = lt;
    }
    Err(Error::NoConvergence {
        terms: 10_000,
        estimate: 10f64.powf(prev),
    })
}

const EULER_GAMMA_F64: f64 = 0.577_215_664_901_532_9;

/// Double-precision K0 for quadrature kernels.
pub fn bessel_k0_f64(t: f64) -> f64 {
    if t <= 0.0 {
        return f64::NAN;
    }
    if t <= 2.0 {
        let y = t * t / 4.0;
        let mut term = 1.0;
        let mut i0 = 1.0;
        let mut harm = 0.0;
        let mut rest = 0.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= y / (kf * kf);
            harm += 1.0 / kf;
            i0 += term;
            rest += term * harm;
            if term < 1e-18 * i0 {
                break;
            }
        }
        rest - ((t / 2.0).ln() + EULER_GAMMA_F64) * i0
    } else {
        // K0(t) = int_0^inf exp(-t cosh u) du by the trapezoid rule, scaled by e^t.
        let h = 0.1;
        let mut s = 0.5;
        let mut k = 1;
        loop {
            let u = k as f64 * h;
            let v = (-t * (u.cosh() - 1.0)).exp();
            s += v;
            if v < 1e-18 * s {
                break;
            }
            k += 1;
        }
        s * h * (-t).exp()
    }
}
