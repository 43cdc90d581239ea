//! High-precision real numbers tagged with the decimal precision they were produced at.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Guard digits carried above every requested precision.
pub const GUARD_DIGITS: u32 = 10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Decimal precision request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Precision {
                min: Self::MIN_DIGITS,
                got: digits,
            });
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    pub fn bits(self) -> usize {
        digits_to_bits(self.0)
    }

    /// Precision with the standard guard digits added.
    pub fn guarded(self) -> Precision {
        Precision(self.0 + GUARD_DIGITS)
    }

    pub fn plus(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }

    /// 10^(-digits) as f64 (0 when it underflows).
    pub fn epsilon(self) -> f64 {
        10f64.powi(-(self.0 as i32))
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Precision::new(d)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

pub(crate) fn digits_to_bits(d: u32) -> usize {
    ((d as f64) * LOG2_10).ceil() as usize + 4
}

/// Multiply an f64 by 2^e without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// An arbitrary-precision real value with its precision tag.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    digits: u32,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({} @{})", self.to_sci_string(self.digits.min(40) as usize), self.digits)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(self.digits as usize);
        f.write_str(&self.to_decimal_string(d))
    }
}

impl Real {
    fn wrap(v: BigFloat, digits: u32) -> Real {
        Real { v, digits }
    }

    pub fn precision_digits(&self) -> u32 {
        self.digits
    }

    pub fn precision(&self) -> Precision {
        Precision(self.digits)
    }

    fn bits(&self) -> usize {
        digits_to_bits(self.digits)
    }

    pub fn zero(prec: Precision) -> Real {
        Real::wrap(BigFloat::from_word(0, prec.bits()), prec.digits())
    }

    pub fn one(prec: Precision) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(i: i64, prec: Precision) -> Real {
        Real::wrap(BigFloat::from_i64(i, prec.bits().max(64)), prec.digits())
    }

    pub fn from_f64(x: f64, prec: Precision) -> Real {
        Real::wrap(BigFloat::from_f64(x, prec.bits().max(64)), prec.digits())
    }

    pub fn from_bigint(n: &BigInt, prec: Precision) -> Real {
        let p = prec.bits();
        if n.is_zero() {
            return Real::zero(prec);
        }
        // Drop low bits beyond what the target precision can hold.
        let bitlen = n.bits() as usize;
        let (mag, shift) = if bitlen > p + 128 {
            let s = bitlen - p - 128;
            (n.abs() >> s, s)
        } else {
            (n.abs(), 0)
        };
        let words: Vec<u64> = mag.to_u64_digits().1;
        let sign = if n.sign() == BigSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let mut v = BigFloat::from_words(&words, sign, (64 * words.len()) as i32);
        let _ = v.set_precision(p.max(64), RM);
        let mut r = Real::wrap(v, prec.digits());
        if shift > 0 {
            r = r.mul_pow2(shift as i64);
        }
        r
    }

    pub fn from_ratio(q: &BigRational, prec: Precision) -> Real {
        let n = Real::from_bigint(q.numer(), prec.plus(2));
        let d = Real::from_bigint(q.denom(), prec.plus(2));
        (&n / &d).round_to(prec)
    }

    pub fn ratio(num: i64, den: i64, prec: Precision) -> Real {
        (&Real::from_i64(num, prec.plus(2)) / &Real::from_i64(den, prec.plus(2))).round_to(prec)
    }

    /// Parse a decimal literal such as "-261.37391590940420314859".
    pub fn parse(s: &str, prec: Precision) -> Result<Real> {
        let v = with_consts(|cc| BigFloat::parse(s.trim(), astro_float::Radix::Dec, prec.bits(), RM, cc));
        if v.is_nan() {
            return Err(Error::Parse(format!("invalid decimal `{s}`")));
        }
        Ok(Real::wrap(v, prec.digits()))
    }

    /// Re-round to a (usually lower) precision and retag.
    pub fn round_to(&self, prec: Precision) -> Real {
        let mut v = self.v.clone();
        let _ = v.set_precision(prec.bits(), RM);
        Real::wrap(v, prec.digits())
    }

    /// Raise the working precision without changing the value.
    pub fn widen(&self, prec: Precision) -> Real {
        if prec.digits() <= self.digits {
            return self.clone();
        }
        self.round_to(prec)
    }

    fn binop_prec(&self, other: &Real) -> (usize, u32) {
        let d = self.digits.max(other.digits);
        (digits_to_bits(d), d)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.digits)
    }

    pub fn recip(&self) -> Real {
        Real::wrap(self.v.reciprocal(self.bits(), RM), self.digits)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.bits(), RM), self.digits)
    }

    pub fn exp(&self) -> Real {
        let p = self.bits();
        Real::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), self.digits)
    }

    pub fn ln(&self) -> Real {
        let p = self.bits();
        Real::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), self.digits)
    }

    pub fn sinh(&self) -> Real {
        let p = self.bits();
        Real::wrap(with_consts(|cc| self.v.sinh(p, RM, cc)), self.digits)
    }

    pub fn cosh(&self) -> Real {
        let p = self.bits();
        Real::wrap(with_consts(|cc| self.v.cosh(p, RM, cc)), self.digits)
    }

    /// Real power x^y for x > 0.
    pub fn pow(&self, y: &Real) -> Real {
        let (p, d) = self.binop_prec(y);
        Real::wrap(with_consts(|cc| self.v.pow(&y.v, p, RM, cc)), d)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64) -> Real {
        let p = self.bits();
        let r = Real::wrap(self.v.powi(n.unsigned_abs() as usize, p, RM), self.digits);
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        let o = Real::from_i64(k, Precision(self.digits));
        self * &o
    }

    pub fn div_i64(&self, k: i64) -> Real {
        let o = Real::from_i64(k, Precision(self.digits));
        self / &o
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.v.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().unwrap_or(0) as i64 + k;
        v.set_exponent(e as i32);
        Real::wrap(v, self.digits)
    }

    pub fn max(&self, o: &Real) -> Real {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    fn raw(&self) -> Option<(Vec<u64>, i64)> {
        if self.v.is_zero() || !self.is_finite() {
            return None;
        }
        let (m, _n, _s, e, _) = self.v.as_raw_parts()?;
        Some((m.to_vec(), e as i64))
    }

    /// Nearest f64 (saturating to ±inf, flushing to 0).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        let Some((m, e)) = self.raw() else { return 0.0 };
        let len = m.len();
        let mut top = m[len - 1] as f64;
        if len >= 2 {
            top += (m[len - 2] as f64) / 2f64.powi(64);
        }
        let x = ldexp(top, e - 64);
        if self.is_negative() {
            -x
        } else {
            x
        }
    }

    /// log10 |x| as f64; -inf for 0.
    pub fn log10_abs(&self) -> f64 {
        let Some((m, e)) = self.raw() else { return f64::NEG_INFINITY };
        let top = m[m.len() - 1] as f64 / 2f64.powi(64);
        top.log10() + (e as f64) * std::f64::consts::LOG10_2
    }

    /// Round to the nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        let Some((m, e)) = self.raw() else { return BigInt::zero() };
        let mut mag = BigInt::from_slice(
            num_bigint::Sign::Plus,
            &m.iter().flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
        );
        let shift = e - 64 * m.len() as i64;
        if shift >= 0 {
            mag <<= shift as usize;
        } else {
            let s = (-shift) as usize;
            // Round half up on magnitude.
            mag += BigInt::from(1) << (s - 1);
            mag >>= s;
        }
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// Exact rational value of the stored binary float.
    pub fn to_ratio(&self) -> BigRational {
        let Some((m, e)) = self.raw() else { return BigRational::zero() };
        let mag = BigInt::from_slice(
            num_bigint::Sign::Plus,
            &m.iter().flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
        );
        let shift = e - 64 * m.len() as i64;
        let one = BigInt::from(1);
        let r = if shift >= 0 {
            BigRational::from_integer(mag << shift as usize)
        } else {
            BigRational::new(mag, one << (-shift) as usize)
        };
        if self.is_negative() {
            -r
        } else {
            r
        }
    }

    /// (sign, decimal digit string of length `sig`, decimal exponent of the first digit).
    fn decimal_digits(&self, sig: usize) -> Option<(bool, String, i64)> {
        if self.v.is_zero() || !self.is_finite() {
            return None;
        }
        let sig = sig.max(1);
        let work = Precision((sig as u32 + 10).max(self.digits + 5));
        let x = self.abs().widen(work);
        let mut e10 = x.log10_abs().floor() as i64;
        for _ in 0..3 {
            let scale = (sig as i64) - 1 - e10;
            let ten = Real::from_i64(10, work);
            let scaled = if scale >= 0 { &x * &ten.powi(scale) } else { &x / &ten.powi(-scale) };
            let n = scaled.round_to_bigint();
            let s = n.to_string();
            if s.len() == sig {
                return Some((self.is_negative(), s, e10));
            }
            if s.len() > sig {
                e10 += 1;
            } else {
                e10 -= 1;
            }
        }
        None
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.v.is_nan() {
            return "NaN".into();
        }
        match self.decimal_digits(sig) {
            None => "0".into(),
            Some((neg, s, e)) => {
                let (head, tail) = s.split_at(1);
                let sign = if neg { "-" } else { "" };
                if tail.is_empty() {
                    format!("{sign}{head}e{e}")
                } else {
                    format!("{sign}{head}.{tail}e{e}")
                }
            }
        }
    }

    /// Plain decimal notation with `sig` significant digits when the exponent is moderate,
    /// scientific otherwise.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        if self.v.is_nan() {
            return "NaN".into();
        }
        let Some((neg, s, e)) = self.decimal_digits(sig) else { return "0".into() };
        let sign = if neg { "-" } else { "" };
        if !(-6..=30).contains(&e) {
            return self.to_sci_string(sig);
        }
        if e < 0 {
            format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), s)
        } else {
            let int_len = (e + 1) as usize;
            if int_len >= s.len() {
                format!("{sign}{}{}", s, "0".repeat(int_len - s.len()))
            } else {
                format!("{sign}{}.{}", &s[..int_len], &s[int_len..])
            }
        }
    }

    /// Number of matching significant digits between two values (relative).
    pub fn agreement_digits(&self, other: &Real) -> f64 {
        let d = (self - other).log10_abs();
        let s = self.log10_abs().max(other.log10_abs());
        (s - d).max(0.0)
    }

    pub fn to_i64_checked(&self) -> Option<i64> {
        self.round_to_bigint().to_i64()
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                let (p, d) = self.binop_prec(o);
                Real::wrap(self.v.$op(&o.v, p, RM), d)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                self.$m(&o)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.digits)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(9).is_err());
        assert_eq!(Precision::new(10).unwrap().digits(), 10);
    }

    #[test]
    fn bigint_round_trip() {
        let n: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let r = Real::from_bigint(&n, p(50));
        assert_eq!(r.round_to_bigint(), n);
        assert_eq!(r.to_ratio(), BigRational::from_integer(n));
    }

    #[test]
    fn huge_bigint_is_rounded() {
        let n = BigInt::from(3).pow(5000);
        let r = Real::from_bigint(&n, p(30));
        let expect = 5000.0 * 3f64.log10();
        assert!((r.log10_abs() - expect).abs() < 1e-9);
    }

    #[test]
    fn decimal_formatting() {
        let x = Real::ratio(1, 3, p(30));
        assert_eq!(x.to_decimal_string(5), "0.33333");
        let y = Real::ratio(-22, 7, p(30));
        assert_eq!(y.to_decimal_string(6), "-3.14286");
        assert_eq!(Real::from_i64(120, p(20)).to_decimal_string(5), "120.00");
        let t = Real::ratio(1, 3, p(30)).powi(40);
        assert!(t.to_decimal_string(3) == "8.23e-20");
    }

    #[test]
    fn f64_conversion() {
        let x = Real::ratio(1, 3, p(30));
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-17);
        assert_eq!(Real::zero(p(20)).to_f64(), 0.0);
        assert!((Real::from_i64(-5, p(20)).to_f64() + 5.0).abs() < 1e-15);
    }

    #[test]
    fn parse_and_compare() {
        let a = Real::parse("1.5", p(20)).unwrap();
        let b = Real::ratio(3, 2, p(20));
        assert_eq!(a, b);
        assert!(Real::parse("abc", p(20)).is_err());
        assert!(a > Real::one(p(20)));
    }
}
