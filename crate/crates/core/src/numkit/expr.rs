//! Expression trees over rationals, named constants and one real parameter.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::agm::{elliptic_e, elliptic_k};
use super::constants::{available_digits, constant, ConstantId};
use super::real::{Precision, Real};
use super::special::ln_gamma;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sinh,
    Cosh,
    /// sinh(x)/x, equal to 1 at 0.
    Sinhc,
    EllipticK,
    EllipticE,
    LnGamma,
}

impl Func {
    pub fn of(self, e: ConstExpr) -> ConstExpr {
        ConstExpr::Func(self, Box::new(e))
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sinhc => "sinhc",
            Func::EllipticK => "K",
            Func::EllipticE => "E",
            Func::LnGamma => "lngamma",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstExpr {
    Rat(#[serde(with = "crate::qser")] BigRational),
    Const(ConstantId),
    /// The entry parameter (z or s).
    Var,
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Neg(Box<ConstExpr>),
    Pow(Box<ConstExpr>, #[serde(with = "crate::qser")] BigRational),
    Func(Func, Box<ConstExpr>),
}

/// A value together with an estimate of its attainable accuracy.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: Real,
    /// log10 of the estimated relative error from stored-digit inputs and rounding.
    pub rel_err_log10: f64,
}

impl Evaluated {
    /// Decimal digits the value can be trusted to.
    pub fn digits(&self) -> u32 {
        (-self.rel_err_log10).floor().max(0.0) as u32
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + (10f64.powf(a - m) + 10f64.powf(b - m)).log10()
}

impl ConstExpr {
    pub fn int(n: i64) -> ConstExpr {
        ConstExpr::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn q(n: i64, d: i64) -> ConstExpr {
        ConstExpr::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn c(id: ConstantId) -> ConstExpr {
        ConstExpr::Const(id)
    }

    pub fn var() -> ConstExpr {
        ConstExpr::Var
    }

    pub fn pow(self, n: i64, d: i64) -> ConstExpr {
        ConstExpr::Pow(Box::new(self), BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn powi(self, n: i64) -> ConstExpr {
        self.pow(n, 1)
    }

    pub fn sqrt(self) -> ConstExpr {
        Func::Sqrt.of(self)
    }

    /// True when the parameter does not occur.
    pub fn is_param_free(&self) -> bool {
        match self {
            ConstExpr::Rat(_) | ConstExpr::Const(_) => true,
            ConstExpr::Var => false,
            ConstExpr::Add(a, b) | ConstExpr::Sub(a, b) | ConstExpr::Mul(a, b) | ConstExpr::Div(a, b) => {
                a.is_param_free() && b.is_param_free()
            }
            ConstExpr::Neg(a) | ConstExpr::Pow(a, _) | ConstExpr::Func(_, a) => a.is_param_free(),
        }
    }

    /// Named constants referenced by the expression.
    pub fn constants(&self) -> Vec<ConstantId> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect(&self, out: &mut Vec<ConstantId>) {
        match self {
            ConstExpr::Const(c) => out.push(*c),
            ConstExpr::Rat(_) | ConstExpr::Var => {}
            ConstExpr::Add(a, b) | ConstExpr::Sub(a, b) | ConstExpr::Mul(a, b) | ConstExpr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            ConstExpr::Neg(a) | ConstExpr::Pow(a, _) | ConstExpr::Func(_, a) => a.collect(out),
        }
    }

    /// Evaluate at `prec`; fails if a stored constant lacks the digits.
    pub fn eval(&self, prec: Precision, var: Option<&Real>) -> Result<Real> {
        let e = self.eval_tracked(prec, var)?;
        if e.digits() < prec.digits() {
            return Err(Error::StoredDigitsExceeded {
                name: self.to_string(),
                available: e.digits(),
                requested: prec.digits(),
            });
        }
        Ok(e.value)
    }

    /// Evaluate using stored constants at whatever digits they have, reporting accuracy.
    pub fn eval_tracked(&self, prec: Precision, var: Option<&Real>) -> Result<Evaluated> {
        let work = prec.guarded();
        let var = var.map(|v| v.widen(work));
        let e = self.eval_rec(work, var.as_ref())?;
        Ok(Evaluated {
            value: e.value.round_to(prec),
            rel_err_log10: e.rel_err_log10.max(-(prec.digits() as f64)),
        })
    }

    fn eval_rec(&self, work: Precision, var: Option<&Real>) -> Result<Evaluated> {
        let base_err = -(work.digits() as f64);
        let ok = |value: Real, rel: f64| Ok(Evaluated { value, rel_err_log10: rel.max(base_err) });
        match self {
            ConstExpr::Rat(q) => ok(Real::from_ratio(q, work), base_err),
            ConstExpr::Var => match var {
                Some(v) => ok(v.clone(), base_err),
                None => Err(Error::MissingParameter),
            },
            ConstExpr::Const(id) => match available_digits(*id) {
                Some(d) if d < work.digits() => {
                    let p = Precision::new(d).expect("stored digits exceed the precision floor");
                    let v = constant(*id, p)?.value.widen(work);
                    ok(v, -(d as f64) + 0.5)
                }
                _ => ok(constant(*id, work)?.value, base_err),
            },
            ConstExpr::Add(a, b) | ConstExpr::Sub(a, b) => {
                let x = a.eval_rec(work, var)?;
                let y = b.eval_rec(work, var)?;
                let v = if matches!(self, ConstExpr::Add(..)) {
                    &x.value + &y.value
                } else {
                    &x.value - &y.value
                };
                let abs_err = log_add(
                    x.value.log10_abs() + x.rel_err_log10,
                    y.value.log10_abs() + y.rel_err_log10,
                );
                let rel = if v.is_zero() { 0.0 } else { abs_err - v.log10_abs() };
                ok(v, rel)
            }
            ConstExpr::Mul(a, b) => {
                let x = a.eval_rec(work, var)?;
                let y = b.eval_rec(work, var)?;
                ok(&x.value * &y.value, log_add(x.rel_err_log10, y.rel_err_log10))
            }
            ConstExpr::Div(a, b) => {
                let x = a.eval_rec(work, var)?;
                let y = b.eval_rec(work, var)?;
                if y.value.is_zero() {
                    return Err(Error::DivisionByZero(b.to_string()));
                }
                ok(&x.value / &y.value, log_add(x.rel_err_log10, y.rel_err_log10))
            }
            ConstExpr::Neg(a) => {
                let x = a.eval_rec(work, var)?;
                ok(-&x.value, x.rel_err_log10)
            }
            ConstExpr::Pow(a, q) => {
                let x = a.eval_rec(work, var)?;
                let rel = x.rel_err_log10 + q.abs().to_f64().unwrap_or(1.0).max(1e-300).log10();
                if q.is_integer() {
                    let n = q
                        .numer()
                        .to_i64()
                        .ok_or_else(|| Error::Domain("exponent too large".into()))?;
                    if n < 0 && x.value.is_zero() {
                        return Err(Error::DivisionByZero(a.to_string()));
                    }
                    return ok(x.value.powi(n), rel);
                }
                if !x.value.is_positive() {
                    if x.value.is_zero() && q.is_positive() {
                        return ok(Real::zero(work), base_err);
                    }
                    return Err(Error::Domain(format!("fractional power of non-positive value {a}")));
                }
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                let v = if *q == half {
                    x.value.sqrt()
                } else {
                    (&x.value.ln() * &Real::from_ratio(q, work)).exp()
                };
                ok(v, rel)
            }
            ConstExpr::Func(f, a) => {
                let x = a.eval_rec(work, var)?;
                let xv = &x.value;
                let ax = xv.abs().to_f64();
                let rel_in = x.rel_err_log10;
                let (v, rel) = match f {
                    Func::Sqrt => {
                        if xv.is_negative() {
                            return Err(Error::Domain(format!("sqrt of negative value {a}")));
                        }
                        (xv.sqrt(), rel_in - 0.3)
                    }
                    Func::Exp => (xv.exp(), rel_in + ax.max(1e-300).log10()),
                    Func::Log => {
                        if !xv.is_positive() {
                            return Err(Error::Domain(format!("log of non-positive value {a}")));
                        }
                        let l = xv.ln();
                        let r = rel_in - l.abs().to_f64().max(1e-300).log10();
                        (l, r)
                    }
                    Func::Sinh => (xv.sinh(), rel_in + ax.max(1.0).log10()),
                    Func::Cosh => (xv.cosh(), rel_in + ax.max(1.0).log10()),
                    Func::Sinhc => {
                        if xv.is_zero() {
                            (Real::one(work), rel_in)
                        } else {
                            (&xv.sinh() / xv, rel_in + ax.max(1.0).log10())
                        }
                    }
                    Func::EllipticK => (elliptic_k(xv, work)?, rel_in),
                    Func::EllipticE => (elliptic_e(xv, work)?, rel_in),
                    Func::LnGamma => (ln_gamma(xv, work)?, rel_in + 1.0),
                };
                ok(v, rel)
            }
        }
    }

    fn prec_level(&self) -> u8 {
        match self {
            ConstExpr::Add(..) | ConstExpr::Sub(..) => 1,
            ConstExpr::Mul(..) | ConstExpr::Div(..) => 2,
            ConstExpr::Neg(..) => 3,
            ConstExpr::Pow(..) => 4,
            ConstExpr::Rat(q) if !q.is_integer() || q.is_negative() => 2,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec_level() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstExpr::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            ConstExpr::Const(c) => write!(f, "{c}"),
            ConstExpr::Var => f.write_str("z"),
            ConstExpr::Add(a, b) => {
                a.fmt_child(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_child(f, 2)
            }
            ConstExpr::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                f.write_str(" - ")?;
                b.fmt_child(f, 2)
            }
            ConstExpr::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str("*")?;
                b.fmt_child(f, 3)
            }
            ConstExpr::Div(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str("/")?;
                b.fmt_child(f, 3)
            }
            ConstExpr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_child(f, 3)
            }
            ConstExpr::Pow(a, q) => {
                a.fmt_child(f, 5)?;
                if q.is_integer() && !q.is_negative() {
                    write!(f, "^{}", q.numer())
                } else {
                    write!(f, "^({}/{})", q.numer(), q.denom())
                }
            }
            ConstExpr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl $tr for ConstExpr {
            type Output = ConstExpr;
            fn $m(self, o: ConstExpr) -> ConstExpr {
                ConstExpr::$v(Box::new(self), Box::new(o))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        ConstExpr::Neg(Box::new(self))
    }
}

impl From<i64> for ConstExpr {
    fn from(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }
}
