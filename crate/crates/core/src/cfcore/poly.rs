//! Polynomials in n whose coefficients are polynomials in the parameter z.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A bound value of the parameter: real z, or purely imaginary z = i*y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZArg {
    Real(Q),
    Imag(Q),
}

impl ZArg {
    /// z^j as a rational when real, error for odd powers of an imaginary value.
    fn pow(&self, j: usize) -> Result<Q> {
        match self {
            ZArg::Real(x) => Ok(pow_q(x, j)),
            ZArg::Imag(y) => {
                if j % 2 == 1 {
                    return Err(Error::NonReal(format!("odd power z^{j} at imaginary z = {y}i")));
                }
                let v = pow_q(y, j);
                Ok(if (j / 2) % 2 == 1 { -v } else { v })
            }
        }
    }
}

impl fmt::Display for ZArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZArg::Real(x) => write!(f, "{x}"),
            ZArg::Imag(y) => write!(f, "{y}i"),
        }
    }
}

pub(crate) fn pow_q(x: &Q, j: usize) -> Q {
    let mut r = Q::one();
    for _ in 0..j {
        r *= x;
    }
    r
}

/// Dense grid: `coeffs[i][j]` multiplies n^i z^j. Always normalized.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Grid", into = "Grid")]
pub struct Poly2 {
    coeffs: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize)]
struct Grid(#[serde(with = "crate::qser::grid")] Vec<Vec<Q>>);

impl From<Grid> for Poly2 {
    fn from(g: Grid) -> Poly2 {
        Poly2::from_grid(g.0)
    }
}

impl From<Poly2> for Grid {
    fn from(p: Poly2) -> Grid {
        Grid(p.coeffs)
    }
}

impl Poly2 {
    pub fn from_grid(mut coeffs: Vec<Vec<Q>>) -> Poly2 {
        for row in coeffs.iter_mut() {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while coeffs.last().is_some_and(|r| r.is_empty()) {
            coeffs.pop();
        }
        Poly2 { coeffs }
    }

    pub fn zero() -> Poly2 {
        Poly2 { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Poly2 {
        Poly2::from_grid(vec![vec![c]])
    }

    pub fn int(c: i64) -> Poly2 {
        Poly2::constant(qi(c))
    }

    pub fn n() -> Poly2 {
        Poly2::from_grid(vec![vec![], vec![Q::one()]])
    }

    pub fn z() -> Poly2 {
        Poly2::from_grid(vec![vec![Q::zero(), Q::one()]])
    }

    /// Polynomial in n from integer coefficients, lowest degree first.
    pub fn from_n_coeffs(c: &[i64]) -> Poly2 {
        Poly2::from_grid(c.iter().map(|&x| vec![qi(x)]).collect())
    }

    pub fn grid(&self) -> &[Vec<Q>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Q {
        self.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in n, or None for the zero polynomial.
    pub fn n_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn z_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    pub fn is_z_free(&self) -> bool {
        self.coeffs.iter().all(|r| r.len() <= 1)
    }

    pub fn is_n_free(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Constant value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.coeffs.is_empty() {
            return Some(Q::zero());
        }
        if self.coeffs.len() == 1 && self.coeffs[0].len() <= 1 {
            return Some(self.coeff(0, 0));
        }
        None
    }

    /// All nonzero coefficients.
    pub fn nonzero_coeffs(&self) -> impl Iterator<Item = &Q> {
        self.coeffs.iter().flatten().filter(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Poly2 {
        Poly2::from_grid(self.coeffs.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    pub fn pow(&self, k: u32) -> Poly2 {
        let mut r = Poly2::int(1);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Value at rational n with z bound (or absent for z-free polynomials).
    pub fn eval(&self, n: &Q, z: Option<&ZArg>) -> Result<Q> {
        let mut total = Q::zero();
        let mut npow = Q::one();
        for row in &self.coeffs {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let zj = if j == 0 {
                    Q::one()
                } else {
                    z.ok_or(Error::MissingParameter)?.pow(j)?
                };
                total += c * &npow * zj;
            }
            npow *= n;
        }
        Ok(total)
    }

    pub fn eval_i(&self, n: i64, z: Option<&ZArg>) -> Result<Q> {
        self.eval(&qi(n), z)
    }

    /// Substitute a rational for n, leaving a polynomial in z.
    pub fn eval_n(&self, n: &Q) -> Poly2 {
        let mut out: Vec<Q> = Vec::new();
        let mut npow = Q::one();
        for row in &self.coeffs {
            if out.len() < row.len() {
                out.resize(row.len(), Q::zero());
            }
            for (j, c) in row.iter().enumerate() {
                out[j] += c * &npow;
            }
            npow *= n;
        }
        Poly2::from_grid(vec![out])
    }

    /// Bind z, leaving a polynomial in n.
    pub fn bind_z(&self, z: &ZArg) -> Result<Poly2> {
        let mut rows = Vec::new();
        for row in &self.coeffs {
            let mut v = Q::zero();
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    v += c * z.pow(j)?;
                }
            }
            rows.push(vec![v]);
        }
        Ok(Poly2::from_grid(rows))
    }

    /// Substitute n -> n + h.
    pub fn shift_n(&self, h: &Q) -> Poly2 {
        let shift = &Poly2::n() + &Poly2::constant(h.clone());
        let mut result = Poly2::zero();
        // Horner in n with z-polynomial coefficients.
        for row in self.coeffs.iter().rev() {
            result = &(&result * &shift) + &Poly2::from_grid(vec![row.clone()]);
        }
        result
    }

    /// Substitute n -> c n.
    pub fn scale_n(&self, c: &Q) -> Poly2 {
        let mut p = Q::one();
        let mut rows = Vec::new();
        for row in &self.coeffs {
            rows.push(row.iter().map(|x| x * &p).collect());
            p *= c;
        }
        Poly2::from_grid(rows)
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.nonzero_coeffs().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Parse a polynomial written like "4n(68n^2+3)" or "-(2n+1)^6" or "44n^2+1+36z^2".
    pub fn parse(s: &str) -> Result<Poly2> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(v)
    }

    fn fmt_zpoly(row: &[Q], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in row.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, &[("z", j)], first)?;
            first = false;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &Q, vars: &[(&str, usize)], first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let has_var = vars.iter().any(|(_, e)| *e > 0);
    if !(a.is_one() && has_var) {
        if a.is_integer() {
            write!(f, "{}", a.numer())?;
        } else {
            write!(f, "{}/{}", a.numer(), a.denom())?;
        }
    }
    for (v, e) in vars {
        match e {
            0 => {}
            1 => f.write_str(v)?,
            _ => write!(f, "{v}^{e}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate().rev() {
            let nz: Vec<(usize, &Q)> = row.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            if nz.is_empty() {
                continue;
            }
            if nz.len() == 1 || i == 0 {
                for (j, c) in nz.iter().rev() {
                    write_term(f, c, &[("n", i), ("z", *j)], first)?;
                    first = false;
                }
            } else {
                // (z-polynomial) n^i
                if !first {
                    f.write_str(" + ")?;
                }
                f.write_str("(")?;
                Poly2::fmt_zpoly(row, f)?;
                f.write_str(")")?;
                match i {
                    1 => f.write_str("n")?,
                    _ => write!(f, "n^{i}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let ni = self.coeffs.len().max(o.coeffs.len());
        let mut rows = Vec::with_capacity(ni);
        for i in 0..ni {
            let a = self.coeffs.get(i).map(|r| r.as_slice()).unwrap_or(&[]);
            let b = o.coeffs.get(i).map(|r| r.as_slice()).unwrap_or(&[]);
            let nj = a.len().max(b.len());
            let row = (0..nj)
                .map(|j| {
                    let x = a.get(j).cloned().unwrap_or_else(Q::zero);
                    let y = b.get(j).cloned().unwrap_or_else(Q::zero);
                    x + y
                })
                .collect();
            rows.push(row);
        }
        Poly2::from_grid(rows)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-Q::one())
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        self + &(-o)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        if self.is_zero() || o.is_zero() {
            return Poly2::zero();
        }
        let ni = self.coeffs.len() + o.coeffs.len() - 1;
        let nj = self.z_degree().unwrap_or(0) + o.z_degree().unwrap_or(0) + 1;
        let mut rows = vec![vec![Q::zero(); nj]; ni];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in o.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if !c2.is_zero() {
                            rows[i1 + i2][j1 + j2] += c1 * c2;
                        }
                    }
                }
            }
        }
        Poly2::from_grid(rows)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $m(self, o: Poly2) -> Poly2 {
                (&self).$m(&o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    N,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '·' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let t: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(t.parse().expect("digits")));
            }
            'n' | 'm' | 'k' => out.push(Tok::N),
            'z' | 's' => out.push(Tok::Z),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '×' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            _ => {
                if let Some(d) = superscript_digit(c) {
                    let mut v = d;
                    while i + 1 < chars.len() {
                        if let Some(d2) = superscript_digit(chars[i + 1]) {
                            v = v * 10 + d2;
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    out.push(Tok::Caret);
                    out.push(Tok::Num(BigInt::from(v)));
                } else {
                    return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly2> {
        let mut v = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    v = &v + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    v = &v - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Poly2> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    v = &v * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .as_constant()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| Error::Parse("division only by nonzero constants".into()))?;
                    v = v.scale(&c.recip());
                }
                Some(Tok::N) | Some(Tok::Z) | Some(Tok::LParen) | Some(Tok::Num(_)) => {
                    v = &v * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<Poly2> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly2> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Num(e)) => {
                    let e = e.to_u32().filter(|e| *e <= 64).ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly2> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Poly2::constant(Q::from_integer(v))),
            Some(Tok::N) => Ok(Poly2::n()),
            Some(Tok::Z) => Ok(Poly2::z()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let p = Poly2::parse("4n(68n^2+3)").unwrap();
        assert_eq!(p, Poly2::from_n_coeffs(&[0, 12, 0, 272]));
        assert_eq!(p.eval_i(1, None).unwrap(), qi(284));
        let a = Poly2::parse("-(2n+1)^6").unwrap();
        assert_eq!(a.eval_i(1, None).unwrap(), qi(-729));
        let u = Poly2::parse("11n²−11n+3").unwrap();
        assert_eq!(u, Poly2::from_n_coeffs(&[3, -11, 11]));
        let f = Poly2::parse("44n^2+1+36z^2").unwrap();
        assert_eq!(f.coeff(0, 2), qi(36));
        assert!(!f.is_z_free());
        assert!(Poly2::parse("n/0").is_err());
        assert!(Poly2::parse("n^").is_err());
        assert!(Poly2::parse("(n").is_err());
        assert_eq!(Poly2::parse("(2n+1)^2/4").unwrap().coeff(0, 0), q(1, 4));
    }

    #[test]
    fn z_binding() {
        let f = Poly2::parse("1+36z^2").unwrap();
        assert!(matches!(f.eval_i(0, None), Err(Error::MissingParameter)));
        let v = f.eval_i(0, Some(&ZArg::Imag(q(1, 6)))).unwrap();
        assert_eq!(v, qi(0));
        let g = Poly2::parse("n+(n-1)z").unwrap();
        assert!(matches!(g.eval_i(2, Some(&ZArg::Imag(q(1, 2)))), Err(Error::NonReal(_))));
        assert_eq!(g.eval_i(2, Some(&ZArg::Real(q(1, 2)))).unwrap(), q(5, 2));
    }

    #[test]
    fn shift_and_display() {
        let p = Poly2::parse("n^2").unwrap();
        assert_eq!(p.shift_n(&q(1, 2)), Poly2::parse("n^2+n").unwrap() + Poly2::constant(q(1, 4)));
        assert_eq!(Poly2::parse("44n^2+1").unwrap().to_string(), "44n^2 + 1");
        assert_eq!(Poly2::parse("n+(n-1)z").unwrap().to_string(), "(z + 1)n - z");
        assert_eq!(Poly2::zero().to_string(), "0");
        let round = Poly2::parse(&Poly2::parse("-2n(2n-1)(n^2+9z^2)").unwrap().to_string()).unwrap();
        assert_eq!(round, Poly2::parse("-2n(2n-1)(n^2+9z^2)").unwrap());
    }

    #[test]
    fn serde_grid() {
        let p = Poly2::parse("n/2 + 3z").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[[0,1],[3,1]],[[1,2]]]");
        let back: Poly2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let padded: Poly2 = serde_json::from_str("[[[1,1],[0,1]],[]]").unwrap();
        assert_eq!(padded, Poly2::int(1));
    }
}
