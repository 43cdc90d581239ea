//! Continued fractions b0 + a1/(b1 + a2/(b2 + ...)) given by head lists and polynomial tails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Poly2, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::{Precision, Real};

/// Default cap on exact convergent depth.
pub const MAX_EXACT_DEPTH: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    A,
    B,
}

/// `[[b_heads.., b_poly],[a_heads.., a_poly]]`.
///
/// b_n = b_heads[n] for n < |b_heads|, else b_poly(n).
/// a_n = a_heads[n-1] for 1 <= n <= |a_heads|, else a_poly(n-1).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFSpec {
    pub b_heads: Vec<Poly2>,
    pub b_poly: Poly2,
    pub a_heads: Vec<Poly2>,
    pub a_poly: Poly2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub n: usize,
    pub p: Q,
    pub q: Q,
}

impl ConvergentPair {
    pub fn value(&self) -> Result<Q> {
        if self.q.is_zero() {
            return Err(Error::DivisionByZero(format!("q_{} = 0", self.n)));
        }
        Ok(&self.p / &self.q)
    }
}

#[derive(Clone, Debug)]
pub struct LimitResult {
    pub value: Real,
    /// Estimated absolute error; zero when the fraction terminates.
    pub error: Real,
    pub terms: usize,
    pub terminated: bool,
}

impl CFSpec {
    pub fn new(b_heads: Vec<Poly2>, b_poly: Poly2, a_heads: Vec<Poly2>, a_poly: Poly2) -> Result<CFSpec> {
        for h in b_heads.iter().chain(a_heads.iter()) {
            if !h.is_n_free() {
                return Err(Error::Parse(format!("head `{h}` depends on n")));
            }
        }
        if a_poly.is_zero() {
            return Err(Error::ZeroPartialNumerator(a_heads.len() + 1));
        }
        Ok(CFSpec {
            b_heads,
            b_poly,
            a_heads,
            a_poly,
        })
    }

    /// Parse the bracket notation, e.g. `[[0,3(2n-1)],[2,-n^2]]`.
    pub fn parse(s: &str) -> Result<CFSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("`{s}` is not of the form [[..],[..]]")))?;
        let lists = split_top(inner, ',');
        if lists.len() != 2 {
            return Err(Error::Parse(format!("`{s}` needs exactly two lists")));
        }
        let mut parts = Vec::new();
        for l in lists {
            let body = l
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("`{l}` is not a bracketed list")))?;
            let items: Vec<Poly2> = split_top(body, ',')
                .into_iter()
                .map(Poly2::parse)
                .collect::<Result<_>>()?;
            if items.is_empty() {
                return Err(Error::Parse(format!("empty list in `{s}`")));
            }
            parts.push(items);
        }
        let mut a = parts.pop().expect("two lists");
        let mut b = parts.pop().expect("two lists");
        let a_poly = a.pop().expect("nonempty");
        let b_poly = b.pop().expect("nonempty");
        CFSpec::new(b, b_poly, a, a_poly)
    }

    pub fn requires_z(&self) -> bool {
        self.polys().any(|p| !p.is_z_free())
    }

    fn polys(&self) -> impl Iterator<Item = &Poly2> {
        self.b_heads
            .iter()
            .chain(std::iter::once(&self.b_poly))
            .chain(self.a_heads.iter())
            .chain(std::iter::once(&self.a_poly))
    }

    /// Substitute z everywhere.
    pub fn bind_z(&self, z: &ZArg) -> Result<CFSpec> {
        let f = |v: &[Poly2]| v.iter().map(|p| p.bind_z(z)).collect::<Result<Vec<_>>>();
        Ok(CFSpec {
            b_heads: f(&self.b_heads)?,
            b_poly: self.b_poly.bind_z(z)?,
            a_heads: f(&self.a_heads)?,
            a_poly: self.a_poly.bind_z(z)?,
        })
    }

    fn bound(&self, z: Option<&ZArg>) -> Result<CFSpec> {
        match z {
            Some(z) => self.bind_z(z),
            None if self.requires_z() => Err(Error::MissingParameter),
            None => Ok(self.clone()),
        }
    }

    /// The n-th partial numerator or denominator as a polynomial in z.
    pub fn term_poly(&self, part: Part, n: usize) -> Result<Poly2> {
        match part {
            Part::B => Ok(match self.b_heads.get(n) {
                Some(h) => h.clone(),
                None => self.b_poly.eval_n(&Q::from_integer(BigInt::from(n))),
            }),
            Part::A => {
                if n == 0 {
                    return Err(Error::Domain("partial numerators start at a_1".into()));
                }
                Ok(match self.a_heads.get(n - 1) {
                    Some(h) => h.clone(),
                    None => self.a_poly.eval_n(&Q::from_integer(BigInt::from(n - 1))),
                })
            }
        }
    }

    /// a_n or b_n with z bound if required.
    pub fn materialize(&self, n: usize, part: Part, z: Option<&ZArg>) -> Result<Q> {
        let p = self.term_poly(part, n)?;
        p.eval(&Q::zero(), z)
    }

    pub fn b(&self, n: usize, z: Option<&ZArg>) -> Result<Q> {
        self.materialize(n, Part::B, z)
    }

    pub fn a(&self, n: usize, z: Option<&ZArg>) -> Result<Q> {
        self.materialize(n, Part::A, z)
    }

    /// Number of leading indices affected by heads: terms agree with the plain tails beyond it.
    pub fn head_span(&self) -> usize {
        self.b_heads.len().max(self.a_heads.len() + 1)
    }

    /// Exact convergents p_n/q_n for n = 0..=depth.
    pub fn convergents(&self, depth: usize, z: Option<&ZArg>) -> Result<Vec<ConvergentPair>> {
        let sc = ScaledConvergents::run(self, depth, z, true)?;
        Ok((0..=depth)
            .map(|n| ConvergentPair {
                n,
                p: Q::new(sc.p[n].clone(), sc.scale[n].clone()),
                q: Q::new(sc.q[n].clone(), sc.scale[n].clone()),
            })
            .collect())
    }

    /// The depth-n convergent as a reduced fraction.
    pub fn convergent(&self, depth: usize, z: Option<&ZArg>) -> Result<Q> {
        let sc = ScaledConvergents::run(self, depth, z, false)?;
        let (p, q) = (sc.p.last().expect("nonempty"), sc.q.last().expect("nonempty"));
        if q.is_zero() {
            return Err(Error::DivisionByZero(format!("q_{depth} = 0")));
        }
        Ok(Q::new(p.clone(), q.clone()))
    }

    /// Floating-point convergent values v_0..v_depth at the given working precision.
    /// Entries with q_n = 0 are None. Stops early (shorter output) if the fraction terminates.
    pub fn convergent_values(&self, depth: usize, z: Option<&ZArg>, work: Precision) -> Result<Vec<Option<Real>>> {
        let bound = self.bound(z)?;
        let mut w = FloatWallis::new(&bound, work)?;
        let mut out = vec![w.value()];
        while w.n < depth {
            if !w.step(&bound)? {
                break;
            }
            out.push(w.value());
        }
        Ok(out)
    }

    /// Limit with the successive-convergent error proxy.
    pub fn limit(&self, prec: Precision, z: Option<&ZArg>, max_terms: usize) -> Result<LimitResult> {
        let bound = self.bound(z)?;
        let work = prec.plus(20 + (max_terms.max(10) as f64).log10().ceil() as u32);
        let target = Real::from_i64(10, work).powi(-(prec.digits() as i64));
        let mut w = FloatWallis::new(&bound, work)?;
        // last three convergent values, newest last
        let mut hist: [Option<Real>; 3] = [None, None, w.value()];
        let mut last_est = f64::INFINITY;
        loop {
            if w.n >= max_terms {
                return Err(Error::NoConvergence {
                    terms: w.n,
                    estimate: last_est,
                });
            }
            if !w.step(&bound)? {
                let v = hist[2]
                    .clone()
                    .ok_or_else(|| Error::DivisionByZero(format!("terminating fraction has q_{} = 0", w.n)))?;
                return Ok(LimitResult {
                    value: v.round_to(prec),
                    error: Real::zero(prec),
                    terms: w.n,
                    terminated: true,
                });
            }
            hist.rotate_left(1);
            hist[2] = w.value();
            let [Some(v2), Some(v1), Some(v0)] = &hist else {
                continue;
            };
            let d1 = v0 - v1;
            let d2 = v1 - v2;
            let est = if d1.signum() * d2.signum() < 0 {
                d1.abs()
            } else {
                (v0 - v2).abs().mul_i64(10)
            };
            let tol = &target * &v0.abs().max(&Real::one(work));
            last_est = est.to_f64();
            if w.n >= 3 && est < tol {
                return Ok(LimitResult {
                    value: v0.round_to(prec),
                    error: est.round_to(prec),
                    terms: w.n,
                    terminated: false,
                });
            }
        }
    }

    /// Sign-adjusted determinant check p_n q_{n-1} - p_{n-1} q_n = (-1)^(n-1) a_1...a_n for n = 1..=depth.
    pub fn determinant_holds(&self, depth: usize, z: Option<&ZArg>) -> Result<bool> {
        let c = self.convergents(depth, z)?;
        let mut prod = Q::one();
        for n in 1..=depth {
            prod *= self.a(n, z)?;
            let lhs = &c[n].p * &c[n - 1].q - &c[n - 1].p * &c[n].q;
            let rhs = if n % 2 == 1 { prod.clone() } else { -prod.clone() };
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exact Wallis recursion on integers after scaling each step by c_n = lcm(den a_n, den b_n).
struct ScaledConvergents {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    /// C_n = c_0 c_1 ... c_n; p_n = p[n]/C_n.
    scale: Vec<BigInt>,
}

impl ScaledConvergents {
    fn run(cf: &CFSpec, depth: usize, z: Option<&ZArg>, keep: bool) -> Result<ScaledConvergents> {
        if depth > MAX_EXACT_DEPTH {
            return Err(Error::Domain(format!(
                "exact depth {depth} exceeds the cap {MAX_EXACT_DEPTH}"
            )));
        }
        let cf = cf.bound(z)?;
        let b0 = cf.b(0, None)?;
        let c0 = b0.denom().clone();
        let mut p_prev = BigInt::one();
        let mut q_prev = BigInt::zero();
        let mut p_cur = b0.numer().clone();
        let mut q_cur = c0.clone();
        let mut c_prev = c0.clone();
        let mut scale_cur = c0;
        let mut out = ScaledConvergents {
            p: vec![p_cur.clone()],
            q: vec![q_cur.clone()],
            scale: vec![scale_cur.clone()],
        };
        for n in 1..=depth {
            let a = cf.a(n, None)?;
            if a.is_zero() {
                return Err(Error::ZeroPartialNumerator(n));
            }
            let b = cf.b(n, None)?;
            let c = a.denom().lcm(b.denom());
            let bs = (b.numer() * (&c / b.denom())).clone();
            let a_s = a.numer() * (&c / a.denom()) * &c_prev;
            let p_next = &bs * &p_cur + &a_s * &p_prev;
            let q_next = &bs * &q_cur + &a_s * &q_prev;
            p_prev = std::mem::replace(&mut p_cur, p_next);
            q_prev = std::mem::replace(&mut q_cur, q_next);
            scale_cur = &scale_cur * &c;
            c_prev = c;
            if keep || n == depth {
                if !keep {
                    out.p.clear();
                    out.q.clear();
                    out.scale.clear();
                }
                out.p.push(p_cur.clone());
                out.q.push(q_cur.clone());
                out.scale.push(scale_cur.clone());
            }
        }
        Ok(out)
    }
}

/// Floating Wallis recursion with periodic renormalization.
struct FloatWallis {
    n: usize,
    work: Precision,
    p: [Real; 2],
    q: [Real; 2],
}

impl FloatWallis {
    fn new(cf: &CFSpec, work: Precision) -> Result<FloatWallis> {
        let b0 = Real::from_ratio(&cf.b(0, None)?, work);
        Ok(FloatWallis {
            n: 0,
            work,
            p: [Real::one(work), b0],
            q: [Real::zero(work), Real::one(work)],
        })
    }

    /// Advance one term; false when a_{n+1} = 0 (the fraction terminates).
    fn step(&mut self, cf: &CFSpec) -> Result<bool> {
        let n = self.n + 1;
        let a = cf.a(n, None)?;
        if a.is_zero() {
            return Ok(false);
        }
        let b = Real::from_ratio(&cf.b(n, None)?, self.work);
        let a = Real::from_ratio(&a, self.work);
        let p = &(&b * &self.p[1]) + &(&a * &self.p[0]);
        let q = &(&b * &self.q[1]) + &(&a * &self.q[0]);
        self.p = [std::mem::replace(&mut self.p[1], p.clone()), p];
        self.q = [std::mem::replace(&mut self.q[1], q.clone()), q];
        self.n = n;
        Ok(true)
    }

    fn value(&self) -> Option<Real> {
        if self.q[1].is_zero() {
            None
        } else {
            Some(&self.p[1] / &self.q[1])
        }
    }
}

/// Split on a separator at bracket/paren depth 0.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if start < s.len() || !out.is_empty() {
        out.push(&s[start..]);
    }
    out
}

fn compact(p: &Poly2) -> String {
    p.to_string().replace(' ', "")
}

impl fmt::Display for CFSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |heads: &[Poly2], poly: &Poly2| {
            heads
                .iter()
                .chain(std::iter::once(poly))
                .map(compact)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "[[{}],[{}]]",
            list(&self.b_heads, &self.b_poly),
            list(&self.a_heads, &self.a_poly)
        )
    }
}

impl fmt::Debug for CFSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CFSpec({self})")
    }
}

impl FromStr for CFSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<CFSpec> {
        CFSpec::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfcore::poly::{q, qi};

    fn cf(s: &str) -> CFSpec {
        CFSpec::parse(s).unwrap()
    }

    #[test]
    fn materialize_matches_displays() {
        let small = cf("[[0,11n^2-11n+3],[5,n^4]]");
        let bs: Vec<Q> = (0..5).map(|n| small.b(n, None).unwrap()).collect();
        assert_eq!(bs, vec![qi(0), qi(3), qi(25), qi(69), qi(135)]);
        let as_: Vec<Q> = (1..5).map(|n| small.a(n, None).unwrap()).collect();
        assert_eq!(as_, vec![qi(5), qi(1), qi(16), qi(81)]);
        let thm2 = cf("[[80,47,44n^2+1],[-160,(2n+1)^4]]");
        assert_eq!(thm2.a(2, None).unwrap(), qi(81));
        assert_eq!(thm2.b(1, None).unwrap(), qi(47));
        assert_eq!(thm2.b(2, None).unwrap(), qi(177));
        let tiny = cf("[[0,3(2n-1)],[2,-n^2]]");
        assert_eq!(tiny.a(3, None).unwrap(), qi(-4));
        assert!(tiny.a(0, None).is_err());
    }

    #[test]
    fn convergents_small_cases() {
        let small = cf("[[0,11n^2-11n+3],[5,n^4]]");
        assert_eq!(small.convergent(1, None).unwrap(), q(5, 3));
        let tiny = cf("[[0,3(2n-1)],[2,-n^2]]");
        let c = tiny.convergents(2, None).unwrap();
        assert_eq!(c[1].value().unwrap(), q(2, 3));
        assert_eq!((c[2].p.clone(), c[2].q.clone()), (qi(18), qi(26)));
        assert_eq!(c[2].value().unwrap(), q(9, 13));
        assert!(tiny.determinant_holds(30, None).unwrap());
    }

    #[test]
    fn rational_heads_scale_exactly() {
        let z3 = cf("[[0,(2n-1)(5n^2-5n+2)],[12/7,-16n^6]]");
        let c = z3.convergents(6, None).unwrap();
        assert_eq!(c[1].value().unwrap(), q(6, 7));
        for n in 1..=6 {
            assert_eq!(z3.convergent(n, None).unwrap(), c[n].value().unwrap());
        }
        assert!(z3.determinant_holds(20, None).unwrap());
    }

    #[test]
    fn parse_display_round_trip() {
        for s in [
            "[[0,3(2n-1)],[2,-n^2]]",
            "[[80,47,44n^2+1],[-160,(2n+1)^4]]",
            "[[2-z,4n(2-z)],[-(2n+1)^2z^2]]",
            "[[1,12(1-z^2),44n^2+1+36z^2],[60z^2,((2n+1)^2+16z^2)((2n+1)^2+36z^2)]]",
        ] {
            let c = cf(s);
            assert_eq!(CFSpec::parse(&c.to_string()).unwrap(), c, "{s}");
        }
        assert_eq!(cf("[[0,3(2n-1)],[2,-n^2]]").to_string(), "[[0,6n-3],[2,-n^2]]");
        assert!(CFSpec::parse("[[0,n]]").is_err());
        assert!(CFSpec::parse("[[n,1],[1]]").is_err());
    }

    #[test]
    fn z_required() {
        let l = cf("[[0,n+(n-1)z],[z,-n^2z]]");
        assert!(matches!(l.convergent(3, None), Err(Error::MissingParameter)));
        let v = l.convergent(3, Some(&ZArg::Real(q(1, 2)))).unwrap();
        // partial sum 1/2 + 1/8 + 1/24
        assert_eq!(v, q(2, 3));
    }

    #[test]
    fn limit_tiny_is_log2() {
        let tiny = cf("[[0,3(2n-1)],[2,-n^2]]");
        let p = Precision::new(40).unwrap();
        let r = tiny.limit(p, None, 2000).unwrap();
        let log2 = crate::numkit::constant(crate::numkit::ConstantId::Log2, p).unwrap().value;
        assert!((&r.value - &log2).abs().log10_abs() < -39.5);
        assert!(!r.terminated);
    }

    #[test]
    fn limit_terminates_on_zero_numerator() {
        let t = cf("[[1,1],[2-n]]");
        let r = t.limit(Precision::new(20).unwrap(), None, 100).unwrap();
        assert!(r.terminated);
        assert_eq!(r.value.to_f64(), 2.0);
        assert!(matches!(t.convergents(3, None), Err(Error::ZeroPartialNumerator(3))));
    }

    #[test]
    fn no_convergence_reported() {
        let osc = cf("[[0,0],[1,1]]");
        assert!(matches!(
            osc.limit(Precision::new(10).unwrap(), None, 50),
            Err(Error::NoConvergence { .. })
        ));
    }
}
