//! Half-shifts, denominator clearing, head edits with Möbius tracking, integer shifts,
//! and the Euler series-to-CF transformation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfcore::{q, qi, CFSpec, Part, Poly2, ThreeTermRecurrence, ZArg, Q};
use crate::error::{Error, Result};
use crate::numkit::Real;

/// Cap on the index at which two tails are required to coincide.
pub const TAIL_MATCH_CAP: usize = 10;

/// x -> (m11 x + m12) / (m21 x + m22).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoebiusMap {
    #[serde(with = "crate::qser::grid")]
    m: Vec<Vec<Q>>,
}

impl MoebiusMap {
    pub fn new(m11: Q, m12: Q, m21: Q, m22: Q) -> Result<MoebiusMap> {
        let det = &m11 * &m22 - &m12 * &m21;
        if det.is_zero() {
            return Err(Error::Domain("singular Möbius map".into()));
        }
        Ok(MoebiusMap {
            m: vec![vec![m11, m12], vec![m21, m22]],
        })
    }

    pub fn identity() -> MoebiusMap {
        MoebiusMap::new(qi(1), qi(0), qi(0), qi(1)).expect("nonsingular")
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.m[i][j]
    }

    pub fn det(&self) -> Q {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    /// self ∘ other.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let a = &self.m;
        let b = &other.m;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        MoebiusMap {
            m: vec![vec![e(0, 0), e(0, 1)], vec![e(1, 0), e(1, 1)]],
        }
        .normalized()
    }

    pub fn inverse(&self) -> MoebiusMap {
        let m = &self.m;
        MoebiusMap {
            m: vec![vec![m[1][1].clone(), -m[0][1].clone()], vec![-m[1][0].clone(), m[0][0].clone()]],
        }
        .normalized()
    }

    /// Scale to integer entries with gcd 1 and a positive first nonzero entry in the bottom row.
    pub fn normalized(&self) -> MoebiusMap {
        let entries: Vec<&Q> = self.m.iter().flatten().collect();
        let den = entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = entries.iter().map(|x| (*x * Q::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut s = Q::new(den, if g.is_zero() { BigInt::one() } else { g });
        let lead = if !self.m[1][0].is_zero() { &self.m[1][0] } else { &self.m[1][1] };
        if lead.is_negative() {
            s = -s;
        }
        MoebiusMap {
            m: self.m.iter().map(|r| r.iter().map(|x| x * &s).collect()).collect(),
        }
    }

    pub fn apply(&self, x: &Real) -> Result<Real> {
        let p = x.precision();
        let r = |v: &Q| Real::from_ratio(v, p);
        let num = &(&r(&self.m[0][0]) * x) + &r(&self.m[0][1]);
        let den = &(&r(&self.m[1][0]) * x) + &r(&self.m[1][1]);
        if den.is_zero() {
            return Err(Error::DivisionByZero("Möbius pole".into()));
        }
        Ok(&num / &den)
    }

    pub fn apply_q(&self, x: &Q) -> Result<Q> {
        let num = &self.m[0][0] * x + &self.m[0][1];
        let den = &self.m[1][0] * x + &self.m[1][1];
        if den.is_zero() {
            return Err(Error::DivisionByZero("Möbius pole".into()));
        }
        Ok(num / den)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = |a: &Q, b: &Q| Poly2::from_grid(vec![vec![b.clone()], vec![a.clone()]]).to_string().replace('n', "x");
        write!(
            f,
            "({})/({})",
            lin(&self.m[0][0], &self.m[0][1]),
            lin(&self.m[1][0], &self.m[1][1])
        )
    }
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MoebiusMap(x -> {self})")
    }
}

fn check_head_shape(cf: &CFSpec) -> Result<()> {
    if cf.b_heads.len() > 1 || cf.a_heads.len() > 1 {
        return Err(Error::Unsupported(format!(
            "expected at most one b-head and one a-head, got {} and {}",
            cf.b_heads.len(),
            cf.a_heads.len()
        )));
    }
    Ok(())
}

fn factor_small(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

fn valuation(x: &BigInt, p: &BigInt) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    let mut x = x.abs();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

fn min_valuation<'a>(coeffs: impl Iterator<Item = &'a Q>, p: &BigInt) -> i64 {
    coeffs
        .filter(|c| !c.is_zero())
        .map(|c| valuation(c.numer(), p) - valuation(c.denom(), p))
        .min()
        .unwrap_or(i64::MAX)
}

/// Minimal integer c such that c*b, c^2*a and c*a1 are integral.
fn minimal_scale(b: &Poly2, a: &Poly2, a1: Option<&Poly2>) -> BigInt {
    let mut dens = b.denominator_lcm().lcm(&a.denominator_lcm());
    if let Some(h) = a1 {
        dens = dens.lcm(&h.denominator_lcm());
    }
    let mut c = BigInt::one();
    for p in factor_small(&dens) {
        let vb = min_valuation(b.nonzero_coeffs(), &p);
        let va = min_valuation(a.nonzero_coeffs(), &p);
        let vh = a1.map_or(i64::MAX, |h| min_valuation(h.nonzero_coeffs(), &p));
        let need = [-vb, (-va + 1).div_euclid(2), -vh].into_iter().max().unwrap_or(0).max(0);
        c *= p.pow(need as u32);
    }
    c
}

/// Equivalence rescaling with c_0 = 1, c_n = c for n >= 1.
pub fn clear_denominators(cf: &CFSpec) -> Result<(CFSpec, Q)> {
    check_head_shape(cf)?;
    let c = minimal_scale(&cf.b_poly, &cf.a_poly, cf.a_heads.first());
    if c.is_one() {
        return Ok((cf.clone(), Q::one()));
    }
    let cq = Q::from_integer(c);
    let b0 = match cf.b_heads.first() {
        Some(h) => h.clone(),
        None => cf.b_poly.eval_n(&Q::zero()),
    };
    let a1 = match cf.a_heads.first() {
        Some(h) => h.clone(),
        None => cf.a_poly.eval_n(&Q::zero()),
    };
    let out = CFSpec::new(
        vec![b0],
        cf.b_poly.scale(&cq),
        vec![a1.scale(&cq)],
        cf.a_poly.scale(&(&cq * &cq)),
    )?;
    Ok((out, cq))
}

/// n -> n + 1/2 in both polynomials (heads kept), then clear denominators.
pub fn half_shift(cf: &CFSpec) -> Result<CFSpec> {
    check_head_shape(cf)?;
    let h = q(1, 2);
    let shifted = CFSpec::new(
        cf.b_heads.clone(),
        cf.b_poly.shift_n(&h),
        cf.a_heads.clone(),
        cf.a_poly.shift_n(&h),
    )?;
    Ok(clear_denominators(&shifted)?.0)
}

/// Half-shift of the tails only: returns (c b(n+1/2), c^2 a(n+1/2), c) for any head shape.
pub fn half_shift_tails(cf: &CFSpec) -> (Poly2, Poly2, Q) {
    let h = q(1, 2);
    let b = cf.b_poly.shift_n(&h);
    let a = cf.a_poly.shift_n(&h);
    let c = Q::from_integer(minimal_scale(&b, &a, None));
    (b.scale(&c), a.scale(&(&c * &c)), c)
}

/// Wallis numerators and denominators (p_{-1}, p_0, .., p_m) with z bound.
fn wallis(cf: &CFSpec, m: usize, z: Option<&ZArg>) -> Result<(Vec<Q>, Vec<Q>)> {
    let mut p = vec![Q::one(), cf.b(0, z)?];
    let mut qq = vec![Q::zero(), Q::one()];
    for n in 1..=m {
        let a = cf.a(n, z)?;
        let b = cf.b(n, z)?;
        p.push(&b * &p[n] + &a * &p[n - 1]);
        qq.push(&b * &qq[n] + &a * &qq[n - 1]);
    }
    Ok((p, qq))
}

/// Index k >= 1 with b_n equal for n >= k and a_n equal for n > k, or an error.
fn tail_coincidence(old: &CFSpec, new: &CFSpec, z: Option<&ZArg>, cap: usize) -> Result<usize> {
    if old.b_poly != new.b_poly || old.a_poly != new.a_poly {
        return Err(Error::TailsDiffer(cap));
    }
    let span = old.head_span().max(new.head_span()) + 1;
    'k: for k in 1..=cap {
        for n in k..=span.max(k) {
            if old.b(n, z)? != new.b(n, z)? {
                continue 'k;
            }
        }
        for n in (k + 1)..=span.max(k + 1) {
            if old.a(n, z)? != new.a(n, z)? {
                continue 'k;
            }
        }
        return Ok(k);
    }
    Err(Error::TailsDiffer(cap))
}

/// Map A with L = A(t_k), t_k = b_k + a_{k+1}/(b_{k+1} + ...).
fn tail_map(cf: &CFSpec, k: usize, z: Option<&ZArg>) -> Result<MoebiusMap> {
    let (p, qq) = wallis(cf, k - 1, z)?;
    // p[i] holds p_{i-1}
    let ak = cf.a(k, z)?;
    MoebiusMap::new(p[k].clone(), &ak * &p[k - 1], qq[k].clone(), &ak * &qq[k - 1])
}

/// Möbius map M with limit(new) = M(limit(old)) when the tails of both fractions coincide.
pub fn moebius_between(old: &CFSpec, new: &CFSpec, z: Option<&ZArg>) -> Result<MoebiusMap> {
    let k = tail_coincidence(old, new, z, TAIL_MATCH_CAP)?;
    let a = tail_map(old, k, z)?;
    let b = tail_map(new, k, z)?;
    Ok(b.compose(&a.inverse()))
}

/// Replace the heads; the map sends the old limit to the new one.
pub fn head_edit(
    cf: &CFSpec,
    new_b_heads: Vec<Poly2>,
    new_a_heads: Vec<Poly2>,
    z: Option<&ZArg>,
) -> Result<(CFSpec, MoebiusMap)> {
    let new = CFSpec::new(new_b_heads, cf.b_poly.clone(), new_a_heads, cf.a_poly.clone())?;
    let m = moebius_between(cf, &new, z)?;
    Ok((new, m))
}

/// Peel m layers: the new fraction is a_{m+1}/(b_{m+1} + ...), with L = M(L').
/// m = 0 returns the input unchanged with the identity map.
pub fn integer_shift(cf: &CFSpec, m: usize, z: Option<&ZArg>) -> Result<(CFSpec, MoebiusMap)> {
    if m == 0 {
        return Ok((cf.clone(), MoebiusMap::identity()));
    }
    for n in 1..=m {
        if cf.a(n, z)?.is_zero() {
            return Err(Error::ZeroPartialNumerator(n));
        }
    }
    let mq = Q::from_integer(BigInt::from(m));
    let mut b_heads = vec![Poly2::zero()];
    b_heads.extend(cf.b_heads.iter().skip(m + 1).cloned());
    let a_heads: Vec<Poly2> = cf.a_heads.iter().skip(m).cloned().collect();
    let shifted = CFSpec::new(b_heads, cf.b_poly.shift_n(&mq), a_heads, cf.a_poly.shift_n(&mq))?;
    let (p, qq) = wallis(cf, m, z)?;
    // L = (p_m + p_{m-1} L') / (q_m + q_{m-1} L')
    let map = MoebiusMap::new(p[m].clone(), p[m + 1].clone(), qq[m].clone(), qq[m + 1].clone())?;
    Ok((shifted, map))
}

/// Rational term ratio t_{k+1}/t_k = num(k)/den(k), polynomials in k (written n) and z.
#[derive(Clone, Debug, PartialEq)]
pub struct TermRatio {
    pub num: Poly2,
    pub den: Poly2,
}

/// CF whose convergents are the partial sums of sum_{k >= k_start} t_k.
///
/// For k_start = 0 the first term sits in b_0 and convergent n sums t_0..t_n;
/// otherwise b_0 = 0, a_1 carries t_{k_start} and convergent n sums n terms.
pub fn euler_transform(t0: &Poly2, ratio: &TermRatio, k_start: usize) -> Result<CFSpec> {
    if !t0.is_n_free() {
        return Err(Error::Domain("first term must not depend on n".into()));
    }
    if ratio.num.is_zero() || ratio.den.is_zero() {
        return Err(Error::Domain("term ratio is zero or has a pole everywhere".into()));
    }
    // k_j = j + off indexes the ratio that produced the j-th appended term
    let off: i64 = if k_start == 0 { -1 } else { k_start as i64 - 2 };
    let k1 = 1 + off;
    let first_ratio_index = k_start as i64;
    for (poly, name, from) in [(&ratio.den, "pole", k1), (&ratio.num, "zero", first_ratio_index)] {
        if poly.is_z_free() {
            let roots = small_integer_roots(poly, from);
            if let Some(r) = roots {
                return Err(Error::Domain(format!("term ratio has a {name} at k = {r}")));
            }
        }
    }
    let k1q = Q::from_integer(BigInt::from(k1));
    let q_k1 = ratio.den.eval_n(&k1q);
    let (b0, a1) = if k_start == 0 {
        // T_1 = t0 num(0)/den(0); a_1 = T_1 den(0)
        (t0.clone(), t0 * &ratio.num.eval_n(&Q::zero()))
    } else {
        (Poly2::zero(), t0 * &q_k1)
    };
    let shift = Q::from_integer(BigInt::from(off));
    let b_poly = (&ratio.den + &ratio.num).shift_n(&shift);
    // a_{m+1} = -num(k_{m+1}) den(k_m), k_j = j + off
    let a_poly = -&(&ratio.num.shift_n(&(&shift + qi(1))) * &ratio.den.shift_n(&shift));
    CFSpec::new(vec![b0, q_k1], b_poly, vec![a1], a_poly)
}

/// Some integer root k >= from of a z-free polynomial, if any.
fn small_integer_roots(p: &Poly2, from: i64) -> Option<i64> {
    let deg = p.n_degree()?;
    if deg == 0 {
        return None;
    }
    let lead = p.coeff(deg, 0).abs();
    let bound = (0..deg)
        .map(|i| p.coeff(i, 0).abs() / &lead)
        .fold(Q::zero(), |m, x| if x > m { x } else { m });
    let bound = (bound + Q::one()).ceil().to_integer().to_i64().unwrap_or(i64::MAX).min(1_000_000);
    (from..=bound).find(|&k| p.eval_i(k, None).map(|v| v.is_zero()).unwrap_or(false))
}

/// n -> n + 1/2 in all three coefficients, rescaled by the power of 2 that makes
/// the minimal 2-adic valuation of the coefficients zero.
pub fn recurrence_shift_half(rec: &ThreeTermRecurrence) -> Result<ThreeTermRecurrence> {
    let h = q(1, 2);
    let polys = [rec.r_plus.shift_n(&h), rec.r_zero.shift_n(&h), rec.r_minus.shift_n(&h)];
    let two = BigInt::from(2);
    let v = polys
        .iter()
        .map(|p| min_valuation(p.nonzero_coeffs(), &two))
        .min()
        .unwrap_or(0);
    let s = if v >= 0 {
        Q::new(BigInt::one(), two.pow(v as u32))
    } else {
        Q::from_integer(two.pow((-v) as u32))
    };
    let [p, z, m] = polys;
    ThreeTermRecurrence::new(p.scale(&s), z.scale(&s), m.scale(&s))
}

/// Terms of both fractions side by side for n < depth, for diagnostics.
pub fn term_table(cf: &CFSpec, depth: usize, z: Option<&ZArg>) -> Result<BTreeMap<usize, (Option<Q>, Q)>> {
    let mut t = BTreeMap::new();
    for n in 0..depth {
        let a = if n == 0 { None } else { Some(cf.materialize(n, Part::A, z)?) };
        t.insert(n, (a, cf.materialize(n, Part::B, z)?));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{constant, ConstantId, Precision};

    fn cf(s: &str) -> CFSpec {
        CFSpec::parse(s).unwrap()
    }

    #[test]
    fn half_shift_gives_s_forms() {
        assert_eq!(half_shift(&cf("[[0,3(2n-1)],[2,-n^2]]")).unwrap(), cf("[[0,12n],[4,-(2n+1)^2]]"));
        assert_eq!(
            half_shift(&cf("[[0,11n^2-11n+3],[5,n^4]]")).unwrap(),
            cf("[[0,44n^2+1],[20,(2n+1)^4]]")
        );
        assert_eq!(
            half_shift(&cf("[[0,(2n-1)(17n^2-17n+5)],[6,-n^6]]")).unwrap(),
            cf("[[0,4n(68n^2+3)],[48,-(2n+1)^6]]")
        );
        assert!(half_shift(&cf("[[1,2,n],[1,n]]")).is_err());
    }

    #[test]
    fn cosh_tails_half_shift() {
        let thm9 = cf("[[0,3(1-z^2),11n^2-11n+3+9z^2],[5,(n^2+4z^2)(n^2+9z^2)]]");
        let (b, a, c) = half_shift_tails(&thm9);
        assert_eq!(b, Poly2::parse("44n^2+1+36z^2").unwrap());
        assert_eq!(a, Poly2::parse("((2n+1)^2+16z^2)((2n+1)^2+36z^2)").unwrap());
        assert_eq!(c, qi(4));
    }

    #[test]
    fn clear_denominators_scales() {
        let shifted = CFSpec::new(
            vec![Poly2::int(0)],
            Poly2::parse("6n").unwrap(),
            vec![Poly2::int(2)],
            Poly2::parse("-(2n+1)^2/4").unwrap(),
        )
        .unwrap();
        let (out, c) = clear_denominators(&shifted).unwrap();
        assert_eq!(c, qi(2));
        assert_eq!(out.a_heads[0], Poly2::int(4));
        for n in 1..=40 {
            assert_eq!(out.convergent(n, None).unwrap(), shifted.convergent(n, None).unwrap());
        }
        let tiny = cf("[[0,3(2n-1)],[2,-n^2]]");
        assert_eq!(clear_denominators(&tiny).unwrap(), (tiny.clone(), qi(1)));
        // no heads: b_0 and a_1 are materialized before scaling
        let bare = CFSpec::new(vec![], Poly2::parse("n/2+1").unwrap(), vec![], Poly2::parse("n+1").unwrap()).unwrap();
        let (out, c) = clear_denominators(&bare).unwrap();
        assert_eq!(c, qi(2));
        for n in 1..=10 {
            assert_eq!(out.convergent(n, None).unwrap(), bare.convergent(n, None).unwrap());
        }
    }

    #[test]
    fn head_edit_maps() {
        let s_small = cf("[[0,44n^2+1],[20,(2n+1)^4]]");
        let (_, m) = head_edit(&s_small, vec![Poly2::int(80), Poly2::int(47)], vec![Poly2::int(-160)], None).unwrap();
        // G = 800/(S + 10)
        assert_eq!(m, MoebiusMap::new(qi(0), qi(800), qi(1), qi(10)).unwrap());
        let s_tiny = cf("[[0,12n],[4,-(2n+1)^2]]");
        let (_, m) = head_edit(&s_tiny, vec![Poly2::int(8), Poly2::int(11)], vec![Poly2::int(8)], None).unwrap();
        // Y = 32/(4 - S)
        assert_eq!(m, MoebiusMap::new(qi(0), qi(-32), qi(1), qi(-4)).unwrap());
        let s_big = cf("[[0,4n(68n^2+3)],[48,-(2n+1)^6]]");
        let (_, m) = head_edit(&s_big, vec![Poly2::int(112)], vec![Poly2::int(16)], None).unwrap();
        assert_eq!(m, MoebiusMap::new(qi(1), qi(336), qi(0), qi(3)).unwrap());
        let other = cf("[[0,44n^2+2],[20,(2n+1)^4]]");
        assert!(matches!(moebius_between(&s_small, &other, None), Err(Error::TailsDiffer(_))));
    }

    #[test]
    fn head_edit_numeric() {
        let p = Precision::new(40).unwrap();
        let s_tiny = cf("[[0,12n],[4,-(2n+1)^2]]");
        let thm6 = cf("[[8,11,12n],[8,-(2n+1)^2]]");
        let m = moebius_between(&s_tiny, &thm6, None).unwrap();
        let ls = s_tiny.limit(p, None, 2000).unwrap().value;
        let y = constant(ConstantId::GammaQ4, p).unwrap().value;
        assert!((&m.apply(&ls).unwrap() - &y).abs().log10_abs() < -30.0);
    }

    #[test]
    fn integer_shift_peels() {
        let tiny = cf("[[0,3(2n-1)],[2,-n^2]]");
        let (t1, m) = integer_shift(&tiny, 1, None).unwrap();
        assert_eq!(m, MoebiusMap::new(qi(0), qi(2), qi(1), qi(3)).unwrap());
        assert_eq!(t1.a(1, None).unwrap(), qi(-1));
        assert_eq!(t1.b(1, None).unwrap(), qi(9));
        assert_eq!(integer_shift(&tiny, 0, None).unwrap().1, MoebiusMap::identity());
        let small = cf("[[0,11n^2-11n+3],[5,n^4]]");
        let (s2, m) = integer_shift(&small, 2, None).unwrap();
        for d in 1..12 {
            let lhs = small.convergent(d + 2, None).unwrap();
            let rhs = m.apply_q(&s2.convergent(d, None).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn euler_log_and_cosh() {
        let log = euler_transform(
            &Poly2::z(),
            &TermRatio {
                num: Poly2::parse("n z").unwrap(),
                den: Poly2::parse("n+1").unwrap(),
            },
            1,
        )
        .unwrap();
        let expected = cf("[[0,n+(n-1)z],[z,-n^2z]]");
        let z = ZArg::Real(q(1, 3));
        for n in 1..=20 {
            assert_eq!(log.convergent(n, Some(&z)).unwrap(), expected.convergent(n, Some(&z)).unwrap());
        }
        let cosh = euler_transform(
            &Poly2::int(1),
            &TermRatio {
                num: Poly2::parse("n^2+9z^2").unwrap(),
                den: Poly2::parse("(2n+1)(2n+2)").unwrap(),
            },
            0,
        )
        .unwrap();
        let expected = cf("[[1,2,5n^2-4n+1+9z^2],[9z^2,-2n(2n-1)(n^2+9z^2)]]");
        for n in 1..=8 {
            assert_eq!(cosh.term_poly(Part::B, n).unwrap(), expected.term_poly(Part::B, n).unwrap());
            assert_eq!(cosh.term_poly(Part::A, n).unwrap(), expected.term_poly(Part::A, n).unwrap());
        }
    }

    #[test]
    fn euler_geometric_partial_sums() {
        let x = q(2, 7);
        let g = euler_transform(
            &Poly2::int(1),
            &TermRatio {
                num: Poly2::constant(x.clone()),
                den: Poly2::int(1),
            },
            0,
        )
        .unwrap();
        for n in 0..=20 {
            let sum = (Q::one() - crate::cfcore::poly::pow_q(&x, n + 1)) / (Q::one() - &x);
            assert_eq!(g.convergent(n, None).unwrap(), sum);
        }
        let bad = TermRatio {
            num: Poly2::int(1),
            den: Poly2::parse("n-3").unwrap(),
        };
        assert!(euler_transform(&Poly2::int(1), &bad, 0).is_err());
    }

    #[test]
    fn shift_half_recurrences() {
        let eq1 = ThreeTermRecurrence::parse("(2n+1)^2", "44n^2+1", "(2n-1)^2").unwrap();
        let s = recurrence_shift_half(&eq1).unwrap();
        assert_eq!(s, ThreeTermRecurrence::parse("(n+1)^2", "11n^2+11n+3", "n^2").unwrap());
        let eq2a = ThreeTermRecurrence::parse("(n+1)^3", "(2n+1)(17n^2+17n+5)", "-n^3").unwrap();
        let eq2 = ThreeTermRecurrence::parse("(2n+1)^3", "4n(68n^2+3)", "-(2n-1)^3").unwrap();
        let s = recurrence_shift_half(&eq2a).unwrap();
        let one = qi(1);
        assert_eq!(s.r_plus, eq2.r_plus.shift_n(&one));
        assert_eq!(s.r_zero, eq2.r_zero.shift_n(&one));
        assert_eq!(s.r_minus, eq2.r_minus.shift_n(&one));
        let k = ThreeTermRecurrence::parse("1", "3", "-2").unwrap();
        assert_eq!(recurrence_shift_half(&k).unwrap(), k);
    }

    #[test]
    fn moebius_algebra() {
        let m = MoebiusMap::new(qi(2), qi(1), qi(1), qi(1)).unwrap();
        let x = q(3, 5);
        assert_eq!(m.inverse().apply_q(&m.apply_q(&x).unwrap()).unwrap(), x);
        assert_eq!(m.compose(&m.inverse()), MoebiusMap::identity());
        assert!(MoebiusMap::new(qi(1), qi(2), qi(2), qi(4)).is_err());
        assert_eq!(MoebiusMap::new(qi(0), qi(800), qi(1), qi(10)).unwrap().to_string(), "(800)/(x + 10)");
    }
}
