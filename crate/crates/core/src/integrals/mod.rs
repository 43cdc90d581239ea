//! Integral families with their parameter matrices, Bessel moments and big Apery numbers.

pub mod quad;

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cfcore::{q, qi, ThreeTermRecurrence, Q};
use crate::error::{Error, Result};
use crate::numkit::{
    bessel_k0_f64, constant, elliptic_e, elliptic_k, hypergeometric_pfq, ln_gamma, ConstantId, Precision, Real,
};

pub use quad::{integrate1, integrate2, integrate3, QuadSpec, QuadValue, Transform};

fn qf(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn half_shift(n: i64) -> Q {
    q(2 * n - 1, 2)
}

/// Parameters a_0..a_5 of the triple integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params3(pub [Q; 6]);

/// Parameters a_0..a_4 of the double integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params2(pub [Q; 5]);

fn fmt_tuple(f: &mut fmt::Formatter<'_>, a: &[Q]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in a.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Params3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, &self.0)
    }
}

impl fmt::Display for Params2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, &self.0)
    }
}

impl Params3 {
    pub fn uniform(v: Q) -> Self {
        Params3(std::array::from_fn(|_| v.clone()))
    }

    /// All parameters n - 1/2.
    pub fn profile(n: i64) -> Self {
        Self::uniform(half_shift(n))
    }

    /// The eight quantities that must exceed -1.
    pub fn convergence_quantities(&self) -> [Q; 8] {
        let [a0, a1, a2, a3, a4, a5] = &self.0;
        let s = a4 + a5 - a0 - a3;
        [
            a1.clone(),
            a2.clone(),
            a3.clone(),
            a4.clone(),
            a5.clone(),
            a4 + a5 - a3,
            a1 + &s,
            a2 + &s,
        ]
    }
}

impl Params2 {
    pub fn uniform(v: Q) -> Self {
        Params2(std::array::from_fn(|_| v.clone()))
    }

    pub fn profile(n: i64) -> Self {
        Self::uniform(half_shift(n))
    }

    /// The five quantities that must exceed -1.
    pub fn convergence_quantities(&self) -> [Q; 5] {
        let [a0, a1, a2, a3, a4] = &self.0;
        [a1.clone(), a2.clone(), a3.clone(), a4.clone(), a3 + a4 - a0]
    }
}

fn above_minus_one(xs: &[Q]) -> bool {
    let m1 = -Q::one();
    xs.iter().all(|x| *x > m1)
}

pub fn convergent3_ok(a: &Params3) -> bool {
    above_minus_one(&a.convergence_quantities())
}

pub fn convergent2_ok(a: &Params2) -> bool {
    above_minus_one(&a.convergence_quantities())
}

/// I3(a) = int x^a1 (1-x)^a4 y^a2 (1-y)^a5 z^a3 (1-z)^(a4+a5-a3) / (1-(1-xy)z)^(a0+1).
pub fn quad_i3(a: &Params3, spec: &QuadSpec) -> Result<QuadValue> {
    if !convergent3_ok(a) {
        return Err(Error::Domain(format!("triple integral diverges at {a}")));
    }
    let f: Vec<f64> = a.0.iter().map(qf).collect();
    let p = -(f[0] + 1.0);
    integrate3(
        spec,
        (f[1], f[4]),
        (f[2], f[5]),
        (f[3], f[4] + f[5] - f[3]),
        move |[x, _], [y, _], [z, zc]| (zc + x * y * z).powf(p),
    )
}

/// I2(a) = int x^a1 (1-x)^a3 y^a2 (1-y)^a4 / (1-xy)^(a0+1).
pub fn quad_i2(a: &Params2, spec: &QuadSpec) -> Result<QuadValue> {
    if !convergent2_ok(a) {
        return Err(Error::Domain(format!("double integral diverges at {a}")));
    }
    let f: Vec<f64> = a.0.iter().map(qf).collect();
    let p = -(f[0] + 1.0);
    integrate2(spec, (f[1], f[3]), (f[2], f[4]), move |x, xc, _, yc| (xc + x * yc).powf(p))
}

/// The signed double integral (-1)^n I2(n - 1/2, ..., n - 1/2).
pub fn quad_i2_n(n: i64, spec: &QuadSpec) -> Result<QuadValue> {
    let mut v = quad_i2(&Params2::profile(n), spec)?;
    if n % 2 != 0 {
        v.value = -v.value;
    }
    Ok(v)
}

pub fn quad_i3_n(n: i64, spec: &QuadSpec) -> Result<QuadValue> {
    quad_i3(&Params3::profile(n), spec)
}

/// r(nu) = I3(nu, ..., nu), nu >= 0.
pub fn quad_r3(nu: f64, spec: &QuadSpec) -> Result<QuadValue> {
    if !(nu >= 0.0) {
        return Err(Error::Domain(format!("r(nu) needs nu >= 0, got {nu}")));
    }
    let p = -(nu + 1.0);
    integrate3(spec, (nu, nu), (nu, nu), (nu, nu), move |[x, _], [y, _], [z, zc]| {
        (zc + x * y * z).powf(p)
    })
}

fn check_z(z: f64) -> Result<()> {
    if z < 1.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("need real z < 1, got {z}")))
    }
}

/// I1(nu; z) = int x^(nu-1/2) (1-x)^(nu-1/2) / (1-zx)^(nu+1/2).
pub fn quad_i1(nu: f64, z: f64, spec: &QuadSpec) -> Result<QuadValue> {
    if !(nu > -0.5) {
        return Err(Error::Domain(format!("I1 needs nu > -1/2, got {nu}")));
    }
    check_z(z)?;
    let p = -(nu + 0.5);
    let e = nu - 0.5;
    integrate1(spec, (e, e), move |x, xc| (xc + (1.0 - z) * x).powf(p))
}

/// r(n; z) = int x^n (1-x)^n / (1-zx)^(n+1).
pub fn quad_r1(n: u32, z: f64, spec: &QuadSpec) -> Result<QuadValue> {
    check_z(z)?;
    let e = n as f64;
    let p = -(e + 1.0);
    integrate1(spec, (e, e), move |x, xc| (xc + (1.0 - z) * x).powf(p))
}

/// Coordinates (p~, q~) with (-1)^n I2(n) = p~ pi/Y - q~ pi Y, Y = (Gamma(1/4)/Gamma(3/4))^2.
pub fn i2_coords(n: usize) -> (Q, Q) {
    let rec = eq1();
    let p = rec.propagate(&qi(0), &qi(-20), n.max(1), None).expect("nonzero leading term");
    let qq = rec.propagate(&q(-1, 2), &q(-1, 4), n.max(1), None).expect("nonzero leading term");
    (p[n].clone(), qq[n].clone())
}

/// Coordinates (alpha, beta) with I3(n) = alpha omega_+ + beta eta_+.
pub fn i3_coords(n: usize) -> (Q, Q) {
    let rec = eq2();
    let a = rec.propagate(&qi(8), &qi(-56), n.max(1), None).expect("nonzero leading term");
    let b = rec.propagate(&qi(0), &q(-3, 2), n.max(1), None).expect("nonzero leading term");
    (a[n].clone(), b[n].clone())
}

/// (2n+1)^2 y(n+1) = (44n^2+1) y(n) + (2n-1)^2 y(n-1)
pub fn eq1() -> ThreeTermRecurrence {
    ThreeTermRecurrence::parse("(2n+1)^2", "44n^2+1", "(2n-1)^2").expect("valid")
}

/// (2n+1)^3 y(n+1) = 4n(68n^2+3) y(n) - (2n-1)^3 y(n-1)
pub fn eq2() -> ThreeTermRecurrence {
    ThreeTermRecurrence::parse("(2n+1)^3", "4n(68n^2+3)", "-(2n-1)^3").expect("valid")
}

/// Which family a parameter matrix belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// 16 cells c_ij, 0 <= i, j <= 3.
    Triple,
    /// c_00 and the block 1 <= i, j <= 3.
    Double,
}

impl Layout {
    pub fn cells(self) -> Vec<(usize, usize)> {
        match self {
            Layout::Triple => (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect(),
            Layout::Double => std::iter::once((0, 0))
                .chain((1..4).flat_map(|i| (1..4).map(move |j| (i, j))))
                .collect(),
        }
    }

    pub fn size(self) -> usize {
        match self {
            Layout::Triple => 16,
            Layout::Double => 10,
        }
    }

    /// Position of cell (i, j) in the value vector.
    pub fn index(self, i: usize, j: usize) -> Option<usize> {
        self.cells().iter().position(|&c| c == (i, j))
    }
}

/// Parameter matrix c_ij with values stored in `layout.cells()` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    pub layout: Layout,
    pub values: Vec<Q>,
}

impl CMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<&Q> {
        self.layout.index(i, j).map(|k| &self.values[k])
    }

    fn at(&self, i: usize, j: usize) -> &Q {
        self.get(i, j).expect("cell in layout")
    }

    /// The multiset of cell values, sorted ascending.
    pub fn multiset(&self) -> Vec<Q> {
        let mut v = self.values.clone();
        v.sort();
        v
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| self.get(i, j).map_or(".".to_string(), |v| v.to_string()))
                .collect();
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

pub fn cmatrix3(a: &Params3) -> CMatrix {
    let [a0, a1, a2, a3, a4, a5] = &a.0;
    let s = a4 + a5 - a0 - a3;
    let rows = [
        [a0.clone(), a4 + a5 - a3, a1 + a4 - a0, a2 + a5 - a0],
        [a3.clone(), a4 + a5 - a0, a1 + a4 - a3, a2 + a5 - a3],
        [a1.clone(), a1 + &s, a4.clone(), a2 + a5 - a1],
        [a2.clone(), a2 + &s, a1 + a4 - a2, a5.clone()],
    ];
    CMatrix {
        layout: Layout::Triple,
        values: rows.into_iter().flatten().collect(),
    }
}

pub fn cmatrix2(a: &Params2) -> CMatrix {
    let [a0, a1, a2, a3, a4] = &a.0;
    let values = vec![
        a3 + a4 - a0,
        a0.clone(),
        a1 + a3 - a0,
        a2 + a4 - a0,
        a1.clone(),
        a3.clone(),
        a2 + a4 - a1,
        a2.clone(),
        a1 + a3 - a2,
        a4.clone(),
    ];
    CMatrix {
        layout: Layout::Double,
        values,
    }
}

/// Read parameters back from a triple-family matrix; `None` if the matrix is not in the family's image.
pub fn recover3(c: &CMatrix) -> Option<Params3> {
    if c.layout != Layout::Triple {
        return None;
    }
    let a = Params3([
        c.at(0, 0).clone(),
        c.at(2, 0).clone(),
        c.at(3, 0).clone(),
        c.at(1, 0).clone(),
        c.at(2, 2).clone(),
        c.at(3, 3).clone(),
    ]);
    (cmatrix3(&a) == *c).then_some(a)
}

pub fn recover2(c: &CMatrix) -> Option<Params2> {
    if c.layout != Layout::Double {
        return None;
    }
    let a = Params2([
        c.at(1, 1).clone(),
        c.at(2, 1).clone(),
        c.at(3, 1).clone(),
        c.at(2, 2).clone(),
        c.at(3, 3).clone(),
    ]);
    (cmatrix2(&a) == *c).then_some(a)
}

fn gamma_product(args: &[Q]) -> Result<f64> {
    let p = Precision::new(20)?;
    let mut s = Real::zero(p);
    for a in args {
        let x = Real::from_ratio(&(a + Q::one()), p);
        s = &s + &ln_gamma(&x, p)?;
    }
    Ok(s.exp().to_f64())
}

/// I3(a) divided by the Gamma(q+1) of its eight convergence quantities.
pub fn normalized3(a: &Params3, spec: &QuadSpec) -> Result<QuadValue> {
    let mut v = quad_i3(a, spec)?;
    let g = gamma_product(&a.convergence_quantities())?;
    v.value /= g;
    v.error /= g;
    Ok(v)
}

pub fn normalized2(a: &Params2, spec: &QuadSpec) -> Result<QuadValue> {
    let mut v = quad_i2(a, spec)?;
    let g = gamma_product(&a.convergence_quantities())?;
    v.value /= g;
    v.error /= g;
    Ok(v)
}

/// c_{n,k} = int_0^inf t^k K0(t)^n dt, for n in 1..=4 and k in 0..=3.
pub fn bessel_moment(n: u32, k: u32, spec: &QuadSpec) -> Result<QuadValue> {
    if !(1..=4).contains(&n) || k > 3 {
        return Err(Error::Domain(format!("Bessel moment c({n},{k}) outside n in 1..=4, k in 0..=3")));
    }
    let f = move |t: f64| t.powi(k as i32) * bessel_k0_f64(t).powi(n as i32);
    let head = integrate1(spec, (0.0, 0.0), move |x, _| f(x))?;
    // Past T the integrand is below e^(-nT) ~ 10^-16 e^-40.
    let cut = (16.0 * std::f64::consts::LN_10 + 40.0) / n as f64;
    let len = cut - 1.0;
    let tail = integrate1(spec, (0.0, 0.0), move |x, _| len * f(1.0 + len * x))?;
    Ok(QuadValue {
        value: head.value + tail.value,
        error: head.error + tail.error,
        level: head.level.max(tail.level),
        evaluations: head.evaluations + tail.evaluations,
    })
}

/// Closed forms for the Bessel moments that have one.
pub fn bessel_closed_form(n: u32, k: u32, prec: Precision) -> Result<Option<Real>> {
    let work = prec.guarded();
    let c = |id| constant(id, prec).map(|c| c.value.widen(work));
    let p = crate::numkit::pi(work);
    let v = match (n, k) {
        (3, 0) => {
            // 3 Gamma(1/3)^6 / (32 2^(2/3) pi)
            let g13 = ln_gamma(&Real::ratio(1, 3, work), work)?.mul_i64(6).exp();
            let two23 = Real::from_i64(2, work).pow(&Real::ratio(2, 3, work));
            &g13.mul_i64(3) / &(&two23 * &p).mul_i64(32)
        }
        (3, 1) => c(ConstantId::LChi3_2)?.mul_i64(3).div_i64(4),
        (3, 3) => &c(ConstantId::LChi3_2)? - &Real::ratio(2, 3, work),
        (4, 0) => &p * &c(ConstantId::OmegaMinusIm)?,
        (4, 1) => c(ConstantId::Zeta3)?.mul_i64(7).div_i64(8),
        (4, 2) => {
            let s = &c(ConstantId::OmegaMinusIm)?.mul_i64(128) + &c(ConstantId::EtaMinusIm)?.mul_i64(3);
            (&p * &s).div_i64(512)
        }
        (4, 3) => &c(ConstantId::Zeta3)?.mul_i64(7).div_i64(32) - &Real::ratio(3, 16, work),
        _ => return Ok(None),
    };
    Ok(Some(v.round_to(prec)))
}

/// A_n = sum_k C(n,k)^2 C(n+k,k)^2
pub fn big_apery(n: u64) -> BigInt {
    (0..=n)
        .map(|k| {
            let a = binomial(BigInt::from(n), BigInt::from(k));
            let b = binomial(BigInt::from(n + k), BigInt::from(k));
            let t = a * b;
            &t * &t
        })
        .sum()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub series: f64,
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Residuals of the truncated series at 100, 200 and 400 terms.
    pub truncated: Vec<(usize, f64)>,
    pub passed: bool,
}

impl IdentityCheck {
    /// Doubling the number of terms shrinks the truncation residual.
    pub fn truncation_monotone(&self) -> bool {
        self.truncated.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypergReport {
    pub precision: u32,
    pub identities: Vec<IdentityCheck>,
    pub passed: bool,
}

struct UnitSeries {
    name: &'static str,
    upper: Vec<Q>,
    lower: Vec<Q>,
    /// lhs = offset - scale * series
    offset: Q,
    scale: Q,
}

fn partial_sum(upper: &[Q], lower: &[Q], terms: usize, prec: Precision) -> Real {
    let mut term = Q::one();
    let mut sum = Q::one();
    for n in 1..terms {
        let m = qi(n as i64 - 1);
        let num: Q = upper.iter().map(|a| a + &m).product();
        let den: Q = lower.iter().map(|b| b + &m).product::<Q>() * qi(n as i64);
        term = term * num / den;
        sum += &term;
    }
    Real::from_ratio(&sum, prec)
}

/// The two unit-argument series for the fourth power of Gamma(1/4)/Gamma(3/4) and its inverse.
pub fn hyperg_identity_check(prec: u32) -> Result<HypergReport> {
    let p = Precision::new(prec)?;
    let work = p.guarded();
    let y = constant(ConstantId::GammaQ4, work)?.value;
    let g = &y * &y;
    let one = Real::one(p);
    let series = [
        // sum (n+1) (3/4)_n^4 / (9/4)_n^4 = 5F4(2, 3/4 x4; 9/4 x4; 1)
        UnitSeries {
            name: "(G(1/4)/G(3/4))^4 = 80 - 2048/625 sum (n+1)(3/4)_n^4/(9/4)_n^4",
            upper: vec![qi(2), q(3, 4), q(3, 4), q(3, 4), q(3, 4)],
            lower: vec![q(9, 4), q(9, 4), q(9, 4), q(9, 4)],
            offset: qi(80),
            scale: q(2048, 625),
        },
        // sum (2n+1) (1/4)_n^4 / (7/4)_n^4 = 6F5(3/2, 1/4 x4, 1; 1/2, 7/4 x4; 1)
        UnitSeries {
            name: "(G(3/4)/G(1/4))^4 = 1/16 - 4/81 sum (2n+1)(1/4)_n^4/(7/4)_n^4",
            upper: vec![q(3, 2), q(1, 4), q(1, 4), q(1, 4), q(1, 4), qi(1)],
            lower: vec![q(1, 2), q(7, 4), q(7, 4), q(7, 4), q(7, 4)],
            offset: q(1, 16),
            scale: q(4, 81),
        },
    ];
    let targets = [g.clone(), g.recip()];
    let tol = 10f64.powi(-(prec as i32) + 5);
    let mut identities = Vec::new();
    for (s, lhs) in series.iter().zip(&targets) {
        let rhs_of = |sum: &Real| &Real::from_ratio(&s.offset, work) - &(sum * &Real::from_ratio(&s.scale, work));
        let rel = |rhs: &Real| (&(lhs - rhs) / lhs).abs().to_f64();
        let sum = hypergeometric_pfq(&s.upper, &s.lower, &one, p)?.widen(work);
        let rhs = rhs_of(&sum);
        let residual = rel(&rhs);
        let truncated = [100, 200, 400]
            .iter()
            .map(|&n| (n, rel(&rhs_of(&partial_sum(&s.upper, &s.lower, n, work)))))
            .collect();
        identities.push(IdentityCheck {
            name: s.name.to_string(),
            series: sum.to_f64(),
            lhs: lhs.to_decimal_string(prec as usize),
            rhs: rhs.to_decimal_string(prec as usize),
            residual,
            tolerance: tol,
            truncated,
            passed: residual < tol,
        });
    }
    let passed = identities.iter().all(|c| c.passed);
    Ok(HypergReport {
        precision: prec,
        identities,
        passed,
    })
}

/// Reference values of I1(0; z) and I1(1; z) from K and E.
pub fn i1_initial(z: f64) -> Result<(f64, f64)> {
    let p = Precision::new(20)?;
    let zr = Real::from_f64(z, p);
    let k = elliptic_k(&zr, p)?.to_f64();
    let e = elliptic_e(&zr, p)?.to_f64();
    let t = 2.0 / z;
    Ok((2.0 * k, t * (t - 1.0) * k - t * t * e))
}

/// Reference values of r(0; z) and r(1; z) from -log(1-z).
pub fn r1_initial(z: f64) -> (f64, f64) {
    let li1 = -(-z).ln_1p();
    let t = 1.0 / z;
    (t * li1, t * t * (2.0 * t - 1.0) * li1 - 2.0 * t * t)
}

/// Basis constants (pi/Y, pi Y) for the double integrals and (omega_+, eta_+) for the triple ones.
pub fn lattice_bases() -> Result<((f64, f64), (f64, f64))> {
    let p = Precision::new(20)?;
    let y = constant(ConstantId::GammaQ4, p)?.value.to_f64();
    let w = constant(ConstantId::OmegaPlus, p)?.value.to_f64();
    let e = constant(ConstantId::EtaPlus, p)?.value.to_f64();
    let pi = std::f64::consts::PI;
    Ok(((pi / y, pi * y), (w, e)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub name: String,
    pub values: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn rec_check(name: String, values: Vec<f64>, residual: f64, tolerance: f64) -> RecursionCheck {
    RecursionCheck {
        name,
        values,
        residual,
        tolerance,
        passed: residual.abs() < tolerance,
    }
}

/// Numerical check of the difference equations on the quadrature values at small indices.
pub fn recursion_checks() -> Result<Vec<RecursionCheck>> {
    let s1 = QuadSpec::one_dim();
    let s2 = QuadSpec::two_dim();
    let s3 = QuadSpec::three_dim();
    let mut out = Vec::new();

    let i2: Vec<f64> = (0..3).map(|n| quad_i2_n(n, &s2).map(|v| v.value)).collect::<Result<_>>()?;
    out.push(rec_check(
        "(2n+1)^2 I2(n+1) = (44n^2+1) I2(n) + (2n-1)^2 I2(n-1), n=1".into(),
        i2.clone(),
        9.0 * i2[2] - 45.0 * i2[1] - i2[0],
        1e-5,
    ));

    let i3: Vec<f64> = (0..3).map(|n| quad_i3_n(n, &s3).map(|v| v.value)).collect::<Result<_>>()?;
    out.push(rec_check(
        "(2n+1)^3 I3(n+1) = 4n(68n^2+3) I3(n) - (2n-1)^3 I3(n-1), n=1".into(),
        i3.clone(),
        27.0 * i3[2] - 284.0 * i3[1] + i3[0],
        1e-3,
    ));

    for z in [0.5, -1.0] {
        let v: Vec<f64> = (0..3).map(|n| quad_i1(n as f64, z, &s1).map(|v| v.value)).collect::<Result<_>>()?;
        out.push(rec_check(
            format!("z^2(2n+1) I1(n+1) - 4n(2-z) I1(n) + (2n-1) I1(n-1) = 0, n=1, z={z}"),
            v.clone(),
            z * z * 3.0 * v[2] - 4.0 * (2.0 - z) * v[1] + v[0],
            1e-8,
        ));
    }

    let z = 0.5;
    let r: Vec<f64> = (0..3).map(|n| quad_r1(n, z, &s1).map(|v| v.value)).collect::<Result<_>>()?;
    out.push(rec_check(
        format!("z^2(n+1) r(n+1) - (2-z)(2n+1) r(n) + n r(n-1) = 0, n=1, z={z}"),
        r.clone(),
        z * z * 2.0 * r[2] - (2.0 - z) * 3.0 * r[1] + r[0],
        1e-8,
    ));

    for nu in [1.25, 2.25] {
        let v: Vec<f64> = [nu - 1.0, nu, nu + 1.0]
            .iter()
            .map(|&x| quad_r3(x, &s3).map(|v| v.value))
            .collect::<Result<_>>()?;
        let res = (nu + 1.0).powi(3) * v[2] - (2.0 * nu + 1.0) * (17.0 * nu * nu + 17.0 * nu + 5.0) * v[1]
            + nu.powi(3) * v[0];
        out.push(rec_check(
            format!("(v+1)^3 r(v+1) - (2v+1)(17v^2+17v+5) r(v) + v^3 r(v-1) = 0, v={nu}"),
            v,
            res,
            1e-3,
        ));
    }
    Ok(out)
}

/// Whether d * x is an integer.
pub fn scales_to_integer(d: &BigInt, x: &Q) -> bool {
    (Q::from_integer(d.clone()) * x).is_integer()
}

/// Largest |x| among a list of rationals, as f64 (for growth fits).
pub fn max_abs(xs: &[Q]) -> f64 {
    xs.iter().map(|x| qf(&x.abs())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_initial() {
        assert_eq!(i2_coords(0), (qi(0), q(-1, 2)));
        assert_eq!(i2_coords(1), (qi(-20), q(-1, 4)));
        assert_eq!(i2_coords(2), (qi(-100), q(-47, 36)));
        assert_eq!(i3_coords(0), (qi(8), qi(0)));
        assert_eq!(i3_coords(1), (qi(-56), q(-3, 2)));
        assert_eq!(i3_coords(2), (q(-1768, 3), q(-142, 9)));
    }

    #[test]
    fn big_apery_values() {
        let v: Vec<BigInt> = (0..5).map(big_apery).collect();
        let want: Vec<BigInt> = [1, 5, 73, 1445, 33001].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn uniform_half_matrix() {
        let c = cmatrix3(&Params3::uniform(q(1, 2)));
        assert!(c.values.iter().all(|v| *v == q(1, 2)));
        let c = cmatrix2(&Params2::uniform(q(1, 2)));
        assert_eq!(c.values.len(), 10);
        assert!(c.values.iter().all(|v| *v == q(1, 2)));
    }

    #[test]
    fn convergence_examples() {
        assert!(convergent3_ok(&Params3::uniform(q(1, 2))));
        let mut a = Params3::uniform(q(1, 2));
        a.0[1] = q(-3, 2);
        assert!(!convergent3_ok(&a));
        let a = Params3([q(1, 2), q(3, 2), q(1, 2), q(1, 2), q(3, 2), q(1, 2)]);
        assert!(convergent3_ok(&a));
    }
}
