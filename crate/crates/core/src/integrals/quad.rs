//! Tensor double-exponential quadrature on the unit cube after x = sin^2(theta) on every axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// x = sin^2(theta), then tanh-sinh in theta on (0, pi/2).
    SinSquaredTanhSinh,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    /// Relative tolerance on the difference of successive levels.
    pub tol: f64,
    /// Finest level; the step is 2^-level.
    pub max_level: u32,
    pub transform: Transform,
}

const TOL_FLOOR: [f64; 3] = [1e-15, 1e-10, 1e-8];
const T_MAX: f64 = 3.2;

impl QuadSpec {
    /// Spec for a `dim`-dimensional integral; rejects tolerances below what f64 tensor rules reach.
    pub fn new(dim: usize, tol: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Domain(format!("quadrature dimension {dim} not in 1..=3")));
        }
        let floor = TOL_FLOOR[dim - 1];
        if !(tol >= floor) {
            return Err(Error::Domain(format!("tolerance {tol:e} below {floor:e} for dimension {dim}")));
        }
        let max_level = match dim {
            1 => 9,
            2 => 8,
            _ => 6,
        };
        Ok(QuadSpec {
            tol,
            max_level,
            transform: Transform::SinSquaredTanhSinh,
        })
    }

    pub fn one_dim() -> Self {
        Self::new(1, 1e-13).expect("valid")
    }

    pub fn two_dim() -> Self {
        Self::new(2, 1e-9).expect("valid")
    }

    pub fn three_dim() -> Self {
        Self::new(3, 1e-6).expect("valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadValue {
    pub value: f64,
    /// |difference| between the last two levels.
    pub error: f64,
    pub level: u32,
    pub evaluations: u64,
}

/// One axis node: x, 1 - x, and the weight including x^a (1-x)^b and the Jacobian.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    pub x: f64,
    pub xc: f64,
    pub w: f64,
}

/// Nodes for int_0^1 x^a (1-x)^b g(x) dx at step 2^-level.
pub(crate) fn nodes(level: u32, a: f64, b: f64) -> Vec<Node> {
    let h = 0.5f64.powi(level as i32);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let k_max = (T_MAX / h).ceil() as i64;
    let mut out = Vec::with_capacity(2 * k_max as usize + 1);
    for k in -k_max..=k_max {
        let t = k as f64 * h;
        let u = half_pi * t.sinh();
        let d0 = half_pi / (1.0 + (-2.0 * u).exp());
        let d1 = half_pi / (1.0 + (2.0 * u).exp());
        let (s, c) = (d0.sin(), d1.sin());
        let sech = 1.0 / u.cosh();
        let dtheta = half_pi * half_pi * 0.5 * t.cosh() * sech * sech;
        let w = h * dtheta * 2.0 * s.powf(2.0 * a + 1.0) * c.powf(2.0 * b + 1.0);
        if w.is_finite() && w != 0.0 {
            out.push(Node { x: s * s, xc: c * c, w });
        }
    }
    out
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn refine<F>(spec: &QuadSpec, start: u32, what: &str, mut level_sum: F) -> Result<QuadValue>
where
    F: FnMut(u32) -> (f64, u64),
{
    let (mut prev, mut evals) = level_sum(start);
    let mut last_err = f64::INFINITY;
    for level in start + 1..=spec.max_level {
        let (cur, e) = level_sum(level);
        evals += e;
        let err = (cur - prev).abs();
        if err <= spec.tol * cur.abs().max(1.0) {
            return Ok(QuadValue {
                value: cur,
                error: err,
                level,
                evaluations: evals,
            });
        }
        prev = cur;
        last_err = err;
    }
    Err(Error::QuadratureBudget(format!(
        "{what}: level {} reached with difference {last_err:e} above {:e}",
        spec.max_level, spec.tol
    )))
}

/// int_0^1 x^a (1-x)^b g(x, 1-x) dx.
pub fn integrate1<G>(spec: &QuadSpec, (a, b): (f64, f64), g: G) -> Result<QuadValue>
where
    G: Fn(f64, f64) -> f64,
{
    refine(spec, 3, "1d", |level| {
        let ns = nodes(level, a, b);
        let s = ns.iter().map(|n| finite_or_zero(n.w * g(n.x, n.xc))).sum();
        (s, ns.len() as u64)
    })
}

/// int over [0,1]^2 with per-axis exponent pairs.
pub fn integrate2<G>(spec: &QuadSpec, ex: (f64, f64), ey: (f64, f64), g: G) -> Result<QuadValue>
where
    G: Fn(f64, f64, f64, f64) -> f64 + Sync,
{
    refine(spec, 3, "2d", |level| {
        let nx = nodes(level, ex.0, ex.1);
        let ny = nodes(level, ey.0, ey.1);
        let s = nx
            .par_iter()
            .map(|p| {
                let inner: f64 = ny.iter().map(|q| finite_or_zero(q.w * g(p.x, p.xc, q.x, q.xc))).sum();
                finite_or_zero(p.w * inner)
            })
            .sum();
        (s, (nx.len() * ny.len()) as u64)
    })
}

/// int over [0,1]^3 with per-axis exponent pairs. `g` receives (x, 1-x) for each axis.
pub fn integrate3<G>(spec: &QuadSpec, ex: (f64, f64), ey: (f64, f64), ez: (f64, f64), g: G) -> Result<QuadValue>
where
    G: Fn([f64; 2], [f64; 2], [f64; 2]) -> f64 + Sync,
{
    refine(spec, 2, "3d", |level| {
        let nx = nodes(level, ex.0, ex.1);
        let ny = nodes(level, ey.0, ey.1);
        let nz = nodes(level, ez.0, ez.1);
        let s = nx
            .par_iter()
            .map(|p| {
                let mut acc = 0.0;
                for q in &ny {
                    let mut inner = 0.0;
                    for r in &nz {
                        inner += finite_or_zero(r.w * g([p.x, p.xc], [q.x, q.xc], [r.x, r.xc]));
                    }
                    acc += finite_or_zero(q.w * inner);
                }
                finite_or_zero(p.w * acc)
            })
            .sum();
        (s, (nx.len() * ny.len() * nz.len()) as u64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_integrals() {
        // B(1/2, 1/2) = pi and B(3/2, 5/2) = pi/16.
        let s = QuadSpec::one_dim();
        let v = integrate1(&s, (-0.5, -0.5), |_, _| 1.0).unwrap();
        assert!((v.value - std::f64::consts::PI).abs() < 1e-13);
        let v = integrate1(&s, (0.5, 1.5), |_, _| 1.0).unwrap();
        assert!((v.value - std::f64::consts::PI / 16.0).abs() < 1e-14);
    }

    #[test]
    fn log_singularity() {
        // int_0^1 ln(x)^2 dx = 2
        let v = integrate1(&QuadSpec::one_dim(), (0.0, 0.0), |x, _| x.ln().powi(2)).unwrap();
        assert!((v.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tolerance_floors() {
        assert!(QuadSpec::new(3, 1e-9).is_err());
        assert!(QuadSpec::new(2, 1e-10).is_ok());
        assert!(QuadSpec::new(1, 1e-16).is_err());
        assert!(QuadSpec::new(4, 1e-3).is_err());
    }
}
