//! Permutation groups acting on the parameter matrices of the triple and double integrals.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfcore::Q;
use crate::error::{Error, Result};
use crate::integrals::{
    cmatrix2, cmatrix3, convergent2_ok, convergent3_ok, i2_coords, i3_coords, normalized2, normalized3, recover2,
    recover3, CMatrix, Layout, Params2, Params3, QuadSpec,
};

pub const CLOSURE_BOUND: usize = 1_000_000;

/// Two cells (i, j) whose values are exchanged.
pub type CellSwap = ((usize, usize), (usize, usize));

/// Bijection on the cells of a layout: the value in cell k moves to cell `map[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPerm {
    pub layout: Layout,
    pub map: Vec<usize>,
    pub name: String,
}

impl CellPerm {
    pub fn identity(layout: Layout) -> Self {
        CellPerm {
            layout,
            map: (0..layout.size()).collect(),
            name: "1".into(),
        }
    }

    /// From a list of cell transpositions ((i, j), (k, l)).
    pub fn from_swaps(layout: Layout, name: &str, swaps: &[CellSwap]) -> Self {
        let mut map: Vec<usize> = (0..layout.size()).collect();
        for &(a, b) in swaps {
            let ia = layout.index(a.0, a.1).expect("cell in layout");
            let ib = layout.index(b.0, b.1).expect("cell in layout");
            map.swap(ia, ib);
        }
        CellPerm {
            layout,
            map,
            name: name.into(),
        }
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map.iter().all(|&k| k < seen.len() && !std::mem::replace(&mut seen[k], true))
    }

    /// self after other: cell k goes first through `other`.
    pub fn after(&self, other: &CellPerm) -> CellPerm {
        CellPerm {
            layout: self.layout,
            map: other.map.iter().map(|&k| self.map[k]).collect(),
            name: format!("{}{}", self.name, other.name),
        }
    }

    pub fn inverse(&self) -> CellPerm {
        let mut map = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            map[v] = k;
        }
        CellPerm {
            layout: self.layout,
            map,
            name: format!("({})^-1", self.name),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.after(&p);
            k += 1;
        }
        k
    }

    /// Cells moved by the permutation.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let cells = self.layout.cells();
        self.map
            .iter()
            .enumerate()
            .filter(|(k, v)| k != *v)
            .map(|(k, _)| cells[k])
            .collect()
    }
}

impl fmt::Display for CellPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn row_swap(i: usize, j: usize, cols: std::ops::Range<usize>) -> Vec<CellSwap> {
    cols.map(|c| ((i, c), (j, c))).collect()
}

fn col_swap(i: usize, j: usize, rows: std::ops::Range<usize>) -> Vec<CellSwap> {
    rows.map(|r| ((r, i), (r, j))).collect()
}

/// a_1, a_2, a_3 (swap row j with row 0), b (swap the last two columns), h.
pub fn generators_g3() -> Vec<CellPerm> {
    let l = Layout::Triple;
    let mut g: Vec<CellPerm> = (1..4)
        .map(|j| CellPerm::from_swaps(l, &format!("a{j}"), &row_swap(j, 0, 0..4)))
        .collect();
    g.push(CellPerm::from_swaps(l, "b", &col_swap(2, 3, 0..4)));
    g.push(CellPerm::from_swaps(
        l,
        "h",
        &[((0, 0), (2, 2)), ((0, 2), (2, 0)), ((1, 1), (3, 3)), ((1, 3), (3, 1))],
    ));
    g
}

/// a_1, a_2 (swap row j with row 3 in the block), b (swap the last two columns), h.
pub fn generators_g2() -> Vec<CellPerm> {
    let l = Layout::Double;
    let mut g: Vec<CellPerm> = (1..3)
        .map(|j| CellPerm::from_swaps(l, &format!("a{j}"), &row_swap(j, 3, 1..4)))
        .collect();
    g.push(CellPerm::from_swaps(l, "b", &col_swap(2, 3, 1..4)));
    g.push(CellPerm::from_swaps(
        l,
        "h",
        &[((0, 0), (2, 2)), ((1, 1), (3, 3)), ((1, 3), (3, 1))],
    ));
    g
}

/// Group elements with the generator word (indices into the generator list) reaching each.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    pub layout: Layout,
    pub generators: Vec<CellPerm>,
    pub elements: Vec<CellPerm>,
    pub words: Vec<Vec<usize>>,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn word_string(&self, k: usize) -> String {
        if self.words[k].is_empty() {
            return "1".into();
        }
        self.words[k]
            .iter()
            .map(|&g| self.generators[g].name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        let set: std::collections::HashSet<&Vec<usize>> = self.elements.iter().map(|e| &e.map).collect();
        self.elements.iter().all(|e| set.contains(&e.inverse().map))
            && self
                .elements
                .iter()
                .all(|e| self.generators.iter().all(|g| set.contains(&g.after(e).map)))
    }
}

/// Breadth-first closure under left multiplication by the generators.
pub fn group_closure(gens: &[CellPerm]) -> Result<GroupClosure> {
    let layout = gens
        .first()
        .map(|g| g.layout)
        .ok_or_else(|| Error::Domain("no generators".into()))?;
    if let Some(g) = gens.iter().find(|g| g.layout != layout || !g.is_bijection()) {
        return Err(Error::Domain(format!("generator {g} is not a permutation of the common cell set")));
    }
    let id = CellPerm::identity(layout);
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(id.map.clone(), 0);
    let mut elements = vec![id];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            let next = g.after(&elements[k]);
            if index.contains_key(&next.map) {
                continue;
            }
            if elements.len() >= CLOSURE_BOUND {
                return Err(Error::ClosureBound(CLOSURE_BOUND));
            }
            let mut word = vec![gi];
            word.extend_from_slice(&words[k]);
            index.insert(next.map.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(CellPerm {
                name: word.iter().map(|&g| gens[g].name.as_str()).collect::<Vec<_>>().join("."),
                ..next
            });
            words.push(word);
        }
    }
    Ok(GroupClosure {
        layout,
        generators: gens.to_vec(),
        elements,
        words,
    })
}

pub fn apply(perm: &CellPerm, c: &CMatrix) -> Result<CMatrix> {
    if perm.layout != c.layout {
        return Err(Error::Domain("permutation and matrix use different layouts".into()));
    }
    let mut values = c.values.clone();
    for (k, &to) in perm.map.iter().enumerate() {
        values[to] = c.values[k].clone();
    }
    Ok(CMatrix {
        layout: c.layout,
        values,
    })
}

/// The k largest elements with multiplicity, descending.
pub fn successive_maxima(multiset: &[Q], k: usize) -> Result<Vec<Q>> {
    if k > multiset.len() {
        return Err(Error::Domain(format!("{k} maxima requested from {} elements", multiset.len())));
    }
    let mut v = multiset.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v.truncate(k);
    Ok(v)
}

/// d_N = lcm(1, ..., N), with d_0 = 1.
pub fn lcm_d(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// d_(2m) for a half-integer maximum m; nonpositive arguments give 1.
fn d_of_twice(m: &Q) -> BigInt {
    let t = (m * Q::from_integer(BigInt::from(2))).floor().to_integer();
    lcm_d(t.to_u64().unwrap_or(0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegralityRow {
    pub n: usize,
    /// Successive maxima of the profile multiset.
    pub maxima: Vec<String>,
    pub multiplier: String,
    pub coords: (String, String),
    pub scaled: (String, String),
    pub integral: bool,
    /// Smallest extra integer factor that makes both coordinates integral.
    pub cofactor: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub family: String,
    pub rows: Vec<IntegralityRow>,
    pub passed: bool,
}

impl IntegralityReport {
    pub fn failures(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.integral).map(|r| r.n).collect()
    }
}

fn integrality(family: &str, n_max: usize, k: usize, c_of: impl Fn(usize) -> CMatrix, coords: impl Fn(usize) -> (Q, Q)) -> IntegralityReport {
    let rows: Vec<IntegralityRow> = (1..=n_max)
        .map(|n| {
            let maxima = successive_maxima(&c_of(n).values, k).expect("k within size");
            let d: BigInt = maxima.iter().map(d_of_twice).product();
            let (x, y) = coords(n);
            let dq = Q::from_integer(d.clone());
            let (sx, sy) = (&dq * &x, &dq * &y);
            let cofactor = sx.denom().lcm(sy.denom());
            IntegralityRow {
                n,
                maxima: maxima.iter().map(|m| m.to_string()).collect(),
                multiplier: d.to_string(),
                coords: (x.to_string(), y.to_string()),
                integral: sx.is_integer() && sy.is_integer(),
                scaled: (sx.to_string(), sy.to_string()),
                cofactor: cofactor.to_string(),
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.integral);
    IntegralityReport {
        family: family.into(),
        rows,
        passed,
    }
}

/// d_(2n1) d_(2n2) d_(2n3) (alpha, beta)(n) in Z^2 along the all-(n-1/2) profile.
pub fn integrality3(n_max: usize) -> IntegralityReport {
    integrality(
        "triple",
        n_max,
        3,
        |n| cmatrix3(&Params3::profile(n as i64)),
        i3_coords,
    )
}

/// d_(2n1) d_(2n2) (p~, q~)(n) in Z^2 along the all-(n-1/2) profile.
pub fn integrality2(n_max: usize) -> IntegralityReport {
    integrality(
        "double",
        n_max,
        2,
        |n| cmatrix2(&Params2::profile(n as i64)),
        i2_coords,
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthFit {
    pub n_range: (usize, usize),
    /// Fitted slope of ln(d_(2n-1)^3 |alpha(n)|) against n.
    pub slope: f64,
    /// 6 + 4 ln(1 + sqrt 2)
    pub expected: f64,
    pub relative_error: f64,
}

/// Least-squares slope of ln(d_(2n-1)^3 |alpha(n)|) over the range.
pub fn growth_fit3(lo: usize, hi: usize) -> GrowthFit {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| {
            let (a, _) = i3_coords(n);
            let d = lcm_d(2 * n as u64 - 1);
            let d3 = Q::from_integer(d.pow(3));
            (n as f64, ln_q(&(d3 * a.abs())))
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let slope = num / den;
    let expected = 6.0 + 4.0 * (1.0 + 2f64.sqrt()).ln();
    GrowthFit {
        n_range: (lo, hi),
        slope,
        expected,
        relative_error: (slope / expected - 1.0).abs(),
    }
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_q(x: &Q) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanEntry {
    pub word: String,
    pub params: String,
    pub value: Option<f64>,
    pub deviation: Option<f64>,
    /// Why the element was skipped, when it was.
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub family: String,
    pub base_params: String,
    pub base_value: f64,
    pub group_order: usize,
    pub tolerance: f64,
    pub entries: Vec<ScanEntry>,
    pub max_deviation: f64,
    pub multiset_preserved: bool,
    pub passed: bool,
}

impl InvarianceReport {
    pub fn skipped(&self) -> usize {
        self.entries.iter().filter(|e| e.skipped.is_some()).count()
    }
}

/// Evenly spaced indices in BFS order, always including the identity.
fn sample_indices(order: usize, size: usize) -> Vec<usize> {
    if size >= order {
        return (0..order).collect();
    }
    let mut v: Vec<usize> = (0..size.max(1)).map(|k| k * order / size.max(1)).collect();
    v.dedup();
    v
}

/// Parameters of either family, for a common scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Params {
    Triple(Params3),
    Double(Params2),
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Triple(a) => write!(f, "{a}"),
            Params::Double(a) => write!(f, "{a}"),
        }
    }
}

impl Params {
    pub fn cmatrix(&self) -> CMatrix {
        match self {
            Params::Triple(a) => cmatrix3(a),
            Params::Double(a) => cmatrix2(a),
        }
    }

    pub fn convergent(&self) -> bool {
        match self {
            Params::Triple(a) => convergent3_ok(a),
            Params::Double(a) => convergent2_ok(a),
        }
    }

    pub fn recover(c: &CMatrix) -> Option<Params> {
        match c.layout {
            Layout::Triple => recover3(c).map(Params::Triple),
            Layout::Double => recover2(c).map(Params::Double),
        }
    }

    fn normalized(&self, spec: &QuadSpec) -> Result<f64> {
        match self {
            Params::Triple(a) => normalized3(a, spec).map(|v| v.value),
            Params::Double(a) => normalized2(a, spec).map(|v| v.value),
        }
    }
}

/// Compare the gamma-normalized integral at `a` with its values on the transformed parameters.
pub fn invariance_scan(a: &Params, sample_size: usize, spec: &QuadSpec) -> Result<InvarianceReport> {
    if !a.convergent() {
        return Err(Error::Domain(format!("integral diverges at {a}")));
    }
    let (gens, family) = match a {
        Params::Triple(_) => (generators_g3(), "triple"),
        Params::Double(_) => (generators_g2(), "double"),
    };
    let group = group_closure(&gens)?;
    let c = a.cmatrix();
    let base_multiset = c.multiset();
    let mut multiset_preserved = true;
    let mut images: Vec<(String, std::result::Result<Params, String>)> = Vec::new();
    for k in sample_indices(group.order(), sample_size) {
        let image = apply(&group.elements[k], &c)?;
        multiset_preserved &= image.multiset() == base_multiset;
        let res = match Params::recover(&image) {
            None => Err("image is not a parameter matrix of the family".to_string()),
            Some(p) if !p.convergent() => Err("transformed integral diverges".to_string()),
            Some(p) => Ok(p),
        };
        images.push((group.word_string(k), res));
    }
    // Distinct parameter tuples are integrated once.
    let mut distinct: BTreeMap<String, Params> = BTreeMap::new();
    distinct.insert(a.to_string(), a.clone());
    for (_, r) in &images {
        if let Ok(p) = r {
            distinct.entry(p.to_string()).or_insert_with(|| p.clone());
        }
    }
    let values: BTreeMap<String, f64> = distinct
        .into_par_iter()
        .map(|(k, p)| p.normalized(spec).map(|v| (k, v)))
        .collect::<Result<_>>()?;
    let base_value = values[&a.to_string()];
    let mut max_deviation: f64 = 0.0;
    let entries = images
        .into_iter()
        .map(|(word, r)| match r {
            Ok(p) => {
                let v = values[&p.to_string()];
                let dev = (v - base_value).abs() / base_value.abs().max(f64::MIN_POSITIVE);
                max_deviation = max_deviation.max(dev);
                ScanEntry {
                    word,
                    params: p.to_string(),
                    value: Some(v),
                    deviation: Some(dev),
                    skipped: None,
                }
            }
            Err(why) => ScanEntry {
                word,
                params: String::new(),
                value: None,
                deviation: None,
                skipped: Some(why),
            },
        })
        .collect();
    let tolerance = 2.0 * spec.tol;
    Ok(InvarianceReport {
        family: family.into(),
        base_params: a.to_string(),
        base_value,
        group_order: group.order(),
        tolerance,
        entries,
        max_deviation,
        multiset_preserved,
        passed: multiset_preserved && max_deviation < tolerance,
    })
}
