//! Nilpotent representations of the preprojective algebra over a small prime
//! field, their submodule lattices, θ-semistability and Harder–Narasimhan
//! filtrations by exhaustive search.
//!
//! Matrices are `dim(dst) × dim(src)`, entries in `0..p`. The doubled quiver
//! has an arrow `e{a}{b}: a → b` per oriented edge and its dual `e{a}{b}*`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Bound;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::cartan_data::CartanData;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::lattices::Coweight;

pub type Matrix = Vec<Vec<u32>>;

/// Largest total dimension accepted by submodule enumeration.
pub const DEFAULT_DIM_CAP: usize = 6;
/// Largest number of submodules enumerated before refusing.
pub const SUBMODULE_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    /// Index of the partner in the doubled quiver.
    pub dual: usize,
    pub starred: bool,
}

/// Arrows of the doubled quiver: unstarred ones follow the fixed orientation;
/// a repeated edge gets a `#k` suffix on its `k`-th copy (`k ≥ 1`).
pub fn doubled_quiver(cd: &CartanData) -> Vec<Arrow> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in cd.orientation() {
        let k = seen.entry((a, b)).or_insert(0);
        let suffix = if *k == 0 { String::new() } else { format!("#{k}") };
        *k += 1;
        let base = format!("e{a}{b}{suffix}");
        let idx = out.len();
        out.push(Arrow { name: base.clone(), src: a, dst: b, dual: idx + 1, starred: false });
        out.push(Arrow { name: format!("{base}*"), src: b, dst: a, dual: idx, starred: true });
    }
    out
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut b, mut e) = (1u64, u64::from(a), p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % u64::from(p);
        }
        b = b * b % u64::from(p);
        e >>= 1;
    }
    r as u32
}

fn mat_vec(m: &Matrix, x: &[u32], p: u32) -> Vec<u32> {
    m.iter().map(|row| (row.iter().zip(x).map(|(a, b)| a * b).sum::<u32>()) % p).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize, p: u32) -> Matrix {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum::<u32>() % p).collect())
        .collect()
}

/// Row-reduced echelon basis of the span of `rows`; canonical per subspace.
pub fn rref(rows: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

fn in_span(basis: &[Vec<u32>], x: &[u32], p: u32) -> bool {
    if x.iter().all(|&c| c == 0) {
        return true;
    }
    let mut rows = basis.to_vec();
    rows.push(x.to_vec());
    rref(&rows, p).len() == basis.len()
}

/// Graded subspace given by an RREF basis per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule(pub Vec<Vec<Vec<u32>>>);

impl Submodule {
    pub fn dim_vector(&self) -> Vec<usize> {
        self.0.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(Vec::len).sum()
    }

    pub fn is_contained_in(&self, other: &Submodule, p: u32) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.iter().all(|x| in_span(b, x, p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    p: u32,
    dim: Vec<usize>,
    quiver: Vec<Arrow>,
    maps: Vec<Matrix>,
}

impl Rep {
    pub fn zero(cd: &CartanData, p: u32, dim: Vec<usize>) -> Result<Self> {
        if ![2, 3, 5, 7].contains(&p) {
            return Err(Error::Precondition(format!("p = {p} is not a supported small prime")));
        }
        if dim.len() != cd.num_nodes() {
            return Err(Error::Precondition(format!("dimension vector has {} entries, expected {}", dim.len(), cd.num_nodes())));
        }
        let quiver = doubled_quiver(cd);
        let maps = quiver.iter().map(|a| vec![vec![0; dim[a.src]]; dim[a.dst]]).collect();
        Ok(Self { p, dim, quiver, maps })
    }

    pub fn simple(cd: &CartanData, p: u32, i: usize) -> Result<Self> {
        let mut d = vec![0; cd.num_nodes()];
        d[i] = 1;
        Self::zero(cd, p, d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> &[usize] {
        &self.dim
    }

    pub fn total_dim(&self) -> usize {
        self.dim.iter().sum()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.quiver
    }

    pub fn map(&self, name: &str) -> Option<&Matrix> {
        self.quiver.iter().position(|a| a.name == name).map(|k| &self.maps[k])
    }

    /// Sets one arrow; entries are reduced mod `p`.
    pub fn set(&mut self, name: &str, m: Matrix) -> Result<()> {
        let k = self
            .quiver
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Parse(format!("unknown arrow {name}")))?;
        let a = &self.quiver[k];
        let rows_ok = m.len() == self.dim[a.dst];
        let cols_ok = m.iter().all(|r| r.len() == self.dim[a.src]);
        if !rows_ok || !cols_ok {
            return Err(Error::Precondition(format!(
                "arrow {name} needs a {}×{} matrix",
                self.dim[a.dst], self.dim[a.src]
            )));
        }
        self.maps[k] = m.into_iter().map(|r| r.into_iter().map(|x| x % self.p).collect()).collect();
        Ok(())
    }

    /// Relation matrix at `v`: `Σ_{e: v→w} M_{e*} M_e − Σ_{e: w→v} M_e M_{e*}` over unstarred `e`.
    pub fn relation_at(&self, v: usize) -> Matrix {
        let p = self.p;
        let n = self.dim[v];
        let mut out = vec![vec![0u32; n]; n];
        for (k, a) in self.quiver.iter().enumerate() {
            if a.starred {
                continue;
            }
            let e = &self.maps[k];
            let es = &self.maps[a.dual];
            let (term, negate) = if a.src == v {
                (mat_mul(es, e, self.dim[a.dst], n, p), false)
            } else if a.dst == v {
                (mat_mul(e, es, self.dim[a.src], n, p), true)
            } else {
                continue;
            };
            // a loop-free quiver, so src == dst never happens
            for i in 0..n {
                for j in 0..n {
                    let t = term[i][j];
                    out[i][j] = if negate { (out[i][j] + p - t) % p } else { (out[i][j] + t) % p };
                }
            }
        }
        out
    }

    pub fn satisfies_relation(&self) -> bool {
        (0..self.dim.len()).all(|v| self.relation_at(v).iter().all(|r| r.iter().all(|&x| x == 0)))
    }

    /// Image of a graded subspace under all arrows, as a spanning set per vertex.
    fn push_forward(&self, sub: &[Vec<Vec<u32>>]) -> Vec<Vec<Vec<u32>>> {
        let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.dim.len()];
        for (k, a) in self.quiver.iter().enumerate() {
            for x in &sub[a.src] {
                out[a.dst].push(mat_vec(&self.maps[k], x, self.p));
            }
        }
        out.into_iter()
            .zip(&self.dim)
            .map(|(rows, &d)| if d == 0 { Vec::new() } else { rref(&rows, self.p) })
            .collect()
    }

    /// `M·I^N = 0` for `N` the total dimension: the chain of path images dies.
    pub fn is_nilpotent(&self) -> bool {
        let mut cur: Vec<Vec<Vec<u32>>> = self.full_space().0;
        for _ in 0..=self.total_dim() {
            if cur.iter().all(Vec::is_empty) {
                return true;
            }
            cur = self.push_forward(&cur);
        }
        cur.iter().all(Vec::is_empty)
    }

    /// Relation and nilpotency; shapes are checked on construction.
    pub fn validate(&self) -> bool {
        self.satisfies_relation() && self.is_nilpotent()
    }

    pub fn full_space(&self) -> Submodule {
        Submodule(
            self.dim
                .iter()
                .map(|&d| (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect())
                .collect(),
        )
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule(vec![Vec::new(); self.dim.len()])
    }

    /// Smallest submodule containing `gens`.
    pub fn closure(&self, gens: Vec<Vec<Vec<u32>>>) -> Submodule {
        let mut cur: Vec<Vec<Vec<u32>>> = gens.into_iter().map(|g| rref(&g, self.p)).collect();
        loop {
            let img = self.push_forward(&cur);
            let mut grew = false;
            for (v, rows) in img.into_iter().enumerate() {
                for x in rows {
                    if !in_span(&cur[v], &x, self.p) {
                        cur[v].push(x);
                        cur[v] = rref(&cur[v], self.p);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Submodule(cur);
            }
        }
    }

    /// Every submodule, by closing under "add one generator" from `0`.
    pub fn submodules(&self, dim_cap: usize) -> Result<Vec<Submodule>> {
        if self.total_dim() > dim_cap {
            return Err(Error::CapExceeded(format!(
                "total dimension {} exceeds the enumeration cap {dim_cap}",
                self.total_dim()
            )));
        }
        let points: Vec<Vec<Vec<u32>>> = self.dim.iter().map(|&d| projective_points(d, self.p)).collect();
        let zero = self.zero_submodule();
        let mut seen: HashSet<Submodule> = HashSet::from([zero.clone()]);
        let mut out = vec![zero.clone()];
        let mut queue = VecDeque::from([zero]);
        while let Some(u) = queue.pop_front() {
            for (v, pts) in points.iter().enumerate() {
                for x in pts {
                    if in_span(&u.0[v], x, self.p) {
                        continue;
                    }
                    let mut gens = u.0.clone();
                    gens[v].push(x.clone());
                    let w = self.closure(gens);
                    if seen.insert(w.clone()) {
                        if out.len() >= SUBMODULE_CAP {
                            return Err(Error::CapExceeded(format!("more than {SUBMODULE_CAP} submodules")));
                        }
                        out.push(w.clone());
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn submodule_dim_vectors(&self, dim_cap: usize) -> Result<BTreeSet<Vec<usize>>> {
        Ok(self.submodules(dim_cap)?.iter().map(Submodule::dim_vector).collect())
    }

    pub fn to_json(&self) -> Value {
        let arrows: serde_json::Map<String, Value> =
            self.quiver.iter().zip(&self.maps).map(|(a, m)| (a.name.clone(), json!(m))).collect();
        json!({"p": self.p, "dim": self.dim, "arrows": arrows})
    }

    /// Parses `{"p":…,"dim":[…],"arrows":{name: matrix}}`; omitted arrows are zero.
    pub fn from_json(cd: &CartanData, value: &Value) -> Result<Self> {
        let p = value["p"].as_u64().ok_or_else(|| Error::Parse("rep needs an integer \"p\"".into()))?;
        let dim: Vec<usize> = serde_json::from_value(value["dim"].clone())?;
        let mut rep = Rep::zero(cd, p as u32, dim)?;
        if let Some(obj) = value.get("arrows") {
            let obj = obj.as_object().ok_or_else(|| Error::Parse("\"arrows\" must be an object".into()))?;
            for (name, m) in obj {
                let m: Matrix = serde_json::from_value(m.clone())?;
                // a d×0 matrix may be written as [] for any d
                let m = if rep.map(name).is_some_and(|cur| m.is_empty() && cur.iter().all(Vec::is_empty)) {
                    rep.map(name).cloned().unwrap_or_default()
                } else {
                    m
                };
                rep.set(name, m)?;
            }
        }
        Ok(rep)
    }

    /// Rejection sampler for valid reps of a given dimension vector.
    pub fn sample_valid<R: Rng>(cd: &CartanData, p: u32, dim: Vec<usize>, rng: &mut R, tries: usize) -> Result<Option<Self>> {
        let mut rep = Rep::zero(cd, p, dim)?;
        for _ in 0..tries {
            for m in rep.maps.iter_mut() {
                for row in m.iter_mut() {
                    for x in row.iter_mut() {
                        *x = rng.gen_range(0..p);
                    }
                }
            }
            if rep.validate() {
                return Ok(Some(rep));
            }
        }
        Ok(None)
    }
}

/// Nonzero vectors of `F_p^d` whose first nonzero entry is `1`.
fn projective_points(d: usize, p: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (p as usize).pow(d as u32);
    for code in 1..total {
        let mut x = vec![0u32; d];
        let mut c = code;
        for slot in x.iter_mut() {
            *slot = (c % p as usize) as u32;
            c /= p as usize;
        }
        if x.iter().find(|&&c| c != 0) == Some(&1) {
            out.push(x);
        }
    }
    out
}

/// Slope of a module with dimension vector `d` (composition multiplicities).
pub fn slope_of_dims(cd: &CartanData, theta: &Coweight, d: &[usize]) -> Result<Rational> {
    let di: Vec<i64> = d.iter().map(|&x| x as i64).collect();
    let class = cd.composition_class(&di);
    debug_assert_eq!(cd.dimension(&class), Rational::from_integer(di.iter().sum::<i64>().into()));
    cd.slope(theta, &class)
}

fn diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Submodules `0 = U_0 ⊂ U_1 ⊂ … ⊂ U_s = M` with factor slopes strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnFiltration {
    pub dims: Vec<Vec<usize>>,
    pub slopes: Vec<Rational>,
}

impl HnFiltration {
    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dims": self.dims,
            "slopes": self.slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Submodule lattice with the slope data needed for stability questions.
pub struct Analysis<'a> {
    cd: &'a CartanData,
    theta: Coweight,
    p: u32,
    subs: Vec<Submodule>,
}

impl<'a> Analysis<'a> {
    pub fn new(cd: &'a CartanData, rep: &Rep, theta: &Coweight, dim_cap: usize) -> Result<Self> {
        if !rep.validate() {
            return Err(Error::Precondition("representation fails the relation or nilpotency".into()));
        }
        Ok(Self { cd, theta: theta.clone(), p: rep.p, subs: rep.submodules(dim_cap)? })
    }

    pub fn submodules(&self) -> &[Submodule] {
        &self.subs
    }

    fn factor_slope(&self, top: &Submodule, bottom: &Submodule) -> Result<Rational> {
        slope_of_dims(self.cd, &self.theta, &diff(&top.dim_vector(), &bottom.dim_vector()))
    }

    /// Submodules `V` with `bottom ⊊ V ⊆ top`.
    fn between(&self, bottom: &Submodule, top: &Submodule) -> Vec<&Submodule> {
        self.subs
            .iter()
            .filter(|v| {
                v.total_dim() > bottom.total_dim() && bottom.is_contained_in(v, self.p) && v.is_contained_in(top, self.p)
            })
            .collect()
    }

    /// `top / bottom` is semistable.
    pub fn factor_semistable(&self, bottom: &Submodule, top: &Submodule) -> Result<bool> {
        let mu = self.factor_slope(top, bottom)?;
        for v in self.between(bottom, top) {
            if self.factor_slope(v, bottom)? > mu {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_semistable(&self) -> Result<bool> {
        let zero = &self.subs[0];
        let full = self.subs.iter().max_by_key(|s| s.total_dim()).expect("lattice has the zero module");
        if full.total_dim() == 0 {
            return Ok(true);
        }
        self.factor_semistable(zero, full)
    }

    /// Greedy filtration: repeatedly take, above the current step, the submodule
    /// of maximal factor slope, then maximal dimension, then least dimension vector.
    pub fn hn_filtration(&self) -> Result<HnFiltration> {
        let full = self.subs.iter().max_by_key(|s| s.total_dim()).expect("lattice has the zero module").clone();
        let mut cur = self.subs[0].clone();
        let mut dims = vec![cur.dim_vector()];
        let mut slopes = Vec::new();
        while cur.total_dim() < full.total_dim() {
            let mut best: Option<(Rational, usize, Vec<usize>, &Submodule)> = None;
            for v in self.between(&cur, &full) {
                let key = (self.factor_slope(v, &cur)?, v.total_dim(), v.dim_vector());
                let better = match &best {
                    None => true,
                    Some((s, t, d, _)) => key.0 > *s || (key.0 == *s && (key.1 > *t || (key.1 == *t && key.2 < *d))),
                };
                if better {
                    best = Some((key.0, key.1, key.2, v));
                }
            }
            let (s, _, d, v) = best.ok_or_else(|| Error::Internal("no submodule above a proper step".into()))?;
            if slopes.last().is_some_and(|last| &s >= last) {
                return Err(Error::Internal("HN slopes are not strictly decreasing".into()));
            }
            slopes.push(s);
            dims.push(d);
            cur = v.clone();
        }
        Ok(HnFiltration { dims, slopes })
    }

    /// Every chain of submodules with semistable factors and strictly
    /// decreasing slopes; by uniqueness there is exactly one.
    pub fn exhaustive_hn_chains(&self) -> Result<Vec<HnFiltration>> {
        let full = self.subs.iter().max_by_key(|s| s.total_dim()).expect("lattice has the zero module").clone();
        let mut out = Vec::new();
        let mut stack = vec![(self.subs[0].clone(), vec![self.subs[0].dim_vector()], Vec::<Rational>::new())];
        while let Some((cur, dims, slopes)) = stack.pop() {
            if cur.total_dim() == full.total_dim() {
                out.push(HnFiltration { dims, slopes });
                continue;
            }
            for v in self.between(&cur, &full) {
                let s = self.factor_slope(v, &cur)?;
                if slopes.last().is_some_and(|last| &s >= last) || !self.factor_semistable(&cur, v)? {
                    continue;
                }
                let mut d2 = dims.clone();
                d2.push(v.dim_vector());
                let mut s2 = slopes.clone();
                s2.push(s);
                stack.push((v.clone(), d2, s2));
            }
        }
        Ok(out)
    }
}

/// An interval of slopes with open, closed or infinite ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeInterval {
    pub lower: Bound<Rational>,
    pub upper: Bound<Rational>,
}

impl SlopeInterval {
    pub fn everything() -> Self {
        Self { lower: Bound::Unbounded, upper: Bound::Unbounded }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lo = match &self.lower {
            Bound::Included(a) => x >= a,
            Bound::Excluded(a) => x > a,
            Bound::Unbounded => true,
        };
        let hi = match &self.upper {
            Bound::Included(b) => x <= b,
            Bound::Excluded(b) => x < b,
            Bound::Unbounded => true,
        };
        lo && hi
    }
}

impl std::str::FromStr for SlopeInterval {
    type Err = Error;

    /// `(a,b]`, `[a,b)`, … with `-inf` and `inf` allowed as ends.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse interval {s:?}"));
        let open = s.chars().next().ok_or_else(bad)?;
        let close = s.chars().last().ok_or_else(bad)?;
        let inner = s.get(1..s.len() - 1).ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let end = |t: &str, closed: bool| -> Result<Bound<Rational>> {
            let t = t.trim();
            if matches!(t, "-inf" | "inf" | "+inf") {
                return Ok(Bound::Unbounded);
            }
            let x = parse_rational(t)?;
            Ok(if closed { Bound::Included(x) } else { Bound::Excluded(x) })
        };
        let lower = match open {
            '[' => end(a, true)?,
            '(' => end(a, false)?,
            _ => return Err(bad()),
        };
        let upper = match close {
            ']' => end(b, true)?,
            ')' => end(b, false)?,
            _ => return Err(bad()),
        };
        Ok(Self { lower, upper })
    }
}

impl fmt::Display for SlopeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Bound::Included(a) => write!(f, "[{a}")?,
            Bound::Excluded(a) => write!(f, "({a}")?,
            Bound::Unbounded => write!(f, "(-inf")?,
        }
        match &self.upper {
            Bound::Included(b) => write!(f, ",{b}]"),
            Bound::Excluded(b) => write!(f, ",{b})"),
            Bound::Unbounded => write!(f, ",inf)"),
        }
    }
}

impl CartanData {
    pub fn is_semistable(&self, rep: &Rep, theta: &Coweight) -> Result<bool> {
        Analysis::new(self, rep, theta, DEFAULT_DIM_CAP)?.is_semistable()
    }

    pub fn hn_filtration(&self, rep: &Rep, theta: &Coweight) -> Result<HnFiltration> {
        Analysis::new(self, rep, theta, DEFAULT_DIM_CAP)?.hn_filtration()
    }

    /// All HN factor slopes lie in `kappa`.
    pub fn stratum_membership(&self, rep: &Rep, theta: &Coweight, kappa: &SlopeInterval) -> Result<bool> {
        Ok(self.hn_filtration(rep, theta)?.slopes.iter().all(|s| kappa.contains(s)))
    }
}

/// `Σ d_i μ_i / Σ d_i` over the factors of a filtration.
pub fn weighted_slope(filtration: &HnFiltration) -> Rational {
    let mut num = Rational::zero();
    let mut den = 0i64;
    for (k, s) in filtration.slopes.iter().enumerate() {
        let d: usize = diff(&filtration.dims[k + 1], &filtration.dims[k]).iter().sum();
        num += s * Rational::from_integer((d as i64).into());
        den += d as i64;
    }
    if den == 0 {
        return Rational::zero();
    }
    num / Rational::from_integer(den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::FiniteCoweight;
    use crate::rational::q;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> CartanData {
        CartanData::from_name("A2").unwrap()
    }

    /// `θ̌` with prescribed simple slopes. `μ(S_i) = (θ̌, w̃0⁻¹[S_i])` and
    /// `w̃0⁻¹[S_i] = α_{κ(i)}` for finite `i`.
    fn theta_with_simple_slopes(cd: &CartanData, mu: &[i64]) -> Coweight {
        let w = cd.twisted_longest_element();
        let mut coords = vec![Rational::zero(); cd.num_nodes()];
        for i in cd.finite_nodes() {
            assert_eq!(w.apply_inverse(&cd.simple_class(i)), cd.alpha(cd.kappa(i)));
            coords[cd.kappa(i)] = q(mu[i]);
        }
        let s0 = w.apply_inverse(&cd.simple_class(0));
        let rest: Rational = cd.finite_nodes().map(|i| &coords[i] * q(s0[i])).sum();
        coords[0] = (q(mu[0]) - rest) / q(s0[0]);
        let theta = Coweight::new(coords);
        for (i, &m) in mu.iter().enumerate() {
            assert_eq!(cd.slope(&theta, &cd.simple_class(i)).unwrap(), q(m));
        }
        theta
    }

    fn ext_10(cd: &CartanData) -> Rep {
        // S_0 on top of S_1: the arrow e01: 0 → 1 is nonzero, so S_1 is the only proper sub
        let mut r = Rep::zero(cd, 2, vec![1, 1, 0]).unwrap();
        r.set("e01", vec![vec![1]]).unwrap();
        r
    }

    #[test]
    fn quiver_names() {
        let c = a2();
        let names: Vec<String> = doubled_quiver(&c).into_iter().map(|a| a.name).collect();
        assert_eq!(names, ["e01", "e01*", "e02", "e02*", "e12", "e12*"]);
        let a1 = CartanData::from_name("A1").unwrap();
        let names: Vec<String> = doubled_quiver(&a1).into_iter().map(|a| a.name).collect();
        assert_eq!(names, ["e01", "e01*", "e01#1", "e01#1*"]);
    }

    #[test]
    fn validation_examples() {
        let c = a2();
        assert!(Rep::simple(&c, 2, 1).unwrap().validate());
        assert!(ext_10(&c).validate());
        let mut bad = Rep::zero(&c, 3, vec![1, 1, 0]).unwrap();
        bad.set("e01", vec![vec![1]]).unwrap();
        bad.set("e01*", vec![vec![1]]).unwrap();
        assert!(!bad.satisfies_relation());
        assert!(!bad.validate());
        assert!(bad.set("e01", vec![vec![1, 0]]).is_err());
        // the relation holds but the cycle 0 → 1 → 0 is not nilpotent
        let mut cyc = Rep::zero(&c, 2, vec![1, 1, 1]).unwrap();
        cyc.set("e01", vec![vec![1]]).unwrap();
        cyc.set("e12", vec![vec![1]]).unwrap();
        cyc.set("e02*", vec![vec![1]]).unwrap();
        assert!(cyc.satisfies_relation());
        assert!(!cyc.is_nilpotent());
    }

    #[test]
    fn json_round_trip() {
        let c = a2();
        let r = ext_10(&c);
        let j = r.to_json();
        assert_eq!(j["arrows"]["e01"], json!([[1]]));
        assert_eq!(Rep::from_json(&c, &j).unwrap(), r);
        let sparse = json!({"p": 2, "dim": [1, 1, 0], "arrows": {"e01": [[1]]}});
        assert_eq!(Rep::from_json(&c, &sparse).unwrap(), r);
        assert!(Rep::from_json(&c, &json!({"p": 4, "dim": [1, 0, 0]})).is_err());
    }

    #[test]
    fn submodule_examples() {
        let c = a2();
        let s = Rep::simple(&c, 2, 1).unwrap();
        assert_eq!(s.submodule_dim_vectors(6).unwrap(), BTreeSet::from([vec![0, 0, 0], vec![0, 1, 0]]));
        let ds = Rep::zero(&c, 3, vec![0, 1, 1]).unwrap();
        assert_eq!(ds.submodule_dim_vectors(6).unwrap().len(), 4);
        let e = ext_10(&c);
        assert_eq!(
            e.submodule_dim_vectors(6).unwrap(),
            BTreeSet::from([vec![0, 0, 0], vec![0, 1, 0], vec![1, 1, 0]])
        );
        assert!(Rep::zero(&c, 2, vec![3, 2, 2]).unwrap().submodules(6).is_err());
        // a 2-dimensional space at one vertex with zero maps has p + 1 lines
        assert_eq!(Rep::zero(&c, 5, vec![2, 0, 0]).unwrap().submodules(6).unwrap().len(), 8);
    }

    #[test]
    fn stability_examples() {
        let c = a2();
        let theta = theta_with_simple_slopes(&c, &[0, 2, 1]);
        assert!(c.is_semistable(&Rep::simple(&c, 2, 0).unwrap(), &theta).unwrap());
        let ds = Rep::zero(&c, 2, vec![0, 1, 1]).unwrap();
        assert!(!c.is_semistable(&ds, &theta).unwrap());
        let hn = c.hn_filtration(&ds, &theta).unwrap();
        assert_eq!(hn.dims, vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 1, 1]]);
        assert_eq!(hn.slopes, vec![q(2), q(1)]);
        let k: SlopeInterval = "(1,2]".parse().unwrap();
        assert!(!c.stratum_membership(&ds, &theta, &k).unwrap());
        let k: SlopeInterval = "[1,2]".parse().unwrap();
        assert!(c.stratum_membership(&ds, &theta, &k).unwrap());
        // S_0 over S_1: the only proper sub S_1 has slope 1 ≤ 2
        let e = ext_10(&c);
        let theta2 = theta_with_simple_slopes(&c, &[3, 1, 0]);
        assert!(c.is_semistable(&e, &theta2).unwrap());
        assert_eq!(c.hn_filtration(&e, &theta2).unwrap().len(), 1);
        let theta3 = theta_with_simple_slopes(&c, &[0, 0, 0]);
        let k: SlopeInterval = "(-inf,0]".parse().unwrap();
        assert!(c.stratum_membership(&e, &theta3, &k).unwrap());
    }

    #[test]
    fn three_step_chain() {
        let c = a2();
        let theta = theta_with_simple_slopes(&c, &[1, 3, 2]);
        let r = Rep::zero(&c, 2, vec![1, 1, 1]).unwrap();
        let an = Analysis::new(&c, &r, &theta, 6).unwrap();
        let hn = an.hn_filtration().unwrap();
        assert_eq!(hn.slopes, vec![q(3), q(2), q(1)]);
        assert_eq!(an.exhaustive_hn_chains().unwrap(), vec![hn]);
    }

    #[test]
    fn interval_parsing() {
        let k: SlopeInterval = "(-inf, 1/2]".parse().unwrap();
        assert!(k.contains(&q(-100)) && k.contains(&Rational::new(1.into(), 2.into())));
        assert!(!k.contains(&q(1)));
        assert_eq!(k.to_string(), "(-inf,1/2]");
        assert!("1,2".parse::<SlopeInterval>().is_err());
        assert!(SlopeInterval::everything().contains(&q(7)));
    }

    /// Every rep of `Ã2` over `F_2` with the given dimension vector that passes validation.
    fn all_valid_reps(c: &CartanData, dim: Vec<usize>) -> Vec<Rep> {
        let base = Rep::zero(c, 2, dim).unwrap();
        let slots: usize = base.maps.iter().map(|m| m.iter().map(Vec::len).sum::<usize>()).sum();
        let mut out = Vec::new();
        for code in 0u64..(1u64 << slots) {
            let mut r = base.clone();
            let mut bit = 0;
            for m in r.maps.iter_mut() {
                for row in m.iter_mut() {
                    for x in row.iter_mut() {
                        *x = ((code >> bit) & 1) as u32;
                        bit += 1;
                    }
                }
            }
            if r.validate() {
                out.push(r);
            }
        }
        out
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_reps() {
        let c = a2();
        let thetas = [
            theta_with_simple_slopes(&c, &[1, 3, 2]),
            theta_with_simple_slopes(&c, &[2, -1, 0]),
            theta_with_simple_slopes(&c, &[0, 0, 1]),
        ];
        let mut checked = 0;
        for d0 in 0..=2usize {
            for d1 in 0..=2usize {
                for d2 in 0..=2usize {
                    let total = d0 + d1 + d2;
                    if total == 0 || total > 4 {
                        continue;
                    }
                    for r in all_valid_reps(&c, vec![d0, d1, d2]) {
                        for th in &thetas {
                            let an = Analysis::new(&c, &r, th, 6).unwrap();
                            let hn = an.hn_filtration().unwrap();
                            assert_eq!(an.exhaustive_hn_chains().unwrap(), vec![hn.clone()]);
                            assert_eq!(an.is_semistable().unwrap(), hn.len() == 1);
                            assert_eq!(weighted_slope(&hn), slope_of_dims(&c, th, r.dim()).unwrap());
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000, "only {checked} cases");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn sampled_reps_are_everywhere_in_r(seed in any::<u64>(), dims in proptest::collection::vec(0usize..=2, 3), mu in proptest::collection::vec(-3i64..=3, 3)) {
            let c = a2();
            prop_assume!(dims.iter().sum::<usize>() > 0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some(r) = Rep::sample_valid(&c, 3, dims, &mut rng, 50).unwrap() {
                let th = theta_with_simple_slopes(&c, &mu);
                prop_assert!(c.stratum_membership(&r, &th, &SlopeInterval::everything()).unwrap());
                let hn = c.hn_filtration(&r, &th).unwrap();
                prop_assert!(hn.slopes.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }

    #[test]
    fn fundamental_coweight_slopes() {
        // embed(λ̌) gives μ(S_i) = λ̌ at κ(i); cross-check with slope_of_dims
        let c = a2();
        let l = FiniteCoweight::from_ints(&[2, 5]);
        let th = c.embed_finite_coweight(&l);
        for i in 1..=2 {
            let mut d = vec![0; 3];
            d[i] = 1;
            assert_eq!(slope_of_dims(&c, &th, &d).unwrap(), l.at(c.kappa(i)).clone());
        }
    }
}
