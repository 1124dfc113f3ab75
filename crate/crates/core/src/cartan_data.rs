//! Affine ADE diagrams: Cartan matrices, marks, Coxeter numbers, the
//! involution `κ` and diagram automorphisms.
//!
//! Node numbering is fixed per family; `0` is always the affine node and
//! `1..=e` are the finite nodes.
//!
//! | family | finite diagram                                      | affine node 0 joins |
//! |--------|-----------------------------------------------------|---------------------|
//! | `A_n`  | path `1 - 2 - … - n`                                | `1` and `n` (double edge for `A_1`) |
//! | `D_n`  | path `1 - … - (n-2)`, with `n-1`, `n` on `n-2`      | `2`                 |
//! | `E_n`  | path `1 - 3 - 4 - … - n`, with `2` on `4`           | `2` (E6), `1` (E7), `8` (E8) |
//!
//! The affine row of the Cartan matrix and the marks are derived from the
//! highest root found by root saturation; nothing is tabulated. The
//! orientation `Ω` points every edge from the lower to the higher index.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattices::RootVector;
use crate::weyl_braid::{self, WeylElement};

/// Subsets of nodes; always sorted.
pub type NodeSet = BTreeSet<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DynkinType {
    family: Family,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(Error::Config(format!("unsupported rank {rank} for family {family:?}")));
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Edges of the finite diagram on `1..=rank`.
    fn finite_edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A => (1..n).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            Family::E => {
                let mut e = vec![(1, 3), (2, 4)];
                e.extend((3..n).map(|i| (i, i + 1)));
                e
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("not an ADE type: {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        DynkinType::new(family, rank)
    }
}

impl TryFrom<String> for DynkinType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DynkinType> for String {
    fn from(t: DynkinType) -> String {
        t.to_string()
    }
}

/// Immutable data of an affine ADE diagram.
#[derive(Clone, Debug)]
pub struct CartanData {
    dynkin: DynkinType,
    cartan: Vec<Vec<i64>>,
    marks: Vec<i64>,
    coxeter_number: i64,
    kappa: Vec<usize>,
    orientation: Vec<(usize, usize)>,
    automorphisms: Vec<Vec<usize>>,
    positive_roots: Vec<RootVector>,
    roots: HashSet<RootVector>,
    w0: WeylElement,
    finite_group: OnceLock<std::result::Result<Vec<WeylElement>, String>>,
}

/// Positive roots of the finite system with Cartan matrix `cartan` restricted to
/// `nodes`, by closing the simple roots under the root-string rule
/// `β + α_i ∈ Δ ⟺ p − ⟨ǎ_i, β⟩ > 0` where `p` is the downward string length.
/// Vectors have full length `cartan.len()`.
fn saturate_roots(cartan: &[Vec<i64>], nodes: &[usize]) -> Vec<RootVector> {
    let n = cartan.len();
    let mut set: HashSet<RootVector> = HashSet::new();
    let mut all = Vec::new();
    let mut frontier: Vec<RootVector> = nodes.iter().map(|&i| RootVector::unit(n, i)).collect();
    for r in &frontier {
        set.insert(r.clone());
        all.push(r.clone());
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for &i in nodes {
                let ai = RootVector::unit(n, i);
                let mut p = 0i64;
                while set.contains(&(beta - &(&ai * (p + 1)))) {
                    p += 1;
                }
                let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                if p - pairing > 0 {
                    let gamma = beta + &ai;
                    if set.insert(gamma.clone()) {
                        all.push(gamma.clone());
                        next.push(gamma);
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

fn highest_of(roots: &[RootVector]) -> RootVector {
    roots
        .iter()
        .max_by_key(|r| r.height())
        .cloned()
        .expect("nonempty root system")
}

/// Highest root of the finite part, as a vector over `I` with zero affine coordinate.
pub fn highest_root(t: DynkinType) -> RootVector {
    let e = t.rank();
    let cartan = finite_cartan(t);
    let nodes: Vec<usize> = (1..=e).collect();
    highest_of(&saturate_roots(&cartan, &nodes))
}

/// `(e+1)×(e+1)` matrix with the finite Cartan matrix in rows/columns `1..=e`
/// and zeros in the affine row and column.
fn finite_cartan(t: DynkinType) -> Vec<Vec<i64>> {
    let n = t.rank() + 1;
    let mut a = vec![vec![0i64; n]; n];
    for i in 1..n {
        a[i][i] = 2;
    }
    for (i, j) in t.finite_edges() {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    a
}

/// All permutations `p` of `0..n` with `a[p(i)][p(j)] = a[i][j]`.
fn automorphisms_of(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    fn extend(a: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = a.len();
        let k = perm.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let consistent = a[k][k] == a[c][c] && (0..k).all(|j| a[k][j] == a[c][perm[j]]);
            if consistent {
                used[c] = true;
                perm.push(c);
                extend(a, perm, used, out);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(a, &mut Vec::new(), &mut vec![false; a.len()], &mut out);
    out
}

impl CartanData {
    pub fn new(dynkin: DynkinType) -> Result<Self> {
        let e = dynkin.rank();
        let n = e + 1;
        let mut cartan = finite_cartan(dynkin);
        let finite_nodes: Vec<usize> = (1..n).collect();
        let positive_roots = saturate_roots(&cartan, &finite_nodes);
        let phi = highest_of(&positive_roots);

        for j in 1..n {
            let pairing: i64 = (1..n).map(|k| cartan[j][k] * phi[k]).sum();
            cartan[0][j] = -pairing;
            cartan[j][0] = -pairing;
        }
        cartan[0][0] = 2;

        let mut marks = phi.coords().to_vec();
        marks[0] = 1;
        let coxeter_number = marks.iter().sum();
        for (i, row) in cartan.iter().enumerate() {
            let s: i64 = row.iter().zip(&marks).map(|(a, r)| a * r).sum();
            if s != 0 {
                return Err(Error::Internal(format!("marks not in the kernel at row {i}")));
            }
        }

        let w0 = weyl_braid::finite_longest_element(&cartan);
        let mut kappa = vec![0usize; n];
        for i in 1..n {
            let image = w0.apply(&RootVector::unit(n, i));
            kappa[i] = (1..n)
                .find(|&j| image == -RootVector::unit(n, j))
                .ok_or_else(|| Error::Internal("w0 does not permute the negative simple roots".into()))?;
        }

        let mut orientation = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..(-cartan[i][j]).max(0) {
                    orientation.push((i, j));
                }
            }
        }

        let automorphisms = automorphisms_of(&cartan);
        let mut roots: HashSet<RootVector> = positive_roots.iter().cloned().collect();
        roots.extend(positive_roots.iter().map(|r| -r.clone()));

        Ok(Self {
            dynkin,
            cartan,
            marks,
            coxeter_number,
            kappa,
            orientation,
            automorphisms,
            positive_roots,
            roots,
            w0,
            finite_group: OnceLock::new(),
        })
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?)
    }

    pub fn dynkin(&self) -> DynkinType {
        self.dynkin
    }

    /// Finite rank `e`.
    pub fn rank(&self) -> usize {
        self.dynkin.rank()
    }

    /// `|I| = e + 1`.
    pub fn num_nodes(&self) -> usize {
        self.rank() + 1
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.num_nodes()
    }

    pub fn finite_nodes(&self) -> std::ops::Range<usize> {
        1..self.num_nodes()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn mark(&self, i: usize) -> i64 {
        self.marks[i]
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    /// `κ(i)` with `w0(α_i) = −α_{κ(i)}`; `κ(0) = 0`.
    pub fn kappa(&self, i: usize) -> usize {
        self.kappa[i]
    }

    pub fn orientation(&self) -> &[(usize, usize)] {
        &self.orientation
    }

    /// Full automorphism group of the affine diagram (includes the identity).
    pub fn diagram_automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// Positive roots of the finite system, zero affine coordinate.
    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive_roots
    }

    pub fn finite_roots(&self) -> impl Iterator<Item = RootVector> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|r| -r.clone()))
    }

    pub fn is_finite_root(&self, v: &RootVector) -> bool {
        self.roots.contains(v)
    }

    pub fn highest_root(&self) -> RootVector {
        highest_of(&self.positive_roots)
    }

    /// Longest element of `W_f`, acting on `Y`.
    pub fn longest_element(&self) -> &WeylElement {
        &self.w0
    }

    pub(crate) fn finite_group_cache(
        &self,
    ) -> &OnceLock<std::result::Result<Vec<WeylElement>, String>> {
        &self.finite_group
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    /// Connected components of the subgraph of the finite diagram induced on `J`.
    pub fn connected_components(&self, j: &NodeSet) -> Vec<NodeSet> {
        let mut seen = NodeSet::new();
        let mut out = Vec::new();
        for &start in j {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = NodeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if !comp.insert(v) {
                    continue;
                }
                for &w in j {
                    if self.adjacent(v, w) && !comp.contains(&w) {
                        stack.push(w);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// `I_f ∖ J`.
    pub fn complement(&self, j: &NodeSet) -> NodeSet {
        self.finite_nodes().filter(|i| !j.contains(i)).collect()
    }

    /// Checks `J ⊆ I_f`.
    pub fn check_finite_subset(&self, j: &NodeSet) -> Result<()> {
        match j.iter().find(|&&i| i == 0 || i > self.rank()) {
            Some(i) => Err(Error::Precondition(format!("node {i} is not a finite node of {}", self.dynkin))),
            None => Ok(()),
        }
    }

    /// Highest root of the subsystem spanned by a connected `J ⊆ I_f`.
    pub fn sub_highest_root(&self, j: &NodeSet) -> Result<RootVector> {
        self.check_finite_subset(j)?;
        if j.is_empty() || self.connected_components(j).len() != 1 {
            return Err(Error::Precondition(format!("{j:?} is not a nonempty connected subset")));
        }
        let supported: Vec<RootVector> = self
            .positive_roots
            .iter()
            .filter(|r| r.support().all(|i| j.contains(&i)))
            .cloned()
            .collect();
        Ok(highest_of(&supported))
    }

    /// `α_J = δ − Σ_{i∈J} r(J)_i α_i` for connected nonempty `J`.
    pub fn alpha_j(&self, j: &NodeSet) -> Result<RootVector> {
        Ok(&self.delta() - &self.sub_highest_root(j)?)
    }
}
