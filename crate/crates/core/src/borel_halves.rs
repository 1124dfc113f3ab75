//! Nonstandard positive halves of the elliptic Lie algebra indexed by
//! `J ⊆ I_f`: the root sets `Δ_{J,(k)} ⊆ Δ_{J,(k+1)} ⊆ … ⊆ Δ_J`, their
//! positivity axioms, and truncated graded characters of `n⁺_{ell,J}` and of
//! its enveloping algebra.
//!
//! At level `n < 0` the finite part ranges over all of `Δ_{Jᶜ}` (both signs) in
//! every `Δ_{J,(k)}`; with only `Δ⁺_{Jᶜ}` for `k ≥ 1` the chain would not be
//! increasing and `Δ_J ⊔ −Δ_J` would miss `Δ⁻_{Jᶜ} + n δ`, `n < 0`.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::cartan_data::{CartanData, NodeSet};
use crate::error::{Error, Result};
use crate::lattices::{FiniteCoweight, RootVector};

/// DP state guard for [`BorelHalf::pbw_character`].
pub const PBW_STATE_CAP: usize = 2_000_000;
/// Upfront guard on `#basis classes × max_factors`.
pub const PBW_WORK_CAP: u64 = 2_000;

/// `α + nδ` with `α ∈ Δ_f ∪ {0}`, `(α, n) ≠ (0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineRealRoot {
    alpha: RootVector,
    n: i64,
}

impl AffineRealRoot {
    pub fn new(cd: &CartanData, alpha: RootVector, n: i64) -> Result<Self> {
        if alpha.len() != cd.num_nodes() || alpha[0] != 0 {
            return Err(Error::Precondition("finite part must be a vector over I with zero affine coordinate".into()));
        }
        if alpha.is_zero() && n == 0 {
            return Err(Error::Precondition("(α, n) = (0, 0) is not a root".into()));
        }
        if !alpha.is_zero() && !cd.is_finite_root(&alpha) {
            return Err(Error::Precondition(format!("{:?} is not a finite root", alpha.coords())));
        }
        Ok(Self { alpha, n })
    }

    pub fn alpha(&self) -> &RootVector {
        &self.alpha
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    pub fn to_vector(&self, cd: &CartanData) -> RootVector {
        cd.affine_root(&self.alpha, self.n)
    }

    pub fn from_vector(cd: &CartanData, v: &RootVector) -> Result<Self> {
        let (alpha, n) = cd.split_level(v);
        Self::new(cd, alpha, n)
    }

    pub fn neg(&self) -> Self {
        Self { alpha: -self.alpha.clone(), n: -self.n }
    }
}

/// Level window `|n| ≤ n_max` and `t`-degrees `0..=t_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub n_max: i64,
    pub t_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FinClass {
    Zero,
    JcPos,
    JcNeg,
    OutPos,
    OutNeg,
}

/// Graded dimensions keyed by `(Y-weight, t-degree)`; zero entries omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterTable {
    pub window: Option<Window>,
    pub entries: BTreeMap<(Vec<i64>, i64), u64>,
}

impl CharacterTable {
    pub fn dim(&self, weight: &RootVector, l: i64) -> u64 {
        self.entries.get(&(weight.coords().to_vec(), l)).copied().unwrap_or(0)
    }

    fn bump(&mut self, weight: &RootVector, l: i64, d: u64) {
        if d > 0 {
            *self.entries.entry((weight.coords().to_vec(), l)).or_insert(0) += d;
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> =
            self.entries.iter().map(|((w, l), d)| json!({"weight": w, "t_degree": l, "dim": d})).collect();
        json!({
            "window": self.window.map(|w| json!({"n_max": w.n_max, "t_max": w.t_max})),
            "rows": rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let width = self.entries.keys().next().map_or(0, |(w, _)| w.len());
        let mut out: Vec<String> = vec![(0..width).map(|i| format!("w{i}")).chain(["l".into(), "dim".into()]).collect::<Vec<_>>().join(",")];
        for ((w, l), d) in &self.entries {
            let mut cells: Vec<String> = w.iter().map(i64::to_string).collect();
            cells.push(l.to_string());
            cells.push(d.to_string());
            out.push(cells.join(","));
        }
        out.join("\n") + "\n"
    }
}

/// Graded dimensions of `Sym` on a window-truncated basis, split by the
/// number of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwTable {
    pub window: Window,
    pub max_factors: u32,
    pub entries: BTreeMap<(Vec<i64>, i64, u32), u64>,
}

impl PbwTable {
    pub fn dim(&self, weight: &RootVector, l: i64) -> u64 {
        (0..=self.max_factors).map(|d| self.dim_in_degree(weight, l, d)).sum()
    }

    pub fn dim_in_degree(&self, weight: &RootVector, l: i64, degree: u32) -> u64 {
        self.entries.get(&(weight.coords().to_vec(), l, degree)).copied().unwrap_or(0)
    }

    pub fn degree_slice(&self, degree: u32) -> CharacterTable {
        let mut t = CharacterTable { window: Some(self.window), entries: BTreeMap::new() };
        for ((w, l, d), v) in &self.entries {
            if *d == degree {
                t.entries.insert((w.clone(), *l), *v);
            }
        }
        t
    }
}

#[derive(Clone, Debug, Default)]
pub struct ChainReport {
    pub inclusion_failures: Vec<String>,
    /// Smallest `k` with `β ∈ Δ_{J,(k)}` for each window element of `Δ_J`.
    pub witnesses: BTreeMap<AffineRealRoot, u32>,
    pub union_failures: Vec<String>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.inclusion_failures.is_empty() && self.union_failures.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct PositivityReport {
    pub roots_checked: usize,
    pub pairs_checked: usize,
    pub partition_failures: Vec<String>,
    pub closure_failures: Vec<String>,
}

impl PositivityReport {
    pub fn ok(&self) -> bool {
        self.partition_failures.is_empty() && self.closure_failures.is_empty()
    }
}

/// `J ⊆ I_f` with a `ϖ_J`-ample integral `λ̌`.
#[derive(Clone, Debug)]
pub struct BorelHalf {
    cd: CartanData,
    j: NodeSet,
    jc: NodeSet,
    lambda: FiniteCoweight,
}

impl BorelHalf {
    pub fn new(cd: &CartanData, j: &NodeSet, lambda: &FiniteCoweight) -> Result<Self> {
        cd.check_finite_subset(j)?;
        if lambda.coords().len() != cd.rank() || !cd.is_pij_ample(lambda, j) || lambda.to_integers().is_none() {
            return Err(Error::Precondition(format!("λ̌ must be integral and ϖ_J-ample for J = {j:?}")));
        }
        Ok(Self { cd: cd.clone(), j: j.clone(), jc: cd.complement(j), lambda: lambda.clone() })
    }

    /// `λ̌ = Σ_{i∈J} λ̌_i`.
    pub fn standard(cd: &CartanData, j: &NodeSet) -> Result<Self> {
        Self::new(cd, j, &FiniteCoweight::sum_over(cd.rank(), j))
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn j(&self) -> &NodeSet {
        &self.j
    }

    fn classify(&self, alpha: &RootVector) -> FinClass {
        if alpha.is_zero() {
            return FinClass::Zero;
        }
        let in_jc = alpha.support().all(|i| self.jc.contains(&i));
        match (in_jc, alpha.is_positive()) {
            (true, true) => FinClass::JcPos,
            (true, false) => FinClass::JcNeg,
            (false, true) => FinClass::OutPos,
            (false, false) => FinClass::OutNeg,
        }
    }

    fn pairing(&self, alpha: &RootVector) -> i64 {
        self.cd.finite_pairing(&self.lambda, alpha).to_integer().to_i64().expect("small pairing")
    }

    /// Membership in `Δ_{J,(k)}`.
    pub fn in_delta_j_k(&self, beta: &AffineRealRoot, k: u32) -> bool {
        let n = beta.n;
        match self.classify(&beta.alpha) {
            FinClass::JcNeg => n <= 0,
            FinClass::JcPos | FinClass::Zero => n < 0,
            FinClass::OutPos => n < 2 * i64::from(k) * self.pairing(&beta.alpha),
            FinClass::OutNeg => false,
        }
    }

    /// Membership in `Δ_J = ⋃_k Δ_{J,(k)}`.
    pub fn in_delta_j(&self, beta: &AffineRealRoot) -> bool {
        match self.classify(&beta.alpha) {
            FinClass::OutPos => true,
            _ => self.in_delta_j_k(beta, 0),
        }
    }

    /// All roots `α + nδ` with `|n| ≤ n_max`.
    pub fn window_roots(&self, n_max: i64) -> Vec<AffineRealRoot> {
        let zero = self.cd.zero_root();
        let mut out = Vec::new();
        for n in -n_max..=n_max {
            if n != 0 {
                out.push(AffineRealRoot { alpha: zero.clone(), n });
            }
            for a in self.cd.finite_roots() {
                out.push(AffineRealRoot { alpha: a, n });
            }
        }
        out
    }

    pub fn check_chain_and_union(&self, k_max: u32, n_max: i64) -> ChainReport {
        let mut rep = ChainReport::default();
        let roots = self.window_roots(n_max);
        for b in &roots {
            for k in 0..k_max {
                if self.in_delta_j_k(b, k) && !self.in_delta_j_k(b, k + 1) {
                    rep.inclusion_failures.push(format!("{b:?} in Δ_(J,{k}) but not Δ_(J,{})", k + 1));
                }
            }
            if !self.in_delta_j(b) {
                continue;
            }
            // 2k(λ̌, α) ≥ 2k on Δ_f⁺ ∖ Δ⁺_Jᶜ, so k = n_max + 1 always suffices
            let limit = u32::try_from(n_max.max(0) + 1).unwrap_or(u32::MAX);
            match (0..=limit).find(|&k| self.in_delta_j_k(b, k)) {
                Some(k) => {
                    rep.witnesses.insert(b.clone(), k);
                }
                None => rep.union_failures.push(format!("{b:?} in Δ_J but in no Δ_(J,k), k ≤ {limit}")),
            }
            if k_max == 0 && !self.in_delta_j_k(b, 0) && self.classify(&b.alpha) != FinClass::OutPos {
                rep.union_failures.push(format!("{b:?} in Δ_J but not Δ_(J,0)"));
            }
        }
        rep
    }

    fn is_root(&self, alpha: &RootVector, n: i64) -> bool {
        if alpha.is_zero() {
            n != 0
        } else {
            self.cd.is_finite_root(alpha)
        }
    }

    pub fn positivity_axioms(&self, n_max: i64) -> PositivityReport {
        let mut rep = PositivityReport::default();
        let roots = self.window_roots(n_max);
        let members: Vec<&AffineRealRoot> = roots.iter().filter(|b| self.in_delta_j(b)).collect();
        for b in &roots {
            rep.roots_checked += 1;
            let (p, m) = (self.in_delta_j(b), self.in_delta_j(&b.neg()));
            if p == m {
                rep.partition_failures.push(format!("{b:?}: in Δ_J = {p}, in −Δ_J = {m}"));
            }
        }
        for x in &members {
            for y in &members {
                let alpha = &x.alpha + &y.alpha;
                let n = x.n + y.n;
                if n.abs() > n_max || !self.is_root(&alpha, n) {
                    continue;
                }
                rep.pairs_checked += 1;
                if !self.in_delta_j(&AffineRealRoot { alpha, n }) {
                    rep.closure_failures.push(format!("{x:?} + {y:?} leaves Δ_J"));
                }
            }
        }
        rep
    }

    /// `β ∈ Δ_{J,(k)} ⟺ ℓ_{−2kλ̌} β ∈ Δ_{J,(0)}` on the window; returns violations.
    pub fn shear_cross_check(&self, k_max: u32, n_max: i64) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for k in 0..=k_max {
            let mu = self.lambda.scale(&crate::rational::q(-2 * i64::from(k)));
            let sh = self.cd.shear(&mu)?;
            for b in self.window_roots(n_max) {
                let image = AffineRealRoot::from_vector(&self.cd, &sh.apply(&b.to_vector(&self.cd)))?;
                if self.in_delta_j_k(&b, k) != self.in_delta_j_k(&image, 0) {
                    bad.push(format!("k = {k}: {b:?} vs sheared {image:?}"));
                }
            }
        }
        Ok(bad)
    }

    /// Graded pieces of `n⁺_{ell,J}` (or of its level-`k` truncation) inside
    /// the window: `(weight, t-degree, dimension)`.
    fn basis_classes(&self, level: Option<u32>, w: Window) -> Vec<(RootVector, i64, u64)> {
        let e = self.cd.rank() as u64;
        let mut out = Vec::new();
        for b in self.window_roots(w.n_max) {
            let member = match level {
                Some(k) => self.in_delta_j_k(&b, k),
                None => self.in_delta_j(&b),
            };
            if !member {
                continue;
            }
            let d = if b.alpha.is_zero() { e } else { 1 };
            for l in 0..=w.t_max {
                out.push((b.to_vector(&self.cd), l, d));
            }
        }
        // K₋ = span{c_{k,ℓ} : k < 0, ℓ ≥ 1}
        for k in 1..=w.n_max {
            for l in 1..=w.t_max {
                out.push((&self.cd.delta() * -k, l, 1));
            }
        }
        out
    }

    /// Table (a): from the root-set description.
    pub fn character_from_roots(&self, w: Window) -> CharacterTable {
        let mut t = CharacterTable { window: Some(w), entries: BTreeMap::new() };
        for (v, l, d) in self.basis_classes(None, w) {
            t.bump(&v, l, d);
        }
        t
    }

    /// Table (b): `⊕_{α ∈ Δ_f⁺∖Δ⁺_Jᶜ} g_α[s^{±1}, t] ⊕ n_{Jᶜ}[t] + s⁻¹h[s⁻¹, t] ⊕ K₋`,
    /// with `n_{Jᶜ} = n⁻_{l} ⊕ s⁻¹ l[s⁻¹]` for the Levi `l` of `Jᶜ` (Cartan part
    /// `h_{Jᶜ}`) and the overlap `s⁻¹h_{Jᶜ}[s⁻¹]` counted once.
    pub fn character_from_decomposition(&self, w: Window) -> CharacterTable {
        let e = self.cd.rank() as i64;
        let jc = self.jc.len() as i64;
        let zero = self.cd.zero_root();
        let mut signed: BTreeMap<(Vec<i64>, i64), i64> = BTreeMap::new();
        let mut add = |v: &RootVector, l: i64, d: i64| {
            *signed.entry((v.coords().to_vec(), l)).or_insert(0) += d;
        };
        for l in 0..=w.t_max {
            for n in -w.n_max..=w.n_max {
                for a in self.cd.finite_roots() {
                    let v = self.cd.affine_root(&a, n);
                    match self.classify(&a) {
                        FinClass::OutPos => add(&v, l, 1),
                        FinClass::JcNeg if n == 0 => add(&v, l, 1),
                        FinClass::JcNeg | FinClass::JcPos if n < 0 => add(&v, l, 1),
                        _ => {}
                    }
                }
                if n < 0 {
                    let v = self.cd.affine_root(&zero, n);
                    add(&v, l, jc); // s⁻¹ h_{Jᶜ}[s⁻¹] inside n_{Jᶜ}
                    add(&v, l, e); // s⁻¹ h[s⁻¹]
                    add(&v, l, -jc); // overlap
                    if l >= 1 {
                        add(&v, l, 1); // K₋
                    }
                }
            }
        }
        let mut t = CharacterTable { window: Some(w), entries: BTreeMap::new() };
        for ((v, l), d) in signed {
            assert!(d >= 0, "negative graded dimension at {v:?}, {l}");
            if d > 0 {
                t.entries.insert((v, l), d as u64);
            }
        }
        t
    }

    /// Both tables and the keys where they differ.
    pub fn character_n_ell_j(&self, w: Window) -> (CharacterTable, CharacterTable, Vec<(Vec<i64>, i64)>) {
        let a = self.character_from_roots(w);
        let b = self.character_from_decomposition(w);
        let mut keys: Vec<_> = a.entries.keys().chain(b.entries.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        let diff = keys.into_iter().filter(|k| a.entries.get(k) != b.entries.get(k)).collect();
        (a, b, diff)
    }

    /// Graded dimensions of `Sym` on the window basis of `n⁺_{ell,J}` (or of
    /// `(n_ell)_{J,(k)}` when `level = Some(k)`), products of at most
    /// `max_factors` basis vectors, final weights restricted to `|n| ≤ n_max`.
    pub fn pbw_character(&self, level: Option<u32>, w: Window, max_factors: u32) -> Result<PbwTable> {
        let classes = self.basis_classes(level, w);
        let work = classes.len() as u64 * u64::from(max_factors);
        if work > PBW_WORK_CAP {
            return Err(Error::CapExceeded(format!(
                "PBW enumeration over {} basis classes with {max_factors} factors exceeds the guard {PBW_WORK_CAP}",
                classes.len()
            )));
        }
        let mut states: HashMap<(Vec<i64>, i64, u32), u64> = HashMap::new();
        states.insert((self.cd.zero_root().coords().to_vec(), 0, 0), 1);
        for (v, l, d) in &classes {
            let mut next = states.clone();
            for ((wt, tl, deg), cnt) in &states {
                let mut acc = wt.clone();
                for c in 1..=(max_factors - deg) {
                    let tdeg = tl + l * i64::from(c);
                    if tdeg > w.t_max {
                        break;
                    }
                    for (x, y) in acc.iter_mut().zip(v.coords()) {
                        *x += y;
                    }
                    let ways = multichoose(*d, u64::from(c))
                        .and_then(|m| m.checked_mul(*cnt))
                        .ok_or_else(|| Error::CapExceeded("PBW dimension overflows u64".into()))?;
                    let slot = next.entry((acc.clone(), tdeg, deg + c)).or_insert(0);
                    *slot = slot.checked_add(ways).ok_or_else(|| Error::CapExceeded("PBW dimension overflows u64".into()))?;
                }
            }
            if next.len() > PBW_STATE_CAP {
                return Err(Error::CapExceeded(format!(
                    "PBW enumeration exceeds {PBW_STATE_CAP} states; shrink the window or max_factors"
                )));
            }
            states = next;
        }
        let entries = states.into_iter().filter(|((wt, _, _), _)| wt[0].abs() <= w.n_max).collect();
        Ok(PbwTable { window: w, max_factors, entries })
    }
}

/// `C(d + c − 1, c)`: monomials of degree `c` in `d` variables.
fn multichoose(d: u64, c: u64) -> Option<u64> {
    if d == 0 {
        return Some(u64::from(c == 0));
    }
    let mut r: u64 = 1;
    for i in 0..c {
        r = r.checked_mul(d + i)? / (i + 1);
    }
    Some(r)
}

pub fn chain_report_to_json(rep: &ChainReport) -> Value {
    json!({
        "ok": rep.ok(),
        "inclusion_failures": rep.inclusion_failures,
        "union_failures": rep.union_failures,
        "max_witness": rep.witnesses.values().max(),
    })
}

pub fn positivity_report_to_json(rep: &PositivityReport) -> Value {
    json!({
        "ok": rep.ok(),
        "roots_checked": rep.roots_checked,
        "pairs_checked": rep.pairs_checked,
        "partition_failures": rep.partition_failures,
        "closure_failures": rep.closure_failures,
    })
}
