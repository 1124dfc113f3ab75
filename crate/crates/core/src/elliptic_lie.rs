//! The elliptic Lie algebra `g_f[s^{±1}, t] ⊕ K` for `g_f = sl_{e+1}`, its
//! bracket and grading, and a checker for the `ε₁ = ε₂ = 0` limit of the
//! affine Yangian relations under the generator assignment `Ψ`.
//!
//! Central basis: `c_ℓ` (`ℓ ≥ 0`) and `c_{k,ℓ}` (`k ≠ 0`, `ℓ ≥ 1`). For
//! `k + h ≠ 0` the cocycle is `(ℓh − kn)(x, y) c_{k+h, ℓ+n}`, i.e. `c_{a,b}` is
//! the class of `−a⁻¹ s^a t^{b−1} dt` in `Ω¹/dA`; the coefficient is
//! antisymmetric under swapping the factors and vanishes when `ℓ = n = 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cartan_data::{CartanData, Family};
use crate::error::{Error, Result};
use crate::lattices::RootVector;
use crate::rational::{from_pair, q, to_pair, Rational};

/// Construction caps on loop degrees; bracket outputs may exceed them.
pub const K_CAP: i64 = 5;
pub const L_CAP: i64 = 5;
/// Largest `ℓ_max` accepted by the relation checker.
pub const RELATION_L_CAP: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    /// Root vector `E_{ab}` for the root with these finite coordinates.
    Root(Vec<i64>),
    /// `H_i = E_{ii} − E_{i+1,i+1}`, `1 ≤ i ≤ e`.
    H(usize),
}

/// Chevalley basis of `sl_{e+1}` with the trace form.
#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    e: usize,
    labels: Vec<BasisLabel>,
    index: BTreeMap<BasisLabel, usize>,
    /// `[b_x, b_y] = Σ c b_z`.
    structure: Vec<Vec<Vec<(usize, i64)>>>,
    form: Vec<Vec<i64>>,
}

type IMat = Vec<Vec<i64>>;

fn elem(n: usize, a: usize, b: usize) -> IMat {
    let mut m = vec![vec![0; n]; n];
    m[a][b] = 1;
    m
}

fn commutator(x: &IMat, y: &IMat) -> IMat {
    let n = x.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                s += x[i][k] * y[k][j] - y[i][k] * x[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

fn trace_product(x: &IMat, y: &IMat) -> i64 {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|k| x[i][k] * y[k][i]).sum::<i64>()).sum()
}

impl ChevalleyBasis {
    pub fn new(e: usize) -> Self {
        let n = e + 1;
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        // 0-based matrix indices a < b give the root α_{a+1} + … + α_b
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
                let coords: Vec<i64> = (1..=e).map(|i| if i > lo && i <= hi { sign } else { 0 }).collect();
                labels.push(BasisLabel::Root(coords));
                mats.push(elem(n, a, b));
            }
        }
        for i in 1..=e {
            let mut h = vec![vec![0; n]; n];
            h[i - 1][i - 1] = 1;
            h[i][i] = -1;
            labels.push(BasisLabel::H(i));
            mats.push(h);
        }
        let index: BTreeMap<BasisLabel, usize> = labels.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let decompose = |m: &IMat| -> Vec<(usize, i64)> {
            let mut out = Vec::new();
            for (k, l) in labels.iter().enumerate() {
                if let BasisLabel::Root(_) = l {
                    let (a, b) = off_diagonal_position(&mats[k]);
                    if m[a][b] != 0 {
                        out.push((k, m[a][b]));
                    }
                }
            }
            // traceless diagonal: coefficient of H_i is the partial sum of the first i entries
            let mut partial = 0;
            for i in 1..=e {
                partial += m[i - 1][i - 1];
                if partial != 0 {
                    out.push((index[&BasisLabel::H(i)], partial));
                }
            }
            out
        };
        let dim = labels.len();
        let mut structure = vec![vec![Vec::new(); dim]; dim];
        let mut form = vec![vec![0; dim]; dim];
        for x in 0..dim {
            for y in 0..dim {
                structure[x][y] = decompose(&commutator(&mats[x], &mats[y]));
                form[x][y] = trace_product(&mats[x], &mats[y]);
            }
        }
        Self { e, labels, index, structure, form }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.e
    }

    pub fn label(&self, k: usize) -> &BasisLabel {
        &self.labels[k]
    }

    pub fn index_of(&self, l: &BasisLabel) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn bracket(&self, x: usize, y: usize) -> &[(usize, i64)] {
        &self.structure[x][y]
    }

    pub fn form(&self, x: usize, y: usize) -> i64 {
        self.form[x][y]
    }

    /// `X_i^±` for `1 ≤ i ≤ e`.
    pub fn simple(&self, i: usize, positive: bool) -> usize {
        let s = if positive { 1 } else { -1 };
        self.index[&BasisLabel::Root((1..=self.e).map(|j| if j == i { s } else { 0 }).collect())]
    }

    /// `X_{±φ}`.
    pub fn highest(&self, positive: bool) -> usize {
        let s = if positive { 1 } else { -1 };
        self.index[&BasisLabel::Root(vec![s; self.e])]
    }

    pub fn h(&self, i: usize) -> usize {
        self.index[&BasisLabel::H(i)]
    }

    /// Weight of a basis vector as a vector over `I` with zero affine coordinate.
    pub fn weight(&self, k: usize) -> RootVector {
        let mut v = vec![0; self.e + 1];
        if let BasisLabel::Root(c) = &self.labels[k] {
            v[1..].copy_from_slice(c);
        }
        RootVector::new(v)
    }

    /// `"alpha1+alpha2"`, `"-alpha2"`, `"H1"`.
    pub fn label_string(&self, k: usize) -> String {
        match &self.labels[k] {
            BasisLabel::H(i) => format!("H{i}"),
            BasisLabel::Root(c) => {
                let neg = c.iter().any(|&x| x < 0);
                let parts: Vec<String> =
                    c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| format!("alpha{}", i + 1)).collect();
                if neg {
                    format!("-{}", parts.join("-"))
                } else {
                    parts.join("+")
                }
            }
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("unknown basis label {s:?}"));
        if let Some(i) = s.strip_prefix('H') {
            let i: usize = i.parse().map_err(|_| bad())?;
            return self.index_of(&BasisLabel::H(i)).ok_or_else(bad);
        }
        let (sign, body, sep) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest, '-'),
            None => (1, s, '+'),
        };
        let mut c = vec![0; self.e];
        for part in body.split(sep) {
            let i: usize = part.trim().strip_prefix("alpha").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if i == 0 || i > self.e {
                return Err(bad());
            }
            c[i - 1] += sign;
        }
        self.index_of(&BasisLabel::Root(c)).ok_or_else(bad)
    }
}

fn off_diagonal_position(m: &IMat) -> (usize, usize) {
    for (a, row) in m.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            if x != 0 {
                return (a, b);
            }
        }
    }
    unreachable!("root vectors are elementary matrices")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Central {
    /// `c_ℓ`
    C(i64),
    /// `c_{k,ℓ}`, `k ≠ 0`, `ℓ ≥ 1`
    Ck(i64, i64),
}

/// Finitely supported element: `x ⊗ s^k t^ℓ` terms keyed by `(basis, k, ℓ)`
/// and central coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopElement {
    pub terms: BTreeMap<(usize, i64, i64), Rational>,
    pub central: BTreeMap<Central, Rational>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_empty()
    }

    fn add_term(&mut self, key: (usize, i64, i64), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add_central(&mut self, key: Central, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.central.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.central.remove(&key);
        }
    }

    pub fn add(&self, other: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        for (k, v) in &other.central {
            out.add_central(*k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LoopElement {
        if c.is_zero() {
            return LoopElement::zero();
        }
        LoopElement {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            central: self.central.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &LoopElement) -> LoopElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn neg(&self) -> LoopElement {
        self.scale(&-Rational::one())
    }
}

/// `g_ell` for an affine type `A_e`, `e ≥ 1`.
#[derive(Clone, Debug)]
pub struct EllipticAlgebra {
    basis: ChevalleyBasis,
    cartan: Vec<Vec<i64>>,
}

impl EllipticAlgebra {
    pub fn new(cd: &CartanData) -> Result<Self> {
        if cd.dynkin().family() != Family::A {
            return Err(Error::Precondition(format!(
                "the elliptic Lie algebra is modelled for type A only, got {}",
                cd.dynkin()
            )));
        }
        Ok(Self { basis: ChevalleyBasis::new(cd.rank()), cartan: cd.cartan().to_vec() })
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        &self.basis
    }

    /// `c · b ⊗ s^k t^ℓ` with `|k| ≤ 5`, `0 ≤ ℓ ≤ 5`.
    pub fn monomial(&self, b: usize, k: i64, l: i64, c: Rational) -> Result<LoopElement> {
        if b >= self.basis.dim() {
            return Err(Error::Precondition(format!("basis index {b} out of range")));
        }
        if k.abs() > K_CAP || !(0..=L_CAP).contains(&l) {
            return Err(Error::CapExceeded(format!("degrees (k, ℓ) = ({k}, {l}) outside |k| ≤ {K_CAP}, 0 ≤ ℓ ≤ {L_CAP}")));
        }
        let mut e = LoopElement::zero();
        e.add_term((b, k, l), c);
        Ok(e)
    }

    pub fn central(&self, key: Central, c: Rational) -> Result<LoopElement> {
        match key {
            Central::C(l) if (0..=L_CAP).contains(&l) => {}
            Central::Ck(k, l) if k != 0 && k.abs() <= K_CAP && (1..=L_CAP).contains(&l) => {}
            _ => return Err(Error::Precondition(format!("{key:?} is not a central basis element within the caps"))),
        }
        let mut e = LoopElement::zero();
        e.add_central(key, c);
        Ok(e)
    }

    pub fn bracket(&self, a: &LoopElement, b: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&(x, k, l), ca) in &a.terms {
            for (&(y, h, n), cb) in &b.terms {
                let c = ca * cb;
                for &(z, s) in self.basis.bracket(x, y) {
                    out.add_term((z, k + h, l + n), &c * q(s));
                }
                let f = self.basis.form(x, y);
                if f == 0 {
                    continue;
                }
                if k + h == 0 {
                    out.add_central(Central::C(l + n), &c * q(k * f));
                } else {
                    let coef = l * h - k * n;
                    if coef != 0 {
                        out.add_central(Central::Ck(k + h, l + n), &c * q(coef * f));
                    }
                }
            }
        }
        out
    }

    /// `(horizontal, vertical)` degrees of every term.
    pub fn grading(&self, a: &LoopElement) -> BTreeSet<(i64, Vec<i64>)> {
        let delta = self.delta();
        let mut out = BTreeSet::new();
        for &(x, k, l) in a.terms.keys() {
            let v = &self.basis.weight(x) + &(&delta * k);
            out.insert((-2 * l, v.coords().to_vec()));
        }
        for c in a.central.keys() {
            let (k, l) = match *c {
                Central::C(l) => (0, l),
                Central::Ck(k, l) => (k, l),
            };
            out.insert((-2 * l, (&delta * k).coords().to_vec()));
        }
        out
    }

    pub fn is_homogeneous(&self, a: &LoopElement) -> bool {
        self.grading(a).len() <= 1
    }

    fn delta(&self) -> RootVector {
        RootVector::new(vec![1; self.basis.rank() + 1])
    }

    pub fn to_json(&self, a: &LoopElement) -> Value {
        let mut items: Vec<Value> = a
            .terms
            .iter()
            .map(|(&(x, k, l), c)| json!({"root": self.basis.label_string(x), "k": k, "l": l, "coeff": to_pair(c)}))
            .collect();
        for (c, v) in &a.central {
            let name = match c {
                Central::C(l) => format!("c{l}"),
                Central::Ck(k, l) => format!("c({k},{l})"),
            };
            items.push(json!({"central": name, "coeff": to_pair(v)}));
        }
        Value::Array(items)
    }

    pub fn from_json(&self, v: &Value) -> Result<LoopElement> {
        let items = v.as_array().ok_or_else(|| Error::Parse("loop element must be a JSON list".into()))?;
        let mut out = LoopElement::zero();
        for it in items {
            let pair: [String; 2] = serde_json::from_value(it["coeff"].clone())?;
            let c = from_pair(&pair)?;
            if let Some(name) = it.get("central").and_then(Value::as_str) {
                let key = parse_central(name)?;
                out = out.add(&self.central(key, c)?);
            } else {
                let root = it["root"].as_str().ok_or_else(|| Error::Parse("term needs \"root\"".into()))?;
                let b = self.basis.parse_label(root)?;
                let k = it["k"].as_i64().ok_or_else(|| Error::Parse("term needs integer \"k\"".into()))?;
                let l = it["l"].as_i64().ok_or_else(|| Error::Parse("term needs integer \"l\"".into()))?;
                out = out.add(&self.monomial(b, k, l, c)?);
            }
        }
        Ok(out)
    }
}

fn parse_central(s: &str) -> Result<Central> {
    let bad = || Error::Parse(format!("cannot parse central element {s:?}"));
    if let Some(inner) = s.strip_prefix("c(").and_then(|r| r.strip_suffix(')')) {
        let (k, l) = inner.split_once(',').ok_or_else(bad)?;
        return Ok(Central::Ck(k.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?));
    }
    let l = s.strip_prefix('c').ok_or_else(bad)?;
    Ok(Central::C(l.parse().map_err(|_| bad())?))
}

/// Which Yangian generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    XPlus,
    XMinus,
    H,
}

/// Per-node signs `σ ∈ {±1}` multiplying the images of `x⁺_i`, `x⁻_i` and the
/// `H`-part of `h_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignAssignment {
    pub plus: Vec<i8>,
    pub minus: Vec<i8>,
    pub h: Vec<i8>,
}

impl SignAssignment {
    pub fn literal(nodes: usize) -> Self {
        Self { plus: vec![1; nodes], minus: vec![1; nodes], h: vec![1; nodes] }
    }

    /// The representative with all `x^±` signs `+1` found by the search:
    /// `h_{0,ℓ} ↦ −H_φ ⊗ t^ℓ + c_ℓ`.
    pub fn canonical(nodes: usize) -> Self {
        let mut s = Self::literal(nodes);
        s.h[0] = -1;
        s
    }

    fn get(&self, i: usize, g: Gen) -> i8 {
        match g {
            Gen::XPlus => self.plus[i],
            Gen::XMinus => self.minus[i],
            Gen::H => self.h[i],
        }
    }

    fn set(&mut self, i: usize, g: Gen, v: i8) {
        match g {
            Gen::XPlus => self.plus[i] = v,
            Gen::XMinus => self.minus[i] = v,
            Gen::H => self.h[i] = v,
        }
    }

    fn from_bits(nodes: usize, bits: u64) -> Self {
        let mut s = Self::literal(nodes);
        for i in 0..nodes {
            for (t, g) in [Gen::XPlus, Gen::XMinus, Gen::H].into_iter().enumerate() {
                if bits >> (3 * i + t) & 1 == 1 {
                    s.set(i, g, -1);
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({"x_plus": self.plus, "x_minus": self.minus, "h": self.h})
    }
}

#[derive(Clone, Debug)]
enum Relation {
    HH { i: usize, r: i64, j: usize, s: i64 },
    XPlusMinus { i: usize, r: i64, j: usize, s: i64 },
    HX { i: usize, j: usize, r: i64, g: Gen },
    HShift { i: usize, r: i64, j: usize, s: i64, g: Gen },
    XShift { i: usize, r: i64, j: usize, s: i64, g: Gen },
    Serre { i: usize, j: usize, rs: Vec<i64>, s: i64, g: Gen },
}

fn pm(g: Gen) -> &'static str {
    if g == Gen::XPlus {
        "+"
    } else {
        "-"
    }
}

impl Relation {
    fn label(&self) -> String {
        match self {
            Relation::HH { i, r, j, s } => format!("[h_{{{i},{r}}}, h_{{{j},{s}}}] = 0"),
            Relation::XPlusMinus { i, r, j, s } => format!("[x+_{{{i},{r}}}, x-_{{{j},{s}}}] = δ h"),
            Relation::HX { i, j, r, g } => format!("[h_{{{i},0}}, x{}_{{{j},{r}}}] = ±a x", pm(*g)),
            Relation::HShift { i, r, j, s, g } => format!("[h_{{{i},{}}}, x{}_{{{j},{s}}}] = [h_{{{i},{r}}}, x{}_{{{j},{}}}]", r + 1, pm(*g), pm(*g), s + 1),
            Relation::XShift { i, r, j, s, g } => format!("[x{}_{{{i},{}}}, x{}_{{{j},{s}}}] = [x{}_{{{i},{r}}}, x{}_{{{j},{}}}]", pm(*g), r + 1, pm(*g), pm(*g), pm(*g), s + 1),
            Relation::Serre { i, j, rs, s, g } => format!("Serre x{} i={i} j={j} r={rs:?} s={s}", pm(*g)),
        }
    }

    fn vars(&self) -> Vec<(usize, Gen)> {
        let mut v = match self {
            Relation::HH { i, j, .. } => vec![(*i, Gen::H), (*j, Gen::H)],
            Relation::XPlusMinus { i, j, .. } => vec![(*i, Gen::XPlus), (*j, Gen::XMinus), (*i, Gen::H)],
            Relation::HX { i, j, g, .. } | Relation::HShift { i, j, g, .. } => vec![(*i, Gen::H), (*j, *g)],
            Relation::XShift { i, j, g, .. } | Relation::Serre { i, j, g, .. } => vec![(*i, *g), (*j, *g)],
        };
        v.sort();
        v.dedup();
        v
    }
}

/// Variables of one relation and, per sign pattern of them, whether it holds.
type SignTable = (Vec<(usize, Gen)>, Vec<bool>);

#[derive(Clone, Debug)]
pub struct ClassicalReport {
    pub relations_checked: usize,
    /// Every sign assignment satisfying all relations.
    pub solutions: Vec<SignAssignment>,
    /// Solutions form one orbit of the per-node flip `(σ⁺_i, σ⁻_i) ↦ (−σ⁺_i, −σ⁻_i)`.
    pub unique_up_to_flips: bool,
    /// Relations violated by the all-`+1` assignment.
    pub literal_violations: Vec<String>,
    /// Violations of an assignment with the fewest; empty when a solution exists.
    pub residual: Vec<String>,
}

impl ClassicalReport {
    pub fn ok(&self) -> bool {
        !self.solutions.is_empty() && self.unique_up_to_flips
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relations_checked": self.relations_checked,
            "solutions": self.solutions.iter().map(SignAssignment::to_json).collect::<Vec<_>>(),
            "unique_up_to_flips": self.unique_up_to_flips,
            "literal_violations": self.literal_violations,
            "residual": self.residual,
            "ok": self.ok(),
        })
    }
}

impl EllipticAlgebra {
    fn nodes(&self) -> usize {
        self.basis.rank() + 1
    }

    fn check_yangian_type(&self) -> Result<()> {
        let e = self.basis.rank();
        if !(2..=4).contains(&e) {
            return Err(Error::Precondition(format!(
                "the generator assignment is supported for A2..A4, got A{e}"
            )));
        }
        Ok(())
    }

    /// Image under `Ψ` of `x⁺_{i,ℓ}`, `x⁻_{i,ℓ}` or `h_{i,ℓ}` with the given signs.
    pub fn psi_generator_signed(&self, i: usize, l: i64, which: Gen, signs: &SignAssignment) -> Result<LoopElement> {
        self.check_yangian_type()?;
        if i >= self.nodes() {
            return Err(Error::Precondition(format!("node {i} out of range")));
        }
        let sg = q(i64::from(signs.get(i, which)));
        let b = &self.basis;
        match (i, which) {
            (0, Gen::XPlus) => self.monomial(b.highest(false), 1, l, sg),
            (0, Gen::XMinus) => self.monomial(b.highest(true), -1, l, sg),
            (0, Gen::H) => {
                // H_φ = [X_φ, X_{−φ}] = H_1 + … + H_e
                let mut e = LoopElement::zero();
                for k in 1..=b.rank() {
                    e = e.add(&self.monomial(b.h(k), 0, l, sg.clone())?);
                }
                Ok(e.add(&self.central(Central::C(l), q(1))?))
            }
            (_, Gen::XPlus) => self.monomial(b.simple(i, true), 0, l, sg),
            (_, Gen::XMinus) => self.monomial(b.simple(i, false), 0, l, sg),
            (_, Gen::H) => self.monomial(b.h(i), 0, l, sg),
        }
    }

    /// [`Self::psi_generator_signed`] with [`SignAssignment::canonical`].
    pub fn psi_generator(&self, i: usize, l: i64, which: Gen) -> Result<LoopElement> {
        self.psi_generator_signed(i, l, which, &SignAssignment::canonical(self.nodes()))
    }

    fn relations(&self, l_max: i64) -> Vec<Relation> {
        let n = self.nodes();
        let mut out = Vec::new();
        let xs = [Gen::XPlus, Gen::XMinus];
        for i in 0..n {
            for j in 0..n {
                for r in 0..=l_max {
                    for s in 0..=l_max {
                        out.push(Relation::HH { i, r, j, s });
                        if r + s <= l_max {
                            out.push(Relation::XPlusMinus { i, r, j, s });
                        }
                        for g in xs {
                            if r < l_max && s < l_max {
                                out.push(Relation::HShift { i, r, j, s, g });
                                out.push(Relation::XShift { i, r, j, s, g });
                            }
                        }
                    }
                    for g in xs {
                        out.push(Relation::HX { i, j, r, g });
                    }
                }
                if i != j {
                    let m = (1 - self.cartan[i][j]) as usize;
                    for rs in multisets(m, l_max) {
                        for s in 0..=l_max {
                            for g in xs {
                                out.push(Relation::Serre { i, j, rs: rs.clone(), s, g });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn holds(&self, rel: &Relation, sg: &SignAssignment) -> Result<bool> {
        let gen = |i: usize, l: i64, g: Gen| self.psi_generator_signed(i, l, g, sg);
        let lhs_minus_rhs = match rel {
            Relation::HH { i, r, j, s } => self.bracket(&gen(*i, *r, Gen::H)?, &gen(*j, *s, Gen::H)?),
            Relation::XPlusMinus { i, r, j, s } => {
                let lhs = self.bracket(&gen(*i, *r, Gen::XPlus)?, &gen(*j, *s, Gen::XMinus)?);
                if i == j {
                    lhs.sub(&gen(*i, r + s, Gen::H)?)
                } else {
                    lhs
                }
            }
            Relation::HX { i, j, r, g } => {
                let sign = if *g == Gen::XPlus { 1 } else { -1 };
                let x = gen(*j, *r, *g)?;
                self.bracket(&gen(*i, 0, Gen::H)?, &x).sub(&x.scale(&q(sign * self.cartan[*i][*j])))
            }
            Relation::HShift { i, r, j, s, g } => self
                .bracket(&gen(*i, r + 1, Gen::H)?, &gen(*j, *s, *g)?)
                .sub(&self.bracket(&gen(*i, *r, Gen::H)?, &gen(*j, s + 1, *g)?)),
            Relation::XShift { i, r, j, s, g } => self
                .bracket(&gen(*i, r + 1, *g)?, &gen(*j, *s, *g)?)
                .sub(&self.bracket(&gen(*i, *r, *g)?, &gen(*j, s + 1, *g)?)),
            Relation::Serre { i, j, rs, s, g } => {
                let mut total = LoopElement::zero();
                for perm in permutations(rs) {
                    let mut acc = gen(*j, *s, *g)?;
                    for &r in perm.iter().rev() {
                        acc = self.bracket(&gen(*i, r, *g)?, &acc);
                    }
                    total = total.add(&acc);
                }
                total
            }
        };
        Ok(lhs_minus_rhs.is_zero())
    }

    /// Checks the `ε → 0` Yangian relations for generator indices `≤ ℓ_max`
    /// under every sign assignment, by tabulating for each relation which sign
    /// patterns of the generators it involves make it hold.
    pub fn check_classical_relations(&self, l_max: i64) -> Result<ClassicalReport> {
        self.check_yangian_type()?;
        if !(0..=RELATION_L_CAP).contains(&l_max) {
            return Err(Error::Precondition(format!("ℓ_max must lie in 0..={RELATION_L_CAP}")));
        }
        let n = self.nodes();
        let rels = self.relations(l_max);
        let mut tables: Vec<SignTable> = Vec::with_capacity(rels.len());
        for rel in &rels {
            let vars = rel.vars();
            let mut allowed = Vec::with_capacity(1 << vars.len());
            for pat in 0u32..(1 << vars.len()) {
                let mut sg = SignAssignment::literal(n);
                for (b, &(i, g)) in vars.iter().enumerate() {
                    if pat >> b & 1 == 1 {
                        sg.set(i, g, -1);
                    }
                }
                allowed.push(self.holds(rel, &sg)?);
            }
            tables.push((vars, allowed));
        }
        let violations = |sg: &SignAssignment| -> Vec<usize> {
            tables
                .iter()
                .enumerate()
                .filter(|(_, (vars, allowed))| {
                    let pat = vars
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (b, &(i, g))| acc | (usize::from(sg.get(i, g) < 0) << b));
                    !allowed[pat]
                })
                .map(|(k, _)| k)
                .collect()
        };
        let mut solutions = Vec::new();
        let mut best: Option<Vec<usize>> = None;
        for bits in 0u64..(1u64 << (3 * n)) {
            let sg = SignAssignment::from_bits(n, bits);
            let v = violations(&sg);
            if v.is_empty() {
                solutions.push(sg);
            } else if best.as_ref().is_none_or(|b| v.len() < b.len()) {
                best = Some(v);
            }
        }
        solutions.sort();
        let unique_up_to_flips = match solutions.first() {
            None => false,
            Some(base) => {
                let mut orbit: BTreeSet<SignAssignment> = BTreeSet::new();
                for mask in 0u64..(1 << n) {
                    let mut s = base.clone();
                    for i in 0..n {
                        if mask >> i & 1 == 1 {
                            s.plus[i] = -s.plus[i];
                            s.minus[i] = -s.minus[i];
                        }
                    }
                    orbit.insert(s);
                }
                orbit == solutions.iter().cloned().collect()
            }
        };
        let literal_violations = violations(&SignAssignment::literal(n)).into_iter().map(|k| rels[k].label()).collect();
        let residual = if solutions.is_empty() {
            best.unwrap_or_default().into_iter().map(|k| rels[k].label()).collect()
        } else {
            Vec::new()
        };
        Ok(ClassicalReport { relations_checked: rels.len(), solutions, unique_up_to_flips, literal_violations, residual })
    }
}

/// Nondecreasing sequences of length `m` over `0..=l_max`.
fn multisets(m: usize, l_max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for v in &out {
            let lo = v.last().copied().unwrap_or(0);
            for r in lo..=l_max {
                let mut w = v.clone();
                w.push(r);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// All orderings of `v`, repeated values included as often as they arise.
fn permutations(v: &[i64]) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
