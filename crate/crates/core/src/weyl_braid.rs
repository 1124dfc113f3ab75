//! Affine and extended affine Weyl groups acting on `Y`, reduced words,
//! shears `ℓ_λ̌`, the dual action on coweights, and braid words.
//!
//! Elements are integer matrices acting on column vectors of `α`-coordinates,
//! stored together with their inverse. The dual action on coweights is
//! `(w·θ, v) = (θ, w⁻¹v)`, i.e. `θ ↦ θ M⁻¹` on row vectors.
//!
//! Shear convention: `ℓ_λ̌(α) = α + (λ̌, α) δ`, so that
//! `ℓ_λ̌^{-n}·θ = θ + n (θ, δ) λ̌`. This is opposite in sign to the other
//! convention in use for translation elements.

use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::cartan_data::{CartanData, NodeSet};
use crate::error::{Error, Result};
use crate::lattices::{Coweight, FiniteCoweight, RootVector};
use crate::rational::{q, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

/// Upper bound on descent-stripping steps.
pub const DESCENT_CAP: usize = 1_000_000;
/// Largest finite Weyl group enumerated by BFS.
pub const FINITE_GROUP_CAP: usize = 100_000;

fn identity_matrix(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik != 0 {
                for j in 0..n {
                    c[i][j] += aik * b[k][j];
                }
            }
        }
    }
    c
}

fn column(a: &IntMatrix, j: usize) -> RootVector {
    RootVector::new(a.iter().map(|row| row[j]).collect())
}

/// An invertible lattice automorphism of `Y` fixing `δ`; the type is shared by
/// Weyl elements, shears and diagram automorphisms.
#[derive(Clone, Debug)]
pub struct WeylElement {
    matrix: IntMatrix,
    inverse: IntMatrix,
    word: Option<Vec<usize>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self { matrix: identity_matrix(n), inverse: identity_matrix(n), word: Some(Vec::new()) }
    }

    fn from_parts(matrix: IntMatrix, inverse: IntMatrix) -> Self {
        debug_assert_eq!(mat_mul(&matrix, &inverse), identity_matrix(matrix.len()));
        Self { matrix, inverse, word: None }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.inverse
    }

    /// Cached reduced word, when known.
    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &RootVector) -> RootVector {
        RootVector::new(self.matrix.iter().map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn apply_inverse(&self, v: &RootVector) -> RootVector {
        RootVector::new(self.inverse.iter().map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum()).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut w = Self::from_parts(mat_mul(&self.matrix, &other.matrix), mat_mul(&other.inverse, &self.inverse));
        if let (Some(a), Some(b)) = (&self.word, &other.word) {
            if a.is_empty() || b.is_empty() {
                w.word = Some(a.iter().chain(b).copied().collect());
            }
        }
        w
    }

    pub fn inverse(&self) -> WeylElement {
        Self {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            word: self.word.as_ref().map(|w| w.iter().rev().copied().collect()),
        }
    }

    pub fn pow(&self, n: i64) -> WeylElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = WeylElement::identity(self.dim());
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    /// `(w·θ, v) = (θ, w⁻¹ v)`.
    pub fn dual_action(&self, theta: &Coweight) -> Coweight {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (k, t) in theta.coords().iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = self.inverse[k][j];
                if m != 0 {
                    *o += t * q(m);
                }
            }
        }
        Coweight::new(out)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity_matrix(self.dim())
    }

    /// Permutation `γ` with `self(α_i) = α_{γ(i)}`, if `self` permutes the simple roots.
    pub fn as_diagram_permutation(&self) -> Option<Vec<usize>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let c = column(&self.matrix, i);
                let mut support = c.support();
                match (support.next(), support.next()) {
                    (Some(k), None) if c[k] == 1 => Some(k),
                    _ => None,
                }
            })
            .collect()
    }
}

/// Free-function form of [`WeylElement::dual_action`].
pub fn dual_action(w: &WeylElement, theta: &Coweight) -> Coweight {
    w.dual_action(theta)
}

/// Longest element of the finite Weyl group generated by nodes `1..n` of `cartan`.
/// Grows `w ↦ w s_i` while `w(α_i) > 0`; each step raises the length by one.
pub(crate) fn finite_longest_element(cartan: &[Vec<i64>]) -> WeylElement {
    let n = cartan.len();
    let reflect = |i: usize| -> IntMatrix {
        let mut s = identity_matrix(n);
        for j in 0..n {
            s[i][j] -= cartan[i][j];
        }
        s
    };
    let mut w = WeylElement::identity(n);
    let mut word = Vec::new();
    while let Some(i) = (1..n).find(|&i| column(&w.matrix, i).is_positive()) {
        let s = reflect(i);
        w = WeylElement::from_parts(mat_mul(&w.matrix, &s), mat_mul(&s, &w.inverse));
        word.push(i);
    }
    w.word = Some(word);
    w
}

/// `γ ∘ w` with `γ` a diagram automorphism applied after `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedWeylElement {
    pub gamma: Vec<usize>,
    pub w: WeylElement,
}

impl ExtendedWeylElement {
    /// `ℓ(γ ⋉ w) = ℓ(w)`.
    pub fn length(&self) -> usize {
        self.w.word().map_or(0, <[usize]>::len)
    }

    pub fn to_element(&self, cd: &CartanData) -> WeylElement {
        cd.diagram_element(&self.gamma).compose(&self.w)
    }
}

fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

/// Letter of a braid word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraidLetter {
    T(usize),
    TInv(usize),
    /// A diagram automorphism `γ`, `γ(i)` at index `i`.
    Gamma(Vec<usize>),
}

/// Product of letters, read left to right. No normal form is attempted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BraidWord(pub Vec<BraidLetter>);

impl BraidWord {
    pub fn inverse(&self) -> BraidWord {
        BraidWord(
            self.0
                .iter()
                .rev()
                .map(|l| match l {
                    BraidLetter::T(i) => BraidLetter::TInv(*i),
                    BraidLetter::TInv(i) => BraidLetter::T(*i),
                    BraidLetter::Gamma(g) => BraidLetter::Gamma(invert_permutation(g)),
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        BraidWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Signed integers per letter; `T_0⁻¹` is written as the string `"-0"`
    /// since `-0` and `0` coincide as integers, and `γ` as `{"gamma": [...]}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|l| match l {
                    BraidLetter::T(i) => json!(*i as i64),
                    BraidLetter::TInv(0) => json!("-0"),
                    BraidLetter::TInv(i) => json!(-(*i as i64)),
                    BraidLetter::Gamma(g) => json!({ "gamma": g }),
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<BraidWord> {
        let bad = |v: &Value| Error::Parse(format!("bad braid letter {v}"));
        let items = value.as_array().ok_or_else(|| Error::Parse("braid word must be an array".into()))?;
        let mut letters = Vec::new();
        for v in items {
            let letter = match v {
                Value::Number(n) => {
                    let k = n.as_i64().ok_or_else(|| bad(v))?;
                    if k >= 0 {
                        BraidLetter::T(k as usize)
                    } else {
                        BraidLetter::TInv((-k) as usize)
                    }
                }
                Value::String(s) if s == "-0" => BraidLetter::TInv(0),
                Value::Object(m) => {
                    let g = m.get("gamma").ok_or_else(|| bad(v))?;
                    BraidLetter::Gamma(serde_json::from_value(g.clone())?)
                }
                _ => return Err(bad(v)),
            };
            letters.push(letter);
        }
        Ok(BraidWord(letters))
    }
}

impl CartanData {
    pub fn identity_element(&self) -> WeylElement {
        WeylElement::identity(self.num_nodes())
    }

    /// `s_i(v) = v − ⟨ǎ_i, v⟩ α_i`.
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        let n = self.num_nodes();
        let mut s = identity_matrix(n);
        for j in 0..n {
            s[i][j] -= self.a(i, j);
        }
        WeylElement { matrix: s.clone(), inverse: s, word: Some(vec![i]) }
    }

    /// Reflection `v ↦ v − (β|v) β` in a real root `β`.
    pub fn reflection(&self, beta: &RootVector) -> Result<WeylElement> {
        if self.symmetric_form(beta, beta) != 2 {
            return Err(Error::Precondition(format!("{:?} is not a real root", beta.coords())));
        }
        let n = self.num_nodes();
        let mut s = identity_matrix(n);
        for j in 0..n {
            let f = self.symmetric_form(beta, &self.alpha(j));
            for (k, row) in s.iter_mut().enumerate() {
                row[j] -= beta[k] * f;
            }
        }
        Ok(WeylElement { matrix: s.clone(), inverse: s, word: None })
    }

    /// `ℓ_λ̌(v) = v + (λ̌, v) δ` for integral `λ̌`.
    pub fn shear(&self, lambda: &FiniteCoweight) -> Result<WeylElement> {
        if lambda.to_integers().is_none() {
            return Err(Error::Precondition("shear needs an integral coweight".into()));
        }
        let emb = self.embed_finite_coweight(lambda);
        let n = self.num_nodes();
        let p: Vec<i64> = (0..n)
            .map(|j| {
                use num_traits::ToPrimitive;
                emb[j].to_integer().to_i64().expect("small integral coweight")
            })
            .collect();
        let mut m = identity_matrix(n);
        let mut inv = identity_matrix(n);
        for k in 0..n {
            for j in 0..n {
                m[k][j] += self.mark(k) * p[j];
                inv[k][j] -= self.mark(k) * p[j];
            }
        }
        Ok(WeylElement::from_parts(m, inv))
    }

    /// Permutation matrix `α_i ↦ α_{γ(i)}`.
    pub fn diagram_element(&self, gamma: &[usize]) -> WeylElement {
        let n = self.num_nodes();
        let mut m = vec![vec![0i64; n]; n];
        for (i, &g) in gamma.iter().enumerate() {
            m[g][i] = 1;
        }
        let inv: IntMatrix = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
        WeylElement::from_parts(m, inv)
    }

    /// `s_{i_1} ∘ s_{i_2} ∘ …`.
    pub fn evaluate_word(&self, word: &[usize]) -> WeylElement {
        let mut w = self.identity_element();
        for &i in word {
            w = w.compose(&self.simple_reflection(i));
        }
        w.word = None;
        w
    }

    /// Splits a lattice automorphism into `γ ∘ w` by left-stripping descents:
    /// while some `w⁻¹(α_i)` is negative, replace `w` by `s_i w`.
    pub fn decompose_extended(&self, x: &WeylElement) -> Result<ExtendedWeylElement> {
        let n = self.num_nodes();
        let mut cur = x.clone();
        let mut stripped = Vec::new();
        loop {
            if stripped.len() > DESCENT_CAP {
                return Err(Error::Internal("descent stripping exceeded its cap".into()));
            }
            match (0..n).find(|&i| column(&cur.inverse, i).is_negative()) {
                Some(i) => {
                    let s = self.simple_reflection(i);
                    cur = WeylElement::from_parts(mat_mul(&s.matrix, &cur.matrix), mat_mul(&cur.inverse, &s.matrix));
                    stripped.push(i);
                }
                None => break,
            }
        }
        let gamma = cur.as_diagram_permutation().ok_or(Error::NotInGroup)?;
        let ginv = invert_permutation(&gamma);
        let word: Vec<usize> = stripped.iter().map(|&i| ginv[i]).collect();
        let mut w = self.evaluate_word(&word);
        w.word = Some(word);
        Ok(ExtendedWeylElement { gamma, w })
    }

    /// Reduced word of an element of `W`: `w = s_{i_1} ∘ … ∘ s_{i_k}`.
    pub fn reduced_word(&self, w: &WeylElement) -> Result<Vec<usize>> {
        if let Some(word) = w.word() {
            return Ok(word.to_vec());
        }
        let ext = self.decompose_extended(w)?;
        if ext.gamma.iter().enumerate().any(|(i, &g)| i != g) {
            return Err(Error::NotInGroup);
        }
        Ok(ext.w.word.expect("decomposition records the word"))
    }

    pub fn length(&self, w: &WeylElement) -> Result<usize> {
        Ok(self.reduced_word(w)?.len())
    }

    /// Returns `w` with its reduced word cached.
    pub fn with_reduced_word(&self, w: &WeylElement) -> Result<WeylElement> {
        let word = self.reduced_word(w)?;
        Ok(WeylElement { word: Some(word), ..w.clone() })
    }

    /// `λ̌ = λ̌1 − λ̌2` with both dominant and `λ̌2 = N Σ λ̌_i`, `N` minimal.
    pub fn dominant_decomposition(&self, lambda: &FiniteCoweight) -> Result<(FiniteCoweight, FiniteCoweight)> {
        let ints = lambda
            .to_integers()
            .ok_or_else(|| Error::Precondition("dominant decomposition needs an integral coweight".into()))?;
        let n = ints.iter().copied().min().map_or(0, |m| (-m).max(0));
        let l2 = FiniteCoweight::from_ints(&vec![n; self.rank()]);
        Ok((lambda + &l2, l2))
    }

    /// Generators of `W(J)`: `s_i` for `i ∈ I_f ∖ J` and the coroot shears `ℓ_{ǎ_i}`.
    pub fn wj_generators(&self, j: &NodeSet) -> Result<Vec<WeylElement>> {
        self.check_finite_subset(j)?;
        let mut gens: Vec<WeylElement> =
            self.complement(j).into_iter().map(|i| self.simple_reflection(i)).collect();
        for i in self.finite_nodes() {
            gens.push(self.shear(&self.finite_coroot(i))?);
        }
        Ok(gens)
    }

    /// All elements of `W_f`, by BFS over the finite simple reflections; memoized.
    pub fn finite_weyl_group(&self) -> Result<&[WeylElement]> {
        let cached = self.finite_group_cache().get_or_init(|| {
            let gens: Vec<WeylElement> = self.finite_nodes().map(|i| self.simple_reflection(i)).collect();
            let mut seen: HashSet<WeylElement> = HashSet::new();
            let mut order = Vec::new();
            let mut queue = VecDeque::from([self.identity_element()]);
            seen.insert(self.identity_element());
            while let Some(w) = queue.pop_front() {
                order.push(w.clone());
                if order.len() > FINITE_GROUP_CAP {
                    return Err(format!("|W_f| exceeds {FINITE_GROUP_CAP}"));
                }
                for (k, g) in gens.iter().enumerate() {
                    let mut next = w.compose(g);
                    if !seen.contains(&next) {
                        // BFS depth equals length, so appending the letter keeps the word reduced
                        next.word = w.word.as_ref().map(|word| {
                            let mut x = word.clone();
                            x.push(k + 1);
                            x
                        });
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
            Ok(order)
        });
        cached.as_deref().map_err(|e| Error::CapExceeded(e.clone()))
    }

    /// `w0·ρ̌`.
    pub fn w0_rho(&self) -> Coweight {
        self.longest_element().dual_action(&self.rho())
    }

    /// Image of a finite coweight under `w ∈ W_f`, read through the embedding.
    pub fn act_on_finite_coweight(&self, w: &WeylElement, lambda: &FiniteCoweight) -> Result<FiniteCoweight> {
        self.restrict_to_finite(&w.dual_action(&self.embed_finite_coweight(lambda)))
    }

    /// The subgroup `Γ ⊂ Aut` of automorphisms arising from `W_ex = Γ ⋉ W`,
    /// generated by the `γ`-parts of the fundamental coweight shears.
    pub fn extended_automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        let mut gens = Vec::new();
        for i in self.finite_nodes() {
            gens.push(self.decompose_extended(&self.shear(&FiniteCoweight::fundamental(self.rank(), i))?)?.gamma);
        }
        let id: Vec<usize> = self.nodes().collect();
        let mut group = vec![id.clone()];
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id]);
        let mut k = 0;
        while k < group.len() {
            let g = group[k].clone();
            for h in &gens {
                let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                if seen.insert(gh.clone()) {
                    group.push(gh);
                }
            }
            k += 1;
        }
        Ok(group)
    }

    /// Positive lift `T_w` of `w ∈ W`.
    pub fn positive_lift(&self, w: &WeylElement) -> Result<BraidWord> {
        Ok(BraidWord(self.reduced_word(w)?.into_iter().map(BraidLetter::T).collect()))
    }

    fn translation_word(&self, lambda: &FiniteCoweight) -> Result<BraidWord> {
        let ext = self.decompose_extended(&self.shear(lambda)?)?;
        let mut letters = Vec::new();
        if ext.gamma.iter().enumerate().any(|(i, &g)| i != g) {
            letters.push(BraidLetter::Gamma(ext.gamma.clone()));
        }
        letters.extend(ext.w.word().unwrap_or(&[]).iter().map(|&i| BraidLetter::T(i)));
        Ok(BraidWord(letters))
    }

    /// `L_λ̌ = T_{λ̌1} T_{λ̌2}⁻¹` for the canonical dominant decomposition.
    pub fn l_lambda(&self, lambda: &FiniteCoweight) -> Result<BraidWord> {
        let (l1, l2) = self.dominant_decomposition(lambda)?;
        Ok(self.translation_word(&l1)?.concat(&self.translation_word(&l2)?.inverse()))
    }

    /// Image of a braid word in the extended affine Weyl group.
    pub fn braid_weyl_image(&self, word: &BraidWord) -> WeylElement {
        let mut w = self.identity_element();
        for l in &word.0 {
            let g = match l {
                BraidLetter::T(i) | BraidLetter::TInv(i) => self.simple_reflection(*i),
                BraidLetter::Gamma(p) => self.diagram_element(p),
            };
            w = w.compose(&g);
        }
        w
    }
}
