//! The root lattice `Y`, coweights, pairings, root classification and
//! K-theory classes of nilpotent modules.
//!
//! Coweights are stored over the fundamental coweights `ω̌_i`, so the
//! canonical pairing is `(θ, v) = Σ θ_i v_i`. Finite coweights are stored over
//! `λ̌_i` (`i ∈ I_f`) and only become coweights through
//! [`CartanData::embed_finite_coweight`], `λ̌_i ↦ ω̌_i − r_i ω̌_0`.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan_data::{CartanData, NodeSet};
use crate::error::{Error, Result};
use crate::rational::{from_pair, q, to_pair, Rational};

/// Integer vector over the simple roots `α_i`, `i ∈ I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(Vec<i64>);

impl RootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Nonzero with all coordinates `≥ 0`.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    /// Nonzero with all coordinates `≤ 0`.
    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i)
    }
}

impl Index<usize> for RootVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add<&RootVector> for &RootVector {
    type Output = RootVector;
    fn add(self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&RootVector> for &RootVector {
    type Output = RootVector;
    fn sub(self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for RootVector {
    type Output = RootVector;
    fn add(self, o: RootVector) -> RootVector {
        &self + &o
    }
}

impl Sub for RootVector {
    type Output = RootVector;
    fn sub(self, o: RootVector) -> RootVector {
        &self - &o
    }
}

impl AddAssign<&RootVector> for RootVector {
    fn add_assign(&mut self, o: &RootVector) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }
}

impl Neg for RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Mul<i64> for &RootVector {
    type Output = RootVector;
    fn mul(self, k: i64) -> RootVector {
        RootVector(self.0.iter().map(|c| c * k).collect())
    }
}

/// Rational vector over the fundamental coweights `ω̌_i`, `i ∈ I`; a linear
/// functional on `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coweight(Vec<Rational>);

impl Coweight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.0[i] = q(1);
        c
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Canonical pairing `(θ, v) = Σ θ_i v_i`.
    pub fn pair(&self, v: &RootVector) -> Rational {
        let mut s = Rational::zero();
        for (t, &c) in self.0.iter().zip(v.coords()) {
            if c != 0 {
                s += t * q(c);
            }
        }
        s
    }

    pub fn scale(&self, k: &Rational) -> Coweight {
        Coweight(self.0.iter().map(|c| c * k).collect())
    }
}

impl Index<usize> for Coweight {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add<&Coweight> for &Coweight {
    type Output = Coweight;
    fn add(self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Coweight> for &Coweight {
    type Output = Coweight;
    fn sub(self, o: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Coweight {
    type Output = Coweight;
    fn neg(self) -> Coweight {
        Coweight(self.0.iter().map(|c| -c).collect())
    }
}

/// Rational vector over `λ̌_i`, `i ∈ I_f`; index `k` holds `λ̌_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteCoweight(Vec<Rational>);

impl FiniteCoweight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(e: usize) -> Self {
        Self(vec![Rational::zero(); e])
    }

    /// `λ̌_i` for `i ∈ I_f` (1-based).
    pub fn fundamental(e: usize, i: usize) -> Self {
        let mut c = Self::zero(e);
        c.0[i - 1] = q(1);
        c
    }

    /// `Σ_{i∈J} λ̌_i`.
    pub fn sum_over(e: usize, j: &NodeSet) -> Self {
        let mut c = Self::zero(e);
        for &i in j {
            c.0[i - 1] = q(1);
        }
        c
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Coefficient of `λ̌_i`, `i ∈ I_f` (1-based).
    pub fn at(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_integers(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn scale(&self, k: &Rational) -> FiniteCoweight {
        FiniteCoweight(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add<&FiniteCoweight> for &FiniteCoweight {
    type Output = FiniteCoweight;
    fn add(self, o: &FiniteCoweight) -> FiniteCoweight {
        FiniteCoweight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&FiniteCoweight> for &FiniteCoweight {
    type Output = FiniteCoweight;
    fn sub(self, o: &FiniteCoweight) -> FiniteCoweight {
        FiniteCoweight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &FiniteCoweight {
    type Output = FiniteCoweight;
    fn neg(self) -> FiniteCoweight {
        FiniteCoweight(self.0.iter().map(|c| -c).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootClass {
    /// `α + nδ` with `α ∈ Δ_f`.
    Real { finite: RootVector, level: i64 },
    /// `nδ`, `n ≠ 0`.
    Imaginary(i64),
    NotRoot,
}

impl CartanData {
    pub fn alpha(&self, i: usize) -> RootVector {
        RootVector::unit(self.num_nodes(), i)
    }

    /// `δ = Σ r_i α_i`.
    pub fn delta(&self) -> RootVector {
        RootVector::new(self.marks().to_vec())
    }

    pub fn zero_root(&self) -> RootVector {
        RootVector::zero(self.num_nodes())
    }

    /// `⟨ǎ_i, v⟩ = Σ_j a_ij v_j`.
    pub fn cartan_pairing(&self, i: usize, v: &RootVector) -> i64 {
        self.cartan()[i].iter().zip(v.coords()).map(|(a, c)| a * c).sum()
    }

    /// Symmetric form `(u | v) = Σ u_i a_ij v_j`; `(β|β) = 2` on real roots.
    pub fn symmetric_form(&self, u: &RootVector, v: &RootVector) -> i64 {
        u.coords()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| c * self.cartan_pairing(i, v))
            .sum()
    }

    /// Splits `v = α + nδ` with `α` supported on `I_f`.
    pub fn split_level(&self, v: &RootVector) -> (RootVector, i64) {
        let n = v[0];
        (v - &(&self.delta() * n), n)
    }

    pub fn classify_root(&self, v: &RootVector) -> RootClass {
        let (alpha, n) = self.split_level(v);
        if alpha.is_zero() {
            if n != 0 {
                RootClass::Imaginary(n)
            } else {
                RootClass::NotRoot
            }
        } else if self.is_finite_root(&alpha) {
            RootClass::Real { finite: alpha, level: n }
        } else {
            RootClass::NotRoot
        }
    }

    pub fn is_real_root(&self, v: &RootVector) -> bool {
        matches!(self.classify_root(v), RootClass::Real { .. })
    }

    /// `α + nδ` as a vector in `Y`.
    pub fn affine_root(&self, finite: &RootVector, level: i64) -> RootVector {
        finite + &(&self.delta() * level)
    }

    /// K-theory class of the simple module `S_i`: `[S_0] = 2δ − α_0`,
    /// `[S_i] = −α_{κ(i)}`. Equals `w0(α_i)`.
    pub fn simple_class(&self, i: usize) -> RootVector {
        if i == 0 {
            &(&self.delta() * 2) - &self.alpha(0)
        } else {
            -self.alpha(self.kappa(i))
        }
    }

    /// `Σ d_i [S_i]` for a composition-multiplicity vector `d`.
    pub fn composition_class(&self, d: &[i64]) -> RootVector {
        let mut v = self.zero_root();
        for (i, &di) in d.iter().enumerate() {
            if di != 0 {
                v += &(&self.simple_class(i) * di);
            }
        }
        v
    }

    /// `ρ̌ = Σ_i ω̌_i`.
    pub fn rho(&self) -> Coweight {
        Coweight::from_ints(&vec![1; self.num_nodes()])
    }

    pub fn fundamental_coweight(&self, i: usize) -> Coweight {
        Coweight::unit(self.num_nodes(), i)
    }

    pub fn embed_finite_coweight(&self, lambda: &FiniteCoweight) -> Coweight {
        let mut c = vec![Rational::zero(); self.num_nodes()];
        for i in self.finite_nodes() {
            let l = lambda.at(i);
            c[i] = l.clone();
            c[0] -= l * q(self.mark(i));
        }
        Coweight::new(c)
    }

    /// `(λ̌, v)` for a finite coweight.
    pub fn finite_pairing(&self, lambda: &FiniteCoweight, v: &RootVector) -> Rational {
        self.embed_finite_coweight(lambda).pair(v)
    }

    /// Finite part of a coweight with `(θ, δ) = 0`; inverse of the embedding.
    pub fn restrict_to_finite(&self, theta: &Coweight) -> Result<FiniteCoweight> {
        if !theta.pair(&self.delta()).is_zero() {
            return Err(Error::Precondition("coweight does not vanish on δ".into()));
        }
        Ok(FiniteCoweight::new(theta.coords()[1..].to_vec()))
    }

    /// Coroot `ǎ_i` (`i ∈ I_f`) as a finite coweight: row `i` of the finite Cartan matrix.
    pub fn finite_coroot(&self, i: usize) -> FiniteCoweight {
        FiniteCoweight::from_ints(&self.cartan()[i][1..])
    }

    /// `(λ̌, α_i) > 0` on `J` and `= 0` on `I_f ∖ J`.
    pub fn is_pij_ample(&self, lambda: &FiniteCoweight, j: &NodeSet) -> bool {
        self.finite_nodes().all(|i| {
            let c = lambda.at(i);
            if j.contains(&i) {
                c.is_positive()
            } else {
                c.is_zero()
            }
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RootJson {
    #[serde(rename = "type")]
    dynkin: String,
    basis: String,
    coords: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct CoweightJson {
    basis: String,
    coords: Vec<[String; 2]>,
}

pub fn root_to_json(cd: &CartanData, v: &RootVector) -> serde_json::Value {
    serde_json::to_value(RootJson {
        dynkin: cd.dynkin().to_string(),
        basis: "alpha".into(),
        coords: v.coords().to_vec(),
    })
    .expect("plain struct serializes")
}

pub fn root_from_json(cd: &CartanData, value: &serde_json::Value) -> Result<RootVector> {
    let r: RootJson = serde_json::from_value(value.clone())?;
    if r.basis != "alpha" || r.coords.len() != cd.num_nodes() || r.dynkin.parse::<crate::cartan_data::DynkinType>()? != cd.dynkin() {
        return Err(Error::Parse("root JSON does not match the diagram".into()));
    }
    Ok(RootVector::new(r.coords))
}

pub fn coweight_to_json(theta: &Coweight) -> serde_json::Value {
    serde_json::to_value(CoweightJson { basis: "omega".into(), coords: theta.coords().iter().map(to_pair).collect() })
        .expect("plain struct serializes")
}

pub fn finite_coweight_to_json(lambda: &FiniteCoweight) -> serde_json::Value {
    serde_json::to_value(CoweightJson { basis: "lambda".into(), coords: lambda.coords().iter().map(to_pair).collect() })
        .expect("plain struct serializes")
}

/// Reads either basis; `lambda` input is embedded.
pub fn coweight_from_json(cd: &CartanData, value: &serde_json::Value) -> Result<Coweight> {
    let c: CoweightJson = serde_json::from_value(value.clone())?;
    let coords = c.coords.iter().map(from_pair).collect::<Result<Vec<_>>>()?;
    match (c.basis.as_str(), coords.len()) {
        ("omega", n) if n == cd.num_nodes() => Ok(Coweight::new(coords)),
        ("lambda", n) if n == cd.rank() => Ok(cd.embed_finite_coweight(&FiniteCoweight::new(coords))),
        _ => Err(Error::Parse("coweight JSON basis or length does not match the diagram".into())),
    }
}
