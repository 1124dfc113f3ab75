//! Tits-cone chambers, the fundamental domains `D_J` of the groups `W(J)`, and
//! the heart-fan classifier.
//!
//! `C⁺` is the `w0`-twisted dominant cone `{(θ, w0 α_i) ≥ 0, i ∈ I}`; its walls
//! are the simple classes `[S_i] = w0(α_i)`. `C⁰` is the untwisted finite
//! dominant cone inside `{(θ, δ) = 0}`, and `C⁰_J` its face where `α_i`
//! vanishes for `i ∉ J`.

use std::collections::{HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan_data::{CartanData, NodeSet};
use crate::error::{Error, Result};
use crate::lattices::{Coweight, RootVector};
use crate::weyl_braid::{WeylElement, DESCENT_CAP};

/// Largest stabilizer enumerated when a point of `{δ ≠ 0}` sits on walls.
pub const STABILIZER_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chamber {
    Plus,
    Minus,
    Zero,
    ZeroFace(NodeSet),
    Dj(NodeSet),
}

/// Which heart a case-3 descriptor names; `Nilp` is the standard heart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Perverse,
    ReversedPerverse,
    Nilp,
}

/// Symbolic name of an intermediate heart.
///
/// * case 1: `ℝT_w(H)`, heart cone `w C⁺`;
/// * case 2: `𝕃T_w(H)[−1]`, heart cone `w⁻¹ C⁻`;
/// * case 3: `ℝT_w(P_C(X/X_J))` (`Perverse`) or `ℝT_w(P̄_C(X/X_J))`
///   (`ReversedPerverse`), heart cone a face of `w C⁰_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeartDescriptor {
    pub case: u8,
    pub word: Vec<usize>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none", default)]
    pub j: Option<NodeSet>,
    pub shift: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flavor: Option<Flavor>,
}

impl HeartDescriptor {
    /// `g` and the base chamber with heart cone `g · base`.
    pub fn cone(&self, cd: &CartanData) -> (WeylElement, Chamber) {
        let w = cd.evaluate_word(&self.word);
        match self.case {
            1 => (w, Chamber::Plus),
            2 => (w.inverse(), Chamber::Minus),
            _ => (w, Chamber::ZeroFace(self.j.clone().unwrap_or_default())),
        }
    }

    /// Whether `θ` lies in the heart cone named by `self`.
    pub fn contains(&self, cd: &CartanData, theta: &Coweight) -> bool {
        let (g, base) = self.cone(cd);
        let back = g.inverse().dual_action(theta);
        cd.in_chamber(&back, &base)
    }
}

/// Letter of a word in the generators of `W(J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WjLetter {
    Reflection(usize),
    Shear { node: usize, power: i64 },
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub word: Vec<usize>,
    pub element: WeylElement,
    pub theta: Coweight,
}

#[derive(Clone, Debug)]
pub struct DjNormalized {
    pub word: Vec<WjLetter>,
    pub element: WeylElement,
    pub theta: Coweight,
}

impl CartanData {
    /// Walls of `C⁺`: `w0 α_i = [S_i]`, `i ∈ I`.
    pub fn plus_walls(&self) -> Vec<RootVector> {
        self.nodes().map(|i| self.simple_class(i)).collect()
    }

    /// Closed chamber test.
    pub fn in_chamber(&self, theta: &Coweight, which: &Chamber) -> bool {
        let p = |v: &RootVector| theta.pair(v);
        let delta = p(&self.delta());
        match which {
            Chamber::Plus => self.plus_walls().iter().all(|v| !p(v).is_negative()),
            Chamber::Minus => self.plus_walls().iter().all(|v| !p(v).is_positive()),
            Chamber::Zero => delta.is_zero() && self.finite_nodes().all(|i| !theta[i].is_negative()),
            Chamber::ZeroFace(j) => {
                delta.is_zero()
                    && self
                        .finite_nodes()
                        .all(|i| if j.contains(&i) { !theta[i].is_negative() } else { theta[i].is_zero() })
            }
            Chamber::Dj(j) => {
                delta.is_positive()
                    && self.dj_walls(j).iter().all(|v| !p(v).is_negative())
            }
        }
    }

    /// Interior test: strict inequalities on the defining set; for `C⁰` and
    /// `C⁰_J` the relative interior inside `{(θ, δ) = 0}`.
    pub fn in_chamber_interior(&self, theta: &Coweight, which: &Chamber) -> bool {
        let p = |v: &RootVector| theta.pair(v);
        let delta = p(&self.delta());
        match which {
            Chamber::Plus => self.plus_walls().iter().all(|v| p(v).is_positive()),
            Chamber::Minus => self.plus_walls().iter().all(|v| p(v).is_negative()),
            Chamber::Zero => delta.is_zero() && self.finite_nodes().all(|i| theta[i].is_positive()),
            Chamber::ZeroFace(j) => {
                delta.is_zero()
                    && self
                        .finite_nodes()
                        .all(|i| if j.contains(&i) { theta[i].is_positive() } else { theta[i].is_zero() })
            }
            Chamber::Dj(j) => delta.is_positive() && self.dj_walls(j).iter().all(|v| p(v).is_positive()),
        }
    }

    /// Inward normals of `D_J` besides `δ`: `−α_i` for `i ∉ J` and
    /// `2δ − α_{J'} = δ + φ_{J'}` per component `J'` of `I_f ∖ J`.
    pub fn dj_walls(&self, j: &NodeSet) -> Vec<RootVector> {
        let comp = self.complement(j);
        let mut walls: Vec<RootVector> = comp.iter().map(|&i| -self.alpha(i)).collect();
        for c in self.connected_components(&comp) {
            let phi = self.sub_highest_root(&c).expect("components are connected");
            walls.push(&self.delta() + &phi);
        }
        walls
    }

    /// Reflects `θ` across walls of the simple system `walls` until
    /// `(θ, γ) ≥ 0` for every `γ`. Returns `g` with `g·θ` the result, and the
    /// indices of the walls used, in order of application.
    fn chamber_descent(&self, theta: &Coweight, walls: &[RootVector]) -> Result<(WeylElement, Coweight, Vec<usize>)> {
        let reflections: Vec<WeylElement> = walls.iter().map(|w| self.reflection(w)).collect::<Result<_>>()?;
        let mut g = self.identity_element();
        let mut t = theta.clone();
        let mut used = Vec::new();
        while let Some(k) = walls.iter().position(|w| t.pair(w).is_negative()) {
            if used.len() >= DESCENT_CAP {
                return Err(Error::Internal("chamber descent exceeded its iteration cap".into()));
            }
            t = reflections[k].dual_action(&t);
            g = reflections[k].compose(&g);
            used.push(k);
        }
        Ok((g, t, used))
    }

    /// `w` with `w·θ ∈ C⁺` when `(θ, δ) > 0`, `w·θ ∈ C⁻` when `(θ, δ) < 0`.
    pub fn normalize_to_dominant(&self, theta: &Coweight) -> Result<Normalized> {
        let d = theta.pair(&self.delta());
        if d.is_zero() {
            return Err(Error::Precondition("normalize_to_dominant needs (θ, δ) ≠ 0".into()));
        }
        let flip = d.is_negative();
        let start = if flip { -theta } else { theta.clone() };
        let (g, t, _) = self.chamber_descent(&start, &self.plus_walls())?;
        let word = self.reduced_word(&g)?;
        let element = self.with_reduced_word(&g)?;
        Ok(Normalized { word, element, theta: if flip { -&t } else { t } })
    }

    /// `w ∈ W_f` with `w·θ ∈ C⁰`, for `(θ, δ) = 0`.
    pub fn normalize_to_finite_dominant(&self, theta: &Coweight) -> Result<Normalized> {
        if !theta.pair(&self.delta()).is_zero() {
            return Err(Error::Precondition("finite descent needs (θ, δ) = 0".into()));
        }
        let walls: Vec<RootVector> = self.finite_nodes().map(|i| self.alpha(i)).collect();
        let (g, t, _) = self.chamber_descent(theta, &walls)?;
        let element = self.with_reduced_word(&g)?;
        Ok(Normalized { word: element.word().unwrap_or(&[]).to_vec(), element, theta: t })
    }

    /// Moves `θ` with `(θ, δ) > 0` into `D_J` using `W(J)`. For each component
    /// `J'` of `I_f ∖ J` the walls `−α_i` (`i ∈ J'`) and `δ + φ_{J'}` form a
    /// simple system of the affine subsystem; walls of different components are
    /// orthogonal, so one joint descent suffices. The reflection in
    /// `δ + φ_{J'}` is spelled `s_{φ_{J'}} ∘ ℓ_{−φ̌_{J'}}`.
    pub fn normalize_to_dj(&self, theta: &Coweight, j: &NodeSet) -> Result<DjNormalized> {
        self.check_finite_subset(j)?;
        if !theta.pair(&self.delta()).is_positive() {
            return Err(Error::Precondition("normalize_to_dj needs (θ, δ) > 0".into()));
        }
        let walls = self.dj_walls(j);
        let comp = self.complement(j);
        let singles: Vec<usize> = comp.iter().copied().collect();
        let components = self.connected_components(&comp);
        let (g, t, used) = self.chamber_descent(theta, &walls)?;

        let mut spelled: Vec<Vec<WjLetter>> = Vec::with_capacity(used.len());
        for &k in &used {
            if k < singles.len() {
                spelled.push(vec![WjLetter::Reflection(singles[k])]);
            } else {
                let c = &components[k - singles.len()];
                let phi = self.sub_highest_root(c)?;
                let s_phi = self.reflection(&phi)?;
                let mut letters: Vec<WjLetter> =
                    self.reduced_word(&s_phi)?.into_iter().map(WjLetter::Reflection).collect();
                for &i in c {
                    letters.push(WjLetter::Shear { node: i, power: -phi[i] });
                }
                spelled.push(letters);
            }
        }
        // g = r_m ∘ … ∘ r_1
        let word: Vec<WjLetter> = spelled.into_iter().rev().flatten().collect();
        Ok(DjNormalized { word, element: g, theta: t })
    }

    /// Evaluates a `W(J)` word as a lattice automorphism.
    pub fn evaluate_wj_word(&self, word: &[WjLetter]) -> Result<WeylElement> {
        let mut w = self.identity_element();
        for l in word {
            let g = match l {
                WjLetter::Reflection(i) => self.simple_reflection(*i),
                WjLetter::Shear { node, power } => self.shear(&self.finite_coroot(*node))?.pow(*power),
            };
            w = w.compose(&g);
        }
        Ok(w)
    }

    /// Stabilizer of a point of the closed chamber, generated by the reflections
    /// in the walls `walls` it lies on.
    fn wall_stabilizer(&self, walls: &[RootVector]) -> Result<Vec<WeylElement>> {
        let gens: Vec<WeylElement> = walls.iter().map(|w| self.reflection(w)).collect::<Result<_>>()?;
        let mut seen: HashSet<WeylElement> = HashSet::from([self.identity_element()]);
        let mut out = vec![self.identity_element()];
        let mut queue = VecDeque::from([self.identity_element()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    if out.len() >= STABILIZER_CAP {
                        return Err(Error::CapExceeded(format!("wall stabilizer larger than {STABILIZER_CAP}")));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// Words of the shortest and the longest element among `candidates`;
    /// ties broken by the lexicographically least word.
    fn extreme_words(&self, candidates: impl Iterator<Item = WeylElement>) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut words: Vec<Vec<usize>> = candidates.map(|c| self.reduced_word(&c)).collect::<Result<_>>()?;
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let shortest = words.first().cloned().unwrap_or_default();
        let max_len = words.last().map_or(0, Vec::len);
        let longest = words.into_iter().find(|w| w.len() == max_len).unwrap_or_default();
        Ok((shortest, longest))
    }

    /// `(H^θ, H_θ)`: the maximal and minimal intermediate hearts whose heart
    /// cone contains `θ`.
    pub fn locate_heart_cone(&self, theta: &Coweight) -> Result<(HeartDescriptor, HeartDescriptor)> {
        if theta.is_zero() {
            return Err(Error::Precondition("cannot locate θ = 0".into()));
        }
        let d = theta.pair(&self.delta());
        if d.is_zero() {
            return self.locate_zero_level(theta);
        }
        let positive = d.is_positive();
        let norm = self.normalize_to_dominant(theta)?;
        let base = if positive { norm.theta.clone() } else { -&norm.theta };
        let active: Vec<RootVector> =
            self.plus_walls().into_iter().filter(|v| base.pair(v).is_zero()).collect();
        let stab = self.wall_stabilizer(&active)?;
        let descriptor = |case: u8, word: Vec<usize>| HeartDescriptor {
            case,
            word,
            j: None,
            shift: if case == 1 { 0 } else { -1 },
            flavor: None,
        };
        if positive {
            // θ ∈ u C⁺ for u = w⁻¹ v; shorter u gives a larger heart
            let winv = norm.element.inverse();
            let (short, long) = self.extreme_words(stab.iter().map(|v| winv.compose(v)))?;
            Ok((descriptor(1, short), descriptor(1, long)))
        } else {
            // θ ∈ w⁻¹ C⁻ for w = v g; longer w gives a larger heart
            let (short, long) = self.extreme_words(stab.iter().map(|v| v.compose(&norm.element)))?;
            Ok((descriptor(2, long), descriptor(2, short)))
        }
    }

    fn locate_zero_level(&self, theta: &Coweight) -> Result<(HeartDescriptor, HeartDescriptor)> {
        let norm = self.normalize_to_finite_dominant(theta)?;
        let j: NodeSet = self.finite_nodes().filter(|&i| norm.theta[i].is_positive()).collect();
        let w = self.minimal_face_representative(&norm.element.inverse(), &j)?;
        let word = self.reduced_word(&w)?;
        let make = |flavor| HeartDescriptor { case: 3, word: word.clone(), j: Some(j.clone()), shift: 0, flavor: Some(flavor) };
        Ok((make(Flavor::Perverse), make(Flavor::ReversedPerverse)))
    }

    /// Shortest element of `w W_{I_f ∖ J}`, by stripping right descents in `I_f ∖ J`.
    pub fn minimal_face_representative(&self, w: &WeylElement, j: &NodeSet) -> Result<WeylElement> {
        let comp = self.complement(j);
        let mut w = w.clone();
        let mut steps = 0;
        while let Some(i) = comp.iter().copied().find(|&i| w.apply(&self.alpha(i)).is_negative()) {
            w = w.compose(&self.simple_reflection(i));
            steps += 1;
            if steps > DESCENT_CAP {
                return Err(Error::Internal("coset descent exceeded its cap".into()));
            }
        }
        self.with_reduced_word(&w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::FiniteCoweight;
    use crate::rational::{frac, q};
    use proptest::prelude::*;

    fn cd(name: &str) -> CartanData {
        CartanData::from_name(name).unwrap()
    }

    fn set(v: &[usize]) -> NodeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn chamber_examples() {
        let c = cd("A2");
        let t0 = c.w0_rho();
        assert!(c.in_chamber_interior(&t0, &Chamber::Plus));
        assert!(c.in_chamber_interior(&-&t0, &Chamber::Minus));
        assert!(!c.in_chamber(&c.rho(), &Chamber::Zero));
        let l = FiniteCoweight::fundamental(2, 1);
        assert!(c.in_chamber(&c.embed_finite_coweight(&l), &Chamber::ZeroFace(set(&[1]))));
        // C⁰_J is not the face for a smaller J
        assert!(!c.in_chamber(&c.embed_finite_coweight(&l), &Chamber::ZeroFace(set(&[2]))));
    }

    #[test]
    fn dominant_examples() {
        let c = cd("A2");
        let t0 = c.w0_rho();
        let n = c.normalize_to_dominant(&t0).unwrap();
        assert!(n.word.is_empty());
        assert_eq!(n.theta, t0);
        let moved = c.simple_reflection(0).dual_action(&t0);
        let n = c.normalize_to_dominant(&moved).unwrap();
        assert_eq!(n.word, vec![0]);
        assert_eq!(n.theta, t0);
        let n = c.normalize_to_dominant(&-&t0).unwrap();
        assert!(n.word.is_empty());
        assert!(c.normalize_to_dominant(&c.embed_finite_coweight(&FiniteCoweight::fundamental(2, 1))).is_err());
    }

    #[test]
    fn dj_examples() {
        let c = cd("A2");
        let rho = c.rho();
        let n = c.normalize_to_dj(&rho, &set(&[1])).unwrap();
        assert_eq!(n.word, vec![WjLetter::Reflection(2)]);
        assert!(c.in_chamber(&n.theta, &Chamber::Dj(set(&[1]))));
        let all = set(&[1, 2]);
        let n = c.normalize_to_dj(&rho, &all).unwrap();
        assert!(n.word.is_empty());
        assert_eq!(n.theta, rho);
        assert!(c.normalize_to_dj(&-&rho, &all).is_err());
    }

    #[test]
    fn dj_with_the_affine_wall() {
        let c = cd("A2");
        // (θ, δ) small and (θ, α_i) very negative violates the δ + φ wall
        let theta = Coweight::new(vec![q(13), q(-5), q(-5)]);
        let j = NodeSet::new();
        let n = c.normalize_to_dj(&theta, &j).unwrap();
        assert!(c.in_chamber(&n.theta, &Chamber::Dj(j.clone())));
        assert!(n.word.iter().any(|l| matches!(l, WjLetter::Shear { .. })));
        assert_eq!(c.evaluate_wj_word(&n.word).unwrap(), n.element);
        assert_eq!(n.element.dual_action(&theta), n.theta);
    }

    #[test]
    fn locate_examples() {
        let c = cd("A2");
        let t0 = c.w0_rho();
        let (up, low) = c.locate_heart_cone(&t0).unwrap();
        assert_eq!((up.case, up.word.len()), (1, 0));
        assert_eq!(up, low);
        let l = FiniteCoweight::fundamental(2, 1);
        let (up, low) = c.locate_heart_cone(&c.embed_finite_coweight(&l)).unwrap();
        assert_eq!(up.case, 3);
        assert!(up.word.is_empty());
        assert_eq!(up.j, Some(set(&[1])));
        assert_eq!((up.flavor, low.flavor), (Some(Flavor::Perverse), Some(Flavor::ReversedPerverse)));
        let (up, _) = c.locate_heart_cone(&-&t0).unwrap();
        assert_eq!((up.case, up.word.len(), up.shift), (2, 0, -1));
        assert!(c.locate_heart_cone(&Coweight::zero(3)).is_err());
        let json = serde_json::to_value(&c.locate_heart_cone(&c.embed_finite_coweight(&l)).unwrap().0).unwrap();
        assert_eq!(json, serde_json::json!({"case":3,"word":[],"J":[1],"shift":0,"flavor":"perverse"}));
    }

    #[test]
    fn wall_points_give_an_interval() {
        // (θ, δ) > 0 on a wall of C⁺: two chambers, shorter one is H^θ
        let c = cd("A2");
        let theta = Coweight::new(vec![q(1), q(0), q(1)]);
        let (up, low) = c.locate_heart_cone(&theta).unwrap();
        assert_eq!(up.case, 1);
        assert!(up.word.len() < low.word.len());
        assert!(up.contains(&c, &theta) && low.contains(&c, &theta));
    }

    fn small_coweight(n: usize) -> impl Strategy<Value = Coweight> {
        proptest::collection::vec((-6i64..=6, 1i64..=3), n)
            .prop_map(|v| Coweight::new(v.into_iter().map(|(a, b)| frac(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn located_cones_contain_the_point(theta in small_coweight(3)) {
            let c = cd("A2");
            prop_assume!(!theta.is_zero());
            let (up, low) = c.locate_heart_cone(&theta).unwrap();
            prop_assert!(up.contains(&c, &theta));
            prop_assert!(low.contains(&c, &theta));
        }

        #[test]
        fn dj_normalization_stays_in_wj(theta in small_coweight(4), mask in 0u32..8) {
            let c = cd("A3");
            prop_assume!(theta.pair(&c.delta()).is_positive());
            let j: NodeSet = (1..=3).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let n = c.normalize_to_dj(&theta, &j).unwrap();
            prop_assert!(c.in_chamber(&n.theta, &Chamber::Dj(j.clone())));
            let g = c.evaluate_wj_word(&n.word).unwrap();
            prop_assert_eq!(g.dual_action(&theta), n.theta.clone());
            for &i in &j {
                let face = c.embed_finite_coweight(&FiniteCoweight::fundamental(3, i));
                prop_assert_eq!(g.dual_action(&face), face);
            }
        }
    }
}
