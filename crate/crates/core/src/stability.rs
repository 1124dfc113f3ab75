//! Central charges `Z = −θ̌ + iω̌`, regularity, stability functions on the
//! perverse hearts, normalization of a charge up to shift and Weyl action,
//! slopes, and the arc `θ_t` used by the slicing check.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan_data::{CartanData, NodeSet};
use crate::chambers_fan::{Chamber, Flavor};
use crate::error::{Error, Result};
use crate::lattices::{coweight_to_json, Coweight, FiniteCoweight, RootVector};
use crate::rational::{q, Rational};
use crate::weyl_braid::{WeylElement, DESCENT_CAP};

/// `Z(v) = −(θ̌, v) + i(ω̌, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharge {
    pub theta: Coweight,
    pub omega: Coweight,
}

/// Which unit interval the heart is cut from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    /// `(0, 1]`
    HalfOpenUp,
    /// `[0, 1)`
    HalfOpenDown,
}

impl CentralCharge {
    pub fn new(theta: Coweight, omega: Coweight) -> Self {
        Self { theta, omega }
    }

    /// `(Re Z(v), Im Z(v))`.
    pub fn eval(&self, v: &RootVector) -> (Rational, Rational) {
        (-self.theta.pair(v), self.omega.pair(v))
    }

    /// The lattice automorphism `w` acting on both parts.
    pub fn act(&self, w: &WeylElement) -> CentralCharge {
        CentralCharge { theta: w.dual_action(&self.theta), omega: w.dual_action(&self.omega) }
    }

    /// Shift `[1]` multiplies `Z` by `−1`.
    pub fn shifted(&self) -> CentralCharge {
        CentralCharge { theta: -&self.theta, omega: -&self.omega }
    }

    pub fn is_zero(&self) -> bool {
        self.theta.is_zero() && self.omega.is_zero()
    }
}

/// `z ∈ H₋ = {r e^{iπφ} : r > 0, 0 < φ ≤ 1}`.
pub fn in_upper_closed_left(z: &(Rational, Rational)) -> bool {
    z.1.is_positive() || (z.1.is_zero() && z.0.is_negative())
}

/// `z ∈ {r e^{iπφ} : r > 0, 0 ≤ φ < 1}`.
pub fn in_upper_closed_right(z: &(Rational, Rational)) -> bool {
    z.1.is_positive() || (z.1.is_zero() && z.0.is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    /// Reduced word of `g ∈ W` with `g·Z'` normal, where `Z'` is `Z` after the shift.
    pub word: Vec<usize>,
    pub j: NodeSet,
    /// Number of `[1]` shifts applied before `g`; `0` or `1`.
    pub shift: i64,
    pub flavor: Flavor,
    pub charge: CentralCharge,
}

/// Exact arc datum at index `n`: `tan(π t_n) = n h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcParameter {
    Index { n: i64, tan: Rational },
    PlusInfinity,
    MinusInfinity,
}

impl ArcParameter {
    /// `t` for display; `±1/2` at the ends.
    pub fn value(&self) -> f64 {
        match self {
            ArcParameter::Index { tan, .. } => tan.to_f64().unwrap_or(0.0).atan() / std::f64::consts::PI,
            ArcParameter::PlusInfinity => 0.5,
            ArcParameter::MinusInfinity => -0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlicingEntry {
    pub n: i64,
    #[serde(serialize_with = "ser_coweight")]
    pub direction: Coweight,
    pub chamber: ChamberReport,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberReport {
    #[serde(rename = "type")]
    pub kind: String,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SlicingReport {
    pub entries: Vec<SlicingEntry>,
    /// `embed(λ̌)` locates to case 3 with the flavors of `P_C(X/X_J)`, `P̄_C(X/X_J)`.
    pub midpoint_ok: bool,
    pub ok: bool,
}

fn ser_coweight<S: serde::Serializer>(c: &Coweight, s: S) -> std::result::Result<S::Ok, S::Error> {
    coweight_to_json(c).serialize(s)
}

impl CartanData {
    /// `Z ∈ h_reg`: `Z(δ) ≠ 0` and `Z(α + nδ) ≠ 0` for every `α ∈ Δ_f`, `n ∈ ℤ`.
    pub fn in_hreg(&self, z: &CentralCharge) -> bool {
        let (dr, di) = z.eval(&self.delta());
        if dr.is_zero() && di.is_zero() {
            return false;
        }
        // Z(α) = −n Z(δ) for one rational n, which must fail to be an integer
        self.positive_roots().iter().all(|alpha| {
            let (ar, ai) = z.eval(alpha);
            let n = if !dr.is_zero() { -&ar / &dr } else { -&ai / &di };
            let consistent = &ar + &n * &dr == Rational::zero() && &ai + &n * &di == Rational::zero();
            !(consistent && n.is_integer())
        })
    }

    /// Whether `Z` is a stability function on the heart named by `(J, flavor)`.
    ///
    /// For `J ≠ ∅` and a perverse flavor this is `ω̌` in the relative interior
    /// of `C⁰_J` and `θ̌` in the interior of `D_J`; boundary points send a
    /// nonzero class of the heart to `0` or to the wrong ray. For `J = ∅` or
    /// `Nilp` the simple classes are tested directly: `H₋` for `(0, 1]`
    /// hearts, its mirror for `ReversedPerverse`.
    pub fn is_stability_function(&self, z: &CentralCharge, j: &NodeSet, flavor: Flavor) -> bool {
        if self.check_finite_subset(j).is_err() {
            return false;
        }
        if j.is_empty() || flavor == Flavor::Nilp {
            let test = if flavor == Flavor::ReversedPerverse { in_upper_closed_right } else { in_upper_closed_left };
            return self.nodes().all(|i| test(&z.eval(&self.simple_class(i))));
        }
        self.in_chamber_interior(&z.omega, &Chamber::ZeroFace(j.clone()))
            && self.in_chamber_interior(&z.theta, &Chamber::Dj(j.clone()))
    }

    /// Like [`Self::is_stability_function`] for `Nilp` but against the interval `[0, 1)`.
    pub fn is_stability_function_down(&self, z: &CentralCharge) -> bool {
        self.nodes().all(|i| in_upper_closed_right(&z.eval(&self.simple_class(i))))
    }

    /// Classes generating `P_C(X/X_J)` under extensions: `[𝒪_{C_i}(n)] = (n+1)δ + α_i`
    /// for `i ∈ J`, `|n| ≤ window`, the point class `δ`, and per component `J'`
    /// of `I_f ∖ J` the simples `−α_i` (`i ∈ J'`) and `2δ − α_{J'}`.
    pub fn perverse_generator_classes(&self, j: &NodeSet, window: i64) -> Result<Vec<RootVector>> {
        self.check_finite_subset(j)?;
        let mut out = vec![self.delta()];
        for &i in j {
            for n in -window..=window {
                out.push(self.affine_root(&self.alpha(i), n + 1));
            }
        }
        let comp = self.complement(j);
        for c in self.connected_components(&comp) {
            for &i in &c {
                out.push(-self.alpha(i));
            }
            out.push(&(&self.delta() * 2) - &self.alpha_j(&c)?);
        }
        Ok(out)
    }

    /// Direct test that `Z` maps every generator class into `H₋`.
    pub fn generator_test(&self, z: &CentralCharge, j: &NodeSet, window: i64) -> Result<bool> {
        Ok(self.perverse_generator_classes(j, window)?.iter().all(|v| in_upper_closed_left(&z.eval(v))))
    }

    /// Moves a regular charge, up to shift and the Weyl action, into the normal
    /// form for the standard heart (`ω̌(δ) ≠ 0`) or a perverse heart (`ω̌(δ) = 0`).
    pub fn normalize_stability(&self, z: &CentralCharge, interval: Interval) -> Result<NormalizationResult> {
        if !self.in_hreg(z) {
            return Err(Error::Precondition("central charge is not in h_reg".into()));
        }
        let delta = self.delta();
        let od = z.omega.pair(&delta);
        if !od.is_zero() {
            let shift = i64::from(od.is_negative());
            let z1 = if shift == 1 { z.shifted() } else { z.clone() };
            let norm = self.normalize_to_dominant(&z1.omega)?;
            let mut g = norm.element.clone();
            let z2 = z1.act(&g);
            // ω̌ ∈ C⁺ is fixed by the reflections in the walls it lies on; those
            // move θ̌ to the side where the corresponding simples get phase 1 or 0
            let sign = if interval == Interval::HalfOpenUp { 1 } else { -1 };
            let walls: Vec<RootVector> = self
                .plus_walls()
                .into_iter()
                .filter(|v| z2.omega.pair(v).is_zero())
                .map(|v| &v * sign)
                .collect();
            let (h, _) = self.descend_with(&z2.theta, &walls)?;
            g = h.compose(&g);
            let charge = z1.act(&g);
            let ok = match interval {
                Interval::HalfOpenUp => self.is_stability_function(&charge, &NodeSet::new(), Flavor::Nilp),
                Interval::HalfOpenDown => self.is_stability_function_down(&charge),
            };
            if !ok {
                return Err(Error::Internal("normalized charge failed revalidation".into()));
            }
            return Ok(NormalizationResult {
                word: self.reduced_word(&g)?,
                j: NodeSet::new(),
                shift,
                flavor: Flavor::Nilp,
                charge,
            });
        }
        let shift = i64::from(z.theta.pair(&delta).is_negative());
        let z1 = if shift == 1 { z.shifted() } else { z.clone() };
        let fin = self.normalize_to_finite_dominant(&z1.omega)?;
        let z2 = z1.act(&fin.element);
        // the face of C⁰ containing ω̌ in its relative interior
        let j: NodeSet = self.finite_nodes().filter(|&i| z2.omega[i].is_positive()).collect();
        let dj = self.normalize_to_dj(&z2.theta, &j)?;
        let g = dj.element.compose(&fin.element);
        let charge = z1.act(&g);
        let flavor = match interval {
            Interval::HalfOpenUp => Flavor::Perverse,
            Interval::HalfOpenDown => Flavor::ReversedPerverse,
        };
        let ok = if j.is_empty() {
            self.is_stability_function(&charge, &j, Flavor::Perverse)
        } else {
            self.is_stability_function(&charge, &j, flavor)
        };
        if !ok {
            return Err(Error::Internal("normalized charge failed revalidation".into()));
        }
        Ok(NormalizationResult { word: self.reduced_word(&g)?, j, shift, flavor, charge })
    }

    /// Reflects `θ` in the given roots until it pairs nonnegatively with all of them.
    fn descend_with(&self, theta: &Coweight, walls: &[RootVector]) -> Result<(WeylElement, Coweight)> {
        let refl: Vec<WeylElement> = walls.iter().map(|w| self.reflection(w)).collect::<Result<_>>()?;
        let mut g = self.identity_element();
        let mut t = theta.clone();
        let mut steps = 0;
        while let Some(k) = walls.iter().position(|w| t.pair(w).is_negative()) {
            steps += 1;
            if steps > DESCENT_CAP {
                return Err(Error::Internal("wall descent exceeded its cap".into()));
            }
            t = refl[k].dual_action(&t);
            g = refl[k].compose(&g);
        }
        Ok((g, t))
    }

    /// `w̃0 = κ ⋉ w0`; acts as `−1` on the finite part and fixes `δ`.
    /// Re-checks a normalization: the normalized charge must be a stability
    /// function on the heart named by `(J, flavor)`.
    pub fn revalidate_normalization(&self, r: &NormalizationResult, interval: Interval) -> bool {
        match (r.flavor, interval) {
            (Flavor::Nilp, Interval::HalfOpenUp) => self.is_stability_function(&r.charge, &NodeSet::new(), Flavor::Nilp),
            (Flavor::Nilp, Interval::HalfOpenDown) => self.is_stability_function_down(&r.charge),
            // J = ∅ at level zero: both flavors name the standard heart
            _ if r.j.is_empty() => self.is_stability_function(&r.charge, &r.j, Flavor::Perverse),
            (f, _) => self.is_stability_function(&r.charge, &r.j, f),
        }
    }

    pub fn twisted_longest_element(&self) -> WeylElement {
        let mut perm: Vec<usize> = vec![0];
        perm.extend(self.finite_nodes().map(|i| self.kappa(i)));
        self.diagram_element(&perm).compose(self.longest_element())
    }

    /// `dim(d) = (w0ρ̌, d)`.
    pub fn dimension(&self, d: &RootVector) -> Rational {
        self.w0_rho().pair(d)
    }

    /// `μ_θ(d) = (w̃0 θ̌, d) / dim(d)`.
    pub fn slope(&self, theta: &Coweight, d: &RootVector) -> Result<Rational> {
        let dim = self.dimension(d);
        if !dim.is_positive() {
            return Err(Error::Precondition(format!("class {:?} has dimension {dim}", d.coords())));
        }
        Ok(self.twisted_longest_element().dual_action(theta).pair(d) / dim)
    }

    /// `tan(π t_n) = n h`.
    pub fn t_index(&self, n: i64) -> ArcParameter {
        ArcParameter::Index { n, tan: q(n * self.coxeter_number()) }
    }

    /// Rational representative of the ray through `θ_{t_n}`: `θ_0 + n h λ̌`
    /// for `n ≥ 0` and `−θ_0 − n h λ̌` for `n < 0`, with `θ_0 = w0ρ̌`.
    pub fn arc_direction(&self, lambda: &FiniteCoweight, n: i64) -> Coweight {
        let t0 = self.w0_rho();
        let step = self.embed_finite_coweight(lambda).scale(&q(n * self.coxeter_number()));
        let v = &t0 + &step;
        if n >= 0 {
            v
        } else {
            -&v
        }
    }

    /// `ℓ_λ̌^n · θ = θ − n (θ, δ) λ̌`; lands the arc point of index `n` on `±θ_0`.
    pub fn shear_power_dual(&self, lambda: &FiniteCoweight, n: i64, theta: &Coweight) -> Coweight {
        let d = theta.pair(&self.delta());
        theta - &self.embed_finite_coweight(lambda).scale(&(d * q(n)))
    }

    /// Checks that each arc point `n` sits in the interior of `ℓ_λ̌^{−n} C^±`
    /// and that `embed(λ̌)` lies in the perverse cone for `J`.
    pub fn verify_slicing(&self, lambda: &FiniteCoweight, j: &NodeSet, range: std::ops::RangeInclusive<i64>) -> Result<SlicingReport> {
        if !self.is_pij_ample(lambda, j) {
            return Err(Error::Precondition("λ̌ is not ϖ_J-ample".into()));
        }
        if lambda.to_integers().is_none() {
            return Err(Error::Precondition("λ̌ must be integral".into()));
        }
        let mut entries = Vec::new();
        for n in range {
            let direction = self.arc_direction(lambda, n);
            let back = self.shear_power_dual(lambda, n, &direction);
            let (which, kind) = if n >= 0 { (Chamber::Plus, "Cplus") } else { (Chamber::Minus, "Cminus") };
            let inside = self.in_chamber_interior(&back, &which);
            let (up, _) = self.locate_heart_cone(&direction)?;
            entries.push(SlicingEntry {
                n,
                direction,
                chamber: ChamberReport { kind: kind.into(), word: up.word },
                ok: inside,
            });
        }
        let (up, low) = self.locate_heart_cone(&self.embed_finite_coweight(lambda))?;
        let midpoint_ok = up.case == 3
            && up.word.is_empty()
            && up.j.as_ref() == Some(j)
            && up.flavor == Some(Flavor::Perverse)
            && low.flavor == Some(Flavor::ReversedPerverse);
        let ok = midpoint_ok && entries.iter().all(|e| e.ok);
        Ok(SlicingReport { entries, midpoint_ok, ok })
    }
}

impl NormalizationResult {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word,
            "J": self.j,
            "shift": self.shift,
            "flavor": self.flavor,
            "theta": coweight_to_json(&self.charge.theta),
            "omega": coweight_to_json(&self.charge.omega),
        })
    }
}

impl SlicingEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "direction": coweight_to_json(&self.direction),
            "chamber": {"type": self.chamber.kind, "word": self.chamber.word},
            "ok": self.ok,
        })
    }
}
