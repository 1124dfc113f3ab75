//! Exact combinatorics for affine ADE root systems and the stability
//! conditions of Kleinian resolutions.
//!
//! The crate is organised bottom-up:
//!
//! - [`cartan_data`]: affine diagrams, marks, `κ`, automorphisms.
//! - [`lattices`]: root lattice, coweights, root classification, module classes.
//! - [`weyl_braid`]: affine Weyl group as integer matrices, reduced words, shears.
//! - [`chambers_fan`]: Tits-cone chambers, the fundamental domains `D_J`, heart cones.
//! - [`stability`]: central charges, stability functions, normalization, arcs.
//! - [`preproj_reps`]: nilpotent preprojective representations over `F_p`, HN filtrations.
//! - [`elliptic_lie`]: the elliptic Lie algebra and classical affine Yangian relations.
//! - [`borel_halves`]: the root sets `Δ_{J,(k)}`, `Δ_J` and graded characters.
//! - [`cli`]: the `heartlab` command line front end.
//!
//! All predicates are exact: integers for roots, arbitrary precision
//! rationals for coweights.

pub mod borel_halves;
pub mod cartan_data;
pub mod chambers_fan;
pub mod cli;
pub mod elliptic_lie;
pub mod error;
pub mod lattices;
pub mod preproj_reps;
pub mod rational;
pub mod stability;
pub mod weyl_braid;

pub use cartan_data::{CartanData, DynkinType, Family, NodeSet};
pub use error::{Error, Result};
pub use lattices::{Coweight, FiniteCoweight, RootClass, RootVector};
pub use rational::Rational;
pub use weyl_braid::{BraidLetter, BraidWord, ExtendedWeylElement, WeylElement};
