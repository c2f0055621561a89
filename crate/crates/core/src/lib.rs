//! Exact computation with elements of the full group of the dyadic odometer
//! on Cantor space `X = {0,1}^N`, under the Bernoulli measures `mu_lambda`.
//!
//! Everything is finite and exact. Clopen sets are canonical unions of
//! cylinders ([`CylinderSet`]), group elements are equal-length tables
//! `u·w ↦ v·w` ([`FullMap`], [`LeafPerm`]), and every measure, distance and
//! cocycle value is a reduced big-integer fraction.
//!
//! ```
//! use fullgroup::{CylinderSet, FullMap, Lambda, TableMap};
//!
//! let lam = Lambda::from_ratio(2, 3).unwrap();
//! let swap = FullMap::new(TableMap::parse(&[("0", "1"), ("1", "0")]).unwrap()).unwrap();
//! assert_eq!(swap.du(&FullMap::identity(), &lam).to_string(), "1");
//! assert_eq!(CylinderSet::parse(&["0"]).unwrap().mu(&lam).to_string(), "2/3");
//! ```
//!
//! Modules, bottom up:
//!
//! - [`word`], [`cylinder`], [`rational`]: words, clopen sets, measures.
//! - [`table`]: table maps, the full group, leaf permutations, the odometer.
//! - [`perm`], [`l0`]: finite permutations and step functions into them.
//! - [`equidecompose`]: maps between clopen sets, exact or up to epsilon.
//! - [`census`], [`conjugate`], [`densify`]: orbit types of tuples and the
//!   conjugation and density constructions built on them.
//! - [`oracle`], [`selftest`]: brute-force evaluators and the property suites.
//! - [`cli`]: the `fullgroup` command line.

pub mod census;
pub mod cli;
pub mod conjugate;
pub mod cylinder;
pub mod densify;
pub mod equidecompose;
pub mod error;
pub mod l0;
pub mod oracle;
pub mod perm;
pub mod rational;
pub mod selftest;
pub mod table;
pub mod word;

pub use census::{census, OrbitCensus, TransitiveTupleType};
pub use conjugate::{conjugate_tuples, ConjugationResult};
pub use cylinder::CylinderSet;
pub use densify::{densify, psi_embed, DensifyResult};
pub use equidecompose::{equidecompose_onto, prec, three_cycle, EquidecompResult};
pub use error::{Error, Result};
pub use l0::{phi_embed, StepFn};
pub use perm::Perm;
pub use rational::{Lambda, Rational};
pub use table::{odometer, FullMap, LeafPerm, TableMap, TruncatedMap};
pub use word::Word;
