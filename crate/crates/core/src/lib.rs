//! Stacked central configurations of the Newtonian n-body problem in R³.
//!
//! A configuration of point masses is *central* when the gravitational
//! acceleration of every body is `-λ (q_i - c)` for one common multiplier
//! `λ = U/I`. This crate checks that property, decides in which ways an
//! n-body central configuration extends to an (n+1)-body one by adding a
//! single mass, and constructs the extensions:
//!
//! * [`config`]: the [`Configuration`] type, `U`, `I`, `λ`, `r0` and the
//!   normalized CC residual.
//! * [`geometry`]: circumscribing circles and spheres.
//! * [`extension`]: the five non-collinear extension ways, fully stacked
//!   and pyramidal checks.
//! * [`collinear`]: Euler's collinear three-body solutions and the cubic
//!   root-count argument that rules out collinear extensions for n ≥ 3.
//! * [`cocircular`]: side/diagonal structure of co-circular CCs and a
//!   damped Newton solver for four-body co-circular CCs.
//! * [`special`]: regular polygons, pyramids and bi-pyramids, and named
//!   fixture generators.

pub mod cocircular;
pub mod collinear;
pub mod config;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod special;
mod sum;

pub use cocircular::{CocircularCC, Constraint, SideDiagonalReport, SolveOutcome};
pub use collinear::{CubicRootProfile, EulerInterval, EulerSolution, WitnessReport};
pub use config::{cc_report, CCReport, Configuration, DEFAULT_TOLERANCE};
pub use error::{Error, Result};
pub use extension::{ApexChoice, ExtensionPlan, Way};
pub use geometry::{CircleFit, SphereFit};
pub use special::{BiPyramid, NamedConfig, NgonReport};
pub use sum::NeumaierSum;

/// Positions and vectors in R³.
pub type Vec3 = nalgebra::Vector3<f64>;
