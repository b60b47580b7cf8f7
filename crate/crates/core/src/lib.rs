//! Left-invariant Riemannian geometry of metric Lie algebras.
//!
//! The crate works entirely with structure constants in a fixed basis. From
//! them it computes the Levi-Civita connection and Ricci curvature of a
//! left-invariant metric, decides whether the metric is an algebraic Ricci
//! soliton (`Ric = cI + D` with `D` a derivation), tests the soliton equation
//! against left-invariant vector fields, analyses 2-step nilpotent and H-type
//! algebras through their `j(z)` maps, builds rank-one solvable extensions and
//! integrates the homogeneous Ricci flow `dg/dt = -2 Ric(g)`.
//!
//! Sign convention: a soliton `-2 Ric = 2 lambda g + L_X g` is expanding for
//! `lambda > 0`, steady for `lambda = 0` and shrinking for `lambda < 0`, so that
//! the metric scales as `1 + 2 lambda t`. Literature using
//! `Ric + (lambda/2) g`-style conventions with the opposite sign must negate
//! `lambda` before comparing.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod flow;
pub mod linalg;
pub mod metric;
pub mod par;
pub mod report;
pub mod soliton;
pub mod specfile;
pub mod theorems;
pub mod tol;
pub mod two_step;

pub use algebra::{DerivationSpace, LieAlgebra, NilpotencyClass};
pub use error::{Error, Result};
pub use flow::FlowTrajectory;
pub use metric::{CurvaturePackage, MetricLieAlgebra};
pub use soliton::{MilnorFrame, SolitonCertificate, SolitonType, Verdict};
pub use tol::Tolerances;
pub use two_step::{SolvableExtension, TwoStepDecomposition};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;
