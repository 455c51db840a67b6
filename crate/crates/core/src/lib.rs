//! Finite-scale coarse geometry and the operator side of Roe-like algebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`dist`], [`space`], [`relation`], [`coarse_map`], [`profile`]: finite
//!   extended metric spaces, relations between them and the purely relational
//!   measurements (composition, closeness, expansion, properness).
//! - [`linalg`]: dense complex matrices, spectral norms and the band-nearness
//!   solver.
//! - [`module`], [`locality`]: geometric modules `⊕ₓ ℂ^{m_x}`, block supports,
//!   propagation, quasi-locality and approximability profiles.
//! - [`approx`]: approximating relations extracted from operators.
//! - [`matching`], [`covering`]: covering isometries and unitaries built from
//!   coarse maps.
//! - [`rigidity`]: round-trip, concentration and uniformization experiments.
//! - [`gen`]: deterministic generators for standard spaces.
//! - [`io`]: the JSON file formats shared with the command line tool.

pub mod approx;
pub mod cliques;
pub mod coarse_map;
pub mod covering;
pub mod dist;
pub mod error;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod locality;
pub mod matching;
pub mod module;
pub mod profile;
pub mod relation;
pub mod rigidity;
pub mod space;

pub use dist::Dist;
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use module::{GeometricModule, ModuleOperator};
pub use profile::{Exactness, Profile, ProfileKind};
pub use relation::Relation;
pub use space::ExtMetricSpace;

pub use num_complex::Complex64 as C64;
