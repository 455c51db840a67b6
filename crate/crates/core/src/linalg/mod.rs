//! Dense complex linear algebra: matrices, spectral norms, SVD and the
//! band-nearness solver.

pub mod band;
pub mod cmatrix;
pub mod norm;
pub mod svd;

pub use band::{band_nearness, BandOptions, BandResult};
pub use cmatrix::{inner, vec_norm, CMatrix};
pub use norm::{min_singular_value, norm, op_norm, top_singular_pair, NormEstimate};
pub use svd::{singular_values, svd, Svd};
