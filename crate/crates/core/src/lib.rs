// index loops mirror the matrix formulas
#![allow(clippy::needless_range_loop)]

pub mod amodel;
pub mod error;
pub mod matrix;
pub mod nilpotent;
pub mod picard_fuchs;
pub mod report;
pub mod scalar;
pub mod series;
pub mod subspace;
pub mod vshs;

pub use error::{Error, Result};
pub use matrix::{Matrix, SeriesMatrix};
pub use report::CheckReport;
pub use scalar::Scalar;
pub use series::Series;
pub use subspace::Subspace;
