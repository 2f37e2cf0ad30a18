//! Computer-assisted verification of Pólya's conjecture for Dirichlet
//! eigenvalues of planar annuli.
//!
//! The crate counts eigenvalues through floor sums of explicit concave
//! bounding functions, evaluates those sums with exact rational arithmetic
//! and directed rounding, and covers the parameter region left open by the
//! analytic estimates with a finite, independently checkable list of
//! rectangles.

pub mod besseloracle;
pub mod boundfns;
pub mod certifier;
pub mod exactnum;
pub mod floorsum;
pub mod regions;
pub mod suites;

pub use exactnum::{BoundPair, ExactError, Precision, Rational};
