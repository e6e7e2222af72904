//! Renormalized non-semi-simple quantum sl(2) invariants: link invariants F′,
//! 3-manifold invariants Z from surgery presentations, graded Verlinde
//! dimensions, r = 2 torsion formulas and torus mapping-class-group data.

pub mod closedforms;
pub mod error;
pub mod linalg;
pub mod mcg;
pub mod qcore;
pub mod repcat;
pub mod selfcheck;
pub mod surgery;
pub mod tangle;
pub mod torsion_r2;

pub use error::{Error, Result};
pub use qcore::{RootData, C64};
pub use repcat::ColorLabel;
