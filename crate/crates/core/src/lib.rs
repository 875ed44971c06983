//! Matroids over `Z` and over discrete valuation rings.
//!
//! A matroid over a ring `R` on a finite set `E` assigns a finitely generated
//! module `M(A)` to each `A ⊆ E`, compatibly with quotients by single
//! elements. This crate stores such tables densely, checks the axiom through
//! local criteria, and computes minors, duals, Tutte-Grothendieck classes,
//! quasi-arithmetic data and tropical certificates.
//!
//! ```
//! use ringmat_core::{IntMatrix, Realization, ZMatroid};
//!
//! let r = Realization::new(
//!     IntMatrix::from_columns(2, &[vec![4, 0], vec![0, 2]]).unwrap(),
//!     IntMatrix::from_columns(2, &[vec![1, 0], vec![1, 1]]).unwrap(),
//! )
//! .unwrap();
//! let m = ZMatroid::from_realization(&r).unwrap();
//! assert_eq!(m.get(0).to_string(), "Z/2 + Z/4");
//! assert!(m.is_matroid().is_ok());
//! ```

pub mod duality;
pub mod error;
pub mod group;
pub mod linalg;
pub mod matroid;
pub mod oracle;
pub mod poly;
pub mod qam;
pub mod tropical;
pub mod tutte;
pub mod witness;

pub use duality::{dual, dual_dvr, gale_dual};
pub use error::{Error, Result};
pub use group::{cyclic_surjection_exists, square_exists, DMod, ExtNat, FgAbGroup};
pub use linalg::{cokernel, smith_normal_form, IntMatrix, SnfResult};
pub use matroid::{
    Condition, DvrMatroid, GroundSet, Matroid, Module, Realization, Subset, Verdict, Violation,
    ZMatroid, MAX_GROUND,
};
pub use poly::Poly2;
pub use qam::{check_axioms, to_qam, QamData, QamViolation};
pub use tropical::{HeightFunction, TropicalVerdict, TropicalViolation};
pub use tutte::{TorsionTag, TutteClass, TutteMonomial};
