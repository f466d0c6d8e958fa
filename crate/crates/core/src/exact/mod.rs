//! Shared exact-arithmetic substrate: rationals, finite fields,
//! homogeneous forms, multiplicity patterns and small linear algebra.

pub mod field;
pub mod io;
pub mod linalg;
pub mod poly;

pub use field::{Field, Fq, Jet, Rationals};
pub use linalg::{kernel_subspace, LinearSubspace, Mat};
pub use poly::{factor_pattern, HomogeneousForm, MultiplicityPattern, Poly};
