//! Exact computational machinery for real-variety component bounds.
//!
//! The crate has four layers:
//!
//! * [`polyring`] — sparse multivariate polynomials over exact rationals,
//!   with derivatives, Jacobian minors and rigorous interval evaluation;
//! * [`bounds`] — exact big-integer evaluation of the component-count and
//!   sign-condition bound formulas over degree/dimension profiles;
//! * [`families`] — generators for the extremal families with closed-form
//!   component counts and explicit zero lists;
//! * [`deform`] / [`components`] — the deformation-to-general-position
//!   machinery with structural audits, and the certified subdivision
//!   counter that produces ground truth to compare bounds against.
//!
//! Everything is exact: coefficients and interval endpoints are arbitrary
//! precision rationals, bound values are big integers, and all comparisons
//! in tests are integer equalities.

pub mod bounds;
pub mod certify;
pub mod components;
pub mod deform;
pub mod families;
pub mod formats;
pub mod polyring;

pub use bounds::Profile;
pub use polyring::{Interval, Polynomial};
