//! Exact computations around L-space knots: Alexander polynomials, formal
//! semigroups, gap functions, their convex envelopes and the Upsilon
//! invariant obtained by the Legendre-Fenchel transform.

pub mod braid;
pub mod family;
pub mod gapfn;
pub mod knotform;
pub mod plmath;
pub mod poly;
pub mod restore;
pub mod seifert;
