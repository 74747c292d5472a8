//! Exact computations with covers of finite abelian groups: the monoid `K_+`,
//! its extremal rays, multiplication tables of graded algebras, algebras
//! generated in two degrees, and stack-level verdicts.

pub mod abelian_group;
pub mod cover_monoid;
pub mod exact_linalg;
pub mod graded_algebra;
pub mod stack_analysis;
pub mod two_degree;
pub mod verification;
