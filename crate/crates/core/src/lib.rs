//! Coherence for associativity and self-similarity isomorphisms.
//!
//! Objects are binary trees over one generator `x` with `x*x ≅ x`. Typed arrow
//! terms are built from associators, the self-similarity code and decode, and
//! named atoms; flattening sends them to the endomorphism monoid of `x`.
//! [`coherence::decide`] either proves that a diagram commutes by finding a
//! consistent associativity typing, or evaluates it in an exact model on the
//! naturals where arrows are piecewise-affine bijections.

pub mod cli;
pub mod coherence;
pub mod model_matrix;
pub mod model_nat;
pub mod syntax;
pub mod terms;
pub mod trees;
