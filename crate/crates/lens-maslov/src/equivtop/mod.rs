//! The `Z_k`-equivariant simplicial engine.
//!
//! This module computes the topological side of the story: the cohomological
//! index of subsets of lens spaces and the equivariant join of chains, both
//! over the field `Z_k` with `k` prime. The objects are concrete —
//!
//! * [`circle_complex`] models the weighted circle `S^1(w)` as a polygon with
//!   a free `Z_k`-rotation, and [`join_complex`] builds weighted spheres
//!   `S^{2M-1}(w_1, ..., w_M)` as `M`-fold joins of polygons;
//! * [`QuotientComplex`] divides by the action. Freeness of the action on
//!   simplices makes the quotient a Δ-complex: its cells are simplex orbits,
//!   and its boundary operator is the projection of the upstairs one, kept
//!   both over `ℤ` (for the Bockstein) and over `Z_k`;
//! * [`homology`] and [`bockstein`] do field linear algebra on those
//!   matrices; [`cohom_index`] computes the index of a subcomplex `A ⊂ L` as
//!   the total rank of the restriction `H^*(L) → H^*(A)`, which is the right
//!   notion because lens spaces have no holes: the image is forced to be one
//!   line per degree below the index and zero at and above it;
//! * [`chain_join_equivariant`] is the join of chains downstairs,
//!   `σ ∗ μ = Σ_c proj(σ̃ ∗ (g^c · μ̃))`, the closed form of the conjugation
//!   `φ^{-1}(φ(σ) ∗ φ(μ))` by the invariant-lift isomorphism `φ`. Over `Z_k`
//!   it satisfies the Leibniz-type rule
//!   `∂(x ∗ y) = (∂x) ∗ y + (-1)^{l+1} x ∗ (∂y)` in *every* degree, because
//!   the stray terms of the non-equivariant rule appear `k` times;
//! * [`property_suite`] stress-tests the five index laws (monotonicity,
//!   duality of the two index routes, Lefschetz, subadditivity, join
//!   quasi-additivity with stability) on seeded random subcomplexes and
//!   reports violations as replayable certificates.
//!
//! Everything here is exact integer/field arithmetic; there are no
//! tolerances anywhere in this module.

mod complex;
mod homology;
mod index;
mod io;
mod join;
mod modk;
mod quotient;
mod suite;

pub use complex::{circle_complex, join_complex, EquivComplex};
pub use homology::{
    bockstein, cochain_class_is_zero, cohomology_generators, cycle_class_is_zero, homology,
    simplicial_betti, HomologyReport,
};
pub use index::{cohom_index, homology_index};
pub use io::{load_model, parse_complex, resolve_subcomplex, write_complex, NamedSubs};
pub use join::{
    boundary_rule_rhs, chain_join_equivariant, chain_join_via_lifts, twist_chain, twist_check,
};
pub use quotient::{lens_model, ChainVector, QuotientComplex, Subcomplex};
pub use suite::{property_suite, PropertyReport, PropertyViolation};
