//! Bisimulation, graded bisimulation, maximal refinement, and enumeration of
//! refinement-closed state sets.

mod bisim;
mod closed;
mod graded;
mod pairs;
mod refine;

pub use bisim::{is_bisimulation_minimal, max_bisimulation, quotient, Quotient};
pub use closed::{
    closed_subsets_containing, refinement_closure, ClosedSubsets, ClosureSystem, Strategy,
    DEFAULT_STATE_CAP, MAX_ENUMERABLE_STATES,
};
pub use graded::{bisimilar, disjoint_union, n_bisimilar, GradedRelationFamily};
pub use pairs::StatePairRelation;
pub use refine::{
    closure_violation, is_refinement, is_refinement_closed, max_refinement,
    max_refinement_traced, refinement_step, MaxRefinement, RemovalReason,
};

pub(crate) use bisim::{bisimulation_classes, bisimulation_on};
pub(crate) use closed::check_cap;
pub(crate) use refine::{closure_violation_in, refinement_on};
