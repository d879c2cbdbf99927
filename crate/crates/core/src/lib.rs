//! Model checking for public announcement logic with arbitrary positive
//! announcements (`box+`) and arbitrary epistemic announcements (`box`) on
//! finite S5 models.
//!
//! ```
//! use papal_core::{evaluate, fixture, CheckConfig, Formula};
//!
//! let pm = fixture("compose9").unwrap();
//! let f: Formula = "dia+ dia+ (L a q & K a (K b q | K b ~q))".parse().unwrap();
//! assert!(evaluate(&pm, &f, &CheckConfig::default()).unwrap().verdict);
//! ```

pub mod checker;
pub mod error;
pub mod model;
pub mod qbf;
pub mod random;
pub mod relations;
pub mod synthesis;
pub mod syntax;

pub use checker::{evaluate, extension, find_positive_witness, holds, CheckConfig, CheckResult, Stats, Witness};
pub use error::{Error, Result};
pub use model::{fixture, EpistemicModel, ModelDescription, PointedModel, StateSet};
pub use relations::{max_bisimulation, max_refinement, StatePairRelation, Strategy};
pub use syntax::{parse, Formula, PositiveFormula};
