//! Satisfiability and subsumption for ALCQ with number restrictions on role
//! chains, with a finite-model evaluator, a bounded model finder and the
//! domino-tiling encoding.

pub mod abox;
pub mod encoder;
pub mod interp;
pub mod normalize;
pub mod par;
pub mod syntax;
pub mod tableau;

pub use abox::{ABox, Individual};
pub use interp::{eval_concept, eval_role, Interpretation};
pub use syntax::{parse_concept, parse_role, print_concept, Concept, RoleExpr};
pub use tableau::{is_satisfiable, subsumes, SearchConfig, TableauError, Verdict};
