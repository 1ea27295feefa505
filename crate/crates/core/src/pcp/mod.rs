//! Power-commutator presentations and exact arithmetic on their normal
//! forms: collection from the left, element operations, consistency
//! checking, the text format, and refinement to elementary relative orders.

mod collect;
mod consistency;
mod presentation;
mod refine;
mod text;
mod word;

pub use consistency::{ConsistencyReport, OverlapId, Violation};
pub use presentation::{Element, PcPresentation, DEFAULT_COLLECT_BUDGET, MAX_REL_ORDER};
pub use text::{parse_pcp, serialize_pcp};
pub use word::{Letter, Word};

pub(crate) use refine::refine_parts;

#[cfg(test)]
pub(crate) mod tests;
