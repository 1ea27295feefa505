//! Structural invariants of a consistent presented 2-group: subgroup
//! closure, characteristic series, class and coclass, quotients, and
//! isomorphism-invariant fingerprints.

mod fingerprint;
mod quotient;
mod series;
mod subgroup;

pub use fingerprint::{abelian_invariants, fingerprint, is_abelian, Fingerprint};
pub use quotient::quotient;
pub use series::{
    center, class_and_coclass, derived_subgroup, group_order, lower_central_series, SubgroupChain,
};
pub use subgroup::{normal_closure, subgroup_closure, InducedSequence};
