//! Exact computation with finite 2-groups given by power-commutator
//! presentations: collection to normal form, consistency checking,
//! structural series, automorphism-group orders with odd-part extraction,
//! parametrized group families, and bottom-up construction of the coclass
//! graph G(2,r) for r <= 3 via central extensions by C2.

pub mod error;
pub mod families;
pub mod graph;
pub mod pcp;
pub mod morphisms;
pub mod structure;
mod gf2;
mod table;


pub use error::{Error, ParseError, Result};
pub use pcp::{
    parse_pcp, serialize_pcp, ConsistencyReport, Element, OverlapId, PcPresentation, Violation,
    Word,
};
