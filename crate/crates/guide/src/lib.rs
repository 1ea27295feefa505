//! Runs the guide's code snippets as doc-tests, keeping the book in sync
//! with the library: `cargo test -p coclass-guide` compiles and executes
//! every Rust block in `book/src/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/presentations.md")]
pub mod presentations {}

#[doc = include_str!("../../../book/src/consistency.md")]
pub mod consistency {}

#[doc = include_str!("../../../book/src/structure.md")]
pub mod structure {}

#[doc = include_str!("../../../book/src/automorphisms.md")]
pub mod automorphisms {}

#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}

#[doc = include_str!("../../../book/src/coclass_graph.md")]
pub mod coclass_graph {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
