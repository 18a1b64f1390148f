//! Graceful labelings of compound graphs built from α-labeled bases.
//!
//! A base graph with an α-labeling is combined into a path union, an open
//! star, a one-point union of paths, a cycle of graphs, or the star of the
//! graph. Each family has a closed-form labeling; every produced labeling is
//! checked by an exact verifier before it is returned, and a backtracking
//! oracle decides small instances independently.

pub mod atlas;
pub mod construct;
pub mod corpus;
pub mod descriptor;
pub mod document;
pub mod dot;
pub mod graph;
pub mod labelers;
pub mod oracle;
pub mod verify;
