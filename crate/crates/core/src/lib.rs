//! Finite-index subgroups of F2 and the genus-2 surface group from
//! 4-regular graphs of prescribed girth, with certified word-length and
//! systole bounds.

pub mod error;
pub mod geometry;
pub mod baumslag;
pub mod constructors;
pub mod graphs;
pub mod pipelines;
pub mod schreier;
pub mod words;
