// SPDX-License-Identifier: Apache-2.0

//! Core algorithms for testing induced-freeness of graph families.
//!
//! Everything here is pure computation over dense graphs: exact densities and
//! homogeneity, structural recognizers, exhaustive counting kernels,
//! homomorphisms and cores, the layered clique constructions with their
//! certificates, homogeneous-partition checkers and the sampling tester.
//! The crate is `no_std` and only needs `alloc`; file formats, the CLI and
//! parallel trial execution live in the `removal-lab` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod construct;
pub mod count;
pub mod error;
pub mod graph;
pub mod homomorphism;
pub mod limits;
pub mod named;
pub mod partition;
pub mod recognize;
pub mod rng;
pub mod stats;
pub mod tester;

pub use error::{Error, Result};
pub use graph::{
    BlowupSpec, Equipartition, Graph, HomogeneityVerdict, PartKind, Rational, VertexSet,
};
pub use limits::Limits;
pub use recognize::{GraphFamily, MatchMode};
