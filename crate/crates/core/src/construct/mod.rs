// SPDX-License-Identifier: Apache-2.0

//! Generators: convex-free integer sets, layered clique graphs and the hard
//! blowup instances built on them.

pub mod behrend;
pub mod cycles;
pub mod instances;
pub mod layered;

pub use behrend::{behrend_set, verify_convex_free, BehrendSet, ConvexVerdict, SetMethod};
pub use cycles::{cycle_family, CycleFamily, CycleLength};
pub use instances::{
    blowup_type_search, c8_instance, check_c8_structure, check_odd_cycle_blowup, class_labeling,
    homomorphic_instance, odd_cycle_blowup_instance, HardInstance, HomCertificate, InstanceKind,
};
pub use layered::{
    rs_graph, stray_layered_cycle, verify_layered, LayeredCliqueGraph, LayeredReport,
};
