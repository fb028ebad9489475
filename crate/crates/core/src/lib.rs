//! Symbol and u-symbol combinatorics for the classical Weyl groups.
//!
//! Irreducible representations of a Weyl group of type B, C, or D can be
//! labeled in two ways: by *symbols*, which organize representations into
//! families (two-sided cells) and carry Lusztig's parametrization of
//! unipotent characters, and by *u-symbols*, which carry the Springer
//! correspondence to unipotent classes. This crate implements both label
//! systems, the bijection `i` between them, and the structural machinery
//! (ladders, staircases, blocks, isolated points) that relates the two
//! parametrizations on each special piece, together with an exhaustive
//! verifier for every structural claim at desk scale.
//!
//! The layers, bottom to top:
//!
//! - [`series`]: the per-series constraint tables everything else reads.
//! - [`symbols`]: validated sequences, enumeration with certified
//!   stabilization, shifts, the bijection `i`, classes, and twisting.
//! - [`f2space`]: bitset linear algebra for the finite groups attached to
//!   families, their bilinear form, blocks of group elements, and the
//!   closure order.
//! - [`structure`]: parts, blocks, isolated points, the labeling of a
//!   family's point space, and the projection into the group space.
//! - [`correspondence`]: family assembly and the two correspondences,
//!   with the transversal and the comparison maps between them.
//! - [`partitions`]: the partition side of series C, with the
//!   partition-to-u-symbol formula and the closure criterion.
//! - [`verifier`]: every lemma and proposition as a named executable
//!   check, aggregated into deterministic reports.

pub mod correspondence;
pub mod error;
pub mod f2space;
pub mod partitions;
pub mod series;
pub mod structure;
pub mod symbols;
pub mod verifier;

pub use error::{
    ClassifyError, FamilyError, MapError, PartitionError, StabilizeError, StructureError,
    TwistError, ValidationError,
};
pub use f2space::{F2Vector, GroupSpace};
pub use series::{Kind, Series, Tables};
pub use structure::{
    isolated, parts, u_blocks, BlockDecomp, IsoLabeling, IsoPoints, Part, PartKind, UBlock,
};
pub use verifier::{
    verify_rank, verify_run, CheckId, CheckResult, CheckStatus, FamilyReport, RankReport, RunConfig,
};
pub use symbols::{classify, ClassId, Seq, SeqClass, StableLevel};
