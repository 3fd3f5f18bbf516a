//! Right-angled Coxeter and Artin groups: normal forms, Cayley balls,
//! divergence measurements and subgroup classifiers.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! disk caches live in the `morselab` crate.

#![no_std]

extern crate alloc;

pub mod cayley;
pub mod classify;
pub mod divergence;
mod error;
pub mod graph;
pub mod word;

pub use cayley::{BallIndex, SubgroupField, SubgroupSpec, DEFAULT_ELEMENT_BUDGET, NONE};
pub use classify::{
    classify_special_racg, loxodromic_report, morse_boundary_witness, ClassificationReport,
    LoxodromicReport, Verdict, Witness, WordVerdict,
};
pub use divergence::{
    bound_closed_form, four_cycle_witness_path, geodesic_divergence, geodesic_lower_divergence,
    growth_diagnostic, checked_bound, sigma_profile, verify_sigma_row, verify_witness_path,
    BoundArgs, BoundKind, DivergenceProfile, DivergenceRow, GrowthReport, LowerDivergenceRow,
    PeriodicGeodesic, Rho, SigmaConfig, WitnessPath,
};
pub use error::{Error, Result};
pub use graph::{DefiningGraph, InducedCycle, VertexSet, MAX_VERTICES};
pub use word::{GroupKind, Letter, NormalWord, Presentation};
