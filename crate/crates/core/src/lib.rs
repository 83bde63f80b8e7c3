//! Exact computation with finite diversities.
//!
//! A diversity assigns a nonnegative value to every finite subset of a ground
//! set, vanishing exactly on sets of at most one point and satisfying
//! `δ(A ∪ B) + δ(B ∪ C) ≥ δ(A ∪ C)` whenever `B` is nonempty. This crate stores
//! finite diversities as dense exact-rational tables and provides validation,
//! the diameter and Steiner bounds, the one-point extension algebra,
//! isomorphism and embedding search, and a seeded generator that grows random
//! finite diversities by repeated one-point extension.

// Tables are indexed by subset masks throughout.
#![allow(clippy::needless_range_loop)]

mod exact;

pub mod bounds;
pub mod diversity;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod homogeneity;
pub mod io;
pub mod oracle;
pub mod rat;
pub mod sample;
pub mod subset;
pub mod tower;
pub mod validate;

pub use bounds::{diameter_diversity, sandwich_check, steiner_diversity, SteinerConfig, SteinerMethod};
pub use diversity::{FiniteDiversity, MetricSpace};
pub use error::{Error, Result};
pub use extension::{
    amalgamate, extend_from_support, has_support, hat_delta, is_admissible, kappa, AdmissibleFunction, Amalgamation,
    ExtensionFamily,
};
pub use homogeneity::{
    extend_partial_isomorphism, extension_deficit, find_embedding, find_isomorphism, perturb_to_admissible, realize,
    PartialIsomorphism, RealizationQuery,
};
pub use rat::{rat, Rat};
pub use subset::{PointId, SubsetKey, DEFAULT_MAX_POINTS, HARD_MAX_POINTS};
pub use tower::{deficit_trace, grow, random_admissible, random_katetov, GrowthPolicy, TowerState};
pub use validate::{lipschitz_check, validate, ValidationReport, Violation};
