//! Affine varieties over Q, morphisms in canonical form, image closures,
//! integral models and the mod-`p` probes behind finite-order certification.

mod model;
mod morphism;
mod order;
mod probe;
mod variety;

use thiserror::Error;

use crate::poly::PolyError;

pub use model::{is_prime, prime_factors, primes_up_to, scaled_generators, spread_out, IntegralModel};
pub(crate) use model::bigint_to_string;
pub use morphism::{compose, image_closure, is_dominant, restrict_to, Morphism};
pub(crate) use morphism::same_variety;
pub use order::{
    compose_tables, finite_order_test, finite_order_with_tables, injectivity_collision, is_identity_table,
    iterate_mod, modular_motion, permutation_order, power_table, OrderCertificate, OrderConfig, OrderVerdict,
    PowerEvidence,
};
pub use probe::{
    action_on_points, find_probe_at, find_probe_pair, LocalProbe, ProbePair, TruncElem, TruncatedRing,
};
pub use variety::Variety;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("ideal of {variety} contains 1")]
    ImproperIdeal { variety: String },
    #[error("expected {expected} coordinates, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("map {source_name} -> {target}: equation {equation} does not pull back into the source ideal")]
    NotWellDefined {
        source_name: String,
        target: String,
        equation: String,
    },
    #[error("cannot compose: expected source {expected}, found target {found}")]
    SourceTargetMismatch { expected: String, found: String },
    #[error("morphism is not dominant: {morphism}")]
    NotDominant { morphism: String },
    #[error("no probe pair for {variety} with primes up to {prime_bound}: {}", diagnostics.join("; "))]
    NoProbeFound {
        variety: String,
        prime_bound: u64,
        diagnostics: Vec<String>,
    },
    #[error("point set of {variety} at p = {prime} exceeds {cap} points")]
    PointSetCapExceeded { variety: String, prime: u64, cap: usize },
    #[error("image of a probe point at p = {prime} is not a probe point")]
    ImageOutsidePointSet { prime: u64 },
    #[error("permutation order does not fit in 64 bits")]
    ExponentOverflow,
    #[error("power {exponent} exceeds the term cap and no modular evidence was found")]
    PowerTooLarge { exponent: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
