//! Achievable rates of a symmetric linear two-hop mesh network.
//!
//! One terminal per cell reaches its base station through a dedicated
//! decode-and-forward relay. Both hops are interference channels in which
//! every receiver also hears the two neighbouring cells. The crate computes
//! per-user rates for four transmission schemes:
//!
//! - single-rate transmission with interference treated as noise,
//! - rate splitting into private and common messages in both hops,
//! - rate splitting with the relays cooperating on the common messages,
//! - cooperative relaying with joint decoding at a central processor.
//!
//! Rate regions are small polytopes in the `(R_private, R_common)` plane
//! ([`regions`]), optimized exactly by vertex enumeration ([`polytope`]).
//! The [`oracle`] module holds independent brute-force references for all
//! of the analytic shortcuts.

// `!(x > 0.0)` is how inputs are checked so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod oracle;
pub mod polytope;
pub mod quadrature;
pub mod regions;
pub mod schemes;

pub use error::{Error, Result};
pub use model::{
    capacity, db_to_linear, linear_to_db, Duplex, Hop, HopChannel, HopSplit, NetworkParams,
    RatePair,
};
pub use polytope::{max_sum_rate, Binding, LpSolution};
pub use quadrature::{integrate_unit, QuadratureResult};
pub use regions::{FilterTaps, Halfspace, RateRegion, RegionKind};
pub use schemes::{
    Bottleneck, OptimizerConfig, PrivateFractions, Scheme, SchemeResult, VsiCheck, VsiMethod,
};
