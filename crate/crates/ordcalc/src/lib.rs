//! Computational engine for finite W-semigroups: relation calculus, normal
//! pairs, ideal-free quotients, group actions and dynamical quotients,
//! round-ideal completions, and exact-rational comparison theory.
//!
//! The `suite` module packages the theorem batteries the crate is tested
//! against; the `ordcalc` binary exposes them behind `check --suite all`.

// Carrier elements are integer indices and most kernels are dense matrix
// sweeps over several arrays at once; indexed loops are the clearer form.
#![allow(clippy::needless_range_loop)]

pub mod completion;
pub mod dynamics;
pub mod error;
pub mod functional;
pub mod genpair;
pub mod ideal;
pub mod io;
pub mod iso;
pub mod pairs;
pub mod quotient;
pub mod ratlp;
pub mod rel;
pub mod report;
pub mod suite;
pub mod wsemi;

pub use error::{Error, Result};
pub use pairs::Pair;
pub use rel::Relation;
pub use wsemi::{FiniteMonoid, WMorphism, WSemigroup};

/// Enumeration budget, overridable through `ORDCALC_BUDGET`.
pub fn budget() -> usize {
    std::env::var("ORDCALC_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(crate::ideal::DEFAULT_BUDGET)
}
