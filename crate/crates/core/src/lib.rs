//! Exact counting and asymptotic analysis of first-order formulae over a
//! single membership predicate, written with De Bruijn indices.
//!
//! * [`formula`], [`syntax`], [`template`]: the formula language, its size and
//!   openness, and single-hole templates.
//! * [`enumerate`]: brute-force enumeration, used as a test oracle.
//! * [`counting`]: big-integer coefficient tables for all formulae and for
//!   `m`-open formulae.
//! * [`asymptotics`]: dominant singularity, square-root expansion constants and
//!   the per-class constants `C_m`.
//! * [`density`]: template densities and the theorem-density bounds built on
//!   them.
//! * [`sampler`]: uniform exact-size random generation.

pub mod asymptotics;
pub mod counting;
pub mod density;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod numeric;
pub mod sampler;
pub mod signature;
pub mod syntax;
pub mod template;

pub use counting::{CountTable, Openness};
pub use error::{Error, Result};
pub use formula::{render_formula, Formula};
pub use signature::{Connective, Signature};
pub use template::{Skeleton, Template};
