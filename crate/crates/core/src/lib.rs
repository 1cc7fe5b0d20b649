//! Exact arithmetic for the computable local objects attached to the split
//! symmetric pair (GL(2n), GL(n) x GL(n)) over a p-adic field: Cartan
//! double-coset volumes and their q-series recursions, germ expansions of
//! contracted orbital integrals, unramified local L-factors, symmetric-space
//! transfer factors, and compact branching multiplicities.
//!
//! Everything is computed over exact rationals; the residue cardinality is
//! the formal variable `q` of [`qring::RationalFunctionQ`] unless an
//! operation explicitly specializes it. No floating point anywhere.
//!
//! Module map:
//!
//! * [`qring`] — Laurent polynomials and rational functions in `q`,
//!   q-binomial coefficients, the constant `mu(GL_n)`.
//! * [`cartan`] — partitions in the weakly *increasing* convention, cell
//!   volumes `vol(K pi^lambda K)`, and a sublattice-counting oracle.
//! * [`volumes`] — the weighted volume family `vol_{n,alpha}(x)` computed
//!   three independent ways, with its closed-form constants.
//! * [`germs`] — expansions of integer sequences into finite combinations
//!   `sum c_{a,b} q^{a x} x^b`, fitted exactly and verified on held-out
//!   points.
//! * [`orbital`] — lattice-invariant test profiles on diagonal
//!   configurations, their contracted orbital sums and germ expansions.
//! * [`lfactors`] — truncated exact Euler products: standard and
//!   exterior-square factors, unramified Tate integrals, and the rank-one
//!   spherical identity.
//! * [`invariants`] — the symmetric space GL_{2n}/(GL_n x GL_n) on explicit
//!   rational matrices: block projection, invariants, transfer factors.
//! * [`branching`] — Littlewood–Richardson coefficients and the
//!   self-associate branching criterion.
//! * [`verify`] — the seeded, deterministic property-sweep driver.

pub mod branching;
pub mod cartan;
pub mod germs;
pub mod invariants;
pub mod lfactors;
pub mod orbital;
pub mod qring;
pub mod verify;
pub mod volumes;

pub use cartan::{SegmentType, SignedPartition};
pub use germs::GermExpansion;
pub use invariants::{CharacterSign, MatQ, SymmetricSpacePoint};
pub use lfactors::{SatakeData, TruncatedSeries, UnramifiedTorusData};
pub use orbital::{OrbitalGermCoefficients, OrbitalProfile};
pub use qring::{LaurentPolyQ, RationalFunctionQ};
pub use volumes::VolParams;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on the mathematical domain of an operation failed.
    #[error("domain error: {0}")]
    Domain(String),
    /// A germ fit did not reproduce the sampled sequence on a held-out
    /// point; the support bound was too small or no expansion exists.
    #[error("germ fit failed: held-out sample at x = {first_mismatch} disagrees with the fitted expansion")]
    FitMismatch { first_mismatch: u64 },
    /// An input that was assumed regular turned out degenerate (a vanishing
    /// determinant in a transfer-factor argument, for instance).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A verification run was configured with unknown suites or with a
    /// scale outside the desk-scale guardrails.
    #[error("configuration error: {0}")]
    Config(String),
    /// Two routes that must agree by theorem disagreed; this indicates a
    /// bug and is never expected on valid inputs.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
