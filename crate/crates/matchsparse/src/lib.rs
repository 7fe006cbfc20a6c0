//! Degree-bounded matching sparsifiers for stochastic weighted graphs.
//!
//! A base graph `G = (V, E, w)` is *realized* by keeping every edge
//! independently with probability `p`. This crate builds, non-adaptively, a
//! sparse subgraph `Q` whose realized part carries almost the full expected
//! maximum-weight matching: `E[mwm(Q ∩ 𝒢)] ≈ (1−ε)·E[mwm(𝒢)]`, while the
//! degree of `Q` stays bounded independently of `n`.
//!
//! The crate is organized around four layers:
//!
//! * [`graph`] — exact-weight graph model, realization sampling, and the
//!   canonical maximum-weight-matching primitive with a brute-force oracle.
//! * [`sparsifier`] — the two-phase construction: a greedy pass that keeps
//!   "crucial" edges (high match probability or short hop distance), and a
//!   sampling pass that unions the matchings of `R` fresh realizations.
//! * [`fractional`] — the certificate pipeline: empirical matching
//!   frequencies `f`, truncation `g`, conditional rescaling `h`, and the
//!   final fractional matching `x`, plus exhaustive constraint checks
//!   (vertex loads, nonnegativity, support, odd-set blossom inequalities).
//! * [`vimatch`] — the recursive matching sampler with near-independent
//!   per-vertex marginals, built from alternating multi-walk augmentation
//!   over profiles of realizations and a greedy hypergraph matching.
//!
//! [`harness`] orchestrates experiments (validity audits, approximation-ratio
//! sweeps, independence tests) and emits reproducible JSON/CSV reports. All
//! randomness flows through [`rng::RngStream`], a splittable counter-based
//! generator, so every run is a pure function of its root seed.

pub mod error;
pub mod fractional;
pub mod graph;
pub mod harness;
pub mod mwm;
pub mod rng;
pub mod sparsifier;
pub mod vimatch;
pub mod weight;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
