//! Computable Lorentz–Karamata spaces.
//!
//! A Lorentz–Karamata space is determined by a triple `(p, q, b)` where
//! `p, q ∈ (0, ∞]` and `b` is a slowly varying function. Its defining
//! functional weighs the non-increasing rearrangement `f*` (or the maximal
//! function `f**`) of a measurable function:
//!
//! ```text
//! ‖f‖_{p,q,b}   = ‖ t^{1/p − 1/q} · b(t) · f*(t)  ‖_q
//! ‖f‖_{(p,q,b)} = ‖ t^{1/p − 1/q} · b(t) · f**(t) ‖_q
//! ```
//!
//! This crate makes the scale computable:
//!
//! * [`sv`] — a closed symbolic family of slowly varying functions (broken
//!   `exp(γ√|log t|) · (1+|log t|)^α · (1+log(1+|log t|))^β` with independent
//!   behaviour at 0 and ∞), with evaluation, algebra, endpoint boundedness
//!   and integrability rules, and the integral transforms
//!   `b̃(t) = ∫₀ᵗ s⁻¹b`, `b̂(t) = ∫ₜ^∞ s⁻¹b` and their running-sup variants.
//! * [`quad`] — an independent brute-force oracle: adaptive Gauss–Kronrod
//!   quadrature in log coordinates for `∫ t^{a−1} b(t)^q dt`, with a cutoff
//!   schedule and trend analysis for improper endpoints.
//! * [`rearrange`] — exact distribution functions, rearrangements `f*` and
//!   maximal functions `f**` for simple functions, plus the paired integrals
//!   of the Hardy–Littlewood inequality.
//! * [`norm`] — evaluation of both functionals, fundamental functions, and
//!   the Lorentz/Marcinkiewicz endpoint norms on step-function carriers.
//! * [`classify`] — total decision procedures: non-triviality and
//!   quasi-/Banach-norm status of a space, embeddings between two spaces,
//!   and associate spaces, each verdict citing the decision rule it applied.
//! * [`verify`] — a numeric evidence harness that stress-tests every
//!   symbolic verdict against computed norms (witness sweeps, Hölder and
//!   fundamental-function duality, the `p = 1` star gap).
//! * [`cli`] — the `lk` command-line front end over all of the above.
//!
//! # Quick start
//!
//! ```
//! use lorentz_karamata::prelude::*;
//!
//! // L^{2,1} embeds into L^{2,2} (same p, larger q).
//! let src: SpaceSpec = "LK(p=2,q=1)".parse().unwrap();
//! let dst: SpaceSpec = "LK(p=2,q=2)".parse().unwrap();
//! let verdict = decide_embedding(&src, &dst, f64::INFINITY);
//! assert!(verdict.holds());
//!
//! // ‖χ_(0,1)‖_{2,1} = ∫₀¹ t^{-1/2} dt = 2.
//! let chi = DecreasingStep::characteristic(1.0);
//! let norm = lk_norm(&src, &chi);
//! assert!((norm.value() - 2.0).abs() < 1e-9);
//! ```
//!
//! The `examples/` directory contains one runnable walk-through per
//! capability (`cargo run --example embeddings`, …); `lk --help` shows the
//! command-line surface. `cargo test --test acceptance` runs the full
//! oracle-backed acceptance suite.

pub mod classify;
pub mod cli;
pub mod norm;
pub mod quad;
pub mod rearrange;
pub mod sv;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside an operation's domain (non-positive time,
    /// point beyond the underlying measure, …).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input; `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Structurally valid input that violates a contract (p ≤ 0, negative
    /// mass, non-monotone samples, …).
    #[error("validation error: {0}")]
    Validation(String),

    /// Input that is well-formed but outside what the operation supports.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The most commonly used items in one import.
pub mod prelude {
    pub use crate::classify::{
        associate_space, classify_space, conjugate, decide_embedding, AssociateOutcome,
        AssociateReport, ClassificationReport, EmbeddingVerdict, P5Verdict,
    };
    pub use crate::norm::{
        endpoint_norms, fundamental_function, lk_norm, lk_norm_star, NormValue, SpaceSpec,
    };
    pub use crate::rearrange::{
        distribution, maximal, pair_integrals, rearrange, DecreasingStep, JointStepFunction,
        StepFunction,
    };
    pub use crate::sv::{
        endpoint_boundedness, endpoint_integrability, sup_transform, sv_property_check,
        tilde_hat_transform, Endpoint, EndpointBehavior, EndpointSignature,
        SlowlyVaryingFunction, SupKind, SupTransformResult, TildeHatResult, TransformKind,
    };
}
