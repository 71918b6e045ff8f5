//! Entropy growth of time-averaged quantum states and dimensions of singular spectral measures.
//!
//! A unit vector `ψ` evolved by a unitary `U` has a spectral measure `μ` on `[0, 2π]` with
//! `⟨ψ|U^t ψ⟩ = μ̂(t)`. The entropy of the time-averaged density matrix
//! `ρ(T) = (1/T) Σ_{s<T} |U^s ψ⟩⟨U^s ψ|` grows like `D ln T`, with `D` a dimension of `μ`.
//!
//! - [`measures`]: atomic, self-similar, digit-product and mixture measures.
//! - [`entropy`]: Toeplitz eigenvalue entropy, the distribution over the basis `e^{2πinF(λ)}`,
//!   and the auxiliary width statistics.
//! - [`dimension`]: information, box-counting and pointwise dimension estimates.
//! - [`timeseries`]: synthetic stationary sequences and dimension recovery from data.

mod error;
pub mod math;

pub mod dimension;
pub mod entropy;
pub mod measures;
pub mod timeseries;

pub use error::{Error, Result};
pub use measures::SpectralMeasure;
