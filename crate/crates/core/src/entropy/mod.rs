//! Entropy of the time-averaged state `ρ(T) = (1/T) Σ_{s<T} |ψ(s)⟩⟨ψ(s)|`.
//!
//! The nonzero eigenvalues of `ρ(T)` are those of the Gram matrix `⟨ψ(s)|ψ(t)⟩/T`, and the
//! Gram matrix is the Toeplitz matrix of `μ̂`, so `S(ψ, T)` needs only the Fourier coefficients
//! of the spectral measure.

mod basis;
mod curve;
mod partition;
mod toeplitz;

pub use basis::{
    bf_distribution, default_window, mixture_distribution, moment, n_epsilon, shannon_entropy, BasisDistribution,
    MixtureDistribution, Moment,
};
pub use curve::{
    dyadic_times, entropy_at, entropy_curve, entropy_curve_with, CurveOptions, CurvePoint, EntropyCurve, Method,
};
pub use partition::{greedy_cover, partition_shape, w_quantity, w_quantity_budget, DEFAULT_CELL_BUDGET};
pub use toeplitz::{
    eigen_entropy, eigen_entropy_capped, lwb_bound, m_epsilon, toeplitz, toeplitz_capped, DensityMatrixSpectrum,
    LowerBound, ToeplitzMatrix, CLAMP_FLOOR, DEFAULT_T_CAP,
};
