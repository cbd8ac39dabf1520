//! Exact and numerical toolkit for weight-zero Eisenstein series on Γ₀(N):
//! cusp classification, Dirichlet characters, scattering matrices, truncated
//! spectral kernels, and renormalized integrals over the modular surface.

pub mod arith;
pub mod characters;
pub mod cusps;
pub mod eisen;
pub mod error;
pub mod gammafn;
pub mod geom;
pub mod jet;
pub mod lfun;
pub mod reg;
pub mod report;
pub mod scatter;

pub use error::{Error, Result};
