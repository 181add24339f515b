//! Landau levels on flat tori and the Bargmann-Fock symbol algebra behind
//! their Berezin-Toeplitz calculus.
//!
//! The exact half of the crate ([`fock`], [`bargmann`], [`laguerre`],
//! [`surface`], [`riemann_roch`]) works with rational and surd arithmetic so
//! that algebraic identities can be checked with zero residual. The numerical
//! half ([`torus`]) discretizes the magnetic Laplacian on a flat torus and
//! measures the semiclassical behaviour of its Landau levels.

pub mod bargmann;
pub mod basis;
pub mod error;
pub mod exact;
pub mod fock;
pub mod identities;
pub mod laguerre;
pub mod operator;
pub mod poly;
pub mod quadrature;
pub mod riemann_roch;
pub mod slope;
pub mod surface;
pub mod torus;

pub use error::{Error, Result};
