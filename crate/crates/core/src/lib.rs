//! Mixing analysis for affine random walks `X_{n+1} = T X_n + B_n (mod p)` on
//! `(Z/pZ)^d`, where the increments are uniform on `{0, e_1, ..., e_d}`.
//!
//! The crate offers three independent views of the same chain:
//!
//! * [`exactdist`]: dense evolution of the full distribution, exact total
//!   variation distance, and a direct Fourier transform;
//! * [`fourier`]: the character product formula for `P_n`, upper and lower
//!   bounds on the distance to uniform, and orbit analysis of characters
//!   under `T^t`;
//! * [`montecarlo`]: reproducible trajectory simulation and the projected
//!   one-dimensional walk that certifies slow mixing when `T` has a
//!   root-of-unity eigenvalue.
//!
//! [`spectral`] decides which regime a matrix is in; [`modmath`] supplies the
//! exact arithmetic underneath.

pub mod error;
pub mod exactdist;
pub mod fourier;
pub mod modmath;
pub mod montecarlo;
mod poly;
pub mod spectral;

pub use error::{Error, Result};
pub use exactdist::{DenseDistribution, WalkConfig};
pub use modmath::{IntMatrix, ModVector};
