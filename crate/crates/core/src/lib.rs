//! Numerical toolkit for sandwiched Rényi divergences, Holevo-type channel
//! quantities and strong-converse exponents of finite-dimensional quantum
//! channels, together with an exact simulator for classical-feedback-assisted
//! communication protocols.
//!
//! The linear algebra, state, channel and divergence layers are generic over
//! the real scalar ([`Real`]: `f32` or `f64`). The optimizers and the protocol
//! simulator work in `f64`; the aliases below name the `f64` instantiations.

pub mod capacity;
pub mod channel;
pub mod divergence;
pub mod error;
pub mod io;
pub mod linalg;
pub mod protocol;
pub mod scalar;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type CMatrix = linalg::Matrix<f64>;
pub type HermitianOp = linalg::Hermitian<f64>;
pub type DensityOp = state::DensityOperator<f64>;
pub type Kraus = channel::KrausChannel<f64>;
pub type Channel = channel::Channel<f64>;
pub type Povm = state::Povm<f64>;
pub type Ensemble = state::Ensemble<f64>;
