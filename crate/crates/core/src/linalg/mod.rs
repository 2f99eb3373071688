//! Dense complex linear algebra kernel.

mod eigen;
mod functions;
mod matrix;
pub mod random;
mod tensor;

pub use eigen::{Hermitian, Spectrum, HERMITICITY_TOLERANCE};
pub use functions::{
    fractional_power, fractional_power_of, log2_on_support, log2_trace_power, power_mean_norm, schatten_norm,
    schatten_norm_hermitian, singular_values, support_projector, NEGATIVE_FLOOR, SUPPORT_CUTOFF,
};
pub use matrix::Matrix;
pub use tensor::{conjugate_embedded, kron, kron_all, left_mul_embedded, partial_trace, partial_transpose};
