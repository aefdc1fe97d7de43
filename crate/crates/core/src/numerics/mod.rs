//! Numerical kernels shared by the channel model and the allocators.

mod lambert;
mod quadrature;
mod root;

pub use lambert::lambert_w0;
pub(crate) use lambert::lambert_w0_unchecked;
pub use quadrature::{integrate, integrate_piecewise, QuadratureGrid, DEFAULT_INTERVALS};
pub use root::find_root_monotone;
