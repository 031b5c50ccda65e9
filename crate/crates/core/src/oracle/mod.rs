//! Independent numerical routes to the survival amplitude, used to
//! validate every closed form in this crate: a direct time-domain solver
//! for the memory-kernel equation and a deformed-contour numerical
//! inverse Laplace transform.

mod talbot;
mod volterra;

pub use talbot::{laplace_invert, InversionConfig, INVERSION_RELATIVE_TARGET};
pub use volterra::{volterra_solve, GridSamples, KernelValue, VolterraConfig};
