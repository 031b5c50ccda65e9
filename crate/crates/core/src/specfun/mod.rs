//! Special functions and general-purpose numerical kernels: the Faddeeva
//! function family, the scaled upper incomplete gamma function of order
//! 1/2, monic quartic root finding, and adaptive oscillatory half-line
//! quadrature.

pub(crate) mod dd;
mod faddeeva;
mod gamma;
mod quad;
mod quartic;

pub use faddeeva::{erfcx, faddeeva_w};
pub use gamma::scaled_upper_gamma_half;
pub use quad::oscillatory_halfline_quad;
pub(crate) use quad::adaptive_complex_interval;
pub use quartic::{quartic_roots, QuarticMethod, QuarticRoots};
