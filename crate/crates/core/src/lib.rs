//! Exact decoherence dynamics of a qubit coupled to a band-edge bosonic
//! reservoir.
//!
//! The crate computes the qubit's survival amplitude `G(t)` — the factor
//! multiplying the excited-state amplitude under a number-conserving
//! qubit–reservoir coupling — through three independent routes, and derives
//! the reduced density matrix from it:
//!
//! 1. **Closed form** ([`exact`]): for the band-edge spectral density
//!    `J(omega) = 2 A sqrt(omega - omega0) / (a^2 + (omega - omega0)^2)`
//!    the Laplace transform of `G` is a ratio involving `sqrt(u)`, and `G`
//!    itself is a four-term combination of scaled incomplete gamma
//!    functions evaluated at the squared roots of a quartic.
//! 2. **Integro-differential oracle** ([`oracle`]): direct time stepping of
//!    the memory-kernel equation `G'(t) = -(f * G)(t)` with the numerically
//!    computed reservoir correlation function `f`.
//! 3. **Contour-inversion oracle** ([`oracle`]): numerical inversion of the
//!    closed-form Laplace transform on a deformed contour.
//!
//! A damped Jaynes–Cummings (Lorentzian reservoir) comparison model lives
//! in [`lorentzian`], qubit state evolution in [`dynamics`], and ready-made
//! parameter sets for the bundled comparison figures in [`presets`].

pub mod checks;
pub mod dynamics;
pub mod exact;
pub mod lorentzian;
pub mod oracle;
pub mod presets;
pub mod reservoir;
pub mod specfun;
pub mod types;

pub use types::{ComplexValue, CoreError, CoreResult, QuadratureResult};
