//! Numerical laboratory for the Richard-Gavrilyuk (RG) model of shear
//! shallow-water flow down an inclined bottom.
//!
//! The model tracks depth `h`, mean velocity `U`, and two enstrophies: a
//! large-scale part `Phi` fed by wall turbulence and a small-scale part `phi`
//! produced near the free surface. Their sum enters the pressure through a
//! cubic term, so the hyperbolic part behaves like isentropic gas dynamics
//! with two passive scalars, while friction and gravity act as relaxation
//! source terms.
//!
//! What lives where:
//!
//! * [`model`]: the 4x4 first-order system itself (states, fluxes, sources,
//!   characteristic speeds, entropy bookkeeping).
//! * [`equilibrium`]: the scalar Burgers-type law governing slow dynamics at
//!   relaxation equilibrium, and its exact Riemann solution.
//! * [`profiles`]: travelling-wave profiles with constant velocity
//!   (convective waves), smooth, jump-bearing, or periodic.
//! * [`spectral`]: linearisation along a convective wave, reduction to a
//!   scalar second-order eigenvalue problem, constant-state dispersion
//!   relations, an Evans-function eigenvalue counter, and stability verdicts.
//! * [`solver`]: a finite-volume scheme (HLL flux, second-order minmod
//!   reconstruction, Strang-split relaxation) for initial-value runs.
//!
//! Everything is plain `f64` numerics; complex quantities use
//! [`num_complex::Complex64`]. No global state, no interior mutability: all
//! top-level entry points are pure functions over explicit inputs.

pub mod equilibrium;
mod error;
pub mod model;
mod numerics;
pub mod profiles;
pub mod solver;
pub mod spectral;

pub use error::RgError;
pub use model::{characteristics, sound_speed, ConservedState, PhysParams, PrimitiveState};
pub use profiles::WaveProfile;
pub use solver::{SimConfig, Snapshot};
pub use spectral::StabilityReport;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, RgError>;
