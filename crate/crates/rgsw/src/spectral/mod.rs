//! Spectral stability of convective travelling waves.
//!
//! The linearization about a wave moving with speed `c` has, in the frame of
//! the wave, eigenvalue equations
//!
//! ```text
//!     lambda A0 W + (A W)' = E W,        W = (h, U, Phi, phi),
//! ```
//!
//! where `A = A1 - c A0` has a two-dimensional left kernel. Projecting onto
//! that kernel eliminates `Phi` (identically zero) and `phi` and reduces the
//! problem to one scalar second-order ODE for `U`,
//!
//! ```text
//!     U'' + f1 U' + (f2 lambda^2 + f3 lambda + f4) U = 0,    f4 = 0,
//! ```
//!
//! on the wave profile. Everything in this module works with that reduction:
//!
//! * [`constant`] handles constant endstates: dispersion relations of the
//!   essential spectrum, the hydrodynamic (Froude) stability condition, and
//!   the spatial characteristic roots used to split decaying from growing
//!   behaviour.
//! * [`reduction`] evaluates the linearized matrices on a profile, checks the
//!   reduction identities, reconstructs full eigenfunctions from scalar
//!   solutions, and produces the explicit zero modes coming from the
//!   construction freedom of the wave family.
//! * [`evans`] integrates the reduced system across the profile and matches
//!   decaying solutions from both infinities; its determinant vanishes
//!   exactly at eigenvalues, and winding-number contour counts give rigorous
//!   parity checks for point spectrum in the unstable half plane.
//! * [`verdict`] combines the endstate conditions into stability verdicts
//!   for the three natural topologies (unweighted, convectively weighted at
//!   `+inf`, weighted at both ends).
//!
//! Sign conventions: waves move rightward (`c > 0`), profiles are functions
//! of `x - ct` sampled on a uniform grid, and the spectral parameter
//! `lambda` lives in the frame of the wave.

pub mod constant;
pub mod evans;
pub mod reduction;
pub mod verdict;

pub use constant::{
    dispersion_max_re, dispersion_roots, essential_range, hydro_stable, spatial_eigenvalues,
    weighted_dispersion_roots,
};
pub use evans::{
    count_unstable, evans, evans_solution, ContourSpec, EvansSolution, UnstableCount, Weights,
};
pub use reduction::{
    check_reduction, eigen_residual, kernel_modes, liouville_residual,
    reconstruct_eigenfunction, reduced_coefficients, EigenFunction, KernelMode,
    LinearizedSystem, ReducedCoefficients, ReductionChecks,
};
pub use verdict::{stability_verdict, ModeVerdict, StabilityMode, StabilityReport};
