//! Quadrature-dependent Bogoliubov transformations and the multiphoton
//! squeezed states they define.
//!
//! The transformed mode is `b = μa + νa† + γF(X₁)` with `F` a real nonlinear
//! function of the first quadrature `X₁ = (a + a†)/2`. The crate provides:
//!
//! - [`params`]: transformation coefficients and the canonicity conditions
//!   `|μ|² − |ν|² = 1`, `Re(μγ* − ν*γ) = 0`;
//! - [`opalg`]: exact normal-ordered operator algebra over `a`, `a†`, used to
//!   verify canonicity as an operator identity and to expand `b†b`;
//! - [`numerics`]: Hermite functions and refined quadrature on Gaussian-decay
//!   integrands;
//! - [`states`]: closed-form eigenstates of `b` in the `X₁` representation;
//! - [`observables`]: quadrature uncertainties, photon number distributions,
//!   photon moments and `g²(0)`;
//! - [`wigner`]: Wigner quasiprobability grids, planar sections, negativity.
//!
//! Convention: all position-representation numerics use `[X₁, X₂] = i/2`,
//! i.e. `X₂ = −(i/2) d/dx` and vacuum density variance `1/4`.

pub mod nonlinear;
pub mod numerics;
pub mod observables;
pub mod opalg;
pub mod params;
pub mod states;
pub mod wigner;

pub use nonlinear::NonlinearSpec;
pub use params::{check_canonical, derived_constants, CanonReport, DerivedConstants, TransformSpec};
pub use states::{solve_eigenstate, StateSpec};
