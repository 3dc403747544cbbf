//! Forces exerted by an ideal quantum gas on a moving cavity wall.
//!
//! A gas of non-interacting particles is confined by a wall whose position
//! L(t) changes in time. The adiabatic force is the instantaneous eigenstate
//! pressure; the non-adiabatic force is the velocity-dependent correction
//! from transitions among instantaneous states, and turns out to be even
//! (quadratic) in the wall velocity. Three mutually cross-checking routes
//! compute it:
//!
//! * [`hardwall`] — exact expansion over the transitionless states of the
//!   linearly moving hard wall,
//! * [`perturbative`] — density-matrix perturbation theory in the adiabatic
//!   basis,
//! * [`pde`] — direct grid integration of the transformed fixed-domain
//!   equations (the brute-force oracle),
//!
//! plus two companion confinements: [`sqrtlaw`] (wall law L = sqrt(at^2+bt+c),
//! Kummer-function basis) and [`softwall`] (harmonic trap with time-dependent
//! confining length, Hermite basis).
//!
//! Units follow hbar^2/m = 1 with hbar configurable (default 1).

pub mod acceptance;
pub mod boxbasis;
pub mod error;
pub mod hardwall;
pub mod hermite;
pub mod jtable;
pub mod kummer;
pub mod occupation;
pub mod pde;
pub mod perturbative;
pub mod quad;
pub mod rootfind;
pub mod schedule;
pub mod softwall;
pub mod sqrtlaw;
pub mod types;

pub use error::{QwallError, Result};
pub use occupation::OccupationModel;
pub use schedule::{WallKind, WallSchedule};
pub use types::{BasisKind, EnergyBreakdown, ForceBreakdown, RawIntegrals, SpectralState};
