//! Exact observables for a coherent pulse scattering off a two-level emitter
//! in a one-dimensional waveguide.
//!
//! Everything is evaluated from closed-form Laplace-space expressions: the
//! full counting statistics of reflected/chiral/transmitted photons, the
//! photon-number distributions and Mandel Q factors, the mean fields and the
//! (transient and stationary) Mollow fluorescence spectrum, the two-point
//! correlators of the scattered pulse, and the entanglement entropy of a
//! counting interval with the rest of the pulse.
//!
//! The crate is organized around a small numerical kernel:
//!
//! * [`poly`] — complex polynomials and companion-matrix root finding,
//! * [`rational`] — rational functions of the Laplace variable and their
//!   residue-based inverse transforms ([`rational::PoleSum`]),
//! * [`bromwich`] — a quadrature oracle for the same inverse transform,
//! * [`charfn`] — characteristic-function → probability-mass inversion,
//!
//! on top of which sit the physics modules [`params`], [`correlators`],
//! [`fcs`], [`spectrum`] and [`entropy`].
//!
//! Rates are in units of the relaxation rate `gamma`, times in `1/gamma`;
//! all functions accept arbitrary `gamma > 0` and are exact under rescaling.

pub mod bromwich;
pub mod charfn;
pub mod correlators;
pub mod entropy;
pub mod error;
pub mod fcs;
pub mod ode;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod selftest;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{DerivedParams, PolePair, Propagators, SystemParams};

/// Complex double throughout the crate.
pub type C64 = num_complex::Complex64;

/// Waiting time of the detector: finite, or the stationary limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingTime {
    Finite(f64),
    Infinite,
}

impl WaitingTime {
    pub fn is_infinite(&self) -> bool {
        matches!(self, WaitingTime::Infinite)
    }
}

impl std::fmt::Display for WaitingTime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WaitingTime::Finite(t) => write!(f, "{t}"),
            WaitingTime::Infinite => write!(f, "inf"),
        }
    }
}
