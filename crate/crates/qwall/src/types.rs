//! Shared value types: spectral coefficient vectors and the energy/force
//! breakdowns every engine reports.

use num_complex::Complex64;

use crate::error::{QwallError, Result};

/// Which eigenbasis a coefficient vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// sqrt(2) sin(n pi y) on [0, 1], n = 1.. (hard wall, linear law)
    BoxSine,
    /// Kummer-function basis of the sqrt-law wall, n = 1..
    Kummer,
    /// Harmonic-oscillator basis on the line, n = 0..
    Hermite,
}

/// Complex coefficients of a state over a named basis, truncated at n_max.
#[derive(Debug, Clone)]
pub struct SpectralState {
    pub basis: BasisKind,
    pub coeffs: Vec<Complex64>,
    /// Eigenstate index the state started from at t = 0.
    pub source_level: usize,
}

impl SpectralState {
    pub fn new(basis: BasisKind, coeffs: Vec<Complex64>, source_level: usize) -> Self {
        Self { basis, coeffs, source_level }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Checks sum |c_n|^2 in [1 - eps, 1 + tiny]; the truncation budget eps
    /// is declared by the engine that built the state.
    pub fn check_truncation(&self, eps: f64) -> Result<()> {
        let s = self.norm_sqr();
        if s > 1.0 + 1e-12 || s < 1.0 - eps {
            return Err(QwallError::Truncation(format!(
                "sum |c_n|^2 = {s:.15} outside [1 - {eps:.1e}, 1]"
            )));
        }
        Ok(())
    }
}

/// Labels for the raw integrals behind a force value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RawIntegrals {
    /// Hard wall: (I0, Im I1, I2)
    Box { i0: f64, im_i1: f64, i2: f64 },
    /// Soft wall: (K0, Im K1, K2)
    Trap { k0: f64, im_k1: f64, k2: f64 },
    /// Sqrt-law wall: (I0bar, Im I1bar)
    SqrtLaw { i0_bar: f64, im_i1_bar: f64 },
}

impl RawIntegrals {
    /// (value, value, value) triple regardless of labeling; the third slot is
    /// NaN for the sqrt-law pair.
    pub fn triple(&self) -> (f64, f64, f64) {
        match *self {
            RawIntegrals::Box { i0, im_i1, i2 } => (i0, im_i1, i2),
            RawIntegrals::Trap { k0, im_k1, k2 } => (k0, im_k1, k2),
            RawIntegrals::SqrtLaw { i0_bar, im_i1_bar } => (i0_bar, im_i1_bar, f64::NAN),
        }
    }

    pub fn labels(&self) -> (&'static str, &'static str, &'static str) {
        match self {
            RawIntegrals::Box { .. } => ("i0", "im_i1", "i2"),
            RawIntegrals::Trap { .. } => ("k0", "im_k1", "k2"),
            RawIntegrals::SqrtLaw { .. } => ("i0_bar", "im_i1_bar", ""),
        }
    }
}

/// Adiabatic/non-adiabatic split of the wall force; total is the exact sum
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown {
    pub adiabatic: f64,
    pub non_adiabatic: f64,
    pub raw: RawIntegrals,
}

impl ForceBreakdown {
    pub fn total(&self) -> f64 {
        self.adiabatic + self.non_adiabatic
    }
}

/// Energy and the raw integrals it came from (hard-wall labeling).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub energy: f64,
    pub i0: f64,
    pub im_i1: f64,
    pub i2: f64,
}
