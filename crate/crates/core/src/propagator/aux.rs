//! Exponent-weighted time integrals in overflow-safe product form.
//!
//! Each integral has the shape `I(t) = e^{−f(t)} ∫₀ᵗ e^{f(τ)} dτ` with a growing
//! exponent `f`. The integrand alone overflows for moderate `Kt`, but the
//! product obeys the linear initial-value problem
//!
//! ```text
//! dI/dt = 1 − f′(t) I,   I(0) = 0
//! ```
//!
//! whose solution stays bounded by `t`. It is stepped with classical RK4,
//! sub-dividing every grid interval so that `|f′|·h` stays small.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::baths::CorrelationProfile;
use crate::error::{check_time, Error, Result};
use crate::state::SystemParams;

/// Upper bound on `|f′|·h` for a single RK4 substep.
pub(crate) const STIFFNESS_PER_STEP: f64 = 0.02;

/// The three auxiliary integrals at one instant.
///
/// - `i1 = e^{−2K²t²−G} ∫₀ᵗ e^{2K²τ²+G(τ)} dτ`
/// - `i2 = e^{−K²t²/2−G−Φ} ∫₀ᵗ e^{K²τ²/2+G(τ)+Φ(τ)} dτ`
/// - `i3 = e^{−K²t²/2−Φ} ∫₀ᵗ e^{K²τ²/2+Φ(τ)} dτ`
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuxValues {
    pub i1: f64,
    pub i2: Complex64,
    pub i3: Complex64,
}

impl Add for AuxValues {
    type Output = AuxValues;

    fn add(self, rhs: AuxValues) -> AuxValues {
        AuxValues {
            i1: self.i1 + rhs.i1,
            i2: self.i2 + rhs.i2,
            i3: self.i3 + rhs.i3,
        }
    }
}

impl Mul<f64> for AuxValues {
    type Output = AuxValues;

    fn mul(self, s: f64) -> AuxValues {
        AuxValues {
            i1: self.i1 * s,
            i2: self.i2 * s,
            i3: self.i3 * s,
        }
    }
}

struct Rates {
    f1: f64,
    f2: Complex64,
    f3: Complex64,
}

impl Rates {
    fn max_abs(&self) -> f64 {
        self.f1.abs().max(self.f2.norm()).max(self.f3.norm())
    }
}

/// The auxiliary integrals stored on a time grid, with exact (RK4-continued)
/// evaluation in between.
#[derive(Debug, Clone)]
pub struct AuxIntegrals {
    coupling_k: f64,
    profile: CorrelationProfile,
    grid: Vec<f64>,
    values: Vec<AuxValues>,
}

impl AuxIntegrals {
    /// Integrates the companion equations across `grid`, which must start at
    /// zero and increase strictly.
    pub fn on_grid(params: &SystemParams, profile: &CorrelationProfile, grid: &[f64]) -> Result<Self> {
        if grid.first() != Some(&0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotoneGrid);
        }
        let mut aux = Self {
            coupling_k: params.coupling_k(),
            profile: profile.clone(),
            grid: grid.to_vec(),
            values: Vec::with_capacity(grid.len()),
        };
        let mut current = AuxValues::default();
        aux.values.push(current);
        for w in grid.windows(2) {
            current = aux.advance(current, w[0], w[1])?;
            aux.values.push(current);
        }
        Ok(aux)
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("grid is never empty")
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Values at an arbitrary `t`. Beyond the grid the integration continues
    /// from the last node, so late times cost proportionally more.
    pub fn at(&self, t: f64) -> Result<AuxValues> {
        check_time(t)?;
        let k = self.grid.partition_point(|&x| x <= t) - 1;
        if self.grid[k] == t {
            return Ok(self.values[k]);
        }
        self.advance(self.values[k], self.grid[k], t)
    }

    fn rates(&self, t: f64) -> Rates {
        let k2 = self.coupling_k * self.coupling_k;
        let b = self.profile.b(t);
        Rates {
            f1: 4.0 * k2 * t + 2.0 * b.re,
            f2: Complex64::new(k2 * t + 2.0 * b.re, 0.0) + b,
            f3: Complex64::new(k2 * t, 0.0) + b,
        }
    }

    fn derivative(&self, t: f64, y: AuxValues) -> AuxValues {
        let r = self.rates(t);
        AuxValues {
            i1: 1.0 - r.f1 * y.i1,
            i2: Complex64::new(1.0, 0.0) - r.f2 * y.i2,
            i3: Complex64::new(1.0, 0.0) - r.f3 * y.i3,
        }
    }

    fn advance(&self, mut y: AuxValues, from: f64, to: f64) -> Result<AuxValues> {
        let span = to - from;
        let stiffness = [from, 0.5 * (from + to), to]
            .iter()
            .map(|&t| self.rates(t).max_abs())
            .fold(0.0, f64::max);
        if !stiffness.is_finite() {
            return Err(Error::NonFinite("correlation profile"));
        }
        let substeps = ((span * stiffness / STIFFNESS_PER_STEP).ceil() as usize).max(1);
        let h = span / substeps as f64;
        if substeps > 1 && h <= 1e-14 * to.max(1.0) {
            return Err(Error::StepUnderflow(from));
        }
        for n in 0..substeps {
            let t = from + n as f64 * h;
            let k1 = self.derivative(t, y);
            let k2 = self.derivative(t + 0.5 * h, y + k1 * (0.5 * h));
            let k3 = self.derivative(t + 0.5 * h, y + k2 * (0.5 * h));
            let k4 = self.derivative(t + h, y + k3 * h);
            y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        if !(y.i1.is_finite() && y.i2.re.is_finite() && y.i2.im.is_finite() && y.i3.re.is_finite() && y.i3.im.is_finite()) {
            return Err(Error::NonFinite("auxiliary integrals"));
        }
        Ok(y)
    }
}
