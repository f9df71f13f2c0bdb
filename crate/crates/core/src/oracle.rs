//! Brute-force integration of the second-order master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ(0)] − t [H, [H, ρ(t)]] + Σⱼ Dⱼ(t) ρ(t)
//! Dⱼ ρ = B(t)(σ⁻ⱼ ρ σ⁺ⱼ − σ⁺ⱼσ⁻ⱼ ρ) + B̄(t)(σ⁻ⱼ ρ σ⁺ⱼ − ρ σ⁺ⱼσ⁻ⱼ)
//! ```
//!
//! with the exchange Hamiltonian `H = K(σ⁺₁σ⁻₂ + σ⁻₁σ⁺₂)` in the interaction
//! picture. Nothing here shares code with [`crate::propagator`] beyond the
//! correlation profile, so the two can check each other.

use nalgebra::{Matrix4, SVector};
use num_complex::Complex64;

use crate::baths::{BathModel, CorrelationProfile};
use crate::error::{check_time, Error, Result};
use crate::state::{check_physical, DensityMatrix4, SystemParams};

/// `(rate + K² t_end)·dt` must not exceed this.
pub const STEP_LIMIT: f64 = 0.05;
/// Trace drift along a trajectory that aborts integration.
pub const DRIFT_LIMIT: f64 = 1e-4;

/// Row/column of each slot of the vectorized density matrix:
/// `ρ¹¹, ρ²², ρ³³, ρ⁴⁴, ρ²³, ρ³², ρ¹², ρ³⁴, ρ²¹, ρ⁴³, ρ¹³, ρ²⁴, ρ³¹, ρ⁴², ρ¹⁴, ρ⁴¹`.
pub const SLOTS: [(usize, usize); 16] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (1, 2),
    (2, 1),
    (0, 1),
    (2, 3),
    (1, 0),
    (3, 2),
    (0, 2),
    (1, 3),
    (2, 0),
    (3, 1),
    (0, 3),
    (3, 0),
];

/// The density matrix as a 16-component column in [`SLOTS`] order, the
/// ordering in which the homogeneous propagator is block diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorizedState {
    r: SVector<Complex64, 16>,
}

impl VectorizedState {
    pub fn from_density(rho: &DensityMatrix4) -> Self {
        Self {
            r: SVector::from_fn(|k, _| {
                let (i, j) = SLOTS[k];
                rho.get(i, j)
            }),
        }
    }

    pub fn from_vector(r: SVector<Complex64, 16>) -> Self {
        Self { r }
    }

    pub fn as_vector(&self) -> &SVector<Complex64, 16> {
        &self.r
    }

    pub fn to_density(&self) -> DensityMatrix4 {
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in SLOTS.iter().enumerate() {
            m[(i, j)] = self.r[k];
        }
        DensityMatrix4::from_matrix(m)
    }
}

fn op(entries: &[(usize, usize)]) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    for &(i, j) in entries {
        m[(i, j)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Raising operators of qubit 1 and qubit 2 in the `|11⟩,|10⟩,|01⟩,|00⟩` basis.
fn raising() -> [Matrix4<Complex64>; 2] {
    [op(&[(0, 2), (1, 3)]), op(&[(0, 1), (2, 3)])]
}

/// Right-hand side of the master equation for one system and bath.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    hamiltonian: Matrix4<Complex64>,
    raising: [Matrix4<Complex64>; 2],
    lowering: [Matrix4<Complex64>; 2],
    excited: [Matrix4<Complex64>; 2],
    profile: CorrelationProfile,
    decay_rate: f64,
    coupling_k: f64,
    exchange_source: bool,
}

impl MasterEquation {
    pub fn new(params: &SystemParams, profile: CorrelationProfile, decay_rate: f64) -> Self {
        let k = params.coupling_k();
        let raising = raising();
        let lowering = raising.map(|s| s.adjoint());
        let excited = [raising[0] * lowering[0], raising[1] * lowering[1]];
        let hamiltonian =
            (raising[0] * lowering[1] + lowering[0] * raising[1]) * Complex64::new(k, 0.0);
        Self {
            hamiltonian,
            raising,
            lowering,
            excited,
            profile,
            decay_rate,
            coupling_k: k,
            exchange_source: true,
        }
    }

    pub fn for_bath(params: &SystemParams, bath: &BathModel, horizon: f64) -> Result<Self> {
        let profile = CorrelationProfile::new(bath, horizon)?;
        Ok(Self::new(params, profile, bath.decay_rate()))
    }

    /// Drops the constant `−i[H, ρ(0)]` term. Only useful to demonstrate that
    /// the term matters.
    pub fn without_exchange_source(mut self) -> Self {
        self.exchange_source = false;
        self
    }

    pub fn hamiltonian(&self) -> &Matrix4<Complex64> {
        &self.hamiltonian
    }

    pub fn rhs(
        &self,
        t: f64,
        rho: &Matrix4<Complex64>,
        rho0: &Matrix4<Complex64>,
    ) -> Result<Matrix4<Complex64>> {
        let b = self.profile.b(t);
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::NonFinite("B(t)"));
        }
        let h = &self.hamiltonian;
        let i = Complex64::i();

        let inner = h * rho - rho * h;
        let mut out = -(h * inner - inner * h) * Complex64::new(t, 0.0);
        if self.exchange_source {
            out -= (h * rho0 - rho0 * h) * i;
        }
        for j in 0..2 {
            let jump = self.lowering[j] * rho * self.raising[j];
            out += (jump - self.excited[j] * rho) * b;
            out += (jump - rho * self.excited[j]) * b.conj();
        }
        Ok(out)
    }

    /// Fixed-step RK4 from `rho0`, recording the state at each of
    /// `sample_times` (non-negative, strictly increasing).
    pub fn integrate(&self, rho0: &DensityMatrix4, sample_times: &[f64], dt: f64) -> Result<Trajectory> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
        }
        if let Some(&first) = sample_times.first() {
            check_time(first)?;
        }
        if sample_times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotoneGrid);
        }
        let t_end = sample_times.last().copied().unwrap_or(0.0);
        let stiffness = (self.decay_rate + self.coupling_k * self.coupling_k * t_end) * dt;
        if stiffness > STEP_LIMIT {
            return Err(Error::StepTooLarge {
                dt,
                limit: STEP_LIMIT,
            });
        }

        let anchor = *rho0.matrix();
        let mut rho = anchor;
        let mut t = 0.0;
        let mut states = Vec::with_capacity(sample_times.len());
        for &target in sample_times {
            // number of steps is fixed up front so that exact multiples of dt
            // are reached without a sliver step
            let steps = ((target - t) / dt * (1.0 - 1e-12)).ceil().max(0.0) as usize;
            let start = t;
            for n in 0..steps {
                let t0 = start + n as f64 * dt;
                let h = if n + 1 == steps { target - t0 } else { dt };
                rho = self.step(t0, h, &rho, &anchor)?;
                let trace_error = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
                if trace_error > DRIFT_LIMIT {
                    return Err(Error::PhysicalityDrift {
                        t: t0 + h,
                        detail: format!("trace error {trace_error:e}"),
                    });
                }
            }
            t = target;
            states.push(DensityMatrix4::from_matrix(rho));
        }
        Ok(Trajectory {
            times: sample_times.to_vec(),
            states,
        })
    }

    fn step(
        &self,
        t: f64,
        h: f64,
        rho: &Matrix4<Complex64>,
        anchor: &Matrix4<Complex64>,
    ) -> Result<Matrix4<Complex64>> {
        let half = Complex64::new(0.5 * h, 0.0);
        let full = Complex64::new(h, 0.0);
        let k1 = self.rhs(t, rho, anchor)?;
        let k2 = self.rhs(t + 0.5 * h, &(rho + k1 * half), anchor)?;
        let k3 = self.rhs(t + 0.5 * h, &(rho + k2 * half), anchor)?;
        let k4 = self.rhs(t + h, &(rho + k3 * full), anchor)?;
        let two = Complex64::new(2.0, 0.0);
        let next = rho + (k1 + k2 * two + k3 * two + k4) * Complex64::new(h / 6.0, 0.0);
        Ok((next + next.adjoint()) * Complex64::new(0.5, 0.0))
    }
}

/// Master-equation right-hand side `dρ/dt` at time `t`.
pub fn me_rhs(
    params: &SystemParams,
    profile: &CorrelationProfile,
    t: f64,
    rho: &DensityMatrix4,
    rho0: &DensityMatrix4,
) -> Result<Matrix4<Complex64>> {
    MasterEquation::new(params, profile.clone(), 0.0).rhs(t, rho.matrix(), rho0.matrix())
}

/// Integrates the master equation from `rho0` with fixed step `dt`, sampling
/// at `sample_times`.
pub fn integrate_me(
    rho0: &DensityMatrix4,
    params: &SystemParams,
    bath: &BathModel,
    sample_times: &[f64],
    dt: f64,
) -> Result<Trajectory> {
    let t_end = sample_times.last().copied().unwrap_or(0.0);
    MasterEquation::for_bath(params, bath, t_end)?.integrate(rho0, sample_times, dt)
}

/// A step size that satisfies [`STEP_LIMIT`] with margin and resolves the
/// bath memory time.
pub fn default_step(params: &SystemParams, bath: &BathModel, t_end: f64) -> f64 {
    let k = params.coupling_k();
    let stiffness = bath.decay_rate() + k * k * t_end + k;
    let mut dt = 0.2 * STEP_LIMIT / stiffness.max(1e-12);
    let memory = bath.memory_rate();
    if memory > 0.0 {
        dt = dt.min(0.01 / memory);
    }
    dt.min(t_end.max(1e-3) / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
}

impl Trajectory {
    pub fn from_fn<F>(times: &[f64], mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<DensityMatrix4>,
    {
        let states = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: times.to_vec(),
            states,
        })
    }

    /// Worst trace error, Hermiticity error and smallest eigenvalue along the
    /// trajectory.
    pub fn physicality_extrema(&self) -> (f64, f64, f64) {
        self.states.iter().map(check_physical).fold(
            (0.0, 0.0, f64::INFINITY),
            |(tr, he, ev), r| {
                (
                    tr.max(r.trace_error),
                    he.max(r.hermiticity_error),
                    ev.min(r.min_eigenvalue),
                )
            },
        )
    }
}

/// Largest element-wise deviation between two trajectories on the same grid.
pub fn max_deviation(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times.len() != b.times.len() || a.states.len() != b.states.len() {
        return Err(Error::GridMismatch);
    }
    if a
        .times
        .iter()
        .zip(&b.times)
        .any(|(x, y)| (x - y).abs() > 1e-12 * x.abs().max(1.0))
    {
        return Err(Error::GridMismatch);
    }
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max))
}
