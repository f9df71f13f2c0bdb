//! Closed-form propagation of the two-qubit reduced state.
//!
//! At zero temperature the homogeneous propagator is block diagonal: a 4×4
//! population block `U⁽⁴⁾`, 2×2 coherence blocks `U⁽²⁾₁` (acting on
//! `ρ²³, ρ³²`) and `U⁽²⁾₂` (acting on `(ρ¹², ρ³⁴)` and `(ρ¹³, ρ²⁴)`), and the
//! scalars `e^{−2Φ}`, `e^{−2Φ̄}` for `ρ¹⁴`, `ρ⁴¹`. The constant exchange
//! commutator with the initial state adds terms carried by the three
//! auxiliary integrals of [`AuxValues`].

mod aux;

use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;

use crate::baths::{BathModel, CorrelationProfile};
use crate::error::{check_time, Error, Result};
use crate::oracle::VectorizedState;
use crate::state::{bell_psi_minus, check_physical, DensityMatrix4, SystemParams};

pub use aux::{AuxIntegrals, AuxValues};

/// Input states must pass [`check_physical`] at this tolerance.
pub const INPUT_TOLERANCE: f64 = 1e-8;

fn finite_profile(profile: &CorrelationProfile, t: f64) -> Result<(f64, Complex64)> {
    let g = profile.g(t);
    let phi = profile.phi(t);
    if !g.is_finite() {
        return Err(Error::NonFinite("G(t)"));
    }
    if !(phi.re.is_finite() && phi.im.is_finite()) {
        return Err(Error::NonFinite("Φ(t)"));
    }
    Ok((g, phi))
}

/// Population propagator acting on `(ρ¹¹, ρ²², ρ³³, ρ⁴⁴)`.
pub fn u4(params: &SystemParams, profile: &CorrelationProfile, t: f64) -> Result<Matrix4<f64>> {
    check_time(t)?;
    let (g, _) = finite_profile(profile, t)?;
    let k = params.coupling_k();
    let decay = (-g).exp();
    let exchange = (-2.0 * k * k * t * t).exp();
    let lost = -(-g).exp_m1();
    let same = 0.5 * decay * (1.0 + exchange);
    let swap = 0.5 * decay * (1.0 - exchange);
    #[rustfmt::skip]
    let m = Matrix4::new(
        decay * decay,  0.0,  0.0,  0.0,
        decay * lost,   same, swap, 0.0,
        decay * lost,   swap, same, 0.0,
        lost * lost,    lost, lost, 1.0,
    );
    Ok(m)
}

/// Propagator of `(ρ²³, ρ³²)`.
pub fn u2_1(params: &SystemParams, profile: &CorrelationProfile, t: f64) -> Result<Matrix2<f64>> {
    check_time(t)?;
    let (g, _) = finite_profile(profile, t)?;
    let k = params.coupling_k();
    let exchange = (-2.0 * k * k * t * t).exp();
    let half = 0.5 * (-g).exp();
    Ok(Matrix2::new(
        half * (1.0 + exchange),
        half * (1.0 - exchange),
        half * (1.0 - exchange),
        half * (1.0 + exchange),
    ))
}

/// Propagator of `(ρ¹², ρ³⁴)` and of `(ρ¹³, ρ²⁴)`.
///
/// Normalised so that it is the identity at `t = 0`:
/// `e^{−Φ−K²t²/2} [[e^{−G}, 0], [1 − e^{−G}, 1]]`.
pub fn u2_2(params: &SystemParams, profile: &CorrelationProfile, t: f64) -> Result<Matrix2<Complex64>> {
    check_time(t)?;
    let (g, phi) = finite_profile(profile, t)?;
    let k = params.coupling_k();
    let prefactor = (-phi - 0.5 * k * k * t * t).exp();
    let zero = Complex64::new(0.0, 0.0);
    Ok(Matrix2::new(
        prefactor * (-g).exp(),
        zero,
        prefactor * -(-g).exp_m1(),
        prefactor,
    ))
}

/// Everything needed to propagate arbitrary initial states of one system and
/// bath up to a fixed horizon. Immutable once built.
#[derive(Debug, Clone)]
pub struct PropagatorBundle {
    params: SystemParams,
    profile: CorrelationProfile,
    aux: AuxIntegrals,
}

/// Node spacing of the auxiliary-integral grid for a system and bath.
pub fn grid_step(params: &SystemParams, bath: &BathModel) -> f64 {
    let k = params.coupling_k();
    let mut step = f64::INFINITY;
    for (rate, factor) in [
        (bath.decay_rate(), 0.01),
        (bath.memory_rate(), 0.01),
        (k, 0.1),
    ] {
        if rate > 0.0 {
            step = step.min(factor / rate);
        }
    }
    step
}

fn uniform_grid(horizon: f64, step: f64) -> Vec<f64> {
    const MAX_NODES: usize = 1 << 20;
    let nodes = if step.is_finite() {
        ((horizon / step).ceil() as usize).clamp(1, MAX_NODES)
    } else {
        1
    };
    let mut grid: Vec<f64> = (0..=nodes).map(|k| horizon * k as f64 / nodes as f64).collect();
    if horizon == 0.0 {
        grid.truncate(1);
    }
    grid
}

impl PropagatorBundle {
    pub fn new(params: &SystemParams, bath: &BathModel, horizon: f64) -> Result<Self> {
        let profile = CorrelationProfile::new(bath, horizon)?;
        Self::with_profile(params, profile, grid_step(params, bath), horizon)
    }

    /// Builds a bundle around an existing profile, with auxiliary-integral
    /// nodes every `step`.
    pub fn with_profile(
        params: &SystemParams,
        profile: CorrelationProfile,
        step: f64,
        horizon: f64,
    ) -> Result<Self> {
        check_time(horizon)?;
        let grid = uniform_grid(horizon, step);
        let aux = AuxIntegrals::on_grid(params, &profile, &grid)?;
        Ok(Self {
            params: *params,
            profile,
            aux,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn profile(&self) -> &CorrelationProfile {
        &self.profile
    }

    pub fn horizon(&self) -> f64 {
        self.aux.horizon()
    }

    pub fn aux(&self, t: f64) -> Result<AuxValues> {
        self.aux.at(t)
    }

    pub fn u4(&self, t: f64) -> Result<Matrix4<f64>> {
        u4(&self.params, &self.profile, t)
    }

    pub fn u2_1(&self, t: f64) -> Result<Matrix2<f64>> {
        u2_1(&self.params, &self.profile, t)
    }

    pub fn u2_2(&self, t: f64) -> Result<Matrix2<Complex64>> {
        u2_2(&self.params, &self.profile, t)
    }

    /// The 16×16 homogeneous propagator `V(t)` in [`VectorizedState`] slot
    /// order.
    pub fn homogeneous(&self, t: f64) -> Result<SMatrix<Complex64, 16, 16>> {
        let (_, phi) = finite_profile(&self.profile, t)?;
        let u4 = self.u4(t)?;
        let u21 = self.u2_1(t)?;
        let u22 = self.u2_2(t)?;
        let mut v = SMatrix::<Complex64, 16, 16>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                v[(i, j)] = Complex64::new(u4[(i, j)], 0.0);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                v[(4 + i, 4 + j)] = Complex64::new(u21[(i, j)], 0.0);
                for (base, conj) in [(6, false), (8, true), (10, false), (12, true)] {
                    let z = u22[(i, j)];
                    v[(base + i, base + j)] = if conj { z.conj() } else { z };
                }
            }
        }
        v[(14, 14)] = (-2.0 * phi).exp();
        v[(15, 15)] = (-2.0 * phi.conj()).exp();
        Ok(v)
    }

    /// Propagates `rho0` to time `t ≤ horizon`.
    ///
    /// The ten independent upper-triangle elements are computed in closed
    /// form; `ρ⁴⁴` follows from the unit trace and the lower triangle from
    /// Hermiticity.
    pub fn evolve(&self, rho0: &DensityMatrix4, t: f64) -> Result<DensityMatrix4> {
        let report = check_physical(rho0);
        if !report.passes(INPUT_TOLERANCE) {
            return Err(Error::Unphysical(format!("{report:?}")));
        }
        check_time(t)?;
        let (g, phi) = finite_profile(&self.profile, t)?;
        let aux = self.aux.at(t)?;
        let k = self.params.coupling_k();
        let i = Complex64::i();
        let ik = i * k;

        let decay = (-g).exp();
        let lost = -(-g).exp_m1();
        let exchange = (-2.0 * k * k * t * t).exp();
        let coherent = (-0.5 * k * k * t * t - phi).exp();
        let coherent_g = coherent * decay;

        let p = |a: usize| rho0.get(a, a).re;
        let r = |a: usize, b: usize| rho0.get(a, b);
        let (p11, p22, p33) = (p(0), p(1), p(2));
        let (r12, r13, r14, r23, r24, r34) = (r(0, 1), r(0, 2), r(0, 3), r(1, 2), r(1, 3), r(2, 3));

        let drive = 2.0 * k * r23.im * aux.i1;
        let q11 = decay * decay * p11;
        let q22 = decay * lost * p11 + 0.5 * decay * (1.0 + exchange) * p22
            + 0.5 * decay * (1.0 - exchange) * p33
            - drive;
        let q33 = decay * lost * p11 + 0.5 * decay * (1.0 - exchange) * p22
            + 0.5 * decay * (1.0 + exchange) * p33
            + drive;
        let q44 = 1.0 - q11 - q22 - q33;

        let q12 = coherent_g * r12 + ik * r13 * aux.i2;
        let q13 = coherent_g * r13 + ik * r12 * aux.i2;
        let q14 = (-2.0 * phi).exp() * r14;
        let q23 = decay * Complex64::new(r23.re, exchange * r23.im) + ik * (p22 - p33) * aux.i1;
        let q24 = coherent * (r13 * lost + r24) + ik * (r12 - r34) * aux.i3 - ik * r12 * aux.i2;
        let q34 = coherent * (r12 * lost + r34) + ik * (r13 - r24) * aux.i3 - ik * r13 * aux.i2;

        let re = |x: f64| Complex64::new(x, 0.0);
        let rows = [
            [re(q11), q12, q13, q14],
            [q12.conj(), re(q22), q23, q24],
            [q13.conj(), q23.conj(), re(q33), q34],
            [q14.conj(), q24.conj(), q34.conj(), re(q44)],
        ];
        Ok(DensityMatrix4::from_rows(rows))
    }

    /// `V(t) R(0)`: propagation without the exchange commutator source.
    pub fn evolve_homogeneous(&self, rho0: &DensityMatrix4, t: f64) -> Result<DensityMatrix4> {
        let v = self.homogeneous(t)?;
        let r = VectorizedState::from_density(rho0);
        Ok(VectorizedState::from_vector(v * r.as_vector()).to_density())
    }
}

/// Propagates `rho0` to time `t`, building a bundle whose horizon is `t`.
pub fn evolve(
    rho0: &DensityMatrix4,
    params: &SystemParams,
    bath: &BathModel,
    t: f64,
) -> Result<DensityMatrix4> {
    check_time(t)?;
    PropagatorBundle::new(params, bath, t)?.evolve(rho0, t)
}

/// `e^{−G}|Ψ₋⟩⟨Ψ₋| + (1 − e^{−G})|00⟩⟨00|`, the evolved singlet.
///
/// The singlet is an eigenstate of the exchange coupling, so the result does
/// not depend on `K`.
pub fn evolve_bell(bath: &BathModel, _params: &SystemParams, t: f64) -> Result<DensityMatrix4> {
    check_time(t)?;
    let profile = CorrelationProfile::new(bath, t)?;
    bell_from_profile(&profile, t)
}

pub(crate) fn bell_from_profile(profile: &CorrelationProfile, t: f64) -> Result<DensityMatrix4> {
    let (g, _) = finite_profile(profile, t)?;
    let survive = (-g).exp();
    let mut m = bell_psi_minus().into_matrix() * Complex64::new(survive, 0.0);
    m[(3, 3)] = Complex64::new(-(-g).exp_m1(), 0.0);
    Ok(DensityMatrix4::from_matrix(m))
}

#[cfg(test)]
mod tests;
