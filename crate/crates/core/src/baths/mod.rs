//! Spectral-density models and their zero-temperature correlation functions.
//!
//! Every model provides
//!
//! - `B(t)`, the time-integrated bath response that drives qubit decay,
//! - `Φ(t) = ∫₀ᵗ B(τ) dτ`,
//! - `G(t) = Φ(t) + Φ̄(t) = 2 Re Φ(t)`, the decoherence exponent.
//!
//! The Lorentzian and Ohmic (Lorentz–Drude) models are evaluated in closed
//! form, taken on resonance. [`BathModel::MarkovianFlat`] is the memoryless
//! reference `B ≡ γ₀/2`. Tabulated spectra go through quadrature.

mod quadrature;
mod tabulated;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{check_time, Error, Result};

pub use quadrature::{integrate, Tolerance};
pub use tabulated::TabulatedSpectrum;

#[derive(Debug, Clone, PartialEq)]
pub enum BathModel {
    /// `J(ω) = (γ₀/2π) γ² / ((ω − ω₀)² + γ²)`, with `γ` the reservoir
    /// correlation rate and `γ₀` the Markovian decay rate of a qubit.
    Lorentzian { gamma: f64, gamma0: f64 },
    /// `J(ω) = (2ω/π) ω_c² / (ω_c² + ω²)` probed at the resonance `ω₀ = ε/2`.
    OhmicLorentzDrude { omega_c: f64, omega0: f64 },
    /// Memoryless limit `B ≡ γ₀/2` (the `γ → ∞` Lorentzian). `γ₀ = 0` switches
    /// the bath off.
    MarkovianFlat { gamma0: f64 },
    Tabulated(TabulatedSpectrum),
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be > 0, got {value}")))
    }
}

impl BathModel {
    pub fn lorentzian(gamma: f64, gamma0: f64) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("gamma0", gamma0)?;
        Ok(BathModel::Lorentzian { gamma, gamma0 })
    }

    pub fn ohmic(omega_c: f64, omega0: f64) -> Result<Self> {
        positive("omega_c", omega_c)?;
        positive("omega0", omega0)?;
        Ok(BathModel::OhmicLorentzDrude { omega_c, omega0 })
    }

    pub fn markovian(gamma0: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::invalid("gamma0", format!("must be >= 0, got {gamma0}")));
        }
        Ok(BathModel::MarkovianFlat { gamma0 })
    }

    /// The decoupled bath, `B ≡ 0`.
    pub fn vacuum() -> Self {
        BathModel::MarkovianFlat { gamma0: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BathModel::Lorentzian { gamma, gamma0 } => {
                positive("gamma", gamma)?;
                positive("gamma0", gamma0)
            }
            BathModel::OhmicLorentzDrude { omega_c, omega0 } => {
                positive("omega_c", omega_c)?;
                positive("omega0", omega0)
            }
            BathModel::MarkovianFlat { gamma0 } => Self::markovian(gamma0).map(|_| ()),
            BathModel::Tabulated(_) => Ok(()),
        }
    }

    /// Upper estimate of the decay rate `2|B(t)|`.
    pub fn decay_rate(&self) -> f64 {
        match self {
            BathModel::Lorentzian { gamma0, .. } => *gamma0,
            BathModel::OhmicLorentzDrude { omega_c, omega0 } => {
                4.0 * omega_c * omega_c / omega_c.hypot(*omega0)
            }
            BathModel::MarkovianFlat { gamma0 } => *gamma0,
            BathModel::Tabulated(spec) => 2.0 * std::f64::consts::PI * spec.max_density(),
        }
    }

    /// Fastest rate at which `B(t)` itself changes.
    pub fn memory_rate(&self) -> f64 {
        match self {
            BathModel::Lorentzian { gamma, .. } => *gamma,
            BathModel::OhmicLorentzDrude { omega_c, omega0 } => omega_c.hypot(*omega0),
            BathModel::MarkovianFlat { .. } => 0.0,
            BathModel::Tabulated(spec) => spec.max_detuning(),
        }
    }
}

/// Below this modulus `phi1`/`phi2` use their Taylor series.
const SERIES_RADIUS: f64 = 0.2;
/// Series terms; the first neglected one is below 1e-19 inside the radius.
const SERIES_TERMS: usize = 14;

/// `Σₙ (−x)ⁿ / (n + shift)!` summed by Horner's rule.
fn exp_series(x: Complex64, shift: u32) -> Complex64 {
    let mut coeffs = [0.0; SERIES_TERMS];
    let mut fact: f64 = (1..=shift).map(f64::from).product();
    for (n, c) in coeffs.iter_mut().enumerate() {
        if n > 0 {
            fact *= (n as u32 + shift) as f64;
        }
        *c = if n % 2 == 0 { 1.0 } else { -1.0 } / fact;
    }
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// `(1 − e^{−x}) / x`, accurate near zero.
fn phi1(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        exp_series(x, 1)
    } else {
        (Complex64::new(1.0, 0.0) - (-x).exp()) / x
    }
}

/// `(e^{−x} − 1 + x) / x²`, accurate near zero.
fn phi2(x: Complex64) -> Complex64 {
    if x.norm() < SERIES_RADIUS {
        exp_series(x, 2)
    } else {
        ((-x).exp() - 1.0 + x) / (x * x)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn lorentzian_b(gamma: f64, gamma0: f64, t: f64) -> Complex64 {
    real(-0.5 * gamma0 * (-gamma * t).exp_m1())
}

fn lorentzian_phi(gamma: f64, gamma0: f64, t: f64) -> Complex64 {
    // (γ₀/2)(t + (e^{−γt} − 1)/γ) = (γ₀/2) γ t² φ₂(γt)
    real(0.5 * gamma0 * gamma * t * t * phi2(real(gamma * t)).re)
}

fn lorentzian_g(gamma: f64, gamma0: f64, t: f64) -> f64 {
    // γ₀ t + (γ₀/γ)(e^{−γt} − 1), evaluated without cancellation
    let x = gamma * t;
    if x < SERIES_RADIUS {
        gamma0 * gamma * t * t * phi2(real(x)).re
    } else {
        gamma0 * t + gamma0 / gamma * (-x).exp_m1()
    }
}

fn ohmic_rate(omega_c: f64, omega0: f64) -> Complex64 {
    Complex64::new(omega_c, -omega0)
}

fn ohmic_b(omega_c: f64, omega0: f64, t: f64) -> Complex64 {
    // −i 2ω_c²/z (1 − e^{−zt}),  z = ω_c − iω₀
    let z = ohmic_rate(omega_c, omega0);
    Complex64::new(0.0, -2.0 * omega_c * omega_c * t) * phi1(z * t)
}

fn ohmic_phi(omega_c: f64, omega0: f64, t: f64) -> Complex64 {
    // −i 2ω_c²/z (t + (e^{−zt} − 1)/z)
    let z = ohmic_rate(omega_c, omega0);
    Complex64::new(0.0, -2.0 * omega_c * omega_c * t * t) * phi2(z * t)
}

/// Four-term closed form of the Ohmic decoherence exponent.
fn ohmic_g(omega_c: f64, omega0: f64, t: f64) -> f64 {
    let wc2 = omega_c * omega_c;
    let w02 = omega0 * omega0;
    let s = wc2 + w02;
    let decay = (-omega_c * t).exp();
    let (sin, cos) = (omega0 * t).sin_cos();
    4.0 * wc2 * omega0 / s * t + 4.0 * wc2 / (s * s) * (wc2 - w02) * decay * sin
        + 8.0 * wc2 * omega_c * omega0 / (s * s) * decay * cos
        - 8.0 * wc2 * omega_c * omega0 / (s * s)
}

/// `B(t)` for any model. Tabulated spectra go through [`correlation_b_numeric`].
pub fn correlation_b(model: &BathModel, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(match model {
        BathModel::Lorentzian { gamma, gamma0 } => lorentzian_b(*gamma, *gamma0, t),
        BathModel::OhmicLorentzDrude { omega_c, omega0 } => ohmic_b(*omega_c, *omega0, t),
        BathModel::MarkovianFlat { gamma0 } => real(0.5 * gamma0),
        BathModel::Tabulated(spec) => return spec.correlation_b(t),
    })
}

/// `Φ(t) = ∫₀ᵗ B(τ) dτ`.
pub fn correlation_phi(model: &BathModel, t: f64) -> Result<Complex64> {
    check_time(t)?;
    Ok(match model {
        BathModel::Lorentzian { gamma, gamma0 } => lorentzian_phi(*gamma, *gamma0, t),
        BathModel::OhmicLorentzDrude { omega_c, omega0 } => ohmic_phi(*omega_c, *omega0, t),
        BathModel::MarkovianFlat { gamma0 } => real(0.5 * gamma0 * t),
        BathModel::Tabulated(spec) => return spec.correlation_phi(t),
    })
}

/// `G(t) = 2 Re Φ(t)`, from the model's own closed form where one exists.
pub fn decoherence_g(model: &BathModel, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(match model {
        BathModel::Lorentzian { gamma, gamma0 } => lorentzian_g(*gamma, *gamma0, t),
        BathModel::OhmicLorentzDrude { omega_c, omega0 } => ohmic_g(*omega_c, *omega0, t),
        BathModel::MarkovianFlat { gamma0 } => gamma0 * t,
        BathModel::Tabulated(spec) => return Ok(2.0 * spec.correlation_phi(t)?.re),
    })
}

/// `i ∫ dω J(ω) (1 − e^{i(ε−ω)t}) / (ε − ω)` by adaptive quadrature.
pub fn correlation_b_numeric(spectrum: &TabulatedSpectrum, t: f64) -> Result<Complex64> {
    spectrum.correlation_b(t)
}

/// `B`, `Φ` and `G` of one bath as functions of time.
///
/// Closed-form models are evaluated directly. Tabulated spectra are sampled
/// up to a horizon on a grid bisected until Hermite interpolation matches
/// direct quadrature at every interval midpoint, using
/// `B' = ∫J e^{iΔt}` and `Φ' = B` as node derivatives; times beyond the grid
/// fall back to direct quadrature.
#[derive(Debug, Clone)]
pub struct CorrelationProfile {
    source: Source,
    scale: f64,
}

#[derive(Debug, Clone)]
enum Source {
    Lorentzian { gamma: f64, gamma0: f64 },
    Ohmic { omega_c: f64, omega0: f64 },
    Flat { gamma0: f64 },
    Sampled(Arc<SampledProfile>),
}

#[derive(Debug)]
struct SampledProfile {
    spectrum: TabulatedSpectrum,
    times: Vec<f64>,
    b: Vec<Complex64>,
    b_rate: Vec<Complex64>,
    phi: Vec<Complex64>,
}

fn hermite(y0: Complex64, d0: Complex64, y1: Complex64, d1: Complex64, h: f64, s: f64) -> Complex64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
}

/// Midpoint interpolation error accepted when sampling a tabulated profile,
/// relative to the largest coarse-grid magnitude (floored at 1). Must sit
/// above the quadrature tolerance or refinement cannot converge.
const SAMPLE_TOLERANCE: f64 = 1e-9;
const MIN_SAMPLE_NODES: usize = 16;
const MAX_SAMPLE_NODES: usize = 1 << 12;
/// Bisection depth below the coarse grid.
const MAX_REFINE_DEPTH: u32 = 24;

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    b: Complex64,
    b_rate: Complex64,
    phi: Complex64,
}

struct Sampler<'a> {
    spectrum: &'a TabulatedSpectrum,
    tol_b: f64,
    tol_phi: f64,
}

impl Sampler<'_> {
    fn sample(&self, t: f64) -> Result<Sample> {
        Ok(Sample {
            t,
            b: self.spectrum.correlation_b(t)?,
            b_rate: self.spectrum.correlation_b_rate(t)?,
            phi: self.spectrum.correlation_phi(t)?,
        })
    }

    /// Appends the nodes strictly after `left` up to and including `right`,
    /// bisecting wherever Hermite interpolation misses the midpoint.
    fn refine(&self, left: Sample, right: Sample, depth: u32, out: &mut Vec<Sample>) -> Result<()> {
        let h = right.t - left.t;
        let mid = self.sample(left.t + 0.5 * h)?;
        let b = hermite(left.b, left.b_rate, right.b, right.b_rate, h, 0.5);
        let phi = hermite(left.phi, left.b, right.phi, right.b, h, 0.5);
        let accurate = (b - mid.b).norm() <= self.tol_b && (phi - mid.phi).norm() <= self.tol_phi;
        if accurate || depth >= MAX_REFINE_DEPTH {
            out.push(mid);
            out.push(right);
            return Ok(());
        }
        self.refine(left, mid, depth + 1, out)?;
        self.refine(mid, right, depth + 1, out)
    }
}

impl SampledProfile {
    /// Samples on a coarse uniform grid, then bisects each interval until
    /// Hermite interpolation reproduces direct quadrature at its midpoint.
    fn build(spectrum: &TabulatedSpectrum, horizon: f64) -> Result<Self> {
        let mut sampler = Sampler {
            spectrum,
            tol_b: 0.0,
            tol_phi: 0.0,
        };
        let rate = 2.0 * std::f64::consts::PI * spectrum.max_density();
        let nodes = if horizon > 0.0 {
            ((horizon * rate / 0.1).ceil() as usize).clamp(MIN_SAMPLE_NODES, MAX_SAMPLE_NODES)
        } else {
            0
        };
        let coarse = (0..=nodes)
            .map(|k| sampler.sample(horizon * k as f64 / nodes.max(1) as f64))
            .collect::<Result<Vec<_>>>()?;
        sampler.tol_b = SAMPLE_TOLERANCE * coarse.iter().map(|s| s.b.norm()).fold(1.0, f64::max);
        sampler.tol_phi = SAMPLE_TOLERANCE * coarse.iter().map(|s| s.phi.norm()).fold(1.0, f64::max);

        let mut samples = vec![coarse[0]];
        for w in coarse.windows(2) {
            sampler.refine(w[0], w[1], 0, &mut samples)?;
        }
        Ok(Self {
            spectrum: spectrum.clone(),
            times: samples.iter().map(|s| s.t).collect(),
            b: samples.iter().map(|s| s.b).collect(),
            b_rate: samples.iter().map(|s| s.b_rate).collect(),
            phi: samples.iter().map(|s| s.phi).collect(),
        })
    }

    /// Interval index and its width for `t` inside the sampled range.
    fn locate(&self, t: f64) -> Option<(usize, f64, f64)> {
        let last = self.times.len() - 1;
        if last == 0 || t > self.times[last] * (1.0 + 1e-12) {
            return None;
        }
        let k = self.times.partition_point(|&x| x <= t).saturating_sub(1).min(last - 1);
        let h = self.times[k + 1] - self.times[k];
        Some((k, h, (t - self.times[k]) / h))
    }

    fn b(&self, t: f64) -> Complex64 {
        match self.locate(t) {
            Some((k, h, s)) => hermite(
                self.b[k],
                self.b_rate[k],
                self.b[k + 1],
                self.b_rate[k + 1],
                h,
                s,
            ),
            None => self
                .spectrum
                .correlation_b(t)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    fn phi(&self, t: f64) -> Complex64 {
        match self.locate(t) {
            Some((k, h, s)) => hermite(
                self.phi[k],
                self.b[k],
                self.phi[k + 1],
                self.b[k + 1],
                h,
                s,
            ),
            None => self
                .spectrum
                .correlation_phi(t)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }
}

impl CorrelationProfile {
    /// Profile valid on `[0, horizon]`. Only tabulated spectra use the horizon.
    pub fn new(model: &BathModel, horizon: f64) -> Result<Self> {
        model.validate()?;
        check_time(horizon)?;
        let source = match model {
            BathModel::Lorentzian { gamma, gamma0 } => Source::Lorentzian {
                gamma: *gamma,
                gamma0: *gamma0,
            },
            BathModel::OhmicLorentzDrude { omega_c, omega0 } => Source::Ohmic {
                omega_c: *omega_c,
                omega0: *omega0,
            },
            BathModel::MarkovianFlat { gamma0 } => Source::Flat { gamma0: *gamma0 },
            BathModel::Tabulated(spec) => {
                Source::Sampled(Arc::new(SampledProfile::build(spec, horizon)?))
            }
        };
        Ok(Self { source, scale: 1.0 })
    }

    /// Profile for a closed-form model; panics on a tabulated spectrum.
    pub fn analytic(model: &BathModel) -> Result<Self> {
        assert!(
            !matches!(model, BathModel::Tabulated(_)),
            "tabulated spectra need a horizon"
        );
        Self::new(model, 0.0)
    }

    /// Multiplies `B`, `Φ` and `G` by `factor`. Fault-injection hook for the
    /// validation tooling.
    #[doc(hidden)]
    pub fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    pub fn b(&self, t: f64) -> Complex64 {
        let v = match &self.source {
            Source::Lorentzian { gamma, gamma0 } => lorentzian_b(*gamma, *gamma0, t),
            Source::Ohmic { omega_c, omega0 } => ohmic_b(*omega_c, *omega0, t),
            Source::Flat { gamma0 } => real(0.5 * gamma0),
            Source::Sampled(p) => p.b(t),
        };
        v * self.scale
    }

    pub fn phi(&self, t: f64) -> Complex64 {
        let v = match &self.source {
            Source::Lorentzian { gamma, gamma0 } => lorentzian_phi(*gamma, *gamma0, t),
            Source::Ohmic { omega_c, omega0 } => ohmic_phi(*omega_c, *omega0, t),
            Source::Flat { gamma0 } => real(0.5 * gamma0 * t),
            Source::Sampled(p) => p.phi(t),
        };
        v * self.scale
    }

    pub fn g(&self, t: f64) -> f64 {
        let v = match &self.source {
            Source::Lorentzian { gamma, gamma0 } => lorentzian_g(*gamma, *gamma0, t),
            Source::Ohmic { omega_c, omega0 } => ohmic_g(*omega_c, *omega0, t),
            Source::Flat { gamma0 } => gamma0 * t,
            Source::Sampled(p) => 2.0 * p.phi(t).re,
        };
        v * self.scale
    }
}
