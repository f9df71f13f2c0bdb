//! Tabulated spectral densities and their correlation functions by quadrature.
//!
//! With detuning `Δ = ε − ω` the zero-temperature correlation function is
//!
//! ```text
//! B(t) = i ∫ dω J(ω) (1 − e^{iΔt}) / Δ
//! Φ(t) = ∫₀ᵗ B = ∫ dω J(ω) (1 − e^{iΔt} + iΔt) / Δ²
//! B'(t) = ∫ dω J(ω) e^{iΔt}
//! ```
//!
//! J is linearly interpolated between samples and every sample is a
//! quadrature breakpoint.

use num_complex::Complex64;

use super::quadrature::{self, Tolerance};
use crate::error::{check_time, Error, Result};

/// Below this `|Δ t|` the `B` kernel is evaluated from its Taylor series.
const B_SERIES_THRESHOLD: f64 = 1e-4;
/// The `Φ` kernel loses two orders of cancellation, so it switches earlier.
const PHI_SERIES_THRESHOLD: f64 = 1e-2;
/// Samples with `J < TRIM_FRACTION · max J` at the ends of the table are dropped.
const TRIM_FRACTION: f64 = 1e-12;

/// Sampled spectral density `J(ω)` together with the system frequency that
/// enters the detuning `ε − ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    omega: Vec<f64>,
    density: Vec<f64>,
    epsilon: f64,
}

impl TabulatedSpectrum {
    pub fn new(samples: Vec<(f64, f64)>, epsilon: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::invalid("epsilon", format!("must be > 0, got {epsilon}")));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid(
                    "samples",
                    format!("omega must be strictly increasing ({} then {})", w[0].0, w[1].0),
                ));
            }
        }
        if let Some(&(omega, j)) = samples
            .iter()
            .find(|(omega, j)| !omega.is_finite() || !j.is_finite() || *j < 0.0)
        {
            return Err(Error::invalid(
                "samples",
                format!("J must be finite and >= 0 (omega = {omega}, J = {j})"),
            ));
        }

        let max_j = samples.iter().map(|s| s.1).fold(0.0, f64::max);
        let cutoff = TRIM_FRACTION * max_j;
        let first = samples.iter().position(|s| s.1 >= cutoff).unwrap_or(0);
        let last = samples.iter().rposition(|s| s.1 >= cutoff).unwrap_or(0);
        // keep one neighbour on each side so the linear ramp to zero survives
        let first = first.saturating_sub(1);
        let last = (last + 1).min(samples.len() - 1);
        let kept = &samples[first..=last];
        Ok(Self {
            omega: kept.iter().map(|s| s.0).collect(),
            density: kept.iter().map(|s| s.1).collect(),
            epsilon,
        })
    }

    /// Parses whitespace-delimited `omega J` lines. `#` starts a comment.
    ///
    /// Values are in units of `unit` (normally the qubit splitting ε) unless a
    /// `# units: absolute` header line is present.
    pub fn parse_samples(text: &str, unit: f64) -> Result<Vec<(f64, f64)>> {
        let mut absolute = false;
        let mut samples = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let (data, comment) = match raw.find('#') {
                Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
                None => (raw, None),
            };
            if let Some(comment) = comment {
                if let Some((key, value)) = comment.split_once(':') {
                    if key.trim().eq_ignore_ascii_case("units") {
                        match value.trim().to_ascii_lowercase().as_str() {
                            "absolute" => absolute = true,
                            "epsilon" | "relative" => absolute = false,
                            other => {
                                return Err(Error::SpectrumParse {
                                    line: line_no,
                                    reason: format!("unknown units `{other}`"),
                                })
                            }
                        }
                    }
                }
            }
            let fields: Vec<&str> = data.split_whitespace().collect();
            match fields.as_slice() {
                [] => continue,
                [omega, j] => {
                    let parse = |s: &str| {
                        s.parse::<f64>().map_err(|e| Error::SpectrumParse {
                            line: line_no,
                            reason: format!("`{s}`: {e}"),
                        })
                    };
                    samples.push((parse(omega)?, parse(j)?));
                }
                _ => {
                    return Err(Error::SpectrumParse {
                        line: line_no,
                        reason: format!("expected 2 columns, found {}", fields.len()),
                    })
                }
            }
        }
        if !absolute {
            for s in &mut samples {
                s.0 *= unit;
                s.1 *= unit;
            }
        }
        Ok(samples)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    pub fn densities(&self) -> &[f64] {
        &self.density
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `|ε − ω|` over the table.
    pub fn max_detuning(&self) -> f64 {
        let lo = self.omega[0];
        let hi = self.omega[self.omega.len() - 1];
        (self.epsilon - lo).abs().max((self.epsilon - hi).abs())
    }

    fn is_zero(&self) -> bool {
        self.density.iter().all(|&j| j == 0.0)
    }

    /// Integrates `J(ω)·kernel(ε − ω)` piecewise over the table.
    fn integrate<K>(&self, kernel: K) -> Result<Complex64>
    where
        K: Fn(f64) -> Complex64,
    {
        if self.is_zero() || self.omega.len() < 2 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let omega = &self.omega;
        let density = &self.density;
        let integrand = |w: f64| {
            // segment lookup; quadrature nodes never sit outside the table
            let k = match omega.partition_point(|&x| x <= w) {
                0 => 0,
                k if k >= omega.len() => omega.len() - 2,
                k => k - 1,
            };
            let frac = (w - omega[k]) / (omega[k + 1] - omega[k]);
            let j = density[k] + (density[k + 1] - density[k]) * frac;
            if j == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                kernel(self.epsilon - w) * j
            }
        };
        // resonance is a breakpoint too, so the series branch sits at a node edge
        let mut breaks = omega.clone();
        if self.epsilon > omega[0] && self.epsilon < omega[omega.len() - 1] {
            let pos = breaks.partition_point(|&x| x < self.epsilon);
            if breaks[pos] != self.epsilon {
                breaks.insert(pos, self.epsilon);
            }
        }
        quadrature::integrate(integrand, &breaks, Tolerance::default())
    }

    pub fn correlation_b(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        self.integrate(|delta| b_kernel(delta, t))
    }

    pub fn correlation_phi(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        self.integrate(|delta| phi_kernel(delta, t))
    }

    /// `dB/dt`.
    pub fn correlation_b_rate(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        self.integrate(|delta| Complex64::new(0.0, delta * t).exp())
    }
}

/// `i (1 − e^{iΔt}) / Δ`, finite at `Δ = 0` where it equals `t`.
pub(crate) fn b_kernel(delta: f64, t: f64) -> Complex64 {
    let x = delta * t;
    if x.abs() < B_SERIES_THRESHOLD {
        // i·t·(−i + x/2 + i x²/6 − x³/24)
        let x2 = x * x;
        Complex64::new(t * (1.0 - x2 / 6.0), t * (x / 2.0 - x2 * x / 24.0))
    } else {
        let (s, c) = x.sin_cos();
        // i (1 − cos x − i sin x) / Δ
        Complex64::new(s / delta, (1.0 - c) / delta)
    }
}

/// `(1 − e^{iΔt} + iΔt) / Δ²`, finite at `Δ = 0` where it equals `t²/2`.
pub(crate) fn phi_kernel(delta: f64, t: f64) -> Complex64 {
    let x = delta * t;
    let t2 = t * t;
    if x.abs() < PHI_SERIES_THRESHOLD {
        let x2 = x * x;
        let re = 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
        let im = x / 6.0 - x2 * x / 120.0 + x2 * x2 * x / 5040.0;
        Complex64::new(t2 * re, t2 * im)
    } else {
        let (s, c) = x.sin_cos();
        let d2 = delta * delta;
        Complex64::new((1.0 - c) / d2, (x - s) / d2)
    }
}
