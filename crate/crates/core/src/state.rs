//! Two-qubit states, system parameters and physicality diagnostics.

use std::fmt;
use std::ops::Index;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-9;

/// Computational basis states in the fixed order used throughout the crate.
///
/// `1` is the excited level of a qubit, so `S10` has qubit 1 excited and
/// qubit 2 in its ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisState {
    S11,
    S10,
    S01,
    S00,
}

impl BasisState {
    pub const ALL: [BasisState; 4] = [
        BasisState::S11,
        BasisState::S10,
        BasisState::S01,
        BasisState::S00,
    ];

    /// Zero-based row/column of this state in a [`DensityMatrix4`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Parses a one-based label index (`1 → |11⟩`, …, `4 → |00⟩`).
    pub fn from_label_index(index: usize) -> Result<Self> {
        match index {
            1..=4 => Ok(Self::ALL[index - 1]),
            _ => Err(Error::BasisIndex(index)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisState::S11 => "11",
            BasisState::S10 => "10",
            BasisState::S01 => "01",
            BasisState::S00 => "00",
        }
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.label())
    }
}

/// Qubit splitting `ε` (identical for both qubits) and exchange strength `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    epsilon: f64,
    coupling_k: f64,
}

impl SystemParams {
    pub fn new(epsilon: f64, coupling_k: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::invalid("epsilon", format!("must be > 0, got {epsilon}")));
        }
        if !(coupling_k.is_finite() && coupling_k >= 0.0) {
            return Err(Error::invalid(
                "coupling_k",
                format!("must be >= 0, got {coupling_k}"),
            ));
        }
        Ok(Self {
            epsilon,
            coupling_k,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn coupling_k(&self) -> f64 {
        self.coupling_k
    }
}

/// Pure two-qubit state in the `|11⟩, |10⟩, |01⟩, |00⟩` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector4 {
    amplitudes: [Complex64; 4],
}

impl StateVector4 {
    /// Wraps raw amplitudes. Normalization is checked where the vector is
    /// consumed, see [`density_from_pure`].
    pub fn new(amplitudes: [Complex64; 4]) -> Self {
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Self {
        Self::new(amplitudes.map(|a| Complex64::new(a, 0.0)))
    }

    pub fn basis(state: BasisState) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
        amplitudes[state.index()] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self::new(self.amplitudes.map(|a| a / norm)))
    }
}

/// Reduced two-qubit density matrix ρ_S.
///
/// Construction does not enforce physicality; use [`check_physical`] to
/// inspect a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    elements: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    pub fn from_matrix(elements: Matrix4<Complex64>) -> Self {
        Self { elements }
    }

    /// Row-major construction.
    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self {
            elements: Matrix4::from_fn(|i, j| rows[i][j]),
        }
    }

    pub fn zeros() -> Self {
        Self {
            elements: Matrix4::zeros(),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            elements: Matrix4::identity() * Complex64::new(0.25, 0.0),
        }
    }

    pub fn basis_projector(state: BasisState) -> Self {
        let mut elements = Matrix4::zeros();
        elements[(state.index(), state.index())] = Complex64::new(1.0, 0.0);
        Self { elements }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.elements
    }

    pub fn into_matrix(self) -> Matrix4<Complex64> {
        self.elements
    }

    /// Zero-based element access.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.elements[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.trace()
    }

    pub fn dagger(&self) -> Self {
        Self {
            elements: self.elements.adjoint(),
        }
    }

    /// Largest element-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix4) -> f64 {
        (self.elements - other.elements)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part `(ρ + ρ†)/2`, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let hermitian = (self.elements + self.elements.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(hermitian);
        let mut values = [0.0; 4];
        for (slot, v) in values.iter_mut().zip(eig.eigenvalues.iter()) {
            *slot = *v;
        }
        values.sort_by(|a, b| a.total_cmp(b));
        values
    }
}

impl Index<(usize, usize)> for DensityMatrix4 {
    type Output = Complex64;

    fn index(&self, index: (usize, usize)) -> &Complex64 {
        &self.elements[index]
    }
}

/// Diagnostics returned by [`check_physical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport {
    /// `|Tr ρ − 1|`.
    pub trace_error: f64,
    /// Largest element of `|ρ − ρ†|`.
    pub hermiticity_error: f64,
    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub min_eigenvalue: f64,
}

impl PhysicalityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.trace_error <= tol && self.hermiticity_error <= tol && self.min_eigenvalue >= -tol
    }
}

/// Builds `|ψ⟩⟨ψ|`, rejecting vectors whose squared norm deviates from one by
/// more than `1e-9`.
pub fn density_from_pure(psi: &StateVector4) -> Result<DensityMatrix4> {
    let norm_sqr = psi.norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm_sqr));
    }
    let a = psi.amplitudes();
    Ok(DensityMatrix4 {
        elements: Matrix4::from_fn(|i, j| a[i] * a[j].conj()),
    })
}

/// The singlet-like Bell state `(|10⟩ − |01⟩)/√2`.
pub fn bell_psi_minus() -> DensityMatrix4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    density_from_pure(&StateVector4::from_real([0.0, h, -h, 0.0]))
        .expect("Bell state is normalized")
}

/// Reports trace, Hermiticity and positivity diagnostics. Never fails; the
/// caller compares the report against its own tolerance.
pub fn check_physical(rho: &DensityMatrix4) -> PhysicalityReport {
    let m = rho.matrix();
    let trace_error = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let hermiticity_error = (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    PhysicalityReport {
        trace_error,
        hermiticity_error,
        min_eigenvalue: rho.eigenvalues()[0],
    }
}
