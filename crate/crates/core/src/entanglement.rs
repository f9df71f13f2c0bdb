//! Observables: Wootters concurrence, populations and purity.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::baths::CorrelationProfile;
use crate::error::{check_time, Error, Result};
use crate::state::{BasisState, DensityMatrix4};

/// Off-X elements below this are treated as exact zeros.
const X_STATE_TOLERANCE: f64 = 1e-14;

/// One row of an observable time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSample {
    pub t: f64,
    pub concurrence: f64,
    /// In basis order `|11⟩, |10⟩, |01⟩, |00⟩`.
    pub populations: [f64; 4],
    pub purity: f64,
}

impl ObservableSample {
    pub fn of(t: f64, rho: &DensityMatrix4) -> Self {
        Self {
            t,
            concurrence: concurrence(rho),
            populations: BasisState::ALL.map(|b| rho.get(b.index(), b.index()).re),
            purity: purity(rho),
        }
    }
}

/// `σʸ⊗σʸ`. Independent of the basis ordering up to an overall sign.
fn spin_flip() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

fn hermitian_part(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn is_x_state(rho: &DensityMatrix4) -> bool {
    [(0, 1), (0, 2), (1, 3), (2, 3)]
        .iter()
        .all(|&(i, j)| rho.get(i, j).norm() <= X_STATE_TOLERANCE && rho.get(j, i).norm() <= X_STATE_TOLERANCE)
}

/// Closed form for states whose only coherences are `ρ²³` and `ρ¹⁴`:
/// `C = 2·max(0, |ρ²³| − √(ρ¹¹ρ⁴⁴), |ρ¹⁴| − √(ρ²²ρ³³))`.
///
/// Also meaningful on slightly non-positive X-shaped matrices, where the
/// eigenvalue route is not.
pub fn x_state_concurrence(rho: &DensityMatrix4) -> f64 {
    let d = |k: usize| rho.get(k, k).re.max(0.0);
    let a = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    let b = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    (2.0 * a.max(b).max(0.0)).min(1.0)
}

/// Decreasing square roots of the eigenvalues of `ρ ρ̃`, with
/// `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
///
/// Computed as the singular values of `τ = Wᵀ (σʸ⊗σʸ) W` where `ρ = W W†`
/// comes from the eigen-decomposition. This gives the same numbers without
/// taking square roots of near-zero eigenvalues, which would amplify rounding
/// noise on rank-deficient states. Negative eigenvalues of `ρ` are dropped.
pub fn wootters_lambdas(rho: &DensityMatrix4) -> [f64; 4] {
    let eig = SymmetricEigen::new(hermitian_part(rho.matrix()));
    let weights = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let w = eig.eigenvectors * Matrix4::from_diagonal(&weights);
    let tau = w.transpose() * spin_flip() * w;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    [lambdas[0], lambdas[1], lambdas[2], lambdas[3]]
}

/// Wootters concurrence in `[0, 1]`.
///
/// X-shaped states use the closed form, everything else the general
/// eigenvalue route of [`wootters_lambdas`].
pub fn concurrence(rho: &DensityMatrix4) -> f64 {
    if is_x_state(rho) {
        return x_state_concurrence(rho);
    }
    wootters_concurrence(rho)
}

/// The general eigenvalue route, without the X-state shortcut.
pub fn wootters_concurrence(rho: &DensityMatrix4) -> f64 {
    let l = wootters_lambdas(rho);
    (l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0)
}

/// Concurrence of the evolved singlet, `e^{−G(t)}`.
pub fn concurrence_bell(profile: &CorrelationProfile, t: f64) -> f64 {
    (-profile.g(t.max(0.0))).exp()
}

/// Fallible variant of [`concurrence_bell`] that rejects negative or NaN times.
pub fn try_concurrence_bell(profile: &CorrelationProfile, t: f64) -> Result<f64> {
    check_time(t)?;
    let c = concurrence_bell(profile, t);
    if c.is_finite() {
        Ok(c)
    } else {
        Err(Error::NonFinite("G(t)"))
    }
}

/// Occupation probability of basis state `index` (1-based, `1 = |11⟩ … 4 = |00⟩`).
pub fn population(rho: &DensityMatrix4, index: usize) -> Result<f64> {
    let b = BasisState::from_label_index(index)?;
    Ok(rho.get(b.index(), b.index()).re)
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix();
    (m * m).trace().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baths::BathModel;
    use crate::state::{bell_psi_minus, density_from_pure, StateVector4};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Singlet mixed with the ground state: `p|Ψ⁻⟩⟨Ψ⁻| + (1−p)|00⟩⟨00|`.
    fn decayed_singlet(p: f64) -> DensityMatrix4 {
        let mut m = Matrix4::zeros();
        m[(1, 1)] = c(p / 2.0, 0.0);
        m[(2, 2)] = c(p / 2.0, 0.0);
        m[(1, 2)] = c(-p / 2.0, 0.0);
        m[(2, 1)] = c(-p / 2.0, 0.0);
        m[(3, 3)] = c(1.0 - p, 0.0);
        DensityMatrix4::from_matrix(m)
    }

    #[test]
    fn singlet_is_maximally_entangled() {
        let rho = bell_psi_minus();
        assert!((concurrence(&rho) - 1.0).abs() < 1e-12);
        assert!((wootters_concurrence(&rho) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let rho = DensityMatrix4::maximally_mixed();
        assert_eq!(concurrence(&rho), 0.0);
        assert!(wootters_concurrence(&rho).abs() < 1e-12);
        assert!((purity(&rho) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_states_have_zero_concurrence() {
        for b in BasisState::ALL {
            let rho = DensityMatrix4::basis_projector(b);
            assert!(wootters_concurrence(&rho).abs() < 1e-7);
            assert_eq!(purity(&rho), 1.0);
        }
        // |+⟩|+⟩ is not X-shaped
        let plus = StateVector4::from_real([0.5, 0.5, 0.5, 0.5]);
        let rho = density_from_pure(&plus).unwrap();
        assert!(concurrence(&rho) < 1e-7);
    }

    #[test]
    fn decayed_singlet_concurrence_is_its_weight() {
        for &p in &[0.0, 0.1, 0.5, 0.9, 1.0] {
            let rho = decayed_singlet(p);
            assert!((concurrence(&rho) - p).abs() < 1e-12);
            assert!((wootters_concurrence(&rho) - p).abs() < 1e-10);
        }
        assert!((purity(&decayed_singlet(0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn imaginary_exchange_coherence() {
        // ρ¹¹ = 0, ρ²³ = iq → C = 2|q|
        let q = 0.2;
        let mut m = Matrix4::zeros();
        m[(1, 1)] = c(0.4, 0.0);
        m[(2, 2)] = c(0.3, 0.0);
        m[(3, 3)] = c(0.3, 0.0);
        m[(1, 2)] = c(0.0, q);
        m[(2, 1)] = c(0.0, -q);
        let rho = DensityMatrix4::from_matrix(m);
        assert!((concurrence(&rho) - 2.0 * q).abs() < 1e-12);
        assert!((wootters_concurrence(&rho) - 2.0 * q).abs() < 1e-9);
    }

    #[test]
    fn bell_closed_form_values() {
        let lor = CorrelationProfile::analytic(&BathModel::lorentzian(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(concurrence_bell(&lor, 0.0), 1.0);
        assert!((concurrence_bell(&lor, 1.0) - 0.692_200_627_555_346_4).abs() < 1e-12);
        let fast = CorrelationProfile::analytic(&BathModel::lorentzian(10.0, 1.0).unwrap()).unwrap();
        assert!((concurrence_bell(&fast, 1.0) - 0.406_567_813_921_389_5).abs() < 1e-12);
        assert!(try_concurrence_bell(&lor, -1.0).is_err());
    }

    #[test]
    fn populations_index_from_one() {
        let rho = bell_psi_minus();
        assert!((population(&rho, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((population(&rho, 3).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(population(&rho, 1).unwrap(), 0.0);
        assert!(population(&rho, 0).is_err());
        assert!(population(&rho, 5).is_err());
        let s = ObservableSample::of(0.0, &rho);
        assert!((s.populations.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((s.purity - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn closed_form_matches_wootters_on_decay_family(g in 0.0f64..30.0) {
            let p = (-g).exp();
            let rho = decayed_singlet(p);
            prop_assert!((wootters_concurrence(&rho) - p).abs() <= 1e-10);
        }

        #[test]
        fn x_formula_matches_wootters(
            a in 0.0f64..1.0, b in 0.0f64..1.0, cc in 0.0f64..1.0, d in 0.0f64..1.0,
            s in 0.0f64..1.0, phase in 0.0f64..6.3, u in 0.0f64..1.0, psi in 0.0f64..6.3,
        ) {
            let total = a + b + cc + d;
            prop_assume!(total > 1e-3);
            let p = [a / total, b / total, cc / total, d / total];
            // coherences scaled inside the positivity bounds
            let z23 = Complex64::from_polar(s * (p[1] * p[2]).sqrt(), phase);
            let z14 = Complex64::from_polar(u * (p[0] * p[3]).sqrt(), psi);
            let mut m = Matrix4::from_diagonal(&nalgebra::Vector4::from(p.map(|x| c(x, 0.0))));
            m[(1, 2)] = z23;
            m[(2, 1)] = z23.conj();
            m[(0, 3)] = z14;
            m[(3, 0)] = z14.conj();
            let rho = DensityMatrix4::from_matrix(m);
            prop_assert!((x_state_concurrence(&rho) - wootters_concurrence(&rho)).abs() < 1e-7);
        }

        #[test]
        fn concurrence_of_pure_states(re in proptest::array::uniform4(-1.0f64..1.0), im in proptest::array::uniform4(-1.0f64..1.0)) {
            let amps = [0, 1, 2, 3].map(|k| c(re[k], im[k]));
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            prop_assume!(norm > 1e-3);
            let psi = StateVector4::new(amps).normalized().unwrap();
            let rho = density_from_pure(&psi).unwrap();
            // C(|ψ⟩) = 2|a d − b c|
            let a = psi.amplitudes();
            let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
            prop_assert!((concurrence(&rho) - expected).abs() < 1e-6);
            prop_assert!((purity(&rho) - 1.0).abs() < 1e-12);
        }
    }
}
