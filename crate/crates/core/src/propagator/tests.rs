use super::*;
use crate::state::{BasisState, StateVector4};
use nalgebra::Matrix4;
use proptest::prelude::*;

fn lorentzian(ratio: f64) -> BathModel {
    BathModel::lorentzian(ratio, 1.0).unwrap()
}

fn params(k: f64) -> SystemParams {
    SystemParams::new(1.0, k).unwrap()
}

fn analytic(bath: &BathModel) -> CorrelationProfile {
    CorrelationProfile::analytic(bath).unwrap()
}

fn random_state(re: &[f64], im: &[f64]) -> DensityMatrix4 {
    let a = Matrix4::from_fn(|i, j| Complex64::new(re[4 * i + j], im[4 * i + j]));
    let m = a * a.adjoint();
    let tr = m.trace();
    DensityMatrix4::from_matrix(m / tr)
}

#[test]
fn blocks_are_identity_at_zero() {
    for bath in [lorentzian(1.0), BathModel::ohmic(1.0, 1.0).unwrap()] {
        let (p, prof) = (params(0.7), analytic(&bath));
        assert_eq!(u4(&p, &prof, 0.0).unwrap(), Matrix4::identity());
        assert_eq!(u2_1(&p, &prof, 0.0).unwrap(), Matrix2::identity());
        assert_eq!(u2_2(&p, &prof, 0.0).unwrap(), Matrix2::identity());
        let bundle = PropagatorBundle::new(&p, &bath, 1.0).unwrap();
        assert_eq!(bundle.homogeneous(0.0).unwrap(), SMatrix::<Complex64, 16, 16>::identity());
    }
}

#[test]
fn no_exchange_means_no_population_mixing() {
    let bath = lorentzian(1.0);
    let m = u4(&params(0.0), &analytic(&bath), 1.0).unwrap();
    let decay = (-(-1.0f64).exp()).exp();
    assert_eq!(m[(1, 2)], 0.0);
    assert_eq!(m[(2, 1)], 0.0);
    assert!((m[(1, 1)] - decay).abs() < 1e-15);
    assert!((m[(2, 2)] - decay).abs() < 1e-15);
    // e^{−2G} with G = e^{−1}
    assert!((m[(0, 0)] - 0.479_141_708_788_015_3).abs() < 1e-14);
}

#[test]
fn u4_is_column_stochastic() {
    let bath = BathModel::ohmic(0.5, 1.0).unwrap();
    let prof = analytic(&bath);
    for k in [0.0, 0.3, 2.0] {
        for n in 0..=40 {
            let m = u4(&params(k), &prof, n as f64 * 0.25).unwrap();
            for j in 0..4 {
                assert!((m.column(j).sum() - 1.0).abs() < 1e-12);
            }
            assert!(m.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        }
    }
}

#[test]
fn u2_1_eigenvalues() {
    let bath = lorentzian(0.1);
    let prof = analytic(&bath);
    for &(k, t) in &[(0.5, 0.3), (1.0, 1.0), (2.0, 3.0)] {
        let m = u2_1(&params(k), &prof, t).unwrap();
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let g = prof.g(t);
        assert!((ev[0] - (-g - 2.0 * k * k * t * t).exp()).abs() < 1e-14);
        assert!((ev[1] - (-g).exp()).abs() < 1e-14);
    }
    // strong exchange: every entry tends to e^{−G}/2
    let m = u2_1(&params(100.0), &prof, 1.0).unwrap();
    let half = 0.5 * (-prof.g(1.0)).exp();
    assert!(m.iter().all(|&x| (x - half).abs() < 1e-15));
}

#[test]
fn u2_2_is_lower_triangular() {
    let vacuum = BathModel::vacuum();
    let m = u2_2(&params(1.0), &analytic(&vacuum), 1.0).unwrap();
    let half = Complex64::new((-0.5f64).exp(), 0.0);
    assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.0));
    assert!((m[(0, 0)] - half).norm() < 1e-15);
    assert!((m[(1, 1)] - half).norm() < 1e-15);
    assert!(m[(1, 0)].norm() < 1e-15);
    let m = u2_2(&params(1.0), &analytic(&lorentzian(1.0)), 2.0).unwrap();
    assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.0));
}

#[test]
fn evolve_is_identity_at_zero() {
    let rho0 = random_state(&[0.3; 16], &(0..16).map(|k| k as f64 * 0.05).collect::<Vec<_>>());
    let out = evolve(&rho0, &params(1.0), &lorentzian(1.0), 0.0).unwrap();
    assert!(out.max_abs_diff(&rho0) < 1e-12);
}

#[test]
fn singlet_closed_form() {
    let bath = lorentzian(1.0);
    let bell = evolve_bell(&bath, &params(1.0), 1.0).unwrap();
    assert!((bell.get(1, 1).re - 0.346_100_313_777_673_2).abs() < 1e-12);
    assert!((bell.get(2, 2).re - 0.346_100_313_777_673_2).abs() < 1e-12);
    assert!((bell.get(3, 3).re - 0.307_799_372_444_653_6).abs() < 1e-12);
    assert!(evolve_bell(&bath, &params(1.0), 0.0).unwrap().max_abs_diff(&bell_psi_minus()) < 1e-15);
    // fully decayed
    let gone = evolve_bell(&BathModel::markovian(1.0).unwrap(), &params(1.0), 80.0).unwrap();
    assert!(gone.max_abs_diff(&DensityMatrix4::basis_projector(BasisState::S00)) < 1e-15);
}

#[test]
fn singlet_paths_agree() {
    for bath in [lorentzian(0.1), lorentzian(10.0), BathModel::ohmic(1.0, 1.0).unwrap()] {
        let p = params(1.0);
        let bundle = PropagatorBundle::new(&p, &bath, 5.0).unwrap();
        for n in 0..100 {
            let t = 5.0 * n as f64 / 99.0;
            let a = bundle.evolve(&bell_psi_minus(), t).unwrap();
            let b = bell_from_profile(bundle.profile(), t).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-10, "t = {t}");
        }
    }
}

#[test]
fn singlet_without_exchange_leaks_only_through_g() {
    let bath = BathModel::ohmic(0.3, 1.0).unwrap();
    let bundle = PropagatorBundle::new(&params(0.0), &bath, 4.0).unwrap();
    for &t in &[0.5, 2.0, 4.0] {
        let rho = bundle.evolve(&bell_psi_minus(), t).unwrap();
        let sector = rho.get(1, 1).re + rho.get(2, 2).re;
        assert!((sector - (-bundle.profile().g(t)).exp()).abs() < 1e-14);
    }
}

#[test]
fn single_excitation_formulas() {
    let bath = lorentzian(1.0);
    let p = params(1.0);
    let bundle = PropagatorBundle::new(&p, &bath, 3.0).unwrap();
    let rho0 = DensityMatrix4::basis_projector(BasisState::S10);
    for &t in &[0.2, 1.0, 3.0] {
        let rho = bundle.evolve(&rho0, t).unwrap();
        let g = bundle.profile().g(t);
        let p01 = 0.5 * (-g).exp() * (1.0 - (-2.0 * t * t).exp());
        assert!((rho.get(2, 2).re - p01).abs() < 1e-14);
        let i1 = bundle.aux(t).unwrap().i1;
        assert!((rho.get(1, 2) - Complex64::new(0.0, i1)).norm() < 1e-14);
        assert_eq!(rho.get(0, 0).re, 0.0);
    }
}

#[test]
fn exchange_short_time_limit() {
    // ρ³³ = (1 − e^{−2K²t²})/2 against the closed-system sin²(Kt)
    let p = params(1.0);
    let bundle = PropagatorBundle::new(&p, &BathModel::vacuum(), 0.1).unwrap();
    let rho0 = DensityMatrix4::basis_projector(BasisState::S10);
    for n in 1..=10 {
        let t = 0.01 * n as f64;
        let rho = bundle.evolve(&rho0, t).unwrap();
        assert!((rho.get(2, 2).re - t.sin().powi(2)).abs() <= 10.0 * t.powi(4));
    }
}

#[test]
fn homogeneous_part_matches_when_source_vanishes() {
    // [H, ρ₀] = 0 for the singlet and for diagonal states with ρ²² = ρ³³
    let bath = lorentzian(1.0);
    let bundle = PropagatorBundle::new(&params(1.0), &bath, 2.0).unwrap();
    let mut m = Matrix4::zeros();
    for (k, w) in [0.1, 0.3, 0.3, 0.3].into_iter().enumerate() {
        m[(k, k)] = Complex64::new(w, 0.0);
    }
    let mixed = DensityMatrix4::from_matrix(m);
    for rho0 in [bell_psi_minus(), mixed] {
        for &t in &[0.5, 2.0] {
            let a = bundle.evolve(&rho0, t).unwrap();
            let b = bundle.evolve_homogeneous(&rho0, t).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }
}

#[test]
fn evolves_past_the_bundle_horizon() {
    let bath = lorentzian(1.0);
    let p = params(1.0);
    let rho0 = DensityMatrix4::basis_projector(BasisState::S10);
    let short = PropagatorBundle::new(&p, &bath, 1.0).unwrap();
    let direct = evolve(&rho0, &p, &bath, 1.7).unwrap();
    assert!(short.evolve(&rho0, 1.7).unwrap().max_abs_diff(&direct) < 1e-10);
}

#[test]
fn rejects_bad_input() {
    let bath = lorentzian(1.0);
    let p = params(1.0);
    let mut m = *bell_psi_minus().matrix();
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    let not_normalized = DensityMatrix4::from_matrix(m);
    assert!(matches!(evolve(&not_normalized, &p, &bath, 1.0), Err(Error::Unphysical(_))));
    assert!(evolve(&bell_psi_minus(), &p, &bath, -1.0).is_err());
    let pure = density_from(StateVector4::from_real([0.0, 1.0, 0.0, 0.0]));
    assert!(evolve(&pure, &p, &bath, f64::NAN).is_err());
}

fn density_from(psi: StateVector4) -> DensityMatrix4 {
    crate::state::density_from_pure(&psi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_and_hermiticity_are_exact(
        re in proptest::collection::vec(-1.0f64..1.0, 16),
        im in proptest::collection::vec(-1.0f64..1.0, 16),
        k in 0.0f64..2.0,
        ratio in 0.1f64..10.0,
        t in 0.0f64..5.0,
    ) {
        let rho0 = random_state(&re, &im);
        prop_assume!(check_physical(&rho0).passes(INPUT_TOLERANCE));
        let rho = evolve(&rho0, &params(k), &lorentzian(ratio), t).unwrap();
        let report = check_physical(&rho);
        prop_assert!(report.trace_error <= 1e-10);
        prop_assert!(report.hermiticity_error <= 1e-10);
    }

    /// Without exchange each qubit undergoes amplitude damping, a completely
    /// positive map.
    #[test]
    fn positive_without_exchange(
        re in proptest::collection::vec(-1.0f64..1.0, 16),
        im in proptest::collection::vec(-1.0f64..1.0, 16),
        ohmic in any::<bool>(),
        t in 0.0f64..5.0,
    ) {
        let rho0 = random_state(&re, &im);
        prop_assume!(check_physical(&rho0).passes(INPUT_TOLERANCE));
        let bath = if ohmic { BathModel::ohmic(1.0, 1.0).unwrap() } else { lorentzian(1.0) };
        let rho = evolve(&rho0, &params(0.0), &bath, t).unwrap();
        prop_assert!(check_physical(&rho).min_eigenvalue >= -1e-8);
    }
}
