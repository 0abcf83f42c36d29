import numpy as np
import pytest
from numpy.testing import assert_allclose

from hssmem.errors import DomainError, UnsupportedParameterError
from hssmem.reservoirs import (ColoredDephasing, ColoredDepolarizing, LorentzianAmplitudeDamping,
                               SqueezedVacuumOhmic, cpow_principal, damped_oscillator, eta, g_ad, gamma_fn,
                               gamma_sv, gamma_sv_literal, gamma_sv_quad, lambda_depol, make_model)


def test_decoherence_starts_at_one(all_models):
    for model in all_models:
        assert float(model.decoherence(0.0)) == pytest.approx(1.0, abs=1e-15)


def test_damped_oscillator_continuous_across_critical_damping():
    s = np.linspace(0, 5, 11)
    ref = np.exp(-s) * (1 + s)
    assert_allclose(damped_oscillator(s, 0.0), ref, atol=1e-15)
    assert_allclose(damped_oscillator(s, 1e-12), ref, atol=1e-9)
    assert_allclose(damped_oscillator(s, -1e-12), ref, atol=1e-9)


def test_eta_first_root():
    # η changes sign once between 0.46 and 0.48 for ν = 1
    assert eta(0.46, 1.0) > 0 > eta(0.48, 1.0)
    assert abs(eta(0.4708, 1.0)) < 1e-3


def test_eta_markovian_regime_is_monotone():
    vals = eta(np.linspace(0, 20, 2001), 0.2)
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_decoherence_is_bounded(all_models):
    tau = np.linspace(0, 50, 5001)
    for model in all_models:
        assert np.all(np.abs(model.decoherence(tau)) <= 1 + 1e-12)


def test_lambda_depol_first_root():
    root = 2 * np.pi / (3 * np.sqrt(3))
    assert root == pytest.approx(1.2092, abs=1e-4)
    assert abs(lambda_depol(root, 0.5)) < 1e-14
    assert np.all(lambda_depol(np.linspace(0, root - 1e-3, 200), 0.5) > 0)
    assert lambda_depol(root + 1e-3, 0.5) < 0


def test_g_ad_first_root():
    w = np.sqrt(7.0)
    root = 2 * (np.pi - np.arctan(w)) / w
    assert root == pytest.approx(1.4606, abs=1e-4)
    assert abs(g_ad(root, 4.0)) < 1e-14
    assert np.all(g_ad(np.linspace(0, root - 1e-3, 200), 4.0) > 0)
    assert g_ad(root + 1e-3, 4.0) < 0


def test_depolarizing_and_dephasing_share_the_oscillator():
    tau = np.linspace(0, 10, 101)
    assert_allclose(lambda_depol(tau, 0.5), eta(tau, 0.5), atol=1e-15)


def test_g_ad_closed_form():
    tau = np.linspace(0, 10, 51)
    w = np.sqrt(2 * 4.0 - 1)
    ref = np.exp(-tau / 2) * (np.sin(w * tau / 2) / w + np.cos(w * tau / 2))
    assert_allclose(g_ad(tau, 4.0), ref, atol=1e-14)


def test_gamma_fn():
    assert gamma_fn(5.0) == pytest.approx(24.0)
    assert gamma_fn(0.5) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    with pytest.raises(UnsupportedParameterError):
        gamma_fn(0.0)


def test_cpow_principal_branch():
    assert cpow_principal(-1.0, 0.5) == pytest.approx(1j)
    assert cpow_principal(0.0, 2.0) == 0
    with pytest.raises(DomainError):
        cpow_principal(0.0, -1.0)


def test_gamma_sv_vanishes_at_zero(squeezed):
    assert gamma_sv(0.0, squeezed) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize('theta_sq', [0.0, 0.7, np.pi, 1.5 * np.pi])
def test_gamma_sv_matches_quadrature(theta_sq):
    model = SqueezedVacuumOhmic(alpha=0.5, s=4.0, r=0.5, theta_sq=theta_sq)
    for tau in (0.05, 0.2, 1.0, 2.5):
        assert gamma_sv(tau, model) == pytest.approx(gamma_sv_quad(tau, model), rel=1e-6, abs=1e-7)


@pytest.mark.parametrize('theta_sq', [0.0, np.pi])
def test_literal_exponent_agrees_for_real_phase_factor(theta_sq):
    model = SqueezedVacuumOhmic(theta_sq=theta_sq)
    tau = np.linspace(0, 3, 31)
    assert_allclose(gamma_sv_literal(tau, model, warn=False), gamma_sv(tau, model), atol=1e-12)


@pytest.mark.parametrize('cls, params', [(ColoredDephasing, {'nu': 0.0}),
                                         (SqueezedVacuumOhmic, {'s': 1.0}),
                                         (SqueezedVacuumOhmic, {'r': -0.1}),
                                         (ColoredDepolarizing, {'theta_dep': 1.0}),
                                         (LorentzianAmplitudeDamping, {'a': -1.0})])
def test_invalid_parameters(cls, params):
    with pytest.raises(UnsupportedParameterError):
        cls(**params)


def test_oscillatory_regimes():
    assert ColoredDephasing(nu=1.0).oscillatory and not ColoredDephasing(nu=0.2).oscillatory
    assert ColoredDepolarizing(theta_dep=0.5).oscillatory and not ColoredDepolarizing(theta_dep=0.2).oscillatory
    assert LorentzianAmplitudeDamping(a=4.0).oscillatory and not LorentzianAmplitudeDamping(a=0.3).oscillatory


def test_make_model_defaults_and_errors():
    model = make_model('squeezed', alpha=None, r=0.3)
    assert model.alpha == 0.5 and model.r == 0.3
    with pytest.raises(UnsupportedParameterError):
        make_model('telegraph')
