import numpy as np
import pytest
from numpy.testing import assert_allclose

from hssmem.bases import basis_catalog, basis_rotation
from hssmem.channels import CorrelatedChannelSpec, apply_channel, pauli_prob_table
from hssmem.errors import ContractViolationError
from hssmem.hss import (CurveEvaluator, HssCurve, PhaseFamily, chi_segments, delta_range, hss_curve, hss_value,
                        initial_state, nm_measure, phase_derivative, positive_increments, standard_family)
from hssmem.oracles import ClosedFormId, hss_closed_form
from hssmem.qmat import check_density_operator, frobenius_hss_norm
from hssmem.reservoirs import ColoredDephasing
from hssmem.utils import make_phi_grid, make_tau_grid


def test_initial_state_is_pure():
    fam = PhaseFamily(n=3, basis_rotation=basis_rotation('random-0', 3), phi=0.4)
    rho = initial_state(fam)
    check_density_operator(rho)
    assert np.trace(rho @ rho).real == pytest.approx(1.0)


def test_phase_derivative_matches_finite_difference():
    rot = basis_rotation('random-1', 2, seed=5)
    eps = 1e-6
    plus = initial_state(PhaseFamily(n=2, basis_rotation=rot, phi=1.1 + eps))
    minus = initial_state(PhaseFamily(n=2, basis_rotation=rot, phi=1.1 - eps))
    x = phase_derivative(PhaseFamily(n=2, basis_rotation=rot, phi=1.1))
    assert_allclose(x, (plus - minus) / (2 * eps), atol=1e-9)


def test_family_rejects_non_unitary_rotation():
    with pytest.raises(ContractViolationError):
        PhaseFamily(n=2, basis_rotation=2 * np.eye(4), phi=0.0)
    with pytest.raises(ContractViolationError):
        PhaseFamily(n=2, basis_rotation=np.eye(8), phi=0.0)


def test_universal_initial_value(all_models):
    for model in all_models:
        n_lst = (2,) if model.tag == 'ad' else (2, 3, 4)
        for n in n_lst:
            for basis_id, rot in basis_catalog(n, n_random=2, seed=3):
                fam = PhaseFamily(n=n, basis_rotation=rot, phi=0.9, basis_id=basis_id)
                for mu in (0.0, 0.6, 1.0):
                    hss = hss_value(CorrelatedChannelSpec(model=model, n=n, mu=mu), fam, 0.0)
                    assert hss == pytest.approx(np.sqrt(2 ** n - 1) / 2 ** n, abs=1e-10)


def test_two_qubit_initial_value():
    spec = CorrelatedChannelSpec(model=ColoredDephasing(), n=2, mu=0.5)
    assert hss_value(spec, standard_family(2), 0.0) == pytest.approx(0.4330127, abs=1e-7)


@pytest.mark.parametrize('n', range(2, 9))
def test_memoryless_dephasing_multiqubit_form(dephasing, n):
    spec = CorrelatedChannelSpec(model=dephasing, n=n, mu=0.0)
    for tau in (0.3, 1.0, 2.5):
        eta_t = float(dephasing.decoherence(tau))
        ref = np.sqrt((1 + eta_t ** 2) ** n - 1) / 2 ** n
        assert hss_value(spec, standard_family(n, np.pi), tau) == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize('model_fixture', ['dephasing', 'squeezed'])
def test_local_basis_hss_is_correlation_free(request, model_fixture):
    model = request.getfixturevalue(model_fixture)
    n = 3
    fam = PhaseFamily(n=n, basis_rotation=basis_rotation('local', n), phi=0.3, basis_id='local')
    for tau in (0.2, 0.9, 2.0):
        ref = np.sqrt(2 ** n - 1) / 2 ** n * abs(float(model.decoherence(tau)))
        for mu in (0.0, 0.5, 1.0):
            assert hss_value(CorrelatedChannelSpec(model=model, n=n, mu=mu), fam, tau) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize('model_fixture', ['dephasing', 'squeezed'])
def test_dephasing_type_hss_grows_with_correlation(request, model_fixture):
    model = request.getfixturevalue(model_fixture)
    tau_grid = make_tau_grid(3.0, 0.01)
    curves = [CurveEvaluator(CorrelatedChannelSpec(model=model, n=2, mu=mu), tau_grid).curve(standard_family(2, np.pi))
              for mu in (0.0, 0.3, 0.7, 1.0)]
    for lo, hi in zip(curves[:-1], curves[1:]):
        assert np.all(lo.values <= hi.values + 1e-15)


def test_vectorized_curve_matches_pointwise(all_models):
    tau_grid = np.linspace(0, 4, 9)
    for model in all_models:
        n = 2 if model.tag == 'ad' else 3
        spec = CorrelatedChannelSpec(model=model, n=n, mu=0.35)
        fam = PhaseFamily(n=n, basis_rotation=basis_rotation('random-0', n, seed=2), phi=2.0)
        curve = CurveEvaluator(spec, tau_grid, chunk_bytes=4096).curve(fam)
        assert_allclose(curve.values, [hss_value(spec, fam, t) for t in tau_grid], atol=1e-12)


def test_curve_grid_must_ascend(dephasing):
    spec = CorrelatedChannelSpec(model=dephasing, n=2, mu=0.5)
    with pytest.raises(ContractViolationError):
        hss_curve(spec, standard_family(2), [0.0, 0.2, 0.1])
    with pytest.raises(ContractViolationError):
        hss_curve(spec, standard_family(2), [])


def test_chi_segments_and_increments():
    curve = HssCurve(tau_grid=np.arange(8.0), values=np.array([3, 2, 2.5, 3, 3, 1, 2, 2 + 1e-15]))
    assert chi_segments(curve) == [(1.0, 3.0), (5.0, 6.0)]
    assert positive_increments(curve.values) == pytest.approx(2.0)


def test_chi_intervals_do_not_depend_on_correlation(unital_models):
    for model in unital_models:
        step = 0.001 if model.tag == 'squeezed' else 0.01
        tau_grid = make_tau_grid(3.0 if model.tag == 'squeezed' else 10.0, step)
        segs = [chi_segments(hss_curve(CorrelatedChannelSpec(model=model, n=2, mu=mu), standard_family(2, np.pi),
                                       tau_grid)) for mu in (0.0, 0.4, 0.8, 1.0)]
        for other in segs[1:]:
            assert len(other) == len(segs[0])
            assert_allclose(np.array(other), np.array(segs[0]), atol=step + 1e-9)


def test_first_chi_boundary_is_root_of_eta(dephasing):
    curve = hss_curve(CorrelatedChannelSpec(model=dephasing, n=2, mu=0.4), standard_family(2, np.pi),
                      make_tau_grid(5.0, 0.01))
    assert chi_segments(curve)[0][0] == pytest.approx(0.4708, abs=0.01)


def test_markovian_dephasing_has_null_measure():
    catalog = basis_catalog(2, n_random=3, seed=0)
    tau_grid = make_tau_grid(10.0, 0.01)
    for mu in (0.0, 0.5, 1.0):
        nm = nm_measure(CorrelatedChannelSpec(model=ColoredDephasing(nu=0.2), n=2, mu=mu), catalog,
                        make_phi_grid(4), tau_grid)
        assert nm.value == 0.0


def test_measure_is_deterministic_across_threads(depolarizing):
    catalog = basis_catalog(2, n_random=4, seed=9)
    spec = CorrelatedChannelSpec(model=depolarizing, n=2, mu=0.5)
    tau_grid = make_tau_grid(8.0, 0.02)
    ref = nm_measure(spec, catalog, make_phi_grid(6), tau_grid, jobs=1)
    for jobs in (2, 4):
        assert nm_measure(spec, catalog, make_phi_grid(6), tau_grid, jobs=jobs) == ref


def test_measure_requires_families(dephasing):
    with pytest.raises(ContractViolationError):
        nm_measure(CorrelatedChannelSpec(model=dephasing, n=2, mu=0.5), [], [0.0], [0.0, 1.0])


@pytest.mark.slow
@pytest.mark.parametrize('model_fixture', ['dephasing', 'squeezed'])
def test_measure_is_flat_in_correlation(request, model_fixture):
    model = request.getfixturevalue(model_fixture)
    tau_grid = make_tau_grid(3.0, 0.001) if model.tag == 'squeezed' else make_tau_grid(30.0, 0.01)
    catalog = basis_catalog(2, n_random=8, seed=0)
    nm = [nm_measure(CorrelatedChannelSpec(model=model, n=2, mu=mu), catalog, make_phi_grid(8), tau_grid, jobs=2).value
          for mu in (0.0, 0.5, 1.0)]
    assert np.ptp(nm) < 1e-4


def test_delta_two_qubit_dephasing(dephasing):
    cid = ClosedFormId('dephasing', 'standard')
    ref = hss_closed_form(cid, dephasing, 1.0, 1.62) - hss_closed_form(cid, dephasing, 0.0, 1.62)
    delta = delta_range(dephasing, 2, 1.62, standard_family(2, np.pi))
    assert delta == pytest.approx(ref, abs=1e-10)
    assert delta == pytest.approx(0.18908, abs=1e-5)


def test_delta_decreases_with_qubits(dephasing):
    delta = [delta_range(dephasing, n, 1.62, standard_family(n, np.pi)) for n in range(2, 9)]
    assert np.all(np.diff(delta) < 0)


def test_delta_vanishes_at_initial_time(unital_models):
    for model in unital_models:
        for n in (2, 4):
            assert delta_range(model, n, 0.0, standard_family(n, np.pi)) == pytest.approx(0.0, abs=1e-15)


def test_pointwise_fallback_matches_stacked(depolarizing):
    tau_grid = np.linspace(0, 3, 7)
    spec = CorrelatedChannelSpec(model=depolarizing, n=3, mu=0.6)
    fam = PhaseFamily(n=3, basis_rotation=basis_rotation('random-0', 3, seed=8), phi=0.4)
    stacked = CurveEvaluator(spec, tau_grid)
    pointwise = CurveEvaluator(spec, tau_grid, stack_bytes=0)
    assert stacked.stacked and not pointwise.stacked
    assert_allclose(pointwise.curve(fam).values, stacked.curve(fam).values, atol=1e-13)
    assert_allclose(pointwise.curve(fam).values, [hss_value(spec, fam, t) for t in tau_grid], atol=1e-12)


def test_single_use_table_is_shared_across_correlations(squeezed):
    tau_grid = make_tau_grid(1.0, 0.05)
    probs = pauli_prob_table(squeezed, tau_grid)
    fam = PhaseFamily(n=3, basis_rotation=basis_rotation('local', 3), phi=1.0)
    for mu in (0.0, 0.5, 1.0):
        spec = CorrelatedChannelSpec(model=squeezed, n=3, mu=mu)
        assert_allclose(CurveEvaluator(spec, tau_grid, probs=probs).curve(fam).values,
                        CurveEvaluator(spec, tau_grid).curve(fam).values, atol=1e-15)
    with pytest.raises(ContractViolationError):
        CurveEvaluator(CorrelatedChannelSpec(model=squeezed, n=2, mu=0.5), tau_grid, probs=probs[:-1])


def test_hss_is_consistent_under_basis_rotation(all_models):
    x_std = phase_derivative(standard_family(2, 0.9))
    for model in all_models:
        for seed in (1, 2):
            rot = basis_rotation('random-0', 2, seed=seed)
            fam = PhaseFamily(n=2, basis_rotation=rot, phi=0.9)
            for mu in (0.0, 0.5, 1.0):
                spec = CorrelatedChannelSpec(model=model, n=2, mu=mu)
                for tau in (0.4, 1.3):
                    rotated = rot.conj().T @ apply_channel(spec, tau, rot @ x_std @ rot.conj().T) @ rot
                    assert hss_value(spec, fam, tau) == pytest.approx(frobenius_hss_norm(rotated), abs=1e-12)


@pytest.mark.parametrize('model_fixture, tau_star, phi', [('squeezed', 0.2, np.pi),
                                                          ('depolarizing', 1.6, np.pi / 2)])
def test_delta_decreases_with_qubits_for_every_unital_model(request, model_fixture, tau_star, phi):
    model = request.getfixturevalue(model_fixture)
    delta = [delta_range(model, n, tau_star, standard_family(n, phi)) for n in range(2, 9)]
    assert np.all(np.diff(delta) < 0)


@pytest.mark.slow
def test_amplitude_damping_measure_has_interior_minimum(amplitude_damping):
    catalog = basis_catalog(2, n_random=4, seed=0)
    tau_grid = make_tau_grid(10.0, 0.02)
    mu_grid = np.linspace(0, 1, 11)
    nm = [nm_measure(CorrelatedChannelSpec(model=amplitude_damping, n=2, mu=mu), catalog, make_phi_grid(8), tau_grid,
                     jobs=2).value for mu in mu_grid]
    assert 0 < int(np.argmin(nm)) < mu_grid.size - 1
