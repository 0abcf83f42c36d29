from itertools import product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hssmem.channels import (CorrelatedChannelSpec, apply_channel, apply_corr_ad, apply_corr_ad_batch,
                             apply_pauli_channel, choi_matrix, clamp_probs, joint_prob_table, joint_probs,
                             pauli_prob_table, single_use_probs, unitality_gap)
from hssmem.errors import ContractViolationError, DimensionLimitError, DomainError, UnsupportedParameterError
from hssmem.oracles import dense_reference_apply
from tests.conftest import random_hermitian


def test_joint_probs_two_uses():
    p = np.array([0.4, 0.3, 0.2, 0.1])
    mu = 0.3
    dist = joint_probs(p, mu, 2).as_dict()
    for i, j in product(range(4), repeat=2):
        assert dist[(i, j)] == pytest.approx((1 - mu) * p[i] * p[j] + mu * p[i] * (i == j))


@pytest.mark.parametrize('mu', [0.0, 0.25, 1.0])
def test_joint_probs_are_normalized_and_marginal_stationary(mu):
    p = np.array([0.55, 0.2, 0.15, 0.1])
    dist = joint_probs(p, mu, 4)
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-14)
    for q in range(4):
        marg = [dist.probs[dist.tuples[:, q] == i].sum() for i in range(4)]
        assert_allclose(marg, p, atol=1e-14)


def test_full_correlation_repeats_the_operation():
    dist = joint_probs(np.array([0.5, 0.0, 0.0, 0.5]), 1.0, 3)
    assert sorted(dist.as_dict()) == [(0, 0, 0), (3, 3, 3)]


def test_zero_probabilities_are_pruned():
    tuples, weights = joint_prob_table(np.array([[0.75, 0.0, 0.0, 0.25]]), 0.5, 3)
    assert len(tuples) == 8
    assert set(np.unique(tuples)) == {0, 3}
    assert weights.shape == (1, 8)


def test_mu_outside_unit_interval():
    with pytest.raises(DomainError):
        joint_probs(np.full(4, 0.25), 1.2, 2)
    with pytest.raises(DomainError):
        CorrelatedChannelSpec(model=None, n=2, mu=-0.1)


def test_probability_clamping():
    assert_allclose(clamp_probs(np.array([1.0, -1e-13, 0.0, 0.0])), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(ContractViolationError):
        clamp_probs(np.array([1.0, -1e-6, 0.0, 0.0]))


def test_single_use_probabilities(dephasing, depolarizing, amplitude_damping):
    d = float(dephasing.decoherence(0.3))
    assert_allclose(pauli_prob_table(dephasing, 0.3), [(1 + d) / 2, 0, 0, (1 - d) / 2])
    lam = float(depolarizing.decoherence(0.3))
    assert_allclose(pauli_prob_table(depolarizing, 0.3), [(1 + 3 * lam) / 4] + 3 * [(1 - lam) / 4])
    noise = single_use_probs(amplitude_damping, 0.3)
    assert noise.kind == 'ad' and noise.probs is None
    with pytest.raises(DomainError):
        single_use_probs(dephasing, -1.0)
    with pytest.raises(UnsupportedParameterError):
        pauli_prob_table(amplitude_damping, 0.3)


def test_spec_limits(dephasing, amplitude_damping):
    with pytest.raises(UnsupportedParameterError):
        CorrelatedChannelSpec(model=dephasing, n=11, mu=0.5)
    with pytest.raises(UnsupportedParameterError):
        CorrelatedChannelSpec(model=amplitude_damping, n=3, mu=0.5)


@pytest.mark.parametrize('n', [2, 3, 4])
def test_fast_path_matches_dense_kraus_sum(unital_models, rng, n):
    for model, mu in product(unital_models, (0.0, 0.4, 1.0)):
        spec = CorrelatedChannelSpec(model=model, n=n, mu=mu)
        for tau in np.linspace(0.1, 3.0, 4):
            x = random_hermitian(rng, 2 ** n)
            fast = apply_channel(spec, tau, x)
            assert_allclose(fast, dense_reference_apply(spec, tau, x), atol=1e-12)
            assert_allclose(fast, apply_channel(spec, tau, x, path='dense'), atol=1e-12)


def test_unknown_path():
    dist = joint_probs(np.full(4, 0.25), 0.5, 2)
    with pytest.raises(UnsupportedParameterError):
        apply_pauli_channel(dist, np.eye(4), path='sparse')


def test_amplitude_damping_matches_dense_kraus_sum(amplitude_damping, rng):
    for mu in (0.0, 0.5, 1.0):
        spec = CorrelatedChannelSpec(model=amplitude_damping, n=2, mu=mu)
        for tau in (0.0, 0.4, 1.7, 6.0):
            x = random_hermitian(rng, 4)
            assert_allclose(apply_channel(spec, tau, x), dense_reference_apply(spec, tau, x), atol=1e-12)
            assert_allclose(apply_corr_ad(tau, amplitude_damping.a, mu, x), apply_channel(spec, tau, x), atol=1e-14)


def test_amplitude_damping_batch_is_pointwise(rng):
    g = np.array([1.0, 0.5, -0.3, 0.0])
    x = random_hermitian(rng, 4)
    batch = apply_corr_ad_batch(g, 0.6, x)
    for k in range(g.size):
        assert_allclose(batch[k], apply_corr_ad_batch(g[k:k + 1], 0.6, x)[0], atol=1e-14)


@pytest.mark.parametrize('mu', [0.0, 0.5, 1.0])
def test_channels_are_cptp(all_models, mu):
    for model in all_models:
        spec = CorrelatedChannelSpec(model=model, n=2, mu=mu)
        for tau in np.linspace(0, 5, 20):
            choi = choi_matrix(spec, tau)
            assert np.min(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))) >= -1e-9
            assert_allclose(np.einsum('jaka->jk', choi.reshape(4, 4, 4, 4)), np.eye(4), atol=1e-12)


def test_unitality(unital_models):
    for model in unital_models:
        assert unitality_gap(CorrelatedChannelSpec(model=model, n=3, mu=0.3), 0.8) < 1e-12
    out = apply_corr_ad_batch(np.array([0.5]), 0.5, np.eye(4))[0]
    assert np.max(np.abs(out - np.eye(4))) > 1e-3


def test_choi_dimension_limit(dephasing):
    with pytest.raises(DimensionLimitError):
        choi_matrix(CorrelatedChannelSpec(model=dephasing, n=4, mu=0.5), 0.5)
