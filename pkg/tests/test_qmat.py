from itertools import product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hssmem.errors import ContractViolationError, DimensionLimitError
from hssmem.qmat import (PAULI, check_density_operator, conjugate_dense, conjugate_entry, conjugate_entry_list,
                         entry_list, frobenius_hss_norm, kron, pauli_action, pauli_masks, pauli_matrix)
from tests.conftest import random_hermitian


def test_first_qubit_is_least_significant():
    assert_allclose(pauli_matrix((1, 0)), np.kron(PAULI[0], PAULI[1]))
    assert_allclose(pauli_matrix((0, 3)), np.kron(PAULI[3], PAULI[0]))


def test_masks_of_mixed_string():
    assert pauli_masks((1, 2, 3, 0)) == (0b011, 0b110, 1)


def test_invalid_pauli_index():
    with pytest.raises(ContractViolationError):
        pauli_masks((0, 4))


@pytest.mark.parametrize('p', list(product(range(4), repeat=2)))
def test_pauli_action_matches_dense_matrix(p):
    mat = pauli_matrix(p)
    for j in range(4):
        jp, phase = pauli_action(p, j)
        col = np.zeros(4, dtype=complex)
        col[jp] = phase
        assert_allclose(mat[:, j], col, atol=1e-15)


def test_conjugate_entry_matches_dense():
    p = (2, 1, 3)
    mat = pauli_matrix(p)
    unit = np.zeros((8, 8), dtype=complex)
    unit[5, 2] = 0.3 - 0.7j
    jp, kp, vp = conjugate_entry(p, 5, 2, 0.3 - 0.7j)
    ref = mat @ unit @ mat
    assert abs(ref[jp, kp] - vp) < 1e-15
    assert np.count_nonzero(np.abs(ref) > 1e-15) == 1


def test_conjugate_entry_list_matches_dense_sum(rng):
    n = 3
    x = random_hermitian(rng, 2 ** n)
    tuples = list(product(range(4), repeat=n))
    weights = rng.random(len(tuples))
    masks = np.array([pauli_masks(t)[:2] for t in tuples], dtype=np.int64)

    ref = sum(w * pauli_matrix(t) @ x @ pauli_matrix(t) for t, w in zip(tuples, weights))
    rows, cols, vals = entry_list(x)
    out = conjugate_entry_list(masks[:, 0].copy(), masks[:, 1].copy(), weights, rows, cols, vals, 2 ** n)
    assert_allclose(out, ref, atol=1e-12)


def test_conjugate_dense_matches_matrix_product(rng):
    x = random_hermitian(rng, 16)
    for p in [(0, 0, 0, 0), (1, 2, 3, 0), (2, 2, 2, 2), (3, 0, 1, 2)]:
        xmask, zmask, _ = pauli_masks(p)
        mat = pauli_matrix(p)
        assert_allclose(conjugate_dense(xmask, zmask, x), mat @ x @ mat, atol=1e-13)


def test_entry_list_drops_small_entries():
    x = np.array([[1, 1e-14], [0, -2]], dtype=complex)
    rows, cols, vals = entry_list(x, atol=1e-12)
    assert rows.tolist() == [0, 1] and cols.tolist() == [0, 1]
    assert_allclose(vals, [1, -2])


def test_kron_dimension_limit():
    with pytest.raises(DimensionLimitError):
        kron(np.eye(64), np.eye(32))
    assert kron(np.eye(2), np.eye(4), max_dim=8).shape == (8, 8)


def test_frobenius_hss_norm():
    assert frobenius_hss_norm(np.diag([1.0, -1.0]).astype(complex)) == pytest.approx(1.0)
    with pytest.raises(ContractViolationError):
        frobenius_hss_norm(np.array([[0, 1], [0, 0]], dtype=complex))


def test_check_density_operator():
    check_density_operator(np.full((2, 2), 0.5, dtype=complex))
    with pytest.raises(ContractViolationError):
        check_density_operator(np.eye(2, dtype=complex))
    with pytest.raises(ContractViolationError):
        check_density_operator(np.diag([1.5, -0.5]).astype(complex))
