import numpy as np
import pytest
from numpy.testing import assert_allclose

from hssmem.bases import (basis_catalog, basis_rotation, bell_basis, expand_basis_ids, haar_unitary,
                          hadamard_basis, local_basis)
from hssmem.errors import UnsupportedParameterError


def _is_unitary(rot):
    return np.allclose(rot.conj().T @ rot, np.eye(rot.shape[0]), atol=1e-12)


@pytest.mark.parametrize('basis_id, n', [('standard', 3), ('bell', 2), ('hadamard', 2), ('local', 2),
                                         ('local', 5), ('random-3', 3)])
def test_rotations_are_unitary(basis_id, n):
    assert _is_unitary(basis_rotation(basis_id, n, seed=7))


def test_bell_vectors():
    sq2 = 1 / np.sqrt(2)
    rot = bell_basis()
    assert_allclose(rot[:, 0], [sq2, 0, 0, sq2])
    assert_allclose(rot[:, 3], [0, sq2, -sq2, 0])


def test_hadamard_vectors():
    sq2 = 1 / np.sqrt(2)
    rot = hadamard_basis()
    assert_allclose(rot[:, 0], [sq2, 0, sq2, 0])
    assert_allclose(rot[:, 3], [0, sq2, 0, -sq2])


@pytest.mark.parametrize('n', [2, 3, 4, 6])
def test_local_basis_sums_to_single_excitation(n):
    dim = 2 ** n
    rot = local_basis(n)
    exc = np.zeros(dim)
    exc[[2 ** q for q in range(n)]] = 1 / np.sqrt(n)
    assert_allclose(rot[:, 0], np.eye(dim)[0])
    assert_allclose(rot[:, 1:].sum(axis=1), np.sqrt(dim - 1) * exc, atol=1e-12)


def test_haar_members_are_seeded_and_independent():
    assert_allclose(haar_unitary(8, 3, 2), haar_unitary(8, 3, 2))
    assert not np.allclose(haar_unitary(8, 3, 2), haar_unitary(8, 3, 1))
    assert not np.allclose(haar_unitary(8, 3, 2), haar_unitary(8, 4, 2))


def test_catalog_extension_keeps_existing_members():
    small = basis_catalog(2, ('random',), n_random=2, seed=11)
    large = basis_catalog(2, ('random',), n_random=5, seed=11)
    for (b_s, rot_s), (b_l, rot_l) in zip(small, large):
        assert b_s == b_l
        assert_allclose(rot_s, rot_l)


def test_catalog_order():
    ids = expand_basis_ids(('random', 'local', 'bell', 'standard', 'hadamard'), 2, 2)
    assert ids == ['standard', 'bell', 'hadamard', 'local', 'random-0', 'random-1']
    assert expand_basis_ids(('standard', 'bell', 'local'), 3, 0) == ['standard', 'local']


def test_two_qubit_bases_rejected_for_more_qubits():
    with pytest.raises(UnsupportedParameterError):
        basis_rotation('bell', 3)
    with pytest.raises(UnsupportedParameterError):
        basis_rotation('fourier', 2)
