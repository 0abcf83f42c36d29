"""
Orthonormal bases spanning the phase-encoded initial states.

The columns of every rotation U are the basis vectors |ψ_1⟩, ..., |ψ_N⟩;
|ψ_1⟩ carries the phase factor exp(iφ).
"""
import numpy as np

from hssmem.errors import UnsupportedParameterError

# basis identifiers accepted in sweep configurations
BASIS_IDS = ('standard', 'bell', 'hadamard', 'local', 'random')

# basis identifiers defined only for two qubits
TWO_QUBIT_BASES = ('bell', 'hadamard')

_SQ2 = 1 / np.sqrt(2)


def standard_basis(n):
    """Computational basis of n qubits."""
    return np.eye(2 ** n, dtype=np.complex128)


def bell_basis():
    """
    Two-qubit Bell basis (ψ+, ψ-, φ+, φ-).

    Returns
    -------
    rot: numpy.ndarray (shape=(4, 4), dtype=complex)
        basis rotation
    """
    return _SQ2 * np.array([[1, 1, 0, 0],
                            [0, 0, 1, 1],
                            [0, 0, 1, -1],
                            [1, -1, 0, 0]], dtype=np.complex128)


def hadamard_basis():
    """
    Two-qubit basis (|00⟩ + |10⟩, |01⟩ + |11⟩, |00⟩ - |10⟩, |01⟩ - |11⟩)/√2.

    Returns
    -------
    rot: numpy.ndarray (shape=(4, 4), dtype=complex)
        basis rotation
    """
    return _SQ2 * np.array([[1, 0, 1, 0],
                            [0, 1, 0, 1],
                            [1, 0, -1, 0],
                            [0, 1, 0, -1]], dtype=np.complex128)


def local_basis(n):
    """
    Basis whose phase derivative carries single-qubit coherences only.

    |ψ_1⟩ = |0...0⟩, and the remaining vectors are a real orthonormal
    completion summing to √(N-1) times the normalized single-excitation
    vector Σ_q |2^q⟩ / √n (Householder reflection of the uniform vector).

    Parameters
    ----------
    n: int
        number of qubits

    Returns
    -------
    rot: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        basis rotation
    """
    dim = 2 ** n
    sub = dim - 1

    # uniform and single-excitation unit vectors on the complement of |0...0⟩
    unif = np.full(sub, 1 / np.sqrt(sub))
    exc = np.zeros(sub)
    exc[[2 ** q - 1 for q in range(n)]] = 1 / np.sqrt(n)

    refl = np.eye(sub)
    u = unif - exc
    if np.linalg.norm(u) > 0:
        refl -= 2 * np.outer(u, u) / np.dot(u, u)

    rot = np.zeros((dim, dim), dtype=np.complex128)
    rot[0, 0] = 1
    rot[1:, 1:] = refl

    return rot


def haar_unitary(dim, seed, index):
    """
    Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix.

    Each (seed, index) pair owns an independent stream, so extending a
    catalog never changes its existing members.

    Parameters
    ----------
    dim: int
        matrix dimension

    seed: int
        catalog seed

    index: int
        catalog member

    Returns
    -------
    rot: numpy.ndarray (shape=(dim, dim), dtype=complex)
        unitary matrix
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    gauss = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(gauss)
    diag = np.diag(r)

    return q * (diag / np.abs(diag))


def basis_rotation(basis_id, n, seed=0):
    """
    Rotation of a basis identifier.

    Parameters
    ----------
    basis_id: str
        'standard', 'bell', 'hadamard', 'local' or 'random-<k>'

    n: int
        number of qubits

    seed: int
        seed of the random catalog members

    Returns
    -------
    rot: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        basis rotation
    """
    if basis_id == 'standard':
        return standard_basis(n)
    if basis_id == 'local':
        return local_basis(n)
    if basis_id in TWO_QUBIT_BASES:
        if n != 2:
            raise UnsupportedParameterError(f"The {basis_id} basis is defined for two qubits only!")
        return bell_basis() if basis_id == 'bell' else hadamard_basis()
    if basis_id.startswith('random-'):
        return haar_unitary(2 ** n, seed, int(basis_id.split('-', 1)[1]))

    raise UnsupportedParameterError(f"Unknown basis '{basis_id}'!")


def expand_basis_ids(basis_lst, n, n_random):
    """
    Expand configured basis identifiers into catalog members.

    Parameters
    ----------
    basis_lst: list of str
        configured identifiers ('random' expands to n_random members)

    n: int
        number of qubits (two-qubit bases are dropped for n != 2)

    n_random: int
        number of random members

    Returns
    -------
    basis_ids: list of str
        catalog member identifiers, in catalog order
    """
    basis_ids = []
    for b in BASIS_IDS:
        if b not in basis_lst or (b in TWO_QUBIT_BASES and n != 2):
            continue
        if b == 'random':
            basis_ids.extend(f'random-{k}' for k in range(n_random))
        else:
            basis_ids.append(b)

    return basis_ids


def basis_catalog(n, basis_lst=BASIS_IDS, n_random=32, seed=0):
    """
    Catalog of basis rotations searched by the non-Markovianity measure.

    Parameters
    ----------
    n: int
        number of qubits

    basis_lst: sequence of str
        basis identifiers

    n_random: int
        number of Haar-random members

    seed: int
        catalog seed

    Returns
    -------
    catalog: list of tuple
        (basis identifier, rotation) pairs
    """
    return [(b, basis_rotation(b, n, seed=seed)) for b in expand_basis_ids(basis_lst, n, n_random)]
