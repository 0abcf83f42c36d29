"""
Dense complex matrix helpers and the symbolic action of Pauli strings.

Basis-index convention: qubit 1 (the first channel use) is the least
significant bit of the computational index, i.e. a Pauli string
(i_1, ..., i_n) is the matrix kron(σ_{i_n}, ..., σ_{i_1}).
"""
import numpy as np
from numba import njit

from hssmem.errors import ContractViolationError, DimensionLimitError

# default maximum operator dimension
MAX_DIM = 2 ** 10

# single-qubit Pauli matrices: identity, x, y, z
PAULI = np.array([[[1, 0], [0, 1]],
                  [[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=np.complex128)


def kron(a, b, max_dim=MAX_DIM):
    """
    Kronecker product of two square matrices.

    Parameters
    ----------
    a: numpy.ndarray (shape=(da, da), dtype=complex)
        left factor

    b: numpy.ndarray (shape=(db, db), dtype=complex)
        right factor

    max_dim: int
        maximum dimension of the product

    Returns
    -------
    ab: numpy.ndarray (shape=(da*db, da*db), dtype=complex)
        Kronecker product, ab[i*db + k, j*db + l] = a[i, j] * b[k, l]
    """
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise DimensionLimitError(f"Kronecker product dimension {dim} exceeds the maximum of {max_dim}!")

    return np.kron(a, b)


def pauli_matrix(p, max_dim=MAX_DIM):
    """
    Dense matrix of a Pauli string.

    Parameters
    ----------
    p: sequence of int
        Pauli indices (0=I, 1=x, 2=y, 3=z) of qubits 1..n

    max_dim: int
        maximum dimension

    Returns
    -------
    mat: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        kron(σ_{p_n}, ..., σ_{p_1})
    """
    mat = np.ones((1, 1), dtype=np.complex128)
    for i in reversed(tuple(p)):
        mat = kron(mat, PAULI[i], max_dim=max_dim)

    return mat


def pauli_masks(p):
    """
    Bit masks describing a Pauli string.

    P|j⟩ = i^ny (-1)^popcount(j & zmask) |j ^ xmask⟩

    Parameters
    ----------
    p: sequence of int
        Pauli indices of qubits 1..n

    Returns
    -------
    xmask: int
        bits flipped by the string (x and y factors)

    zmask: int
        bits contributing a sign (y and z factors)

    ny: int
        number of y factors
    """
    xmask = zmask = ny = 0
    for q, i in enumerate(p):
        if i not in (0, 1, 2, 3):
            raise ContractViolationError(f"Invalid Pauli index {i}!")
        if i in (1, 2):
            xmask |= 1 << q
        if i in (2, 3):
            zmask |= 1 << q
        if i == 2:
            ny += 1

    return xmask, zmask, ny


def parity(v):
    """Parity of the number of set bits of a non-negative integer."""
    return bin(v).count('1') & 1


def pauli_action(p, j):
    """
    Action of a Pauli string on a computational basis ket.

    Parameters
    ----------
    p: sequence of int
        Pauli indices of qubits 1..n

    j: int
        basis index

    Returns
    -------
    jp: int
        image basis index

    phase: complex
        phase in {±1, ±i} such that P|j⟩ = phase |jp⟩
    """
    xmask, zmask, ny = pauli_masks(p)
    phase = 1j ** ny * (-1) ** parity(j & zmask)

    return j ^ xmask, complex(phase)


def conjugate_entry(p, j, k, v):
    """
    Conjugate the matrix unit v|j⟩⟨k| by a Pauli string.

    Parameters
    ----------
    p: sequence of int
        Pauli indices of qubits 1..n

    j: int
        row index

    k: int
        column index

    v: complex
        entry value

    Returns
    -------
    jp: int
        image row index

    kp: int
        image column index

    vp: complex
        image value, P(v|j⟩⟨k|)P = vp|jp⟩⟨kp|
    """
    jp, ph_j = pauli_action(p, j)
    kp, ph_k = pauli_action(p, k)

    return jp, kp, v * ph_j * np.conj(ph_k)


def entry_list(x, atol=0.0):
    """
    Nonzero entries of a dense matrix.

    Parameters
    ----------
    x: numpy.ndarray (dtype=complex)
        dense matrix

    atol: float
        entries with modulus not above this value are dropped

    Returns
    -------
    rows: numpy.ndarray (dtype=int64)
        row indices

    cols: numpy.ndarray (dtype=int64)
        column indices

    vals: numpy.ndarray (dtype=complex)
        entry values
    """
    rows, cols = np.nonzero(np.abs(x) > atol)

    return rows.astype(np.int64), cols.astype(np.int64), np.ascontiguousarray(x[rows, cols], dtype=np.complex128)


@njit(cache=True, nogil=True)
def _bit_parity(v):
    par = 0
    while v:
        par ^= v & 1
        v >>= 1

    return par


@njit(cache=True, nogil=True)
def conjugate_entry_list(xmasks, zmasks, weights, rows, cols, vals, dim):
    """
    Weighted sum of Pauli conjugations of a matrix given as an entry list.

    Parameters
    ----------
    xmasks: numpy.ndarray (dtype=int64)
        bit-flip masks of the Pauli strings

    zmasks: numpy.ndarray (dtype=int64)
        sign masks of the Pauli strings

    weights: numpy.ndarray (dtype=float)
        string weights

    rows: numpy.ndarray (dtype=int64)
        entry rows

    cols: numpy.ndarray (dtype=int64)
        entry columns

    vals: numpy.ndarray (dtype=complex)
        entry values

    dim: int
        matrix dimension

    Returns
    -------
    out: numpy.ndarray (shape=(dim, dim), dtype=complex)
        Σ_t w_t P_t x P_t
    """
    out = np.zeros((dim, dim), dtype=np.complex128)
    for t in range(weights.shape[0]):
        w = weights[t]
        xm = xmasks[t]
        zm = zmasks[t]
        for e in range(vals.shape[0]):
            j = rows[e]
            k = cols[e]
            v = w * vals[e]
            if _bit_parity((j ^ k) & zm):
                v = -v
            out[j ^ xm, k ^ xm] += v

    return out


def conjugate_dense(xmask, zmask, x):
    """
    Conjugate a dense matrix by the Pauli string with the given masks.

    Parameters
    ----------
    xmask: int
        bit-flip mask

    zmask: int
        sign mask

    x: numpy.ndarray (shape=(N, N), dtype=complex)
        input matrix

    Returns
    -------
    pxp: numpy.ndarray (shape=(N, N), dtype=complex)
        P x P
    """
    idx = np.arange(x.shape[0])
    sgn = 1 - 2 * np.array([parity(int(i)) for i in idx & zmask])
    perm = idx ^ xmask

    return (x * np.outer(sgn, sgn))[perm][:, perm]


def is_hermitian(x, atol=1e-10):
    """Return True if max |x - x†| does not exceed atol."""
    return x.shape[0] == x.shape[1] and np.max(np.abs(x - x.conj().T), initial=0.0) <= atol


def frobenius_hss_norm(x, atol=1e-10):
    """
    Hilbert-Schmidt speed norm √(½ Σ |x_jk|²) of a Hermitian matrix.

    Parameters
    ----------
    x: numpy.ndarray (shape=(N, N), dtype=complex)
        Hermitian matrix (e.g. a phase derivative dρ/dφ)

    atol: float
        hermiticity tolerance

    Returns
    -------
    norm: float
        √(½ Tr[x²])
    """
    if not is_hermitian(x, atol=atol):
        raise ContractViolationError("HSS norm requires a Hermitian matrix!")

    return float(np.sqrt(0.5 * np.sum(np.abs(x) ** 2)))


def check_density_operator(rho, atol=1e-12, eig_tol=1e-9):
    """
    Validate a density operator.

    Parameters
    ----------
    rho: numpy.ndarray (shape=(N, N), dtype=complex)
        candidate density operator

    atol: float
        hermiticity and trace tolerance

    eig_tol: float
        tolerated negative eigenvalue

    Returns
    -------
    None
    """
    if not is_hermitian(rho, atol=atol):
        raise ContractViolationError("Density operator is not Hermitian!")
    if abs(np.trace(rho) - 1) > atol:
        raise ContractViolationError("Density operator is not normalized!")
    if np.min(np.linalg.eigvalsh(rho)) < -eig_tol:
        raise ContractViolationError("Density operator is not positive semidefinite!")
