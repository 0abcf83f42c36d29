"""
Correlated multi-use noisy channels.

A Pauli-type channel used n times with partial memory μ applies the Pauli
string (i_1, ..., i_n) with the Markov-chain weight

    p_{i_1...i_n} = p_{i_1} Π_k [(1 - μ) p_{i_k} + μ δ(i_k, i_{k-1})].

The two-use amplitude-damping channel mixes the product Kraus map with the
fully correlated (F_0, F_1) pair with weight μ.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hssmem.errors import ContractViolationError, DimensionLimitError, DomainError, UnsupportedParameterError
from hssmem.qmat import (MAX_DIM, conjugate_dense, conjugate_entry_list, entry_list, kron, pauli_masks,
                         pauli_matrix)
from hssmem.reservoirs import ColoredDephasing, ColoredDepolarizing, LorentzianAmplitudeDamping, SqueezedVacuumOhmic

# hard cap on the number of channel uses
MAX_QUBITS = 10

# negative rounding tolerated (and clamped) in single-use probabilities
PROB_FLOOR = -1e-12


@dataclass(frozen=True)
class SingleUseNoise:
    """
    Single-use noise data at a given time.

    probs: Pauli probabilities (p0, p1, p2, p3), None for amplitude damping
    kind: 'pauli' or 'ad'
    kraus: (K0, K1) for amplitude damping
    decoherence: value of the decoherence function (η, exp(-γ), Λ or G)
    """
    kind: str
    decoherence: float
    probs: Optional[np.ndarray] = None
    kraus: Optional[tuple] = None


@dataclass(frozen=True)
class JointDistribution:
    """
    Weights of the Pauli strings applied by n correlated channel uses.

    tuples: support, shape (T, n), lexicographic in (i_1, ..., i_n)
    probs: weights, shape (T,)
    """
    n: int
    tuples: np.ndarray
    probs: np.ndarray
    xmasks: np.ndarray = field(init=False, repr=False)
    zmasks: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        masks = np.array([pauli_masks(t)[:2] for t in self.tuples], dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, 'xmasks', np.ascontiguousarray(masks[:, 0]))
        object.__setattr__(self, 'zmasks', np.ascontiguousarray(masks[:, 1]))

    def as_dict(self):
        return {tuple(int(i) for i in t): float(w) for t, w in zip(self.tuples, self.probs)}


@dataclass(frozen=True)
class CorrelatedChannelSpec:
    """Reservoir model, number of channel uses and correlation factor μ."""
    model: object
    n: int
    mu: float

    def __post_init__(self):
        if not 2 <= self.n <= MAX_QUBITS:
            raise UnsupportedParameterError(f"Number of qubits must lie in [2, {MAX_QUBITS}], got {self.n}!")
        check_mu(self.mu)
        if isinstance(self.model, LorentzianAmplitudeDamping) and self.n != 2:
            raise UnsupportedParameterError("The correlated amplitude-damping channel is defined for two qubits only!")

    @property
    def dim(self):
        return 2 ** self.n


def check_mu(mu):
    """Raise a DomainError unless 0 ≤ μ ≤ 1."""
    if not 0 <= mu <= 1:
        raise DomainError(f"Correlation factor μ must lie in [0, 1], got {mu}!")


def clamp_probs(probs):
    """
    Clamp negative rounding in probability arrays.

    Parameters
    ----------
    probs: numpy.ndarray
        probabilities

    Returns
    -------
    probs: numpy.ndarray
        probabilities with values in [PROB_FLOOR, 0) set to 0
    """
    if np.any(probs < PROB_FLOOR):
        raise ContractViolationError(f"Negative probability {np.min(probs):.3e} in single-use noise!")

    return np.where(probs < 0, 0.0, probs)


def pauli_prob_table(model, tau):
    """
    Single-use Pauli probabilities over a time grid.

    Parameters
    ----------
    model: ColoredDephasing, SqueezedVacuumOhmic or ColoredDepolarizing
        unital reservoir model

    tau: float or numpy.ndarray
        dimensionless time(s)

    Returns
    -------
    probs: numpy.ndarray (shape=(..., 4), dtype=float)
        (p0, p1, p2, p3) at each time
    """
    d = np.asarray(model.decoherence(tau), dtype=float)
    probs = np.zeros(d.shape + (4,))
    if isinstance(model, (ColoredDephasing, SqueezedVacuumOhmic)):
        probs[..., 0] = 0.5 * (1 + d)
        probs[..., 3] = 0.5 * (1 - d)
    elif isinstance(model, ColoredDepolarizing):
        probs[..., 0] = 0.25 * (1 + 3 * d)
        probs[..., 1:] = 0.25 * (1 - d)[..., None]
    else:
        raise UnsupportedParameterError(f"Model '{model.tag}' is not a Pauli channel!")

    return clamp_probs(probs)


def ad_kraus(g):
    """Single-use amplitude-damping Kraus pair for population amplitude G."""
    k0 = np.array([[1, 0], [0, g]], dtype=np.complex128)
    k1 = np.array([[0, np.sqrt(max(1 - g ** 2, 0.0))], [0, 0]], dtype=np.complex128)

    return k0, k1


def single_use_probs(model, tau):
    """
    Single-use noise data of a reservoir model.

    Parameters
    ----------
    model: reservoir model
        see hssmem.reservoirs

    tau: float
        dimensionless time (≥ 0)

    Returns
    -------
    noise: SingleUseNoise
        Pauli probabilities or amplitude-damping Kraus pair
    """
    if tau < 0:
        raise DomainError(f"Time must be non-negative, got {tau}!")
    d = float(model.decoherence(tau))
    if isinstance(model, LorentzianAmplitudeDamping):
        return SingleUseNoise(kind='ad', decoherence=d, kraus=ad_kraus(d))

    return SingleUseNoise(kind='pauli', decoherence=d, probs=pauli_prob_table(model, tau))


def joint_prob_table(probs, mu, n):
    """
    Markov-chain weights of correlated Pauli strings over a batch of single-use probabilities.

    Parameters
    ----------
    probs: numpy.ndarray (shape=(B, 4), dtype=float)
        single-use probabilities (one row per time)

    mu: float
        correlation factor

    n: int
        number of channel uses

    Returns
    -------
    tuples: numpy.ndarray (shape=(T, n), dtype=int)
        Pauli strings with non-vanishing weight somewhere in the batch

    weights: numpy.ndarray (shape=(B, T), dtype=float)
        string weights
    """
    check_mu(mu)
    if n < 1:
        raise UnsupportedParameterError("At least one channel use is required!")
    probs = np.atleast_2d(np.asarray(probs, dtype=float))

    # forward recursion with exact-zero pruning, lexicographic by construction
    prefixes = [((i,), probs[:, i]) for i in range(4) if np.any(probs[:, i] != 0)]
    for _ in range(n - 1):
        grown = []
        for pfx, w in prefixes:
            for i in range(4):
                cond = (1 - mu) * probs[:, i] + (mu if i == pfx[-1] else 0.0)
                w_new = w * cond
                if np.any(w_new != 0):
                    grown.append((pfx + (i,), w_new))
        prefixes = grown

    tuples = np.array([p for p, _ in prefixes], dtype=np.int64).reshape(-1, n)
    weights = np.stack([w for _, w in prefixes], axis=1) if prefixes else np.zeros((probs.shape[0], 0))

    mass = np.sum(weights, axis=1)
    if np.any(np.abs(mass - 1) > 1e-10):
        raise ContractViolationError("Correlated Pauli weights do not sum to one!")

    return tuples, weights


def joint_probs(p, mu, n):
    """
    Joint distribution of the Pauli strings applied by n correlated channel uses.

    Parameters
    ----------
    p: array_like (shape=(4,))
        single-use probabilities (p0, p1, p2, p3)

    mu: float
        correlation factor μ ∈ [0, 1]

    n: int
        number of channel uses

    Returns
    -------
    dist: JointDistribution
        sparse Pauli-string distribution
    """
    tuples, weights = joint_prob_table(np.asarray(p, dtype=float)[None, :], mu, n)

    return JointDistribution(n=n, tuples=tuples, probs=weights[0])


def _check_dim(x, dim):
    if x.shape != (dim, dim):
        raise ContractViolationError(f"Operator of shape {x.shape} does not match channel dimension {dim}!")


def apply_pauli_channel(dist, x, path='fast'):
    """
    Apply a correlated Pauli channel Σ_t p_t P_t x P_t.

    Parameters
    ----------
    dist: JointDistribution
        Pauli-string distribution

    x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        input operator

    path: str
        'fast' (entry-list conjugation) or 'dense' (kron-built Pauli strings)

    Returns
    -------
    out: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        channel output
    """
    dim = 2 ** dist.n
    _check_dim(x, dim)
    x = np.asarray(x, dtype=np.complex128)

    if path == 'fast':
        rows, cols, vals = entry_list(x)
        return conjugate_entry_list(dist.xmasks, dist.zmasks, dist.probs, rows, cols, vals, dim)

    elif path == 'dense':
        out = np.zeros((dim, dim), dtype=np.complex128)
        for t, w in zip(dist.tuples, dist.probs):
            pmat = pauli_matrix(t)
            out += w * (pmat @ x @ pmat)
        return out

    raise UnsupportedParameterError(f"Unknown channel application path '{path}'!")


def corr_ad_operators(g):
    """
    Kraus operators of the two-use correlated amplitude-damping channel.

    Parameters
    ----------
    g: numpy.ndarray (shape=(B,), dtype=float)
        population amplitudes G(τ)

    Returns
    -------
    prod_ops: numpy.ndarray (shape=(B, 4, 4, 4), dtype=complex)
        product operators K_i ⊗ K_j

    corr_ops: numpy.ndarray (shape=(B, 2, 4, 4), dtype=complex)
        correlated pair F_0, F_1
    """
    g = np.atleast_1d(np.asarray(g, dtype=float))
    sq = np.sqrt(np.clip(1 - g ** 2, 0.0, None))

    kraus = np.zeros(g.shape + (2, 2, 2), dtype=np.complex128)
    kraus[:, 0, 0, 0] = 1
    kraus[:, 0, 1, 1] = g
    kraus[:, 1, 0, 1] = sq
    prod_ops = np.einsum('bmij,bnkl->bmnikjl', kraus, kraus).reshape(g.shape + (4, 4, 4))

    corr_ops = np.zeros(g.shape + (2, 4, 4), dtype=np.complex128)
    corr_ops[:, 0] = np.eye(4)
    corr_ops[:, 0, 3, 3] = g
    corr_ops[:, 1, 0, 3] = sq

    return prod_ops, corr_ops


def apply_corr_ad_batch(g, mu, x):
    """
    Apply the correlated amplitude-damping channel at a batch of G(τ) values.

    Parameters
    ----------
    g: numpy.ndarray (shape=(B,), dtype=float)
        population amplitudes

    mu: float
        correlation factor

    x: numpy.ndarray (shape=(4, 4), dtype=complex)
        input operator

    Returns
    -------
    out: numpy.ndarray (shape=(B, 4, 4), dtype=complex)
        channel outputs
    """
    check_mu(mu)
    _check_dim(x, 4)
    prod_ops, corr_ops = corr_ad_operators(g)
    out = (1 - mu) * np.einsum('bmij,jk,bmlk->bil', prod_ops, x, prod_ops.conj())
    out += mu * np.einsum('bmij,jk,bmlk->bil', corr_ops, x, corr_ops.conj())

    return out


def apply_corr_ad(tau, a, mu, x):
    """
    Apply the two-use correlated amplitude-damping channel
    (1 - μ) Σ (K_i ⊗ K_j) x (K_i ⊗ K_j)† + μ Σ F_l x F_l†.

    Parameters
    ----------
    tau: float
        dimensionless time λt

    a: float
        coupling ratio γ0/λ

    mu: float
        correlation factor

    x: numpy.ndarray (shape=(4, 4), dtype=complex)
        input operator

    Returns
    -------
    out: numpy.ndarray (shape=(4, 4), dtype=complex)
        channel output
    """
    g = LorentzianAmplitudeDamping(a=a).decoherence(tau)

    return apply_corr_ad_batch(np.array([g]), mu, np.asarray(x, dtype=np.complex128))[0]


def apply_channel(spec, tau, x, path='fast'):
    """
    Apply a correlated channel at time τ.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        channel specification

    tau: float
        dimensionless time

    x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        input operator

    path: str
        Pauli channel application path ('fast' or 'dense')

    Returns
    -------
    out: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        channel output
    """
    if isinstance(spec.model, LorentzianAmplitudeDamping):
        return apply_corr_ad(tau, spec.model.a, spec.mu, x)

    noise = single_use_probs(spec.model, tau)
    return apply_pauli_channel(joint_probs(noise.probs, spec.mu, spec.n), x, path=path)


def conjugate_stack(tuples, x):
    """
    Pauli conjugates P_t x P_t of an operator for every string of a support.

    Parameters
    ----------
    tuples: numpy.ndarray (shape=(T, n), dtype=int)
        Pauli strings

    x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        input operator

    Returns
    -------
    stack: numpy.ndarray (shape=(T, 2**n, 2**n), dtype=complex)
        conjugated operators
    """
    stack = np.empty((len(tuples),) + x.shape, dtype=np.complex128)
    for t, p in enumerate(tuples):
        xmask, zmask, _ = pauli_masks(p)
        stack[t] = conjugate_dense(xmask, zmask, x)

    return stack


def choi_matrix(spec, tau, max_dim=MAX_DIM):
    """
    Choi matrix Σ_jk |j⟩⟨k| ⊗ Φ(|j⟩⟨k|) of a correlated channel.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        channel specification (n ≤ 3)

    tau: float
        dimensionless time

    max_dim: int
        maximum dimension of the Choi matrix

    Returns
    -------
    choi: numpy.ndarray (shape=(4**n, 4**n), dtype=complex)
        Choi matrix (trace 2**n)
    """
    dim = spec.dim
    if spec.n > 3 or dim ** 2 > max_dim:
        raise DimensionLimitError(f"Choi matrix of {spec.n} qubits is not materialized (n ≤ 3)!")

    choi = np.zeros((dim ** 2, dim ** 2), dtype=np.complex128)
    for j in range(dim):
        for k in range(dim):
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[j, k] = 1
            choi += kron(unit, apply_channel(spec, tau, unit), max_dim=max_dim)

    return choi


def unitality_gap(spec, tau):
    """Max-entry deviation ‖Φ(I) - I‖_max of a correlated channel."""
    eye = np.eye(spec.dim, dtype=np.complex128)

    return float(np.max(np.abs(apply_channel(spec, tau, eye) - eye)))
