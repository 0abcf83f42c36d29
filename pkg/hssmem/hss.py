"""
Hilbert-Schmidt speed (HSS) of phase-encoded states sent through correlated channels,
the derivative witness χ = dHSS/dτ > 0, the non-Markovianity measure and the
μ range of variation δ.

The channel is linear and φ-independent, hence d(Φρ)/dφ = Φ(dρ/dφ) and
HSS = √(½ Tr[Φ(dρ/dφ)²]) needs no numerical differentiation.
"""
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from hssmem.channels import (CorrelatedChannelSpec, apply_channel, apply_corr_ad_batch, conjugate_stack,
                             joint_prob_table, pauli_prob_table)
from hssmem.errors import ContractViolationError
from hssmem.qmat import conjugate_entry_list, entry_list, frobenius_hss_norm, pauli_masks
from hssmem.reservoirs import LorentzianAmplitudeDamping
from hssmem.utils import get_available_ram

# absolute tolerance separating strict HSS increase from flat stretches
TIE_EPS = 1e-13


@dataclass(frozen=True)
class PhaseFamily:
    """
    One-parameter family |ψ(φ)⟩ = U (exp(iφ), 1, ..., 1)/√N.

    n: number of qubits
    basis_rotation: unitary U whose columns are the basis vectors
    phi: phase [rad]
    basis_id: catalog identifier of U
    """
    n: int
    basis_rotation: np.ndarray
    phi: float
    basis_id: str = 'standard'

    def __post_init__(self):
        rot = np.asarray(self.basis_rotation, dtype=np.complex128)
        dim = 2 ** self.n
        if rot.shape != (dim, dim):
            raise ContractViolationError(f"Basis rotation of shape {rot.shape} does not match {self.n} qubits!")
        if np.max(np.abs(rot.conj().T @ rot - np.eye(dim))) > 1e-10:
            raise ContractViolationError(f"Basis rotation '{self.basis_id}' is not unitary!")
        object.__setattr__(self, 'basis_rotation', rot)


@dataclass(frozen=True)
class HssCurve:
    """HSS values on an ascending time grid."""
    tau_grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class NmMeasure:
    """Non-Markovianity measure with the maximizing basis and phase."""
    value: float
    basis_id: str
    phi: float


def standard_family(n, phi=0.0):
    """Phase family in the computational basis."""
    return PhaseFamily(n=n, basis_rotation=np.eye(2 ** n), phi=phi, basis_id='standard')


def _rotate(family, x_std):
    rot = family.basis_rotation

    return rot @ x_std @ rot.conj().T


def initial_state(family):
    """
    Pure initial state ρ_0(φ) = U ρ_std(φ) U†.

    Parameters
    ----------
    family: PhaseFamily
        phase family

    Returns
    -------
    rho: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        density operator (trace 1, rank 1)
    """
    dim = 2 ** family.n
    psi = np.ones(dim, dtype=np.complex128)
    psi[0] = np.exp(1j * family.phi)

    return _rotate(family, np.outer(psi, psi.conj()) / dim)


def phase_derivative(family):
    """
    Analytic phase derivative dρ_0/dφ.

    In the rotated frame only the first row and column are populated:
    entry (0, j) = i exp(iφ)/N for j ≠ 0, entry (j, 0) its conjugate.

    Parameters
    ----------
    family: PhaseFamily
        phase family

    Returns
    -------
    x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        Hermitian, traceless derivative
    """
    dim = 2 ** family.n
    x_std = np.zeros((dim, dim), dtype=np.complex128)
    x_std[0, 1:] = 1j * np.exp(1j * family.phi) / dim
    x_std[1:, 0] = np.conj(x_std[0, 1:])

    return _rotate(family, x_std)


def hss_value(spec, family, tau, path='fast'):
    """
    Hilbert-Schmidt speed of the evolved phase family.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        correlated channel

    family: PhaseFamily
        initial phase family

    tau: float
        dimensionless time

    path: str
        Pauli channel application path

    Returns
    -------
    hss: float
        √(½ Tr[Φ_τ(dρ_0/dφ)²])
    """
    if family.n != spec.n:
        raise ContractViolationError(f"Phase family of {family.n} qubits used with a {spec.n}-qubit channel!")

    return frobenius_hss_norm(apply_channel(spec, tau, phase_derivative(family), path=path))


def _batch_norms(outs):
    return np.sqrt(0.5 * np.sum(np.abs(outs) ** 2, axis=(-2, -1)))


class CurveEvaluator:
    """
    HSS curves of one channel on a fixed time grid, for any phase derivative.

    Single-use noise and joint Pauli weights are tabulated once on the grid
    (the single-use table may be shared across μ via `probs`); each curve is
    then a weighted sum of Pauli conjugates (or a batched Kraus sum for
    amplitude damping), evaluated in memory-bounded τ chunks. Supports whose
    conjugate stack exceeds `stack_bytes` are summed one time at a time by
    the entry-list kernel.
    """

    def __init__(self, spec, tau_grid, chunk_bytes=2 ** 26, probs=None, stack_bytes=None):
        self.spec = spec
        self.tau_grid = np.asarray(tau_grid, dtype=float)
        if self.tau_grid.size == 0:
            raise ContractViolationError("Empty time grid!")
        if np.any(np.diff(self.tau_grid) <= 0):
            raise ContractViolationError("Time grid must be strictly ascending!")

        self.is_ad = isinstance(spec.model, LorentzianAmplitudeDamping)
        self.chunk_bytes = chunk_bytes
        dim = spec.dim
        if self.is_ad:
            self.g = spec.model.decoherence(self.tau_grid)
            self.tuples = self.weights = None
        else:
            if probs is None:
                probs = pauli_prob_table(spec.model, self.tau_grid)
            elif np.shape(probs) != (self.tau_grid.size, 4):
                raise ContractViolationError("Single-use probability table does not match the time grid!")
            self.tuples, self.weights = joint_prob_table(probs, spec.mu, spec.n)

        # conjugate stacks beyond the memory budget fall back to the per-time kernel
        if stack_bytes is None:
            stack_bytes = min(get_available_ram(0.25), 2 ** 30)
        self.stacked = self.is_ad or len(self.tuples) * dim ** 2 * 16 <= stack_bytes
        self.chunk = max(1, int(chunk_bytes // (16 * dim ** 2 * (1 if self.is_ad else 2))))
        if not self.stacked:
            masks = np.array([pauli_masks(t)[:2] for t in self.tuples], dtype=np.int64).reshape(-1, 2)
            self.xmasks = np.ascontiguousarray(masks[:, 0])
            self.zmasks = np.ascontiguousarray(masks[:, 1])

    def values(self, x):
        """
        HSS values of a phase derivative on the grid.

        Parameters
        ----------
        x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
            phase derivative

        Returns
        -------
        hss: numpy.ndarray (dtype=float)
            HSS at every grid time
        """
        nt = self.tau_grid.size
        hss = np.empty(nt)
        if self.is_ad:
            for c in range(0, nt, self.chunk):
                hss[c:c + self.chunk] = _batch_norms(apply_corr_ad_batch(self.g[c:c + self.chunk], self.spec.mu, x))
        elif self.stacked:
            stack = conjugate_stack(self.tuples, x)
            for c in range(0, nt, self.chunk):
                outs = np.einsum('bt,tij->bij', self.weights[c:c + self.chunk], stack)
                hss[c:c + self.chunk] = _batch_norms(outs)
        else:
            # one kernel pass per time on the cached string masks and weights
            rows, cols, vals = entry_list(np.asarray(x, dtype=np.complex128))
            for k in range(nt):
                out = conjugate_entry_list(self.xmasks, self.zmasks, np.ascontiguousarray(self.weights[k]), rows, cols,
                                           vals, self.spec.dim)
                hss[k] = frobenius_hss_norm(out)

        return hss

    def curve(self, family):
        return HssCurve(tau_grid=self.tau_grid, values=self.values(phase_derivative(family)))


def hss_curve(spec, family, tau_grid):
    """
    HSS trajectory on a time grid.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        correlated channel

    family: PhaseFamily
        initial phase family

    tau_grid: array_like
        strictly ascending dimensionless times

    Returns
    -------
    curve: HssCurve
        HSS trajectory
    """
    return CurveEvaluator(spec, tau_grid).curve(family)


def chi_segments(curve, tie_eps=TIE_EPS):
    """
    Time intervals where the HSS strictly increases (χ > 0).

    Parameters
    ----------
    curve: HssCurve
        HSS trajectory

    tie_eps: float
        increments not above this value count as flat

    Returns
    -------
    segments: list of tuple
        disjoint, ascending (τ_start, τ_end) intervals
    """
    inc = np.diff(curve.values) > tie_eps
    segments = []
    k = 0
    while k < inc.size:
        if inc[k]:
            start = k
            while k < inc.size and inc[k]:
                k += 1
            segments.append((float(curve.tau_grid[start]), float(curve.tau_grid[k])))
        else:
            k += 1

    return segments


def positive_increments(values, tie_eps=TIE_EPS):
    """
    Integral of the positive part of dHSS/dτ on a piecewise-linear curve.

    Parameters
    ----------
    values: numpy.ndarray
        HSS trajectory

    tie_eps: float
        increments not above this value count as flat

    Returns
    -------
    total: float
        Σ max(ΔHSS, 0) over strict increases
    """
    inc = np.diff(values)

    return float(np.sum(inc[inc > tie_eps]))


def nm_measure(spec, basis_catalog, phi_grid, tau_grid, jobs=1, probs=None):
    """
    Non-Markovianity measure: maximum over bases and phases of the integrated χ.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        correlated channel

    basis_catalog: list of tuple
        (basis identifier, rotation) pairs

    phi_grid: array_like
        phases [rad]

    tau_grid: array_like
        strictly ascending dimensionless times

    jobs: int
        number of concurrent threads

    probs: numpy.ndarray (shape=(len(tau_grid), 4), dtype=float)
        single-use Pauli probabilities on the grid, shared across μ (tabulated here if None)

    Returns
    -------
    measure: NmMeasure
        maximum and its argmax (first in catalog order on ties)
    """
    if len(basis_catalog) == 0 or len(phi_grid) == 0:
        raise ContractViolationError("Empty basis catalog or phase grid!")

    evaluator = CurveEvaluator(spec, tau_grid, probs=probs)
    families = [PhaseFamily(n=spec.n, basis_rotation=rot, phi=float(phi), basis_id=b)
                for b, rot in basis_catalog for phi in phi_grid]

    def family_measure(fam):
        return positive_increments(evaluator.values(phase_derivative(fam)))

    with Parallel(n_jobs=jobs, prefer='threads') as parallel:
        nm_lst = parallel(delayed(family_measure)(f) for f in families)

    best = int(np.argmax(nm_lst))

    return NmMeasure(value=nm_lst[best], basis_id=families[best].basis_id, phi=families[best].phi)


def delta_range(model, n, tau_star, family):
    """
    Range of variation δ = HSS(μ=1) - HSS(μ=0) at a fixed time.

    Parameters
    ----------
    model: reservoir model
        see hssmem.reservoirs

    n: int
        number of qubits

    tau_star: float
        dimensionless time

    family: PhaseFamily
        initial phase family

    Returns
    -------
    delta: float
        endpoint difference of the HSS over μ
    """
    hss_corr = hss_value(CorrelatedChannelSpec(model=model, n=n, mu=1.0), family, tau_star)
    hss_free = hss_value(CorrelatedChannelSpec(model=model, n=n, mu=0.0), family, tau_star)

    return hss_corr - hss_free
