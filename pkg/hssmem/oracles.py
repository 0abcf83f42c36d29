"""
Independent reference evaluations of the HSS.

- published closed-form HSS expressions, transcribed as printed
  (φ-dependent forms in the Bell and Hadamard bases included);
- finite-difference HSS from the Hilbert-Schmidt distance;
- dense Kraus-sum channel application built literally with kron.

The standard-basis expressions (and the dephasing Bell expression at φ = 0)
are binding; the remaining Bell/Hadamard expressions are audited and reported.
"""
from dataclasses import dataclass
from itertools import product

import numpy as np
import pandas as pd

from hssmem.bases import basis_rotation
from hssmem.channels import CorrelatedChannelSpec, apply_channel, single_use_probs
from hssmem.errors import DimensionLimitError, DomainError, UnsupportedParameterError
from hssmem.hss import PhaseFamily, initial_state
from hssmem.qmat import PAULI, frobenius_hss_norm, kron
from hssmem.reservoirs import (ColoredDephasing, ColoredDepolarizing, SqueezedVacuumOhmic, gamma_sv, gamma_sv_literal,
                               gamma_sv_quad)

# published closed-form expressions: model tag -> bases
PUBLISHED = {'dephasing': ('standard', 'bell', 'hadamard'),
             'squeezed': ('standard', 'bell', 'hadamard'),
             'depolarizing': ('standard', 'bell', 'hadamard'),
             'ad': ('standard', 'bell', 'hadamard')}

# pass threshold of the formula audit
AUDIT_TOL = 1e-6


@dataclass(frozen=True)
class ClosedFormId:
    """Published HSS expression: reservoir model tag and basis tag."""
    model: str
    basis: str

    def __post_init__(self):
        if self.basis not in PUBLISHED.get(self.model, ()):
            raise UnsupportedParameterError(f"No published HSS expression for {self.model} in the {self.basis} basis!")

    @property
    def name(self):
        return f'{self.model}_{self.basis}'


def _csqrt(val):
    # printed expressions may dip below zero by rounding (or by typos)
    return float(np.real(np.sqrt(complex(val))))


def _dephasing(eta_t, mu, phi, basis):
    c = (1 - mu) * eta_t ** 2 + mu
    if basis == 'standard':
        return 0.25 * _csqrt(c ** 2 + 2 * eta_t ** 2)
    if basis == 'bell':
        return 0.25 * _csqrt(c ** 2 * np.cos(phi) ** 2 + np.sin(phi) ** 2 + 2 * eta_t ** 2)

    return 0.25 * _csqrt(c ** 2 + eta_t ** 2 * (1 + np.cos(phi) ** 2) + np.sin(phi) ** 2)


def _squeezed(gam, mu, phi, basis):
    e2 = np.exp(-2 * gam)
    e4 = np.exp(-4 * gam)
    if basis == 'standard':
        return 0.25 * _csqrt((mu - 1) ** 2 * e4 + 2 * (1 - mu ** 2 + mu) * e2 + mu ** 2)
    if basis == 'bell':
        return 0.25 * e2 * _csqrt(np.cos(phi) ** 2 * (mu * (np.exp(2 * gam) - 1) + 1) ** 2 +
                                  np.exp(4 * gam) * np.sin(phi) ** 2 + 2 * np.exp(2 * gam))

    cp = np.cos(phi)
    c2p = np.cos(2 * phi)
    val = (4 * (mu - 1) ** 2 * e4 * (8 * cp + 3 * c2p + 7) +
           4 * (8 * mu ** 2 * cp + 3 * (mu ** 2 - 1) * c2p + 7 * mu ** 2 + 3) +
           e2 * ((444 - 64 * (mu - 1) * mu) * cp - 56 * (mu - 1) * mu + 327) +
           e2 * (-24 * (mu - 3) * (mu + 2) * c2p + 20 * np.cos(3 * phi) + np.cos(4 * phi)))

    return _csqrt(val) / (4 * np.sqrt(2) * (cp + 2) ** 2)


def _depolarizing(lam, mu, phi, basis):
    c = lam * (-mu) + lam + mu
    if basis == 'standard':
        return 0.25 * _csqrt(lam ** 2 * (2 * c ** 2 + 1))
    if basis == 'bell':
        val = ((lam - 1) * lam ** 2 * (mu - 1) * (lam * (mu - 1) - mu - 1) * np.cos(2 * phi) +
               3 * lam ** 2 * (c ** 2 + 1))
        return _csqrt(val) / (4 * np.sqrt(2))

    cp = np.cos(phi)
    val = (8 * lam ** 2 * (7 * c ** 2 + 6) * cp + 28 * lam ** 4 * (mu - 1) ** 2 - 50 * lam ** 3 * (mu - 1) * mu +
           lam ** 2 * (mu * (19 * mu + 6) + 28) + 3 * mu ** 2 + lam ** 2 * (mu * (49 * mu - 6) + 30) * cp ** 2 +
           lam ** 2 * (c ** 2 + 1) * cp ** 3 * (cp + 10) +
           (40 * lam ** 4 * (mu - 1) ** 2 - 86 * lam ** 3 * (mu - 1) * mu - 3 * mu ** 2) * cp ** 2)

    return _csqrt(val) / (2 * np.sqrt(2) * (cp + 2) ** 2)


def _amplitude_damping(g, mu, phi, basis):
    if basis == 'standard':
        return 0.25 * _csqrt((g ** 2 + 2) * (g + mu - mu * g) ** 2)
    if basis == 'bell':
        c2p = np.cos(2 * phi)
        val = ((-2 * g ** 3 - 4 * g) * (mu - 1) * mu + 2 * mu ** 2 + 2 * g ** 8 * (mu - 1) ** 2 +
               g ** 4 * (6 - 5 * mu) * mu + g ** 2 * (mu * (7 * mu - 8) + 4) +
               g ** 2 * (4 * g ** 4 * (mu - 1) ** 2 - 2 * g ** 6 * (mu - 1) ** 2) * c2p +
               g ** 2 * (g ** 2 * (-((mu - 2) * mu + 2)) - 2 * g * (mu - 1) * mu + mu ** 2) * c2p)
        return _csqrt(val) / (4 * np.sqrt(2))

    cp = np.cos(phi)
    val = ((40 * g ** 4 - 6 * g ** 4) * (mu - 1) ** 2 + g ** 2 * (mu - 1) * (247 * mu - 327) + 367 * mu ** 2 +
           4 * (8 * g ** 4 * (mu - 1) ** 2 - 222 * g * (mu - 1) * mu) * cp +
           4 * (g ** 2 * (mu - 1) * (95 * mu - 111) + 8119 * mu ** 2) * cp +
           (g * (-mu) + g + mu) ** 2 * (144 * np.cos(2 * phi) + 20 * np.cos(3 * phi) + np.cos(4 * phi)))

    return _csqrt(val) / (4 * np.sqrt(2) * (cp + 2) ** 2)


def hss_closed_form(cid, model, mu, tau, phi=np.pi):
    """
    Published closed-form HSS of two qubits.

    Parameters
    ----------
    cid: ClosedFormId
        expression identifier

    model: reservoir model
        reservoir parameters (its tag must match cid.model)

    mu: float
        correlation factor

    tau: float
        dimensionless time

    phi: float
        phase [rad] (ignored by φ-free expressions)

    Returns
    -------
    hss: float
        closed-form HSS
    """
    if model.tag != cid.model:
        raise UnsupportedParameterError(f"Expression {cid.name} evaluated with a {model.tag} model!")

    if isinstance(model, ColoredDephasing):
        return _dephasing(float(model.decoherence(tau)), mu, phi, cid.basis)
    if isinstance(model, SqueezedVacuumOhmic):
        return _squeezed(float(gamma_sv(tau, model)), mu, phi, cid.basis)
    if isinstance(model, ColoredDepolarizing):
        return _depolarizing(float(model.decoherence(tau)), mu, phi, cid.basis)

    return _amplitude_damping(float(model.decoherence(tau)), mu, phi, cid.basis)


def finite_difference_hss(spec, family, tau, eps=1e-6):
    """
    HSS as the central difference of the Hilbert-Schmidt distance
    D(Φρ(φ+ε), Φρ(φ-ε)) / 2ε, with D(ρ, σ) = √(½ Tr[(ρ - σ)²]).

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        correlated channel

    family: PhaseFamily
        initial phase family

    tau: float
        dimensionless time

    eps: float
        phase step, in [1e-9, 1e-3]

    Returns
    -------
    hss: float
        finite-difference HSS
    """
    if not 1e-9 <= eps <= 1e-3:
        raise DomainError(f"Finite-difference step must lie in [1e-9, 1e-3], got {eps}!")

    def evolved(phi):
        fam = PhaseFamily(n=family.n, basis_rotation=family.basis_rotation, phi=phi, basis_id=family.basis_id)
        return apply_channel(spec, tau, initial_state(fam))

    diff = evolved(family.phi + eps) - evolved(family.phi - eps)

    return frobenius_hss_norm(diff, atol=1e-9) / (2 * eps)


def _chain_weight(p, mu, tup):
    w = p[tup[0]]
    for prev, cur in zip(tup[:-1], tup[1:]):
        w *= (1 - mu) * p[cur] + mu * (prev == cur)

    return w


def dense_reference_apply(spec, tau, x):
    """
    Correlated channel applied as a literal Kraus sum over all strings.

    Parameters
    ----------
    spec: CorrelatedChannelSpec
        correlated channel (n ≤ 4)

    tau: float
        dimensionless time

    x: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        input operator

    Returns
    -------
    out: numpy.ndarray (shape=(2**n, 2**n), dtype=complex)
        channel output
    """
    if spec.n > 4:
        raise DimensionLimitError("Dense reference channel limited to four qubits!")
    noise = single_use_probs(spec.model, tau)
    out = np.zeros_like(x, dtype=np.complex128)

    if noise.kind == 'ad':
        g = noise.decoherence
        for k_a, k_b in product(noise.kraus, repeat=2):
            op = kron(k_a, k_b)
            out += (1 - spec.mu) * op @ x @ op.conj().T
        f0 = np.diag([1, 1, 1, g]).astype(np.complex128)
        f1 = np.zeros((4, 4), dtype=np.complex128)
        f1[0, 3] = np.sqrt(1 - g ** 2)
        for op in (f0, f1):
            out += spec.mu * op @ x @ op.conj().T
        return out

    p = noise.probs
    for tup in product(range(4), repeat=spec.n):
        # Kraus operator √w σ_{i_n} ⊗ ... ⊗ σ_{i_1}
        op = np.sqrt(_chain_weight(p, spec.mu, tup)) * np.ones((1, 1), dtype=np.complex128)
        for i in reversed(tup):
            op = kron(op, PAULI[i])
        out += op @ x @ op.conj().T

    return out


def _audit_row(formula_id, basis, devs, binding):
    max_dev = float(np.max(devs)) if len(devs) else 0.0

    return {'formula_id': formula_id, 'basis': basis, 'max_abs_dev': max_dev, 'grid_points': len(devs),
            'binding': binding, 'passed': bool(max_dev <= AUDIT_TOL)}


def default_tau_samples(model, num=10):
    """Audit times spanning the features of a reservoir model."""
    tau_max = 3.0 if isinstance(model, SqueezedVacuumOhmic) else 5.0

    return np.linspace(0, tau_max, num)


def formula_audit(models, mu_grid=(0, 0.25, 0.5, 0.75, 1), num_tau=10, phi_grid=None, eps=1e-6):
    """
    Compare every published closed form with the finite-difference HSS.

    Parameters
    ----------
    models: list
        reservoir models (one per tag)

    mu_grid: sequence of float
        correlation factors

    num_tau: int
        number of audit times per model

    phi_grid: sequence of float
        phases of the Bell/Hadamard audit (default 8 points on [0, 2π))

    eps: float
        finite-difference step

    Returns
    -------
    audit: pandas.DataFrame
        formula_id, basis, max_abs_dev, grid_points, binding, passed
    """
    if phi_grid is None:
        phi_grid = 2 * np.pi * np.arange(8) / 8

    rows = []
    for model in models:
        taus = default_tau_samples(model, num_tau)
        for basis in PUBLISHED[model.tag]:
            cid = ClosedFormId(model.tag, basis)
            rot = basis_rotation(basis, 2)
            phis = (np.pi,) if basis == 'standard' else phi_grid
            devs = []
            for mu, tau, phi in product(mu_grid, taus, phis):
                spec = CorrelatedChannelSpec(model=model, n=2, mu=float(mu))
                fam = PhaseFamily(n=2, basis_rotation=rot, phi=float(phi), basis_id=basis)
                devs.append(abs(hss_closed_form(cid, model, mu, tau, phi) - finite_difference_hss(spec, fam, tau, eps)))
            rows.append(_audit_row(cid.name, basis, devs, binding=basis == 'standard'))

            # the dephasing Bell expression must reduce to the standard one at φ = 0
            if model.tag == 'dephasing' and basis == 'bell':
                devs = []
                for mu, tau in product(mu_grid, taus):
                    spec = CorrelatedChannelSpec(model=model, n=2, mu=float(mu))
                    fam = PhaseFamily(n=2, basis_rotation=rot, phi=0.0, basis_id=basis)
                    devs.append(abs(hss_closed_form(cid, model, mu, tau, 0.0) -
                                    finite_difference_hss(spec, fam, tau, eps)))
                rows.append(_audit_row(f'{cid.name}_phi0', basis, devs, binding=True))

        # printed squeezed-vacuum exponent against quadrature (relative deviation)
        if isinstance(model, SqueezedVacuumOhmic):
            taus = np.linspace(0.05, 3.0, 20)
            lit = gamma_sv_literal(taus, model, warn=False)
            ref = np.array([gamma_sv_quad(t, model) for t in taus])
            rows.append(_audit_row('squeezed_gamma_literal', 'none', np.abs(lit - ref) / np.abs(ref), binding=False))

    return pd.DataFrame(rows, columns=['formula_id', 'basis', 'max_abs_dev', 'grid_points', 'binding', 'passed'])
