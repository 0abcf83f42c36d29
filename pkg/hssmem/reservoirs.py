"""
Reservoir models and their decoherence functions.

Every model maps a dimensionless time τ ≥ 0 to a decoherence function
equal to 1 at τ = 0:

    ColoredDephasing             η(τ),       τ = t/2ν
    SqueezedVacuumOhmic          exp(-γ(τ)), τ = ωt
    ColoredDepolarizing          Λ(τ),       τ = t/2ν
    LorentzianAmplitudeDamping   G(τ),       τ = λt
"""
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as _euler_gamma

from hssmem.errors import DomainError, UnsupportedParameterError
from hssmem.printing import print_warning

# upper bound of the depolarizing memory parameter
THETA_DEP_MAX = 0.25 * np.sqrt(1 + (np.pi / np.log(3)) ** 2)


def damped_oscillator(s, disc):
    """
    Damped oscillator response exp(-s) (sin(ws)/w + cos(ws)), w = √disc.

    The hyperbolic pair sinh/cosh replaces sin/cos for disc < 0,
    and exp(-s)(1 + s) is returned at disc = 0.

    Parameters
    ----------
    s: float or numpy.ndarray
        scaled time (≥ 0)

    disc: float
        squared oscillation frequency

    Returns
    -------
    resp: float or numpy.ndarray
        oscillator response
    """
    s = np.asarray(s, dtype=float)
    if disc >= 0:
        w = np.sqrt(disc)
        # s * sinc(ws/π) = sin(ws)/w, continuous at w = 0
        resp = np.exp(-s) * (s * np.sinc(w * s / np.pi) + np.cos(w * s))
    else:
        k = np.sqrt(-disc)
        ks = k * s
        with np.errstate(invalid='ignore', divide='ignore'):
            sinhc = np.where(ks == 0, 1.0, np.sinh(ks) / np.where(ks == 0, 1.0, ks))
        resp = np.exp(-s) * (s * sinhc + np.cosh(ks))

    return resp[()] if resp.ndim == 0 else resp


def eta(tau, nu):
    """Colored-dephasing function η(τ) = exp(-τ)(sin(τu)/u + cos(τu)), u = √(16ν² - 1)."""
    return damped_oscillator(tau, 16 * nu ** 2 - 1)


def lambda_depol(tau, theta_dep):
    """Colored-depolarizing function Λ(τ) = exp(-τ)(sin(τΩ)/Ω + cos(τΩ)), Ω = √((4θ)² - 1)."""
    return damped_oscillator(tau, (4 * theta_dep) ** 2 - 1)


def g_ad(tau, a):
    """
    Excited-population amplitude G(τ) of the Lorentzian amplitude-damping channel.

    G(τ) = exp(-τ/2)(sinh(κτ/2)/κ + cosh(κτ/2)), κ = √(1 - 2a);
    oscillating with frequency √(2a - 1)/2 for a > 1/2.
    """
    return damped_oscillator(0.5 * np.asarray(tau, dtype=float), 2 * a - 1)


def gamma_fn(x):
    """
    Euler Gamma function on the positive real axis.

    Parameters
    ----------
    x: float
        argument (> 0)

    Returns
    -------
    gx: float
        Γ(x)
    """
    if not x > 0:
        raise UnsupportedParameterError(f"Gamma function evaluated at non-positive argument {x}!")

    return float(_euler_gamma(x))


def cpow_principal(z, w):
    """
    Complex power on the principal branch, exp(w (ln|z| + i arg z)), arg z ∈ (-π, π].

    Parameters
    ----------
    z: complex or numpy.ndarray
        base

    w: complex
        exponent

    Returns
    -------
    zw: complex or numpy.ndarray
        principal value of z**w
    """
    z = np.asarray(z, dtype=np.complex128)
    zero = z == 0
    if np.any(zero):
        if np.real(w) <= 0:
            raise DomainError("Principal complex power of zero with non-positive exponent!")
    with np.errstate(divide='ignore', invalid='ignore'):
        zw = np.where(zero, 0j, np.exp(w * np.log(np.where(zero, 1.0, z))))

    return zw[()] if zw.ndim == 0 else zw


@dataclass(frozen=True)
class ColoredDephasing:
    """Pure dephasing under random telegraph (colored) noise."""
    nu: float = 1.0

    tag: ClassVar[str] = 'dephasing'
    unital: ClassVar[bool] = True

    def __post_init__(self):
        if not (np.isfinite(self.nu) and self.nu > 0):
            raise UnsupportedParameterError(f"Dephasing memory parameter ν must be positive, got {self.nu}!")

    @property
    def oscillatory(self):
        return 16 * self.nu ** 2 > 1

    @property
    def params(self):
        return {'nu': self.nu}

    def decoherence(self, tau):
        return eta(tau, self.nu)


@dataclass(frozen=True)
class SqueezedVacuumOhmic:
    """
    Pure dephasing by a squeezed-vacuum bosonic reservoir with super-Ohmic spectral density
    J(ω) = α ω^s ω_c^(1-s) exp(-ω/ω_c), ω_c = 20 ω.
    """
    alpha: float = 0.5
    s: float = 4.0
    r: float = 0.5
    theta_sq: float = 1.5 * np.pi

    tag: ClassVar[str] = 'squeezed'
    unital: ClassVar[bool] = True
    cutoff_ratio: ClassVar[float] = 20.0

    def __post_init__(self):
        if not self.s > 1:
            raise UnsupportedParameterError(f"Ohmic parameter s must exceed 1 (Γ(s-1) pole), got {self.s}!")
        if not self.alpha >= 0:
            raise UnsupportedParameterError(f"Coupling α must be non-negative, got {self.alpha}!")
        if not self.r >= 0:
            raise UnsupportedParameterError(f"Squeezing r must be non-negative, got {self.r}!")
        if not np.isfinite(self.theta_sq):
            raise UnsupportedParameterError("Squeezing angle must be finite!")

    @property
    def oscillatory(self):
        # super-Ohmic baths overshoot the stationary dephasing
        return self.s > 2

    @property
    def params(self):
        return {'alpha': self.alpha, 's': self.s, 'r': self.r, 'theta_sq': self.theta_sq}

    def decoherence(self, tau):
        return np.exp(-gamma_sv(tau, self))


@dataclass(frozen=True)
class ColoredDepolarizing:
    """Depolarizing channel under colored noise with equal memory parameters on x, y, z."""
    theta_dep: float = 0.5

    tag: ClassVar[str] = 'depolarizing'
    unital: ClassVar[bool] = True

    def __post_init__(self):
        if not 0 <= self.theta_dep <= THETA_DEP_MAX:
            raise UnsupportedParameterError(
                f"Depolarizing parameter θ must lie in [0, {THETA_DEP_MAX:.6f}], got {self.theta_dep}!")

    @property
    def oscillatory(self):
        return (4 * self.theta_dep) ** 2 > 1

    @property
    def params(self):
        return {'theta_dep': self.theta_dep}

    def decoherence(self, tau):
        return lambda_depol(tau, self.theta_dep)


@dataclass(frozen=True)
class LorentzianAmplitudeDamping:
    """Amplitude damping by a reservoir with Lorentzian spectral density, a = γ0/λ."""
    a: float = 4.0

    tag: ClassVar[str] = 'ad'
    unital: ClassVar[bool] = False

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise UnsupportedParameterError(f"Amplitude-damping coupling ratio must be positive, got {self.a}!")

    @property
    def oscillatory(self):
        return self.a > 0.5

    @property
    def params(self):
        return {'a': self.a}

    def decoherence(self, tau):
        return g_ad(tau, self.a)


MODELS = {m.tag: m for m in (ColoredDephasing, SqueezedVacuumOhmic, ColoredDepolarizing, LorentzianAmplitudeDamping)}


def make_model(tag, **params):
    """
    Instantiate a reservoir model from its tag.

    Parameters
    ----------
    tag: str
        model tag (dephasing, squeezed, depolarizing, ad)

    params: dict
        model parameters (missing ones take the default values)

    Returns
    -------
    model: ColoredDephasing, SqueezedVacuumOhmic, ColoredDepolarizing or LorentzianAmplitudeDamping
        validated reservoir model
    """
    try:
        model_cls = MODELS[tag]
    except KeyError:
        raise UnsupportedParameterError(f"Unknown reservoir model '{tag}'!") from None

    return model_cls(**{k: float(v) for k, v in params.items() if v is not None})


def _ohmic_powers(tau, s):
    tau = np.asarray(tau, dtype=float)
    a1 = cpow_principal(1 - 20j * tau, 1 - s)
    a2 = cpow_principal(1 - 40j * tau, 1 - s)

    return a1, a2


def gamma_sv(tau, model):
    """
    Dephasing exponent γ(τ) of the squeezed-vacuum super-Ohmic reservoir.

    Exact evaluation of
    γ(τ) = ∫ J(ω)/ω² (1 - cos ωτ) [cosh 2r - sinh 2r cos(ωτ - θ)] dω:

    γ = α Γ(s-1) {cosh 2r [1 - Re A] + sinh 2r [cos θ/2 - Re(exp(-iθ) A) + Re(exp(-iθ) B)/2]}

    with A = (1 - 20iτ)^(1-s) and B = (1 - 40iτ)^(1-s).

    Parameters
    ----------
    tau: float or numpy.ndarray
        dimensionless time ωt

    model: SqueezedVacuumOhmic
        reservoir parameters

    Returns
    -------
    gam: float or numpy.ndarray
        dephasing exponent
    """
    pref = model.alpha * gamma_fn(model.s - 1)
    a1, a2 = _ohmic_powers(tau, model.s)
    rot = np.exp(-1j * model.theta_sq)
    gam = pref * (np.cosh(2 * model.r) * (1 - np.real(a1)) +
                  np.sinh(2 * model.r) * (0.5 * np.cos(model.theta_sq) - np.real(rot * a1) + 0.5 * np.real(rot * a2)))

    return gam


def gamma_sv_literal(tau, model, warn=True):
    """
    Real part of the squeezed-vacuum exponent as customarily printed,
    with cos θ multiplying the complex sinh 2r bracket.

    Coincides with gamma_sv for θ ∈ {0, π}.

    Parameters
    ----------
    tau: float or numpy.ndarray
        dimensionless time ωt

    model: SqueezedVacuumOhmic
        reservoir parameters

    warn: bool
        report a residual imaginary part above 1e-9 relative

    Returns
    -------
    gam: float or numpy.ndarray
        real part of the printed expression
    """
    pref = 0.5 * model.alpha * gamma_fn(model.s - 1)
    tau = np.asarray(tau, dtype=float)
    a1, a2 = _ohmic_powers(tau, model.s)
    a1c = cpow_principal(1 + 20j * tau, 1 - model.s)
    expr = pref * (np.cosh(2 * model.r) * (-a1 - a1c + 2) +
                   np.sinh(2 * model.r) * np.cos(model.theta_sq) * (-2 * a1 + a2 + 1))

    resid = np.abs(np.imag(expr)) > 1e-9 * np.abs(np.real(expr))
    if warn and np.any(resid):
        print_warning(f"printed squeezed-vacuum exponent has a non-negligible imaginary part "
                      f"at {np.count_nonzero(resid)} time point(s)")

    return np.real(expr)


def gamma_sv_quad(tau, model, epsabs=1e-8, limit=5000):
    """
    Squeezed-vacuum dephasing exponent by adaptive quadrature over ω ∈ (0, 40 ω_c].

    Parameters
    ----------
    tau: float
        dimensionless time ωt

    model: SqueezedVacuumOhmic
        reservoir parameters

    epsabs: float
        absolute tolerance

    limit: int
        maximum number of subintervals

    Returns
    -------
    gam: float
        dephasing exponent
    """
    if tau == 0:
        return 0.0

    wc = model.cutoff_ratio
    c2r = np.cosh(2 * model.r)
    s2r = np.sinh(2 * model.r)

    def integrand(w):
        # J(ω)/ω² (1 - cos ωτ), with 1 - cos x = 2 sin²(x/2)
        spec = model.alpha * w ** (model.s - 2) * wc ** (1 - model.s) * np.exp(-w / wc)
        return spec * 2 * np.sin(0.5 * w * tau) ** 2 * (c2r - s2r * np.cos(w * tau - model.theta_sq))

    gam, _ = quad(integrand, 0, 40 * wc, epsabs=epsabs, epsrel=1e-10, limit=limit)

    return gam
