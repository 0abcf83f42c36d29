import numpy as np
import pytest

from hssmem.reservoirs import ColoredDephasing, ColoredDepolarizing, LorentzianAmplitudeDamping, SqueezedVacuumOhmic


@pytest.fixture
def dephasing():
    return ColoredDephasing(nu=1.0)


@pytest.fixture
def squeezed():
    return SqueezedVacuumOhmic(alpha=0.5, s=4.0, r=0.5, theta_sq=1.5 * np.pi)


@pytest.fixture
def depolarizing():
    return ColoredDepolarizing(theta_dep=0.5)


@pytest.fixture
def amplitude_damping():
    return LorentzianAmplitudeDamping(a=4.0)


@pytest.fixture
def unital_models(dephasing, squeezed, depolarizing):
    return [dephasing, squeezed, depolarizing]


@pytest.fixture
def all_models(unital_models, amplitude_damping):
    return unital_models + [amplitude_damping]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))

    return 0.5 * (a + a.conj().T)
