import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def dag(a):
    return a.conj().T


def random_hermitian(rng, d, scale=1.0):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + dag(g)) / 2
    return scale * h / np.linalg.norm(h, 2)


def random_density(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ dag(g)
    return rho / np.trace(rho).real


def random_unit_observable(rng, d):
    """Random Hermitian with operator norm exactly 1."""
    return random_hermitian(rng, d, scale=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
