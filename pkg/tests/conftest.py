import numpy as np
import pytest

from bloch_braids import ModelSpec

PI4 = np.pi / 4


@pytest.fixture(scope="session")
def fig1_dimer():
    """Two-band reference family: alpha=1, beta=1.5, delta=0.3, m=1."""
    def make(gamma, m=1, beta=1.5):
        return ModelSpec.dimer(1.0, beta, 0.3, gamma, m)
    return make


@pytest.fixture(scope="session")
def fig3_trimer():
    """Three-band reference family: alpha=1, delta=0.3, v=0.7, m=1."""
    def make(beta, gamma, m=1):
        return ModelSpec.trimer(1.0, beta, 0.3, gamma, 0.7, m)
    return make


def random_dimer(rng):
    return ModelSpec.dimer(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0),
                           rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0),
                           int(rng.integers(1, 4)))


def random_trimer(rng):
    return ModelSpec.trimer(rng.uniform(0.2, 2.0), rng.uniform(-2.0, 2.0),
                            rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0),
                            rng.uniform(-1.0, 1.0), int(rng.integers(1, 4)))
