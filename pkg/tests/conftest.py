import numpy as np
import pytest

from fanbeam_tt.data import CoeffTable, Sinogram
from fanbeam_tt.fiber import synthesize


def random_bandlimited(nbeta, nalpha, pmax=6, qmax=6, seed=0):
    """Random sinogram with finitely many phi coefficients."""
    rng = np.random.default_rng(seed)
    coeffs = {
        (p, q): complex(rng.standard_normal(), rng.standard_normal())
        for p in range(-pmax, pmax + 1)
        for q in range(-qmax, qmax + 1)
    }
    return synthesize(CoeffTable("B", coeffs, nbeta, nalpha))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def band_sino():
    return random_bandlimited(64, 32)


@pytest.fixture(scope="session")
def random_sino():
    rng = np.random.default_rng(7)
    return Sinogram(rng.standard_normal((64, 32)) + 1j * rng.standard_normal((64, 32)))
