"""Shared fixtures: models, grids, and one converged soliton profile.

The converged profile is expensive enough (a few hundred descent
iterations) to share session-wide; every consumer treats it as
read-only.
"""

import numpy as np
import pytest

import beamsolitons as bs

FLAGSHIP_DELTA = 1e-3


@pytest.fixture(scope="session")
def smooth_model():
    return bs.bridge_smooth()


@pytest.fixture(scope="session")
def piecewise_model():
    return bs.bridge_piecewise()


@pytest.fixture(scope="session")
def main_grid():
    return bs.make_grid(64.0, 2048)


@pytest.fixture(scope="session")
def scan_grid():
    return bs.make_grid(40.0, 1024)


@pytest.fixture(scope="session")
def coarse_grid():
    # Same box as main_grid at a quarter of the resolution; the profile
    # is band-limited well below the coarse Nyquist, so minimization
    # lands on the same certificate values much faster.
    return bs.make_grid(64.0, 512)


@pytest.fixture(scope="session")
def small_grid():
    return bs.make_grid(20.0, 256)


@pytest.fixture(scope="session")
def soliton(smooth_model, main_grid):
    return bs.minimize(bs.MinimizeConfig(delta=FLAGSHIP_DELTA), smooth_model, main_grid)


@pytest.fixture(scope="session")
def coarse_soliton(smooth_model, coarse_grid):
    return bs.minimize(bs.MinimizeConfig(delta=FLAGSHIP_DELTA), smooth_model, coarse_grid)


def random_state(grid, seed, modes=40, amplitude=1.0):
    """Smooth random band-limited state with a 1/k^2 spectral envelope."""
    rng = np.random.Generator(np.random.Philox(seed))
    n = grid.n_points

    def field():
        coeffs = (rng.standard_normal(modes) + 1j * rng.standard_normal(modes))
        coeffs /= np.arange(1, modes + 1) ** 2
        spectrum = np.zeros(n // 2 + 1, dtype=complex)
        spectrum[1 : modes + 1] = coeffs
        return np.fft.irfft(spectrum, n) * n * amplitude / modes

    return bs.FieldState(field(), field(), grid)
