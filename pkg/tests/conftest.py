import math

import numpy as np
import pytest

# Four-mode benchmark periods: 4 unstable mode classes, genus 8.
FOURMODE_LX = 2.0 * math.pi / 1.2
FOURMODE_LY = 2.0 * math.pi / 1.4

# Single-mode desk configuration: only (1, 0) is unstable, genus 2.
SINGLE_LX = 2.0 * math.pi / 1.2
SINGLE_LY = 2.0 * math.pi / 2.1


def harmonic_grid(nx, ny, terms):
    """v0 = sum c * exp(2 pi i (n_x ix / nx + n_y iy / ny)) sampled on the grid."""
    ix, iy = np.meshgrid(np.arange(nx), np.arange(ny), indexing="xy")
    v0 = np.zeros((ny, nx), dtype=complex)
    for n_x, n_y, c in terms:
        v0 += c * np.exp(2j * np.pi * (n_x * ix / nx + n_y * iy / ny))
    return v0


def cosine_grid(nx, ny):
    """cos of the first x harmonic: the single-mode Cauchy perturbation."""
    return harmonic_grid(nx, ny, [(1, 0, 0.5), (-1, 0, 0.5)])


@pytest.fixture
def single_mode_sd():
    from ds2aw import build_spectral_data

    return build_spectral_data(SINGLE_LX, SINGLE_LY, 1e-2, cosine_grid(32, 32))


@pytest.fixture
def four_mode_sd():
    from ds2aw import build_spectral_data

    v0 = harmonic_grid(
        32,
        32,
        [
            (1, 0, 0.35), (-1, 0, 0.35),
            (0, 1, 0.25), (0, -1, 0.25),
            (1, 1, 0.15 + 0.1j), (-1, -1, 0.15 - 0.1j),
            (1, -1, 0.12), (-1, 1, 0.08),
        ],
    )
    return build_spectral_data(FOURMODE_LX, FOURMODE_LY, 1e-2, v0)
