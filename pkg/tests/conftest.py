"""Shared fixtures: a session grid and a Laguerre-Gauss field factory."""

import numpy as np
import pytest

from oamsim import GridSpec, LGModeSpec, synthesize_lg

WAIST = 0.5e-3


@pytest.fixture(scope="session")
def grid():
    """128x128 window of 12 waists, wide enough for charges up to |m|+p = 3."""
    return GridSpec(128, 128, 12 * WAIST, 12 * WAIST)


@pytest.fixture(scope="session")
def lg(grid):
    """Factory for unit-power LG fields on the shared grid."""

    def make(m=0, p=0, center=(0.0, 0.0), phase=0.0, wavelength=633e-9, on=None):
        spec = LGModeSpec(
            waist_w0=WAIST,
            radial_index_p=p,
            charge_m=m,
            center=center,
            global_phase=phase,
            wavelength=wavelength,
        )
        return synthesize_lg(spec, on if on is not None else grid)

    return make


def moment_radius(intensity, grid):
    """Beam radius sqrt(2 <r^2>) of an intensity map (w0 for a Gaussian)."""
    xx, yy = grid.meshgrid()
    r2 = xx**2 + yy**2
    return float(np.sqrt(2 * (intensity * r2).sum() / intensity.sum()))
