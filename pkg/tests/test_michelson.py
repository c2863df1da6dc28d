"""Misaligned-Michelson interferograms and sub-pixel field shifts."""

import numpy as np
import pytest

from oamsim import (
    ComplexField,
    GeometryError,
    MichelsonConfig,
    SamplingError,
    michelson_interferogram,
    shift_field,
    total_power,
)
from oamsim.fields import mirror_x
from conftest import WAIST

# Fringe period of half a waist: resolvable on the shared 128-cell grid and
# separated far enough from the beam's baseband lobe to demodulate.
TILT = 4 * np.pi / WAIST


def plane_wave(grid):
    return ComplexField(grid, 633e-9, np.ones((grid.n_x, grid.n_y)))


def carrier_bin(intensity, grid):
    """Spatial frequency (rad/m) of the strongest non-DC spectral peak."""
    spec = np.abs(np.fft.fft2(intensity))
    fxx, fyy = grid.freq_meshgrid()
    masked = np.where((fxx > 0), spec, 0.0)
    i, j = np.unravel_index(np.argmax(masked), masked.shape)
    return 2 * np.pi * fxx[i, j], 2 * np.pi * fyy[i, j]


class TestShiftField:
    def test_one_cell_shift_matches_integer_roll(self, lg, grid):
        f = lg(m=1)
        shifted = shift_field(f, grid.dx, 0.0)
        rolled = np.roll(f.amplitude, 1, axis=0)
        inner = (slice(4, -4), slice(4, -4))
        assert np.max(np.abs(shifted.amplitude[inner] - rolled[inner])) < 1e-9

    def test_shift_then_unshift_is_identity(self, lg):
        f = lg(m=1)
        back = shift_field(shift_field(f, 0.3e-3, -0.2e-3), -0.3e-3, 0.2e-3)
        assert np.max(np.abs(back.amplitude - f.amplitude)) < 1e-9

    def test_zero_shift_is_identity(self, lg):
        f = lg()
        assert shift_field(f, 0.0, 0.0) is f

    def test_centroid_moves_by_the_shift(self, lg, grid):
        dx, dy = 0.35e-3, -0.15e-3
        g = shift_field(lg(m=0), dx, dy)
        xx, yy = grid.meshgrid()
        w = g.intensity()
        cx = (w * xx).sum() / w.sum()
        cy = (w * yy).sum() / w.sum()
        assert abs(cx - dx) < 1e-3 * grid.dx
        assert abs(cy - dy) < 1e-3 * grid.dy

    def test_power_conserved(self, lg):
        f = lg(m=2)
        assert abs(total_power(shift_field(f, 0.4e-3, 0.1e-3)) - total_power(f)) < 1e-9

    def test_excessive_shift_rejected(self, lg, grid):
        with pytest.raises(GeometryError):
            shift_field(lg(), 0.26 * grid.extent_x, 0.0)


class TestInterferogram:
    def test_plane_wave_gives_stripes_at_the_tilt_frequency(self, grid):
        k = 2 * np.pi * 16 / grid.extent_x
        pattern = michelson_interferogram(plane_wave(grid), MichelsonConfig(tilt_x=k))
        kx, ky = carrier_bin(pattern, grid)
        assert abs(kx - k) < 2 * np.pi / grid.extent_x
        assert ky == 0.0

    def test_larger_tilt_narrows_the_stripes(self, grid):
        def peak(k):
            pattern = michelson_interferogram(plane_wave(grid), MichelsonConfig(tilt_x=k))
            return carrier_bin(pattern, grid)[0]

        k1 = 2 * np.pi * 8 / grid.extent_x
        k2 = 2 * np.pi * 20 / grid.extent_x
        assert peak(k2) > peak(k1)

    def test_aligned_interferometer_quadruples_the_intensity(self, lg):
        f = lg(m=1)
        pattern = michelson_interferogram(f, MichelsonConfig(tilt_x=0.0))
        assert np.max(np.abs(pattern - 4 * f.intensity())) < 1e-12 * pattern.max()

    def test_intensity_is_non_negative(self, lg):
        cfg = MichelsonConfig(tilt_x=TILT, tilt_y=0.1 * TILT, shear=(0.8 * WAIST, 0.0))
        assert (michelson_interferogram(lg(m=1), cfg) >= 0).all()

    def test_energy_bound(self, lg, grid):
        for ratio in (0.5, 1.0, 2.0):
            cfg = MichelsonConfig(tilt_x=TILT, shear=(0.8 * WAIST, 0.0), arm_ratio=ratio)
            pattern = michelson_interferogram(lg(m=1), cfg)
            assert pattern.sum() * grid.cell_area <= (1 + ratio) ** 2 * 1.0 + 1e-9

    def test_mirror_image_property(self, lg):
        """Opposite charges produce x-mirrored interferograms when the tilt is
        purely horizontal and the shear is horizontal."""
        cfg = MichelsonConfig(tilt_x=TILT, tilt_y=0.0, shear=(0.8 * WAIST, 0.0))
        pattern_plus = michelson_interferogram(lg(m=1), cfg)
        pattern_minus = michelson_interferogram(lg(m=-1), cfg)
        diff = np.max(np.abs(pattern_minus - mirror_x(pattern_plus)))
        assert diff < 1e-9 * pattern_plus.max()

    def test_unresolvable_fringes_rejected(self, lg, grid):
        k = 2 * np.pi / (3 * grid.dx)  # period of three cells
        with pytest.raises(SamplingError):
            michelson_interferogram(lg(), MichelsonConfig(tilt_x=k))

    def test_non_positive_arm_ratio_rejected(self):
        with pytest.raises(ValueError):
            MichelsonConfig(tilt_x=TILT, arm_ratio=0.0)

    def test_tilt_magnitude(self):
        cfg = MichelsonConfig(tilt_x=3.0, tilt_y=4.0)
        assert cfg.tilt_magnitude == 5.0
