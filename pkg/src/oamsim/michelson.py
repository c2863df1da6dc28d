"""Misaligned Michelson interferometer producing fork interferograms.

Arm tilt puts a fringe carrier on the output; lateral shear overlaps the
side of a doughnut beam with its center, which is what exposes the fringe
bifurcations at a phase singularity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, SamplingError
from .fields import ComplexField

__all__ = ["MichelsonConfig", "shift_field", "michelson_interferogram"]


@dataclass(frozen=True)
class MichelsonConfig:
    """Tilt carrier, lateral shear and arm phase/amplitude of the readout.

    tilt_x, tilt_y are the carrier spatial frequencies (rad/m) of the moving
    arm; shear is the lateral displacement between the two arm outputs.
    """

    tilt_x: float
    tilt_y: float = 0.0
    shear: tuple = (0.0, 0.0)
    arm_phase: float = 0.0
    arm_ratio: float = 1.0

    def __post_init__(self):
        if self.arm_ratio <= 0:
            raise ValueError("arm amplitude ratio must be positive")

    @property
    def tilt_magnitude(self) -> float:
        return float(np.hypot(self.tilt_x, self.tilt_y))


def shift_field(f: ComplexField, dx: float, dy: float) -> ComplexField:
    """Sub-pixel lateral shift via a Fourier phase ramp.

    shift(f, dx, dy)(x, y) = f(x - dx, y - dy); the shift is periodic, so
    it is only meaningful for fields that decay before the window edge.
    """
    if abs(dx) > 0.25 * f.grid.extent_x or abs(dy) > 0.25 * f.grid.extent_y:
        raise GeometryError(
            f"shift ({dx:g}, {dy:g}) m exceeds 25% of the grid extent"
        )
    if dx == 0 and dy == 0:
        return f
    fxx, fyy = f.grid.freq_meshgrid()
    ramp = np.exp(-2j * np.pi * (fxx * dx + fyy * dy))
    return f.with_amplitude(np.fft.ifft2(np.fft.fft2(f.amplitude) * ramp))


def michelson_interferogram(f: ComplexField, cfg: MichelsonConfig) -> np.ndarray:
    """Single-port output intensity of the sheared, tilted interferometer.

    I(x,y) = |E(x + sx/2, y + sy/2)
              + arm_ratio exp(i (tilt_x x + tilt_y y + arm_phase))
                * E(x - sx/2, y - sy/2)|^2

    Returns a non-negative real array on the field's grid.
    """
    tilt = cfg.tilt_magnitude
    if tilt > 0:
        period = 2 * np.pi / tilt
        if period < 4 * max(f.grid.dx, f.grid.dy):
            raise SamplingError(
                f"fringe period {period:g} m spans fewer than 4 grid cells"
            )
    sx, sy = cfg.shear
    arm1 = shift_field(f, -sx / 2, -sy / 2).amplitude
    arm2 = shift_field(f, +sx / 2, +sy / 2).amplitude
    if cfg.tilt_x == 0 and cfg.tilt_y == 0 and cfg.arm_phase == 0:
        carrier = complex(cfg.arm_ratio)
    else:
        xx, yy = f.grid.meshgrid()
        carrier = cfg.arm_ratio * np.exp(
            1j * (cfg.tilt_x * xx + cfg.tilt_y * yy + cfg.arm_phase)
        )
    return np.abs(arm1 + carrier * arm2) ** 2
