"""Thin-crystal stimulated idler generation and charge/energy bookkeeping.

The idler is modeled at the crystal plane by the pointwise product
E_i = gain * E_pump * conj(E_aux): the auxiliary beam seeds the signal mode
and the idler inherits the conjugated auxiliary profile, so azimuthal
charges obey m_i = m_p - m_s.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .fields import ComplexField

__all__ = [
    "CrystalConfig",
    "stimulated_idler",
    "expected_idler_charge",
    "idler_wavelength",
]


@dataclass(frozen=True)
class CrystalConfig:
    """Effective nonlinear coupling of the thin crystal.

    gain absorbs the nonlinear coefficient, pump-independent factors and the
    interaction length; crystal_length is carried as metadata only.
    """

    gain: float = 1.0
    crystal_length: float = 3e-3

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError("gain must be positive")
        if self.crystal_length <= 0:
            raise ValueError("crystal length must be positive")


def idler_wavelength(lambda_p: float, lambda_s: float) -> float:
    """Idler wavelength from energy conservation, 1/l_i = 1/l_p - 1/l_s."""
    if lambda_p <= 0 or lambda_s <= 0:
        raise ValueError("wavelengths must be positive")
    if lambda_p >= lambda_s:
        raise ValueError(
            f"pump wavelength ({lambda_p:g} m) must be shorter than the "
            f"signal wavelength ({lambda_s:g} m)"
        )
    return 1.0 / (1.0 / lambda_p - 1.0 / lambda_s)


def expected_idler_charge(m_p: int, m_s: int) -> int:
    """Topological charge the conservation law m_p = m_s + m_i predicts."""
    return m_p - m_s


def stimulated_idler(
    pump: ComplexField, aux: ComplexField, cfg: CrystalConfig = CrystalConfig()
) -> ComplexField:
    """Idler field stimulated by an auxiliary beam seeding the signal mode.

    Spontaneous emission is neglected; the output amplitude is the
    equal-plane product gain * pump * conj(aux) at the idler wavelength.
    """
    if pump.grid != aux.grid:
        raise GeometryError("pump and auxiliary fields live on different grids")
    lam_i = idler_wavelength(pump.wavelength, aux.wavelength)
    amp = cfg.gain * pump.amplitude * np.conj(aux.amplitude)
    return ComplexField(pump.grid, lam_i, amp)
