"""Spin-orbit coupling as a constant SU(2) gauge field on top of a uniform magnetic field.

Units inside the engine are natural (hbar = e = 1).  SI quantities enter only
through :func:`theta_from_material`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import constants

from .su2 import IDENTITY, SIGMA_X, SIGMA_Y, is_hermitian


class SOKind(str, enum.Enum):
    RASHBA = "rashba"
    DRESSELHAUS = "dresselhaus"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class GaugeField2D:
    """Abelian symmetric-gauge potential of flux density ``b_z`` plus constant matrices ``w_x``, ``w_y``.

    The full matrix-valued potential at ``(x, y)`` is
    ``(-b_z*y/2 * I + w_x, b_z*x/2 * I + w_y)``.
    """

    b_z: float
    w_x: np.ndarray
    w_y: np.ndarray

    def __post_init__(self):
        for name in ("w_x", "w_y"):
            m = np.asarray(getattr(self, name), dtype=complex)
            if m.shape != (2, 2) or not is_hermitian(m):
                raise ValueError(f"{name} must be a Hermitian 2x2 matrix")
            object.__setattr__(self, name, m)

    def potential(self, x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
        a_x = -0.5 * self.b_z * y * IDENTITY + self.w_x
        a_y = 0.5 * self.b_z * x * IDENTITY + self.w_y
        return a_x, a_y


def make_field(kind: SOKind | str, theta: float, b_z: float = 0.0) -> GaugeField2D:
    """Gauge field of a spin-orbit interaction with coupling ``theta = 2 m* alpha / hbar``.

    Rashba gives ``w = (-(theta/2) sy, +(theta/2) sx)``; Dresselhaus, whose
    Hamiltonian swaps the roles of ``sx`` and ``sy``, gives
    ``w = (-(theta/2) sx, +(theta/2) sy)``.
    """
    kind = SOKind(kind)
    if theta < 0:
        raise ValueError("theta must be non-negative")
    half = theta / 2
    if kind is SOKind.RASHBA:
        return GaugeField2D(b_z, -half * SIGMA_Y, half * SIGMA_X)
    if kind is SOKind.DRESSELHAUS:
        return GaugeField2D(b_z, -half * SIGMA_X, half * SIGMA_Y)
    zero = np.zeros((2, 2), dtype=complex)
    return GaugeField2D(b_z, zero, zero.copy())


def theta_from_material(m_eff_ratio: float, alpha_hbar: float) -> float:
    """Spin-orbit wavenumber ``theta = 2 m* alpha / hbar`` in 1/m.

    Parameters
    ----------
    m_eff_ratio : float
        Effective mass in units of the electron mass.
    alpha_hbar : float
        Rashba coefficient ``alpha * hbar`` in eV m.
    """
    if m_eff_ratio <= 0 or alpha_hbar < 0:
        raise ValueError("material constants must be positive")
    m_eff = m_eff_ratio * constants.m_e
    return 2.0 * m_eff * alpha_hbar * constants.e / constants.hbar**2


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def curvature(f: GaugeField2D) -> np.ndarray:
    """Field strength ``F_xy = d_x A_y - d_y A_x - i [A_x, A_y]``.

    The rotation of the symmetric-gauge potential is ``b_z`` exactly and the
    Abelian part drops out of the commutator, so the result is position
    independent.
    """
    return f.b_z * IDENTITY - 1j * _commutator(f.w_x, f.w_y)


GaugeShift = Callable[[float, float], tuple[float, float]]


def curvature_fd(
    f: GaugeField2D,
    point,
    h: float,
    gauge_shift: Optional[GaugeShift] = None,
) -> np.ndarray:
    """Field strength from central differences of the matrix-valued potential.

    ``gauge_shift(x, y)`` optionally returns the gradient of a scalar gauge
    function, which is added to the Abelian components.  It leaves the exact
    curvature unchanged but makes the potential nonlinear, so the O(h**2)
    truncation error of the stencil becomes visible.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    x, y = map(float, point)

    def potential(px, py):
        a_x, a_y = f.potential(px, py)
        if gauge_shift is not None:
            gx, gy = gauge_shift(px, py)
            a_x = a_x + gx * IDENTITY
            a_y = a_y + gy * IDENTITY
        return a_x, a_y

    dx_ay = (potential(x + h, y)[1] - potential(x - h, y)[1]) / (2 * h)
    dy_ax = (potential(x, y + h)[0] - potential(x, y - h)[0]) / (2 * h)
    a_x, a_y = potential(x, y)
    return dx_ay - dy_ax - 1j * _commutator(a_x, a_y)
