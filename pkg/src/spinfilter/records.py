from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPIN_LABELS = ("up", "down")


@dataclass(frozen=True, eq=False)
class TransmissionRecord:
    """Spin-resolved transmission at one energy.

    ``t_matrix[tau, lam]`` is the amplitude for entering in spin state ``lam``
    of ``basis`` and leaving in spin state ``tau`` of ``out_basis``.  Bases are
    stored as 2x2 arrays whose columns are the (up~, down~) spinors.
    ``basis_fallback`` is set when the tilted basis was undefined and the
    sigma_z basis was used instead.
    """

    energy: float
    t_matrix: np.ndarray
    basis: np.ndarray
    out_basis: np.ndarray
    basis_fallback: bool = False

    @property
    def T(self) -> np.ndarray:
        return np.abs(self.t_matrix) ** 2

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        """``(T_uu, T_ud, T_du, T_dd)`` with the first index the outgoing spin."""
        t = self.T
        return float(t[0, 0]), float(t[0, 1]), float(t[1, 0]), float(t[1, 1])

    @property
    def up_output(self) -> float:
        """Total probability of leaving with spin up~, summed over both inputs."""
        return float(self.T[0].sum())

    @property
    def down_output(self) -> float:
        return float(self.T[1].sum())
