"""One-dimensional quantum ring with Rashba coupling, threaded by a flux, between two ideal leads.

Lengths are in units of the ring radius R and energies in units of
hbar^2 / (2 m* R^2), so a lead electron of wavenumber k and a ring electron of
angular wavenumber k_phi share the energy E = k^2 = k_phi^2.

The left lead (x < 0) is attached at phi = pi, the right lead at phi = 0.
The upper arm runs over phi in [0, pi] and the lower arm over [pi, 2 pi].
Both arms use the same global eigenfunctions, so the lower arm meets the
right lead at phi = 2 pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from ._linalg import solve_observed
from .errors import EnergyRangeError
from .gauge import theta_from_material
from .records import TransmissionRecord
from .su2 import SIGMA_X, SIGMA_Y, dagger, exp_i_pauli

# (direction, spin branch) order of the four modes in each arm
MODES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def phi_r_ring(theta_r: float) -> float:
    """Aharonov-Casher phase ``(sqrt(1 + theta_r^2) - 1) / 2`` in units of 2*pi."""
    if theta_r < 0:
        raise ValueError("theta_r must be non-negative")
    # written to avoid cancellation for small couplings
    return float(theta_r**2 / (2 * (np.sqrt(1 + theta_r**2) + 1)))


@dataclass(frozen=True)
class RingDevice:
    theta_r: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        if self.theta_r < 0:
            raise ValueError("theta_r must be non-negative")

    @property
    def phi_r(self) -> float:
        return phi_r_ring(self.theta_r)

    @property
    def beta(self) -> float:
        """Tilt angle ``arctan(theta_r)`` of the spin quantisation axis."""
        return float(np.arctan(self.theta_r))


@dataclass(frozen=True)
class RingMode:
    """Eigenmode label: angular wavenumber, propagation direction and spin branch (each +1 or -1)."""

    k_phi: float
    direction: int = 1
    spin_branch: int = 1

    def __post_init__(self):
        if self.k_phi < 0 or self.direction not in (1, -1) or self.spin_branch not in (1, -1):
            raise ValueError("invalid ring mode")

    @property
    def energy(self) -> float:
        return self.k_phi**2


def sigma_r(phi: float) -> np.ndarray:
    return np.cos(phi) * SIGMA_X + np.sin(phi) * SIGMA_Y


def sigma_phi(phi: float) -> np.ndarray:
    return np.cos(phi) * SIGMA_Y - np.sin(phi) * SIGMA_X


def _chi(spin: int) -> np.ndarray:
    return np.array([1, 0], dtype=complex) if spin > 0 else np.array([0, 1], dtype=complex)


def _spin_frame(beta: float, phi: float) -> np.ndarray:
    """``exp(-i beta sigma_phi / 2)``."""
    return exp_i_pauli(-0.5 * beta * np.array([-np.sin(phi), np.cos(phi), 0.0]))


def ring_eigenfunction(d: RingDevice, mode: RingMode, phi: float) -> np.ndarray:
    """Exact ring eigenfunction ``Psi_{direction, spin}(phi)`` of energy ``k_phi**2``.

    Applying the generalized momentum ``-i d/dphi - phi_b - (theta_r/2) sigma_r``
    to it gives ``direction * k_phi`` times the same spinor.
    """
    s = mode.spin_branch
    winding = mode.direction * mode.k_phi + d.phi_b + s * d.phi_r
    return np.exp(1j * winding * phi) * (_spin_frame(d.beta, phi) @ _chi(s))


def tilted_basis_ring(d: RingDevice) -> tuple[np.ndarray, np.ndarray]:
    """Spinors ``exp(-i beta sigma_y / 2) chi_+-``; real, orthonormal."""
    frame = exp_i_pauli((0.0, -d.beta / 2, 0.0))
    return frame[:, 0].real.astype(complex), frame[:, 1].real.astype(complex)


def loop_phase_ring(d: RingDevice) -> np.ndarray:
    """Spin holonomy of one counter-clockwise turn, without the kinetic phase ``e^{2 pi i k_phi}``.

    Maps the tilted spinor ``chi~_+-`` at phi = 0 to ``exp(2 pi i (phi_b +- phi_R)) chi~_+-``.
    """
    up, down = tilted_basis_ring(d)
    z_up = np.exp(2j * np.pi * (d.phi_b + d.phi_r))
    z_down = np.exp(2j * np.pi * (d.phi_b - d.phi_r))
    return z_up * np.outer(up, up.conj()) + z_down * np.outer(down, down.conj())


def _half_turn_phase(x, n: int, pi):
    """``exp(i pi x n)`` for integer ``n``, reducing ``x n`` mod 2 (exactly) before exponentiating."""
    return np.exp(1j * pi * np.fmod(x * n, 2))


def _sigma_y_rotation(angle, dtype) -> np.ndarray:
    """``exp(-i angle sigma_y / 2)``, a real rotation matrix."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=dtype)


def _mode_block(k, phi_b, phi_r, beta, half_turns: int, dtype, pi) -> np.ndarray:
    """2x4 matrix whose columns are the four mode spinors at ``phi = half_turns * pi``.

    Same values as :func:`ring_eigenfunction` (sigma_phi is ``-+ sigma_y``
    there), but the winding phase is split into its kinetic, flux and
    spin-orbit factors, each reduced exactly, and every step runs in
    ``dtype``.
    """
    frame = _sigma_y_rotation(beta * (-1) ** half_turns, dtype)
    ab = _half_turn_phase(phi_b, half_turns, pi)
    cols = []
    for di, s in MODES:
        phase = _half_turn_phase(di * k, half_turns, pi) * ab * _half_turn_phase(s * phi_r, half_turns, pi)
        cols.append(phase * frame[:, 0 if s > 0 else 1])
    return np.column_stack(cols).astype(dtype)


def matching_system(d: RingDevice, energy: float, dtype=np.complex128) -> tuple[np.ndarray, np.ndarray]:
    """Linear system ``A x = B a`` of the two junctions.

    Unknowns ``x`` (12): outgoing lead amplitudes (left up~, left down~,
    right up~, right down~), then the four upper-arm and four lower-arm mode
    amplitudes in :data:`MODES` order.  Inputs ``a`` (4): incoming lead
    amplitudes in the same lead order.  A lead carries
    ``a e^{-ikx} + b e^{ikx}`` with x the distance from its junction.

    Rows: spinor continuity lead = upper arm = lower arm at each junction
    (8 equations) and vanishing total outward generalized momentum at each
    junction (4 equations).

    ``dtype=np.clongdouble`` assembles the same system in extended
    precision; :func:`ring_s_matrix` uses it to refine solutions near narrow
    resonances.
    """
    if not energy > 0:
        raise EnergyRangeError(f"ring energy must be positive, got {energy!r}")
    real = np.longdouble if dtype == np.clongdouble else np.float64
    theta = real(d.theta_r)
    k = np.sqrt(real(energy))
    phi_b = real(d.phi_b)
    phi_r = theta**2 / (2 * (np.sqrt(1 + theta**2) + 1))
    beta = np.arctan(theta)
    pi = np.arccos(real(-1))

    lead = _sigma_y_rotation(beta, dtype)
    # generalized momentum of each mode divided by k
    momentum = np.diag([float(di) for di, _ in MODES]).astype(dtype)
    m0, m_pi, m_2pi = (_mode_block(k, phi_b, phi_r, beta, n, dtype, pi) for n in (0, 1, 2))

    a = np.zeros((12, 12), dtype=dtype)
    b = np.zeros((12, 4), dtype=dtype)
    left, right = slice(0, 2), slice(2, 4)
    upper, lower = slice(4, 8), slice(8, 12)

    # right junction, phi = 0 (upper) and phi = 2 pi (lower)
    a[0:2, right], a[0:2, upper], b[0:2, right] = lead, -m0, -lead
    a[2:4, right], a[2:4, lower], b[2:4, right] = lead, -m_2pi, -lead
    a[4:6, right] = lead
    a[4:6, upper] = m0 @ momentum
    a[4:6, lower] = -m_2pi @ momentum
    b[4:6, right] = lead

    # left junction, phi = pi; outward is -phi on the upper arm and +phi on the lower one
    a[6:8, left], a[6:8, upper], b[6:8, left] = lead, -m_pi, -lead
    a[8:10, left], a[8:10, lower], b[8:10, left] = lead, -m_pi, -lead
    a[10:12, left] = lead
    a[10:12, upper] = -m_pi @ momentum
    a[10:12, lower] = m_pi @ momentum
    b[10:12, left] = lead
    return a, b


def ring_s_matrix(d: RingDevice, energy: float) -> np.ndarray:
    """4x4 S-matrix in the tilted basis, ordered (left up~, left down~, right up~, right down~).

    At energies where a bound state of the ring decouples from the leads
    (integer k_phi) the matching matrix is rank deficient although the
    S-matrix is not; :func:`solve_observed` handles that case.

    Raises
    ------
    EnergyRangeError
        For ``energy <= 0``.
    SingularSystemError
        If the system is singular in a way that leaves the S-matrix undetermined.
    """
    a, b = matching_system(d, energy)
    return solve_observed(a, b, slice(0, 4), energy, exact=lambda: matching_system(d, energy, np.clongdouble))


def ring_transmission(d: RingDevice, energy: float) -> TransmissionRecord:
    """Left-to-right block of :func:`ring_s_matrix` as a :class:`TransmissionRecord`."""
    s = ring_s_matrix(d, energy)
    up, down = tilted_basis_ring(d)
    basis = np.column_stack([up, down])
    return TransmissionRecord(energy=float(energy), t_matrix=s[2:4, 0:2], basis=basis, out_basis=basis)


def unitarity_residual(s: np.ndarray) -> float:
    return float(np.abs(dagger(s) @ s - np.eye(s.shape[0])).max())


def energy_grid(n: int = 400, e_min: float = 0.01, e_max: float = 100.0) -> np.ndarray:
    return np.linspace(e_min, e_max, n)


def _theta_for_phi_r(phi_r: float) -> float:
    return float(np.sqrt((2 * phi_r + 1) ** 2 - 1))


def design_filter_ring(m: int = 0, n: int = 0) -> tuple[float, float]:
    """Flux ``1/4 + m`` and coupling ``theta_r`` with ``phi_r_ring(theta_r) = 1/4 + n``.

    ``n = 0, 1, 2`` give ``theta_r = sqrt(5)/2, sqrt(45)/2, sqrt(117)/2``.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative integers")
    target = 0.25 + n
    theta_r = _theta_for_phi_r(target)
    if abs(phi_r_ring(theta_r) - target) > 1e-12:
        raise ArithmeticError("ring filter coupling failed the root check")
    return 0.25 + m, theta_r


def material_parameters(n: int, m_eff_ratio: float, alpha_hbar: float, m: int = 0) -> tuple[float, float]:
    """Ring radius (m) and field (T) realising :func:`design_filter_ring` ``(m, n)`` in a material.

    ``B_z`` uses the flux quantum h/e.
    """
    phi_b, theta_r = design_filter_ring(m, n)
    radius = theta_r / theta_from_material(m_eff_ratio, alpha_hbar)
    flux_quantum = constants.h / constants.e
    b_z = phi_b * flux_quantum / (np.pi * radius**2)
    return float(radius), float(b_z)

