"""Four-site tight-binding square interferometer with spin-orbit links and an Aharonov-Bohm flux.

Sites are numbered ::

    2 (0,l) --top--> 3 (l,l)
      ^                ^
     left            right
      |                |
    0 (0,0) -bottom-> 1 (l,0)

The input lead is attached to site 0.  The output lead sits at site 3
(symmetric circuit) or site 1 (asymmetric circuit).  Both leads are ideal
semi-infinite chains with hopping ``t`` and no spin-orbit coupling.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ._linalg import solve_observed
from .errors import DegenerateBasisError, EnergyRangeError
from .gauge import SOKind
from .records import TransmissionRecord
from .su2 import IDENTITY, dagger, eig_unitary2, exp_i_pauli, fix_phase

log = logging.getLogger(__name__)

# bottom, left, top, right as (from, to) site pairs
LINKS = ((0, 1), (0, 2), (2, 3), (1, 3))
INPUT_SITE = 0

# Fractions of 2*pi*phi_b carried by (bottom, left, top, right); this is the
# symmetric-gauge split with e^{-i pi phi_b} on top and e^{+i pi phi_b} on right.
SYMMETRIC_GAUGE = (0.0, 0.0, -0.5, 0.5)

_DEGENERACY_TOL = 1e-8


class Geometry(str, enum.Enum):
    SYMMETRIC = "sym"
    ASYMMETRIC = "asym"


@dataclass(frozen=True)
class SquareDevice:
    """Parameters of the square interferometer.

    ``ab_weights`` distributes the Aharonov-Bohm phase over the links; any
    choice with ``bottom + right - top - left == 1`` encloses the same flux
    ``phi_b`` and is gauge equivalent.
    """

    t: float = 1.0
    theta_l: float = 0.0
    phi_b: float = 0.0
    so_kind: SOKind = SOKind.RASHBA
    geometry: Geometry = Geometry.SYMMETRIC
    ab_weights: tuple[float, float, float, float] = SYMMETRIC_GAUGE

    def __post_init__(self):
        object.__setattr__(self, "so_kind", SOKind(self.so_kind))
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        object.__setattr__(self, "ab_weights", tuple(float(w) for w in self.ab_weights))
        if self.t <= 0:
            raise ValueError("hopping t must be positive")
        if self.theta_l < 0:
            raise ValueError("theta_l must be non-negative")
        b, l, top, r = self.ab_weights
        if abs(b + r - top - l - 1.0) > 1e-12:
            raise ValueError("ab_weights must satisfy bottom + right - top - left == 1")

    @property
    def output_site(self) -> int:
        return 3 if self.geometry is Geometry.SYMMETRIC else 1


def _spin_factors(d: SquareDevice) -> tuple[np.ndarray, np.ndarray]:
    """Spin rotations for a hop along +x and along +y."""
    half = d.theta_l / 2
    if d.so_kind is SOKind.RASHBA:
        return exp_i_pauli((0.0, -half, 0.0)), exp_i_pauli((half, 0.0, 0.0))
    if d.so_kind is SOKind.DRESSELHAUS:
        return exp_i_pauli((-half, 0.0, 0.0)), exp_i_pauli((0.0, half, 0.0))
    return IDENTITY.copy(), IDENTITY.copy()


def link_matrices(d: SquareDevice) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Hopping blocks ``H[to, from]`` for the bottom, left, top and right links."""
    hop_x, hop_y = _spin_factors(d)
    spins = (hop_x, hop_y, hop_x, hop_y)
    return tuple(
        -d.t * np.exp(2j * np.pi * d.phi_b * w) * s for s, w in zip(spins, d.ab_weights)
    )


def hamiltonian(d: SquareDevice) -> np.ndarray:
    """8x8 Hamiltonian of the isolated square, spin fastest (site-major ordering)."""
    h = np.zeros((8, 8), dtype=complex)
    for (i, j), m in zip(LINKS, link_matrices(d)):
        h[2 * j:2 * j + 2, 2 * i:2 * i + 2] = m
        h[2 * i:2 * i + 2, 2 * j:2 * j + 2] = dagger(m)
    return h


def loop_phase(d: SquareDevice) -> np.ndarray:
    """Holonomy for circling the square counter-clockwise from site 0.

    Path 0 -> 1 -> 3 -> 2 -> 0; eigenvalues ``exp(2 pi i (phi_b +- phi_R))``.
    """
    bottom, left, top, right = (m / -d.t for m in link_matrices(d))
    return dagger(left) @ dagger(top) @ right @ bottom


def phi_r_square(theta_l: float) -> float:
    """Spin-orbit (Aharonov-Casher) phase of the square in units of 2*pi."""
    c = 1.0 - 2.0 * np.sin(theta_l / 2) ** 4
    return float(np.arccos(np.clip(c, -1.0, 1.0)) / (2 * np.pi))


def _tilted_from_holonomy(u: np.ndarray, phi_b: float, phi_r: float):
    phases, vecs = eig_unitary2(u)
    z = np.exp(1j * phases)
    if abs(z[0] - z[1]) < _DEGENERACY_TOL:
        raise DegenerateBasisError("loop phase factor is degenerate; tilted basis undefined")
    target = np.exp(2j * np.pi * (phi_b + phi_r))
    k_up = int(np.argmin(np.abs(z - target)))
    return vecs[:, k_up], vecs[:, 1 - k_up]


def tilted_basis_square(d: SquareDevice) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors ``(up~, down~)`` of :func:`loop_phase`.

    ``up~`` carries the eigenvalue ``exp(2 pi i (phi_b + phi_R))``.

    Raises
    ------
    DegenerateBasisError
        When both eigenvalues coincide (``theta_l`` a multiple of ``pi``).
    """
    return _tilted_from_holonomy(loop_phase(d), d.phi_b, phi_r_square(d.theta_l))


def _transport_to_output(d: SquareDevice) -> np.ndarray:
    bottom, _, _, right = (m / -d.t for m in link_matrices(d))
    return right @ bottom if d.geometry is Geometry.SYMMETRIC else bottom


def contact_bases(d: SquareDevice) -> tuple[np.ndarray, np.ndarray, bool]:
    """Tilted spin bases at the input and output contacts.

    The input basis is :func:`tilted_basis_square`.  The output basis is the
    same pair carried along the lower arm to the output site, which makes it
    the eigenbasis of the holonomy based at that site (with the same
    eigenvalue labels).  When the tilted basis is degenerate both contacts
    fall back to sigma_z and the returned flag is ``True``.

    Returns
    -------
    basis_in, basis_out : (2, 2) arrays with spinors as columns
    fallback : bool
    """
    try:
        up, down = tilted_basis_square(d)
    except DegenerateBasisError:
        return IDENTITY.copy(), IDENTITY.copy(), True
    p = _transport_to_output(d)
    basis_in = np.column_stack([up, down])
    basis_out = np.column_stack([fix_phase(p @ up), fix_phase(p @ down)])
    return basis_in, basis_out, False


def _check_band(d: SquareDevice, energy: float) -> None:
    if not abs(energy) < 2 * d.t:
        raise EnergyRangeError(f"energy {energy!r} is outside the lead band (-2t, 2t)")


def self_energy(d: SquareDevice, energy: float) -> tuple[np.ndarray, np.ndarray]:
    """Retarded lead self-energy ``(E - i sqrt(4t^2 - E^2)) / 2`` at the input and output sites."""
    _check_band(d, energy)
    sigma = (energy - 1j * np.sqrt(4 * d.t**2 - energy**2)) / 2
    return sigma * IDENTITY, sigma * IDENTITY


def _contact_slices(d: SquareDevice):
    i, o = INPUT_SITE, d.output_site
    return slice(2 * i, 2 * i + 2), slice(2 * o, 2 * o + 2)


def contact_greens_function(d: SquareDevice, energy: float) -> np.ndarray:
    """Block of ``(E - H - Sigma)^-1`` on the contact sites, ordered (input up, input down, output up, output down)."""
    sig_in, sig_out = self_energy(d, energy)
    s_in, s_out = _contact_slices(d)
    m = energy * np.eye(8) - hamiltonian(d)
    m[s_in, s_in] -= sig_in
    m[s_out, s_out] -= sig_out
    idx = np.r_[np.arange(8)[s_in], np.arange(8)[s_out]]
    rhs = np.eye(8, dtype=complex)[:, idx]
    return solve_observed(m, rhs, idx, energy)


def transmission_amplitude(d: SquareDevice, energy: float) -> np.ndarray:
    """``sqrt(4t^2 - E^2) G_{out,in}`` in the sigma_z basis."""
    g = contact_greens_function(d, energy)
    return np.sqrt(4 * d.t**2 - energy**2) * g[2:4, 0:2]


def transmission(
    d: SquareDevice,
    energy: float,
    basis: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> TransmissionRecord:
    """Spin-resolved transmission from the input lead to the output lead.

    With ``basis=None`` the tilted contact bases of :func:`contact_bases` are
    used.  An explicit ``(up, down)`` pair is applied unchanged at both
    contacts, which is the natural choice for a lab-frame basis like sigma_z.
    """
    amp = transmission_amplitude(d, energy)
    if basis is None:
        b_in, b_out, fallback = contact_bases(d)
    else:
        b_in = np.column_stack([np.asarray(v, dtype=complex) for v in basis])
        b_out, fallback = b_in, False
    return TransmissionRecord(
        energy=float(energy),
        t_matrix=dagger(b_out) @ amp @ b_in,
        basis=b_in,
        out_basis=b_out,
        basis_fallback=fallback,
    )


def full_s_matrix(d: SquareDevice, energy: float) -> np.ndarray:
    """Two-terminal spin-resolved S-matrix ``-1 + i Gamma^1/2 G Gamma^1/2``.

    Ordering is (input up, input down, output up, output down) in the sigma_z
    basis; the off-diagonal blocks are transmission amplitudes.
    """
    g = contact_greens_function(d, energy)
    gamma = np.sqrt(4 * d.t**2 - energy**2)
    return -np.eye(4) + 1j * gamma * g


def transmission_spectrum(d: SquareDevice, energies, basis=None) -> list[TransmissionRecord]:
    return [transmission(d, e, basis) for e in energies]


def energy_grid(t: float = 1.0, n: int = 400) -> np.ndarray:
    """Uniform grid on ``[-1.99 t, 1.99 t]``, avoiding the band edges."""
    return np.linspace(-1.99 * t, 1.99 * t, n)


def design_filter_square() -> tuple[float, float]:
    """Flux and link angle of the perfect square filter.

    Returns ``(phi_b, theta_l) = (1/4, 2 arcsin 2**-0.25)``: the Aharonov-Bohm
    and spin-orbit phases are both pi/2, so up~ interferes destructively.
    """
    phi_b = 0.25
    theta_l = 2 * np.arcsin(2**-0.25)
    root = brentq(lambda x: phi_r_square(x) - 0.25, 0.0, np.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if abs(root - theta_l) > 1e-10 or abs(phi_r_square(theta_l) - 0.25) > 1e-12:
        raise ArithmeticError("closed-form filter angle failed the root check")
    log.debug("square filter: phi_b=%s theta_l=%s (root %s)", phi_b, theta_l, root)
    return phi_b, float(theta_l)
