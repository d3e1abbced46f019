"""Exact 2x2 spin algebra.

All matrices are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype
``complex128``; spinors are arrays of shape ``(2,)``.  Nothing here allocates
more than a handful of 2x2 arrays, so the functions are cheap enough to call
inside sweeps.
"""

from __future__ import annotations

import numpy as np

from .errors import BranchAmbiguityError, NotUnitaryError

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMAS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

_AXES = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

# Components smaller than this are treated as zero when fixing the phase gauge.
_GAUGE_TOL = 1e-10


def pauli(axis: str) -> np.ndarray:
    """Return a fresh copy of the Pauli matrix for ``axis`` in ``{'x', 'y', 'z'}``."""
    try:
        return _AXES[axis.lower()].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected 'x', 'y' or 'z'") from None


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(m, dagger(m), rtol=0.0, atol=atol))


def is_unitary(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.allclose(dagger(m) @ m, IDENTITY, rtol=0.0, atol=atol))


def pauli_dot(a) -> np.ndarray:
    """Return ``a . sigma`` for a real 3-vector ``a``."""
    ax, ay, az = a
    return ax * SIGMA_X + ay * SIGMA_Y + az * SIGMA_Z


def pauli_components(m: np.ndarray) -> np.ndarray:
    """Decompose ``m = c0*I + cx*sx + cy*sy + cz*sz``.

    Returns the complex coefficients ``(c0, cx, cy, cz)``; they are real when
    ``m`` is Hermitian.
    """
    m = np.asarray(m, dtype=complex)
    return np.array([np.trace(m) / 2] + [np.trace(m @ s) / 2 for s in SIGMAS])


def exp_i_pauli(a) -> np.ndarray:
    """Closed-form ``exp(i a . sigma) = cos|a| I + i sin|a| (a/|a|) . sigma``."""
    a = np.asarray(a, dtype=float)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return IDENTITY.copy()
    return np.cos(norm) * IDENTITY + 1j * (np.sin(norm) / norm) * pauli_dot(a)


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalise ``v`` and rotate its global phase so the first nonzero entry is real positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    for c in v:
        if abs(c) > _GAUGE_TOL:
            return v * (abs(c) / c)
    return v


def _wrap_phase(phase: float, tol: float = 1e-12) -> float:
    # keep the result in (-pi, pi]
    if phase <= -np.pi + tol:
        return float(np.pi)
    return float(phase)


def eig_unitary2(u: np.ndarray, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a 2x2 unitary matrix.

    The decomposition goes through the traceless Hermitian generator of the
    SU(2) part of ``u``, so the eigenvectors come out orthonormal even when
    the two eigenphases are close.

    Parameters
    ----------
    u : (2, 2) complex array
        Unitary matrix.
    atol : float
        Tolerance of the unitarity check.

    Returns
    -------
    phases : (2,) float array
        Eigenphases in ``(-pi, pi]``, larger phase first.  Ties are broken by
        the larger modulus of the eigenvector's first component.
    vectors : (2, 2) complex array
        Orthonormal eigenvectors as columns, ``u @ vectors[:, k] ==
        exp(1j * phases[k]) * vectors[:, k]``.  Each column's first nonzero
        component is real and positive.

    Raises
    ------
    NotUnitaryError
        If ``u`` is not unitary within ``atol``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, atol):
        raise NotUnitaryError("eig_unitary2 requires a unitary 2x2 matrix")
    v = u / np.sqrt(np.linalg.det(u))
    generator = (v - dagger(v)) / 2j
    generator = (generator + dagger(generator)) / 2
    _, vecs = np.linalg.eigh(generator)
    vectors = [fix_phase(vecs[:, k]) for k in range(2)]
    phases = [_wrap_phase(np.angle(np.vdot(w, u @ w))) for w in vectors]
    order = sorted(range(2), key=lambda k: (phases[k], abs(vectors[k][0])), reverse=True)
    return np.array([phases[k] for k in order]), np.column_stack([vectors[k] for k in order])


def log_su2(u: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Principal logarithm on SU(2): the real 3-vector ``a`` with ``exp(i a . sigma) = u``.

    ``|a|`` lies in ``[0, pi)``.  The antipode ``-I`` has no unique logarithm
    and raises :class:`BranchAmbiguityError`.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, atol) or abs(np.linalg.det(u) - 1.0) > atol:
        raise NotUnitaryError("log_su2 requires a special unitary 2x2 matrix")
    if np.allclose(u, -IDENTITY, rtol=0.0, atol=atol):
        raise BranchAmbiguityError("log_su2 is ambiguous at -I")
    a0 = np.trace(u).real / 2
    b = np.array([np.trace(u @ s).imag / 2 for s in SIGMAS])
    sin_norm = float(np.linalg.norm(b))
    if sin_norm == 0.0:
        return np.zeros(3)
    return np.arctan2(sin_norm, a0) * b / sin_norm


def bch_loop_phase(theta_l: float) -> np.ndarray:
    """Phase factor for circling an ``l x l`` square in a constant Rashba field.

    ``theta_l`` is the dimensionless product of coupling and edge length.  The
    result is ``U_II^dagger U_I`` with

    * path I:  ``exp(i theta_l sx / 2) exp(-i theta_l sy / 2)``
    * path II: ``exp(-i theta_l sy / 2) exp(i theta_l sx / 2)``

    evaluated exactly.  Its logarithm approaches ``(0, 0, theta_l**2 / 2)`` for
    small ``theta_l``; reversing the orientation flips the sign.
    """
    half = theta_l / 2
    ex = exp_i_pauli((half, 0.0, 0.0))
    ey = exp_i_pauli((0.0, -half, 0.0))
    path_i = ex @ ey
    path_ii = ey @ ex
    return dagger(path_ii) @ path_i
