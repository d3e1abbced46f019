from __future__ import annotations

import logging

import numpy as np

from .errors import SingularSystemError

log = logging.getLogger(__name__)

COND_SOLVE = 1e12
COND_REFINE = 1e4
_REFINE_STEPS = 3
_NULL_RTOL = 1e-11
_NULL_LEAK = 1e-8


def _refine(a: np.ndarray, x: np.ndarray, a_ext: np.ndarray, b_ext: np.ndarray) -> np.ndarray:
    """Iterative refinement against an extended-precision copy of the system.

    Near a narrow resonance the plain solve loses about ``log10(cond)``
    digits, and so does rounding ``a`` to double precision.  Residuals taken
    with ``a_ext, b_ext`` recover both as long as ``cond * eps`` is well
    below one.
    """
    for _ in range(_REFINE_STEPS):
        r = (b_ext - a_ext @ x.astype(np.clongdouble)).astype(complex)
        x = x + np.linalg.solve(a, r)
    return x


def solve_observed(a: np.ndarray, b: np.ndarray, observed, energy=None, exact=None) -> np.ndarray:
    """Solve ``a x = b`` and return ``x[observed]``.

    States decoupled from the leads (bound states in the continuum) make
    ``a`` exactly singular at isolated energies while the observed components
    stay unique.  In that case the minimum-norm least-squares solution is
    returned, provided no null vector of ``a`` touches the observed rows.

    ``exact`` is an optional callable returning ``(a, b)`` in extended
    precision; ill-conditioned (but regular) systems are then refined
    against it.  Without it the refinement uses ``a, b`` themselves.
    """
    cond = np.linalg.cond(a)
    log.debug("E=%.12g cond=%.3e", energy if energy is not None else float("nan"), cond)
    if cond < COND_SOLVE:
        x = np.linalg.solve(a, b)
        if cond > COND_REFINE:
            a_ext, b_ext = exact() if exact is not None else (a, b)
            x = _refine(a, x, np.asarray(a_ext, np.clongdouble), np.asarray(b_ext, np.clongdouble))
        return x[observed]
    _, sv, vh = np.linalg.svd(a)
    null = vh[sv <= sv[0] * _NULL_RTOL].conj().T
    if null.size == 0 or np.abs(null[observed]).max() > _NULL_LEAK:
        raise SingularSystemError(f"singular system at E={energy!r} (cond={cond:.3e})", energy=energy)
    log.warning("decoupled bound state at E=%s (cond=%.3e); using least squares", energy, cond)
    return np.linalg.lstsq(a, b, rcond=_NULL_RTOL)[0][observed]
