"""Central finite differences used by the residual engines."""
from __future__ import annotations

import numpy as np

_CBRT_EPS = np.finfo(float).eps ** (1.0 / 3.0)


def fd_step(x: float) -> float:
    return max(1.0, abs(x)) * _CBRT_EPS


def partial(f, x, i: int, h: float | None = None):
    """Central difference of ``f`` along coordinate ``i`` at real point ``x``.

    ``f`` may return a scalar or an array; the result has the same shape.
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = fd_step(x[i])
    xp = x.copy()
    xm = x.copy()
    xp[i] += h
    xm[i] -= h
    # the actual spacing after rounding
    d = xp[i] - xm[i]
    return (np.asarray(f(xp)) - np.asarray(f(xm))) / d


def jacobian(f, x, h: float | None = None) -> np.ndarray:
    """Stack of partials: ``out[..., i] = d f / d x_i``."""
    x = np.asarray(x, dtype=float)
    cols = [partial(f, x, i, h) for i in range(x.size)]
    return np.stack(cols, axis=-1)


def gradient(f, x, h: float | None = None) -> np.ndarray:
    return jacobian(f, x, h)
