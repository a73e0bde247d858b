"""Bounded scalar maximization used by the exponent and fading solvers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-9, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal f on [a, b].

    The endpoints are compared against the interior optimum, so a maximum
    sitting on the boundary is returned exactly.
    """
    a0, b0 = a, b
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = (x, f(x))
    for edge in (a0, b0):
        fe = f(edge)
        if fe > best[1]:
            best = (edge, fe)
    return best


def bracketed_max(f: Callable[[float], float], a: float, b: float,
                  grid: int = 65, tol: float = 1e-9) -> tuple[float, float]:
    """Coarse grid scan followed by golden refinement around the best node.

    Robust to mild non-concavity; exact on boundary maxima.
    """
    xs = np.linspace(a, b, grid)
    vals = [f(float(x)) for x in xs]
    i = int(np.argmax(vals))
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, grid - 1)])
    x, fx = golden_max(f, lo, hi, tol=tol)
    if vals[i] > fx:
        x, fx = float(xs[i]), vals[i]
    return x, fx
