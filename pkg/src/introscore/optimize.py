"""Golden-section search for 1-D unimodal maximization."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-12, maxiter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x, fx)``.  The bracket is shrunk until its width is at most
    ``xtol``; the endpoints are compared against the final interior point
    so that a maximizer sitting on the boundary is returned exactly.
    """
    if not lo <= hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    a, b = lo, hi
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    it = 0
    while b - a > xtol and it < maxiter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    best = (f(x), x)
    for edge in (lo, hi):
        fe = f(edge)
        if fe >= best[0]:
            best = (fe, edge)
    return best[1], best[0]
