"""Closed-form MAP from the quadratic expansion of the log posterior.

With Gaussian factors whose means are linear in I, the negative log
posterior (up to a constant) is ``A1*I**2 + A2*I + A3`` where, summing over
factors with slope ``w``, intercept ``b``, s.d. ``s`` and observation ``F``::

    A1 =  sum(w**2 / (2 s**2))
    A2 = -sum(w * (F - b) / s**2)
    A3 =  sum((F - b)**2 / (2 s**2))

A normal prior enters as one more factor (w=1, b=0, F=mu, s=sigma), so the
closed form stays exact for both priors.  The minimizer ``-A2 / (2 A1)`` is
clamped to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bayes import Observation, Prior, _terms
from .errors import MapUndefinedError

# Quadrature over the region where the log density is within this many
# nats of its maximum; the neglected mass is below exp(-40).
_SPAN_NATS = 40.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


@dataclass(frozen=True)
class QuadraticCoeffs:
    a1: float
    a2: float
    a3: float
    prior_included: bool = False

    def __call__(self, I):
        return self.a1 * I * I + self.a2 * I + self.a3

    def to_dict(self):
        return {"a1": self.a1, "a2": self.a2, "a3": self.a3, "prior_included": self.prior_included}


def quad_coeffs(obs: Sequence[Observation], prior: Prior) -> QuadraticCoeffs:
    t = _terms(obs, prior)
    if t.slope.size == 0:
        return QuadraticCoeffs(0.0, 0.0, 0.0, False)
    prec = 1.0 / t.sigma**2
    resid = t.value - t.intercept
    return QuadraticCoeffs(
        a1=math.fsum(0.5 * t.slope**2 * prec),
        a2=-math.fsum(t.slope * resid * prec),
        a3=math.fsum(0.5 * resid**2 * prec),
        prior_included=prior.is_normal,
    )


def map_closed_form(coeffs: QuadraticCoeffs) -> tuple[float, bool]:
    """Return ``(I_star, on_boundary)``: the vertex ``-A2/(2 A1)`` clamped to [0, 1]."""
    if not coeffs.a1 > 0:
        raise MapUndefinedError("flat quadratic, MAP undefined")
    u = -coeffs.a2 / (2.0 * coeffs.a1)
    if u < 0.0:
        return 0.0, True
    if u > 1.0:
        return 1.0, True
    return u, False


def posterior_moments(coeffs: QuadraticCoeffs) -> tuple[float, float]:
    """Exact posterior mean and variance on [0, 1].

    The posterior density is ``exp(-(A1 I^2 + A2 I))`` restricted to the
    unit interval (a truncated normal, or a truncated exponential / uniform
    when ``A1 = 0``).  Moments are integrated by Gauss-Legendre quadrature
    over the sub-interval carrying all but ``exp(-40)`` of the mass, which
    stays accurate for truncation far into either tail.
    """
    a1, a2 = coeffs.a1, coeffs.a2
    if a1 > 0:
        v = -a2 / (2.0 * a1)
        m = min(max(v, 0.0), 1.0)
        r = math.sqrt(_SPAN_NATS / a1 + (m - v) ** 2)
        lo, hi = max(0.0, v - r), min(1.0, v + r)
    elif a2 == 0:
        m, lo, hi = 0.5, 0.0, 1.0
    elif a2 > 0:
        m, lo, hi = 0.0, 0.0, min(1.0, _SPAN_NATS / a2)
    else:
        m, lo, hi = 1.0, max(0.0, 1.0 + _SPAN_NATS / a2), 1.0
    # q is shifted so that its minimum over [0, 1] (at m) is zero
    x =0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
    q = a1 * (x - m) * (x + m) + a2 * (x - m)
    w = _GL_WEIGHTS * np.exp(-q)
    w /= w.sum()
    mean = float(w @ x)
    var = float(w @ (x - mean) ** 2)
    return min(max(mean, 0.0), 1.0), var
