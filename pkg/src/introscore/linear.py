"""Linear introversion score and its least-squares calibration.

The score is a signed weighted sum of the twelve normalized regressors::

    I = a*x1 - b*x2 + g*x3 + d*x4 + e*x5 + z*x6 + h*x7 + t*x8
        - i*x9 - k*x10 - l*x11 - m*x12 + xi

Weights are stored as nonnegative magnitudes; the sign pattern is fixed
(:data:`SIGNS`).  Calibration fits unconstrained coefficients and reports
the terms whose fitted sign contradicts that pattern instead of clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
import scipy.linalg

from .errors import CalibrationError, InputError
from .profile import FEATURE_NAMES, N_FEATURES, check_features

FORMAT_VERSION = "1"

WEIGHT_NAMES = (
    "alpha",
    "beta",
    "gamma",
    "delta",
    "epsilon",
    "zeta",
    "eta",
    "theta",
    "iota",
    "kappa",
    "lambda",
    "mu",
)

SIGNS = np.array([1, -1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1], dtype=float)
SIGNS.flags.writeable = False

POSITIVE_TERMS = tuple(int(i) for i in np.flatnonzero(SIGNS > 0))
NEGATIVE_TERMS = tuple(int(i) for i in np.flatnonzero(SIGNS < 0))

# Condition number of the design above which fit diagnostics raise a flag.
COND_WARN = 1e8


@dataclass
class LinearWeights:
    """Nonnegative weight magnitudes in feature order plus noise scale.

    ``intercept`` is only nonzero for fits made with the intercept switch on.
    """

    magnitudes: np.ndarray
    noise_sigma: float = 0.0
    intercept: float = 0.0

    def __post_init__(self):
        w = np.array(self.magnitudes, dtype=float)
        if w.shape != (N_FEATURES,):
            raise InputError(f"expected {N_FEATURES} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InputError("weight magnitudes must be finite and nonnegative")
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise InputError("noise_sigma must be finite and nonnegative")
        if not math.isfinite(self.intercept):
            raise InputError("intercept must be finite")
        w.flags.writeable = False
        self.magnitudes = w
        self.noise_sigma = float(self.noise_sigma)
        self.intercept = float(self.intercept)

    @property
    def coefficients(self) -> np.ndarray:
        """Signed effective coefficients ``sign_i * w_i``."""
        return SIGNS * self.magnitudes

    @classmethod
    def uniform(cls, value: float = 1.0 / N_FEATURES, **kw) -> "LinearWeights":
        return cls(np.full(N_FEATURES, value), **kw)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"format_version": FORMAT_VERSION}
        d.update({name: float(w) for name, w in zip(WEIGHT_NAMES, self.magnitudes)})
        d["noise_sigma"] = self.noise_sigma
        d["intercept"] = self.intercept
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "LinearWeights":
        version = d.get("format_version")
        if version != FORMAT_VERSION:
            raise InputError(f"unsupported weights format_version {version!r}")
        missing = [n for n in WEIGHT_NAMES if n not in d]
        if missing:
            raise InputError(f"weights document is missing {missing}")
        return cls(
            np.array([d[n] for n in WEIGHT_NAMES], dtype=float),
            noise_sigma=d.get("noise_sigma", 0.0),
            intercept=d.get("intercept", 0.0),
        )


class Contributions(NamedTuple):
    terms: np.ndarray
    total: float

    def as_dict(self) -> dict[str, float]:
        return {name: float(t) for name, t in zip(WEIGHT_NAMES, self.terms)}


def partial_effects(features, weights: LinearWeights) -> Contributions:
    """Signed per-term contributions of one feature vector and their exact sum."""
    x = check_features(features)
    if x.ndim != 1:
        raise InputError("partial_effects takes a single feature vector")
    terms = SIGNS * weights.magnitudes * x
    return Contributions(terms, math.fsum(terms) + weights.intercept)


def score(features, weights: LinearWeights, rng: np.random.Generator | None = None):
    """Linear introversion score of one feature vector (or each row of a matrix).

    The sum is compensated (``math.fsum``) so it does not depend on term
    order.  Noise is added only when ``weights.noise_sigma > 0`` *and* a
    generator is passed; otherwise the score is deterministic.  Scores are
    not clamped to [0, 1].
    """
    x = check_features(features)
    draw = rng is not None and weights.noise_sigma > 0
    if x.ndim == 1:
        s = partial_effects(x, weights).total
        return s + rng.normal(0.0, weights.noise_sigma) if draw else s
    out = np.array([partial_effects(row, weights).total for row in x])
    if draw:
        out = out + rng.normal(0.0, weights.noise_sigma, size=len(out))
    return out


def out_of_range(s: float) -> bool:
    return not 0.0 <= s <= 1.0


@dataclass
class FitDiagnostics:
    r_squared: float
    residual_sigma: float
    sign_violations: list[int]
    condition_warning: bool
    coefficients: np.ndarray = field(repr=False)
    condition_number: float = float("nan")
    n: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "r_squared": self.r_squared,
            "residual_sigma": self.residual_sigma,
            "sign_violations": [
                {"index": i, "weight": WEIGHT_NAMES[i - 1], "feature": FEATURE_NAMES[i - 1]}
                for i in self.sign_violations
            ],
            "condition_warning": self.condition_warning,
            "condition_number": self.condition_number,
            "coefficients": {n: float(c) for n, c in zip(WEIGHT_NAMES, self.coefficients)},
            "n": self.n,
        }


def _dependent_columns(design: np.ndarray, rank: int, names: list[str]) -> list[str]:
    _, _, piv = scipy.linalg.qr(design, mode="economic", pivoting=True)
    return [names[j] for j in sorted(piv[rank:])]


def fit_ols(features, labels, intercept: bool = False) -> tuple[LinearWeights, FitDiagnostics]:
    """Fit the twelve coefficients by ordinary least squares.

    Returns weights holding ``|c_i|`` and diagnostics holding the signed
    coefficients ``c_i``; indices (1-based) where ``sign(c_i)`` disagrees
    with :data:`SIGNS` are listed in ``sign_violations``.

    Raises :class:`CalibrationError` when there are fewer rows than
    parameters plus one, or when the design is rank deficient.
    """
    X = check_features(features)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise InputError("features must be (n, 12) and labels (n,)")
    if not np.all(np.isfinite(y)):
        raise InputError("labels must be finite")

    names = list(WEIGHT_NAMES)
    design = X
    if intercept:
        design = np.column_stack([X, np.ones(len(X))])
        names.append("intercept")
    n, p = design.shape
    if n < p + 1:
        raise CalibrationError(f"underdetermined: {n} rows but at least {p + 1} are required for {p} coefficients")
    rank = np.linalg.matrix_rank(design)
    if rank < p:
        dep = _dependent_columns(design, rank, names)
        raise CalibrationError(f"rank-deficient design: rank {rank} < {p}; linearly dependent column(s): {dep}")

    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rss = float(resid @ resid)
    centered = y - y.mean()
    tss = float(centered @ centered)
    if tss > 0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss == 0 else -math.inf
    cond = float(np.linalg.cond(design))

    c = coef[:N_FEATURES]
    violations = [i + 1 for i in range(N_FEATURES) if c[i] != 0 and np.sign(c[i]) != SIGNS[i]]
    sigma = math.sqrt(rss / (n - p))
    weights = LinearWeights(np.abs(c), noise_sigma=sigma, intercept=float(coef[-1]) if intercept else 0.0)
    diag = FitDiagnostics(
        r_squared=r2,
        residual_sigma=sigma,
        sign_violations=violations,
        condition_warning=cond > COND_WARN,
        coefficients=c.copy(),
        condition_number=cond,
        n=n,
    )
    return weights, diag
