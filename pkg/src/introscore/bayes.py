"""Posterior over the introversion degree I on [0, 1].

Each modelled factor k is an observed feature value ``F_k`` with Gaussian
likelihood ``N(F_k; slope_k * I + intercept_k, sigma_k**2)``; the factors
are conditionally independent given I.  The prior is uniform on [0, 1] or
a normal truncated to [0, 1].  Since every log-likelihood is quadratic in
I, the log posterior is a concave quadratic on the unit interval whenever
any slope is nonzero (or the prior is normal).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np

from .errors import InputError, MapUndefinedError, NumericError
from .optimize import golden_section_max
from .profile import FEATURE_NAMES, N_FEATURES

FORMAT_VERSION = "1"

# Solo share, conferences, status (inverted rank), organization type, depth.
DEFAULT_FACTOR_IDS = (1, 2, 3, 4, 6)

BOUNDARY_TOL = 1e-9
MIN_ESS = 10.0

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class FactorParams:
    """Likelihood parameters of one feature: mean ``slope*I + intercept``, s.d. ``sigma``."""

    factor_id: int
    slope: float
    intercept: float
    sigma: float

    def __post_init__(self):
        fid = self.factor_id
        if isinstance(fid, bool) or not isinstance(fid, (int, np.integer)) or not 1 <= fid <= N_FEATURES:
            raise InputError(f"factor_id must be an integer in 1..{N_FEATURES}, got {fid!r}")
        label = f"factor {fid} ({FEATURE_NAMES[fid - 1]})"
        for name in ("slope", "intercept", "sigma"):
            v = getattr(self, name)
            if not isinstance(v, (int, float, np.floating, np.integer)) or not math.isfinite(v):
                raise InputError(f"{label}: {name} must be finite, got {v!r}")
        if not self.sigma > 0:
            raise InputError(f"{label}: sigma must be > 0, got {self.sigma!r}")

    @property
    def name(self) -> str:
        return FEATURE_NAMES[self.factor_id - 1]


@dataclass(frozen=True)
class Prior:
    """Prior on I, always supported on [0, 1].

    ``kind`` is ``"uniform"`` (no parameters) or ``"normal"``: a normal with
    mean ``mu`` and s.d. ``sigma`` truncated to the unit interval.
    """

    kind: str = "uniform"
    mu: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.kind == "uniform":
            if self.mu is not None or self.sigma is not None:
                raise InputError("uniform prior takes no parameters")
        elif self.kind == "normal":
            if self.mu is None or not math.isfinite(self.mu) or not 0.0 <= self.mu <= 1.0:
                raise InputError(f"normal prior mu must lie in [0, 1], got {self.mu!r}")
            if self.sigma is None or not math.isfinite(self.sigma) or not self.sigma > 0:
                raise InputError(f"normal prior sigma must be > 0, got {self.sigma!r}")
        else:
            raise InputError(f"unknown prior kind {self.kind!r}")

    @classmethod
    def uniform(cls) -> "Prior":
        return cls("uniform")

    @classmethod
    def normal(cls, mu: float, sigma: float) -> "Prior":
        return cls("normal", float(mu), float(sigma))

    @property
    def is_normal(self) -> bool:
        return self.kind == "normal"

    def _log_mass(self) -> float:
        # log of the normal mass inside [0, 1]
        s = self.sigma * math.sqrt(2.0)
        return math.log(0.5 * (math.erf((1.0 - self.mu) / s) - math.erf(-self.mu / s)))

    def log_density(self, I):
        """Log density of the (truncated) prior; ``-inf`` outside [0, 1]."""
        I = np.asarray(I, dtype=float)
        inside = (I >= 0.0) & (I <= 1.0)
        if self.kind == "uniform":
            out = np.zeros_like(I)
        else:
            z = (I - self.mu) / self.sigma
            out = -0.5 * _LOG_2PI - math.log(self.sigma) - 0.5 * z * z - self._log_mass()
        out = np.where(inside, out, -np.inf)
        return out if out.ndim else float(out)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` values; the normal prior is truncated by rejection."""
        if self.kind == "uniform":
            return rng.uniform(0.0, 1.0, size=n)
        out = np.empty(0)
        while out.size < n:
            need = n - out.size
            draw = rng.normal(self.mu, self.sigma, size=max(2 * need, 64))
            out = np.concatenate([out, draw[(draw >= 0.0) & (draw <= 1.0)]])
        return out[:n]

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "uniform":
            return {"kind": "uniform"}
        return {"kind": "normal", "mu": self.mu, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Prior":
        d = dict(d)
        d.pop("format_version", None)
        try:
            return cls(**d)
        except TypeError as exc:
            raise InputError(f"bad prior: {exc}") from None


Observation = tuple  # (FactorParams, observed value)


def observe(features, factors: Sequence[FactorParams]) -> list[Observation]:
    """Pair each factor with its component of a feature vector."""
    x = np.asarray(features, dtype=float)
    return [(fp, float(x[fp.factor_id - 1])) for fp in factors]


class _Terms(NamedTuple):
    slope: np.ndarray
    intercept: np.ndarray
    sigma: np.ndarray
    value: np.ndarray


def _terms(obs: Sequence[Observation], prior: Prior | None = None) -> _Terms:
    """Stack observations into arrays; a normal prior joins as a pseudo-factor."""
    rows = []
    for fp, value in obs:
        if not isinstance(fp, FactorParams):
            raise InputError(f"expected FactorParams, got {type(fp).__name__}")
        if not math.isfinite(value):
            raise InputError(f"factor {fp.factor_id} ({fp.name}): observed value must be finite, got {value!r}")
        rows.append((fp.slope, fp.intercept, fp.sigma, value))
    if prior is not None and prior.is_normal:
        rows.append((1.0, 0.0, prior.sigma, prior.mu))
    if not rows:
        e = np.empty(0)
        return _Terms(e, e, e, e)
    a = np.array(rows, dtype=float)
    return _Terms(a[:, 0], a[:, 1], a[:, 2], a[:, 3])


def log_likelihood(I, obs: Sequence[Observation]):
    """Sum of Gaussian factor log densities at ``I`` (no support restriction)."""
    t = _terms(obs)
    I = np.asarray(I, dtype=float)
    if t.slope.size == 0:
        out = np.zeros_like(I)
        return out if out.ndim else float(out)
    r = t.value - t.slope * I[..., None] - t.intercept
    ll = -0.5 * np.log(2.0 * np.pi * t.sigma**2) - r * r / (2.0 * t.sigma**2)
    out = ll.sum(axis=-1)
    return out if out.ndim else float(out)


def log_posterior_unnorm(I, obs: Sequence[Observation], prior: Prior):
    """Unnormalized log posterior; ``-inf`` outside [0, 1]."""
    lp = np.asarray(prior.log_density(I)) + np.asarray(log_likelihood(I, obs))
    return lp if lp.ndim else float(lp)


def _log_ratio(t: _Terms, a: float, b: float) -> float:
    """``log p(a) - log p(b)`` for the quadratic part, without cancellation.

    Each factor contributes ``slope*(a-b)*(r_a + r_b) / (2 sigma^2)``, which
    keeps full relative precision as ``a`` and ``b`` approach each other.
    """
    ra = t.value - t.slope * a - t.intercept
    rb = t.value - t.slope * b - t.intercept
    return math.fsum(t.slope * (a - b) * (ra + rb) / (2.0 * t.sigma**2))


def _is_flat(t: _Terms) -> bool:
    return not np.any(t.slope != 0.0)


def _refine_map(t: _Terms, lo: float, hi: float, xtol: float) -> float:
    # Two passes; the second re-anchors the ratio at the first estimate so
    # comparisons near the optimum are not swamped by rounding.
    anchor = 0.5 * (lo + hi)
    x, _ = golden_section_max(lambda u: _log_ratio(t, u, anchor), lo, hi, xtol=max(xtol, 1e-6 * (hi - lo)))
    width = 1e-6 * (hi - lo)
    a, b = max(lo, x - width), min(hi, x + width)
    x, _ = golden_section_max(lambda u: _log_ratio(t, u, x), a, b, xtol=xtol)
    if x - 0.0 <= BOUNDARY_TOL:
        x = 0.0
    elif 1.0 - x <= BOUNDARY_TOL:
        x = 1.0
    return x


def map_numeric(obs: Sequence[Observation], prior: Prior, xtol: float = 1e-12) -> tuple[float, bool]:
    """Maximize the log posterior over [0, 1] by golden-section search.

    Returns ``(I_map, on_boundary)``.  Raises :class:`MapUndefinedError`
    when the posterior is flat (uniform prior and no informative factor).
    """
    t = _terms(obs, prior)
    if _is_flat(t):
        raise MapUndefinedError("flat posterior, MAP undefined")
    x = _refine_map(t, 0.0, 1.0, xtol)
    return x, x in (0.0, 1.0)


@dataclass
class Posterior:
    grid: np.ndarray
    density: np.ndarray
    map: float
    map_on_boundary: bool
    mean: float
    variance: float
    credible_interval_95: tuple[float, float]

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))

    def summary(self) -> dict[str, Any]:
        return {
            "map": None if math.isnan(self.map) else self.map,
            "map_on_boundary": self.map_on_boundary,
            "mean": self.mean,
            "variance": self.variance,
            "credible_interval_95": list(self.credible_interval_95),
        }


def _cumulative_trapezoid(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])


def _inverse_cdf(cdf: np.ndarray, grid: np.ndarray, q: float) -> float:
    j = int(np.searchsorted(cdf, q, side="left"))
    if j == 0:
        return float(grid[0])
    if j >= len(cdf):
        return float(grid[-1])
    c0, c1 = cdf[j - 1], cdf[j]
    frac = 0.0 if c1 == c0 else (q - c0) / (c1 - c0)
    return float(grid[j - 1] + frac * (grid[j] - grid[j - 1]))


def posterior_grid(obs: Sequence[Observation], prior: Prior, n_points: int = 1001, xtol: float = 1e-12) -> Posterior:
    """Posterior density on a uniform grid over [0, 1] with its summaries.

    The density is normalized by the trapezoid rule.  The MAP is the grid
    argmax refined by golden-section search between its grid neighbours; it
    is NaN for a flat posterior.  The credible interval is equal-tailed,
    read off the cumulative trapezoid integral.
    """
    if isinstance(n_points, bool) or not isinstance(n_points, (int, np.integer)) or n_points < 2:
        raise InputError(f"n_points must be an integer >= 2, got {n_points!r}")
    grid = np.linspace(0.0, 1.0, n_points)
    lp = np.asarray(log_posterior_unnorm(grid, obs, prior))
    dens = np.exp(lp - lp.max())
    z = np.trapezoid(dens, grid)
    dens = dens / z
    if not np.all(np.isfinite(dens)):
        raise NumericError("posterior density is not finite on the grid")

    mean = float(np.trapezoid(grid * dens, grid))
    var = float(np.trapezoid((grid - mean) ** 2 * dens, grid))
    cdf = _cumulative_trapezoid(dens, grid)
    cdf /= cdf[-1]
    ci = (_inverse_cdf(cdf, grid, 0.025), _inverse_cdf(cdf, grid, 0.975))

    t = _terms(obs, prior)
    if _is_flat(t):
        map_, on_boundary = math.nan, False
    else:
        j = int(np.argmax(lp))
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, n_points - 1)]
        map_ = _refine_map(t, float(lo), float(hi), xtol)
        on_boundary = map_ in (0.0, 1.0)
    return Posterior(grid, dens, map_, on_boundary, mean, max(var, 0.0), ci)


@dataclass
class MCResult:
    mean: float
    variance: float
    map: float
    mean_se: float
    variance_se: float
    ess: float
    n_samples: int
    degenerate: bool

    def to_dict(self) -> dict[str, Any]:
        d = dict(self.__dict__)
        if math.isnan(d["map"]):
            d["map"] = None
        return d


def posterior_mc(obs: Sequence[Observation], prior: Prior, n_samples: int, seed) -> MCResult:
    """Self-normalized importance sampling with the truncated prior as proposal.

    Weights are the likelihoods, so the estimates are ratios of weighted
    sums; standard errors use the usual delta-method formula
    ``sqrt(sum(wbar_i^2 * (h_i - h_hat)^2))``.  An effective sample size
    below 10 flags the result as degenerate and emits a RuntimeWarning.
    """
    if isinstance(n_samples, bool) or not isinstance(n_samples, (int, np.integer)) or n_samples < 1:
        raise InputError(f"n_samples must be a positive integer, got {n_samples!r}")
    rng = np.random.default_rng(seed)
    draws = prior.sample(int(n_samples), rng)
    ll = np.asarray(log_likelihood(draws, obs), dtype=float).reshape(-1)
    w = np.exp(ll - ll.max())
    w /= w.sum()
    mean = float(w @ draws)
    dev2 = (draws - mean) ** 2
    var = float(w @ dev2)
    mean_se = math.sqrt(float(w**2 @ dev2))
    var_se = math.sqrt(float(w**2 @ (dev2 - var) ** 2))
    ess = float(1.0 / (w @ w))

    t = _terms(obs, prior)
    if _is_flat(t):
        map_ = math.nan
    else:
        lp = ll + np.asarray(prior.log_density(draws))
        order = np.argsort(draws, kind="stable")
        k = int(np.argmax(lp[order]))
        lo = float(draws[order[k - 1]]) if k > 0 else 0.0
        hi = float(draws[order[k + 1]]) if k + 1 < len(order) else 1.0
        map_ = _refine_map(t, lo, hi, 1e-12)

    degenerate = ess < MIN_ESS
    if degenerate:
        warnings.warn(f"importance sampling degenerate: effective sample size {ess:.2f} < {MIN_ESS:g}", RuntimeWarning, stacklevel=2)
    return MCResult(mean, var, map_, mean_se, var_se, ess, int(n_samples), degenerate)


def params_to_dict(factors: Sequence[FactorParams], prior: Prior) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "factors": {
            str(fp.factor_id): {"name": fp.name, "slope": fp.slope, "intercept": fp.intercept, "sigma": fp.sigma}
            for fp in sorted(factors, key=lambda f: f.factor_id)
        },
        "prior": prior.to_dict(),
    }


def params_from_dict(d: dict[str, Any]) -> tuple[list[FactorParams], Prior]:
    """Decode a factor-parameter document; a missing prior means uniform."""
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported factor-params format_version {version!r}")
    raw = d.get("factors")
    if not isinstance(raw, dict):
        raise InputError("factor-params document needs a 'factors' object keyed by factor id")
    factors = []
    for key, entry in raw.items():
        try:
            fid = int(key)
        except ValueError:
            raise InputError(f"factor key {key!r} is not an integer id") from None
        missing = [k for k in ("slope", "intercept", "sigma") if k not in entry]
        if missing:
            raise InputError(f"factor {fid}: missing {missing}")
        factors.append(FactorParams(fid, entry["slope"], entry["intercept"], entry["sigma"]))
    factors.sort(key=lambda f: f.factor_id)
    prior = Prior.from_dict(d["prior"]) if "prior" in d else Prior.uniform()
    return factors, prior
