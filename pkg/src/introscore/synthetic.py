"""Synthetic cohorts with known introversion, and recovery scoring.

Cohorts are drawn from the generative reading of the Bayesian model:
``I ~ prior`` then ``F_k = slope_k * I + intercept_k + N(0, sigma_k^2)``
for each modelled factor.  Unmodelled features are filled with a neutral
constant.  Estimators are judged by how well they recover the labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .bayes import (
    DEFAULT_FACTOR_IDS,
    FactorParams,
    Prior,
    map_numeric,
    observe,
    params_from_dict,
    params_to_dict,
    posterior_grid,
    posterior_mc,
)
from .calibration import LabeledCohort
from .errors import InputError
from .profile import N_FEATURES
from .quadratic import map_closed_form, posterior_moments, quad_coeffs

# slope, intercept per default factor; means stay inside [0.15, 0.85]
_DEFAULT_LINES = {
    1: (0.6, 0.2),
    2: (-0.5, 0.7),
    3: (0.5, 0.25),
    4: (0.7, 0.15),
    6: (0.6, 0.2),
}


def default_factor_params(sigma: float = 0.05) -> list[FactorParams]:
    """Synthetic parameters for the five default factors, all with s.d. ``sigma``."""
    return [FactorParams(fid, *_DEFAULT_LINES[fid], sigma) for fid in DEFAULT_FACTOR_IDS]


@dataclass
class GenConfig:
    n: int
    prior: Prior = field(default_factory=Prior.uniform)
    factor_params: list[FactorParams] = field(default_factory=default_factor_params)
    seed: int = 0
    clamp_features: bool = True
    neutral_value: float = 0.5

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise InputError(f"n must be a nonnegative integer, got {self.n!r}")
        ids = [fp.factor_id for fp in self.factor_params]
        if len(set(ids)) != len(ids):
            raise InputError(f"duplicate factor ids in {ids}")
        if not 0.0 <= self.neutral_value <= 1.0:
            raise InputError("neutral_value must lie in [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        d = params_to_dict(self.factor_params, self.prior)
        d.update(n=int(self.n), seed=self.seed, clamp_features=self.clamp_features, neutral_value=self.neutral_value)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenConfig":
        factors, prior = params_from_dict(d)
        if "n" not in d:
            raise InputError("generator config needs 'n'")
        return cls(
            n=d["n"],
            prior=prior,
            factor_params=factors,
            seed=d.get("seed", 0),
            clamp_features=d.get("clamp_features", True),
            neutral_value=d.get("neutral_value", 0.5),
        )


def generate_cohort(cfg: GenConfig) -> LabeledCohort:
    """Draw a labelled cohort; identical configs give identical cohorts.

    Labels and each factor use their own child stream of the seed, so a
    factor's noise does not depend on which other factors are listed.
    """
    streams = np.random.SeedSequence(cfg.seed).spawn(1 + N_FEATURES)
    n = int(cfg.n)
    labels = cfg.prior.sample(n, np.random.default_rng(streams[0]))
    X = np.full((n, N_FEATURES), float(cfg.neutral_value))
    for fp in cfg.factor_params:
        rng = np.random.default_rng(streams[fp.factor_id])
        X[:, fp.factor_id - 1] = fp.slope * labels + fp.intercept + rng.normal(0.0, fp.sigma, size=n)
    if cfg.clamp_features:
        np.clip(X, 0.0, 1.0, out=X)
    width = len(str(max(n, 1)))
    ids = [f"syn-{i + 1:0{width}d}" for i in range(n)]
    return LabeledCohort(X, labels, ids, provenance="synthetic", check_range=cfg.clamp_features)


# --- estimators -------------------------------------------------------------


def _rowwise(fn: Callable) -> Callable:
    def run(X, factors, prior, **kw):
        return np.array([fn(observe(x, factors), prior, **kw) for x in X], dtype=float)

    return run


def _posterior_mean(obs, prior):
    return posterior_moments(quad_coeffs(obs, prior))[0]


def _grid_mean(obs, prior, n_points=1001):
    return posterior_grid(obs, prior, n_points).mean


def _grid_map(obs, prior, n_points=1001):
    return posterior_grid(obs, prior, n_points).map


def _closed_form(obs, prior):
    return map_closed_form(quad_coeffs(obs, prior))[0]


def _numeric(obs, prior):
    return map_numeric(obs, prior)[0]


def _mc_mean(X, factors, prior, *, seed, n_samples=10_000):
    seeds = np.random.SeedSequence(seed).spawn(len(X))
    return np.array([posterior_mc(observe(x, factors), prior, n_samples, s).mean for x, s in zip(X, seeds)])


ESTIMATORS: dict[str, Callable] = {
    "posterior_mean": _rowwise(_posterior_mean),
    "grid_mean": _rowwise(_grid_mean),
    "grid_map": _rowwise(_grid_map),
    "map_closed_form": _rowwise(_closed_form),
    "map_numeric": _rowwise(_numeric),
    "mc_mean": _mc_mean,
}
RANDOMIZED_ESTIMATORS = frozenset({"mc_mean"})


def estimate_cohort(features, factors: Sequence[FactorParams], prior: Prior, method: str = "posterior_mean", **kw) -> np.ndarray:
    """Apply a named estimator to every row of an ``(n, 12)`` feature matrix."""
    try:
        fn = ESTIMATORS[method]
    except KeyError:
        raise InputError(f"unknown estimator {method!r}; choose from {sorted(ESTIMATORS)}") from None
    if method in RANDOMIZED_ESTIMATORS and kw.get("seed") is None:
        raise InputError(f"estimator {method!r} needs a seed")
    X = np.asarray(features, dtype=float).reshape(-1, N_FEATURES)
    return fn(X, list(factors), prior, **kw)


@dataclass
class RecoveryReport:
    rmse: float
    pearson_r: float | None
    mean_bias: float
    n: int
    estimator_name: str

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def recovery_report(cohort, estimates, estimator_name: str) -> RecoveryReport:
    """RMSE, Pearson correlation and mean bias (estimate - label).

    ``cohort`` is a :class:`LabeledCohort` or a plain label array.
    ``pearson_r`` is ``None`` when fewer than two rows are present or
    either side has zero variance.
    """
    labels = cohort.labels if isinstance(cohort, LabeledCohort) else np.asarray(cohort, dtype=float)
    est = np.asarray(estimates, dtype=float).reshape(-1)
    if est.shape != labels.shape:
        raise InputError(f"{len(est)} estimates for {len(labels)} labels")
    n = len(labels)
    if n == 0:
        raise InputError("empty cohort")
    err = est - labels
    rmse = math.sqrt(float(err @ err) / n)
    r = None
    if n >= 2:
        ec, lc = est - est.mean(), labels - labels.mean()
        denom = math.sqrt(float(ec @ ec) * float(lc @ lc))
        if denom > 0:
            r = float(np.clip((ec @ lc) / denom, -1.0, 1.0))
    return RecoveryReport(rmse, r, float(err.mean()), n, estimator_name)
