"""Estimate likelihood parameters and the prior from a labelled cohort.

Each factor is fitted independently by a simple regression of the feature
on the label, mirroring the conditional independence of the likelihood.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Sequence

import numpy as np

from .bayes import DEFAULT_FACTOR_IDS, FactorParams, Prior
from .errors import CalibrationError, InputError
from .profile import N_FEATURES, check_features

SIGMA_FLOOR = 1e-6


@dataclass
class LabeledCohort:
    """Feature rows with ground-truth introversion labels.

    ``check_range=False`` admits features outside [0, 1]; only unclamped
    synthetic cohorts need it.
    """

    features: np.ndarray
    labels: np.ndarray
    ids: list[str] | None = None
    provenance: str = "external"
    check_range: InitVar[bool] = True

    def __post_init__(self, check_range):
        X = np.asarray(self.features, dtype=float).reshape(-1, N_FEATURES)
        self.features = check_features(X) if check_range else X
        self.labels = np.asarray(self.labels, dtype=float).reshape(-1)
        if len(self.labels) != len(self.features):
            raise InputError(f"{len(self.features)} feature rows but {len(self.labels)} labels")
        if not np.all(np.isfinite(self.labels)) or np.any((self.labels < 0) | (self.labels > 1)):
            raise InputError("labels must lie in [0, 1]")
        if self.ids is None:
            self.ids = [f"row-{i + 1}" for i in range(len(self.labels))]
        self.ids = list(self.ids)
        if len(self.ids) != len(self.labels):
            raise InputError("ids and labels differ in length")

    def __len__(self):
        return len(self.labels)


def fit_factor_params(
    cohort: LabeledCohort,
    factor_ids: Sequence[int] = DEFAULT_FACTOR_IDS,
    sigma_floor: float = SIGMA_FLOOR,
) -> list[FactorParams]:
    """Regress each listed feature on the label.

    ``slope = cov(F, I) / var(I)``, ``intercept = mean(F) - slope*mean(I)``
    and ``sigma`` is the residual s.d. (population form), floored at
    ``sigma_floor`` so noise-free cohorts still give valid parameters.
    """
    n = len(cohort)
    if n < 3:
        raise CalibrationError(f"cohort too small: {n} rows, need at least 3")
    I = cohort.labels
    Ic = I - I.mean()
    var_i = float(Ic @ Ic) / n
    if var_i == 0:
        raise CalibrationError("degenerate regressor: all labels are equal")
    out = []
    for fid in factor_ids:
        if not 1 <= fid <= N_FEATURES:
            raise InputError(f"factor id {fid} outside 1..{N_FEATURES}")
        F = cohort.features[:, fid - 1]
        slope = float(Ic @ (F - F.mean())) / n / var_i
        intercept = float(F.mean() - slope * I.mean())
        resid = F - (slope * I + intercept)
        sigma = max(math.sqrt(float(resid @ resid) / n), sigma_floor)
        out.append(FactorParams(int(fid), slope, intercept, sigma))
    return out


def fit_prior(labels, kind: str = "uniform") -> Prior:
    """Uniform prior as is, or a normal prior from the sample mean and s.d. (n-1)."""
    y = np.asarray(labels, dtype=float).reshape(-1)
    if y.size == 0:
        raise InputError("no labels to fit a prior")
    if kind == "uniform":
        return Prior.uniform()
    if kind != "normal":
        raise InputError(f"unknown prior kind {kind!r}")
    if y.size < 2 or np.all(y == y[0]):
        raise CalibrationError("degenerate labels: a normal prior needs at least two distinct values")
    mu = float(np.clip(y.mean(), 0.0, 1.0))
    return Prior.normal(mu, float(y.std(ddof=1)))
