"""Raw scientometric observables and their normalization into regressors.

A :class:`RawProfile` carries the twelve observables of one scientist in
their natural units.  :func:`normalize` maps it onto a length-12 feature
vector in [0, 1] whose order is shared by every other module::

    idx  name               definition
    1    solo_share         PS / PT
    2    conf_rate          min(C, cap) / cap
    3    rank_inverse       1 - R
    4    org_type           A
    5    encyclopedic       D
    6    depth              G
    7    duration           min(T, cap) / cap
    8    citation_inverse   1 - F_c
    9    pub_rate           min(R_p, cap) / cap
    10   ext_funding        F_e
    11   interdisc_collab   C_d
    12   network_activity   N_s

Indices in the table are 1-based, as used for factor ids; feature arrays
themselves are ordinary 0-based numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, NamedTuple, Sequence

import numpy as np

from .errors import InputError

N_FEATURES = 12

FEATURE_NAMES = (
    "solo_share",
    "conf_rate",
    "rank_inverse",
    "org_type",
    "encyclopedic",
    "depth",
    "duration",
    "citation_inverse",
    "pub_rate",
    "ext_funding",
    "interdisc_collab",
    "network_activity",
)

# Column order of the profile CSV / JSON record schema.
PROFILE_FIELDS = (
    "id",
    "solo_pubs",
    "total_pubs",
    "conf_per_year",
    "job_rating",
    "org_type",
    "encyclopedic",
    "depth",
    "avg_duration_months",
    "citation_freq",
    "pub_rate",
    "ext_funding",
    "interdisc_collab",
    "network_activity",
    "true_introversion",
)

_UNIT_FIELDS = (
    "job_rating",
    "encyclopedic",
    "depth",
    "citation_freq",
    "ext_funding",
    "interdisc_collab",
    "network_activity",
)
_RATE_FIELDS = ("conf_per_year", "avg_duration_months", "pub_rate")


@dataclass(frozen=True)
class RawProfile:
    """Observables for one scientist, in natural units."""

    id: str
    solo_pubs: int
    total_pubs: int
    conf_per_year: float
    job_rating: float
    org_type: int
    encyclopedic: float
    depth: float
    avg_duration_months: float
    citation_freq: float
    pub_rate: float
    ext_funding: float
    interdisc_collab: float
    network_activity: float
    true_introversion: float | None = None

    def to_record(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> "RawProfile":
        """Build a profile from a decoded JSON record (missing label allowed)."""
        names = {f.name for f in fields(cls)}
        unknown = set(record) - names
        if unknown:
            raise InputError(f"unknown profile field(s): {sorted(unknown)}")
        missing = [n for n in PROFILE_FIELDS[:-1] if n not in record]
        if missing:
            raise InputError(f"missing profile field(s): {missing}")
        return cls(**record)


@dataclass(frozen=True)
class NormConfig:
    """Saturation caps for the three unbounded observables."""

    cap_conf_per_year: float = 10.0
    cap_duration_months: float = 60.0
    cap_pub_rate: float = 20.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InputError(f"NormConfig.{f.name} must be a positive finite number, got {v!r}")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NormConfig":
        d = {k: v for k, v in d.items() if k != "format_version"}
        try:
            return cls(**d)
        except TypeError as exc:
            raise InputError(f"bad norm config: {exc}") from None


class Violation(NamedTuple):
    field: str
    constraint: str

    def __str__(self):
        return f"{self.field}: {self.constraint}"


def _is_number(v) -> bool:
    return isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)


def validate(raw: RawProfile) -> list[Violation]:
    """Check every invariant of ``raw``; an empty list means the profile is valid.

    All violated constraints are reported, not just the first.
    """
    out: list[Violation] = []

    def bad(name, constraint):
        out.append(Violation(name, constraint))

    for name in ("solo_pubs", "total_pubs"):
        v = getattr(raw, name)
        if not _is_number(v) or not math.isfinite(v):
            bad(name, "must be a finite number")
        elif float(v) != int(v):
            bad(name, "must be an integer")
    counts_ok = not any(v.field in ("solo_pubs", "total_pubs") for v in out)
    if counts_ok:
        if raw.total_pubs < 1:
            bad("total_pubs", "total_pubs ≥ 1")
        if raw.solo_pubs < 0:
            bad("solo_pubs", "solo_pubs ≥ 0")
        if raw.solo_pubs > raw.total_pubs:
            bad("solo_pubs", "solo_pubs ≤ total_pubs")

    if not _is_number(raw.org_type) or raw.org_type not in (0, 1):
        bad("org_type", "org_type ∈ {0, 1}")

    for name in _UNIT_FIELDS:
        v = getattr(raw, name)
        if not _is_number(v) or not math.isfinite(v):
            bad(name, "must be a finite number")
        elif not 0.0 <= v <= 1.0:
            bad(name, f"{name} ∈ [0, 1]")

    for name in _RATE_FIELDS:
        v = getattr(raw, name)
        if not _is_number(v) or not math.isfinite(v):
            bad(name, "must be a finite number")
        elif v < 0:
            bad(name, f"{name} ≥ 0")

    label = raw.true_introversion
    if label is not None:
        if not _is_number(label) or not math.isfinite(label):
            bad("true_introversion", "must be a finite number")
        elif not 0.0 <= label <= 1.0:
            bad("true_introversion", "true_introversion ∈ [0, 1]")
    return out


def _capped(value: float, cap: float) -> float:
    return min(float(value), cap) / cap


def normalize(raw: RawProfile, cfg: NormConfig | None = None) -> np.ndarray:
    """Map a valid profile onto its 12 regressors in [0, 1].

    Raises :class:`InputError` listing every violation if ``raw`` is invalid.
    """
    cfg = cfg or NormConfig()
    violations = validate(raw)
    if violations:
        detail = "; ".join(str(v) for v in violations)
        raise InputError(f"profile {raw.id!r} is invalid: {detail}")
    return np.array(
        [
            raw.solo_pubs / raw.total_pubs,
            _capped(raw.conf_per_year, cfg.cap_conf_per_year),
            1.0 - raw.job_rating,
            float(raw.org_type),
            raw.encyclopedic,
            raw.depth,
            _capped(raw.avg_duration_months, cfg.cap_duration_months),
            1.0 - raw.citation_freq,
            _capped(raw.pub_rate, cfg.cap_pub_rate),
            raw.ext_funding,
            raw.interdisc_collab,
            raw.network_activity,
        ],
        dtype=float,
    )


def normalize_many(raws: Sequence[RawProfile], cfg: NormConfig | None = None) -> np.ndarray:
    """Stack normalized profiles into an ``(n, 12)`` matrix."""
    if not raws:
        return np.empty((0, N_FEATURES))
    return np.vstack([normalize(r, cfg) for r in raws])


def check_features(x) -> np.ndarray:
    """Return ``x`` as a float array after checking the feature-vector contract."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (N_FEATURES,):
        raise InputError(f"feature vectors must have {N_FEATURES} components, got shape {x.shape}")
    if not np.all(np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise InputError("feature components must lie in [0, 1]")
    return x
