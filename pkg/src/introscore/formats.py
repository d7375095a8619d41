"""CSV and JSON codecs.

Two row schemas are read:

* the *profile* schema, raw observables under :data:`~introscore.profile.PROFILE_FIELDS`;
* the *feature* schema, already-normalized regressors under
  ``id, <FEATURE_NAMES...>, true_introversion``.  Synthetic cohorts are
  written in this form because their continuous draws (fractional solo
  share, non-binary organization type) have no exact raw representation.

Floats are written in shortest round-trip form (``repr``) so output is
byte-stable and re-reading is lossless.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .calibration import LabeledCohort
from .errors import InputError
from .profile import FEATURE_NAMES, PROFILE_FIELDS, NormConfig, RawProfile, normalize, validate

FEATURE_FIELDS = ("id",) + FEATURE_NAMES + ("true_introversion",)
_COUNT_FIELDS = {"solo_pubs", "total_pubs", "org_type"}


def fmt(v) -> str:
    """Shortest round-trip text for a CSV cell."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse_cell(text: str, count: bool):
    """Numbers parse to int/float; anything else is kept as text for validation to flag."""
    s = text.strip()
    try:
        if count:
            try:
                return int(s)
            except ValueError:
                f = float(s)
                return int(f) if f.is_integer() else f
        return float(s)
    except ValueError:
        return s


def _open_reader(path):
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    return path, fh


def _check_header(path, header, required, optional=()):
    if header is None:
        raise InputError(f"{path}: empty file, expected a header row")
    missing = [c for c in required if c not in header]
    unknown = [c for c in header if c not in required and c not in optional]
    if missing or unknown:
        raise InputError(f"{path}: bad header (missing {missing}, unknown {unknown})")


def read_profiles(path) -> list[RawProfile]:
    """Decode a profile CSV without enforcing profile invariants.

    Cells that do not parse as numbers are kept as strings so that
    :func:`~introscore.profile.validate` reports them per field.
    """
    path, fh = _open_reader(path)
    with fh:
        reader = csv.DictReader(fh)
        _check_header(path, reader.fieldnames, PROFILE_FIELDS[:-1], ("true_introversion",))
        out = []
        for row in reader:
            rec: dict[str, Any] = {"id": row["id"]}
            for name in PROFILE_FIELDS[1:-1]:
                rec[name] = _parse_cell(row[name] or "", name in _COUNT_FIELDS)
            label = (row.get("true_introversion") or "").strip()
            rec["true_introversion"] = None if label == "" else _parse_cell(label, False)
            out.append(RawProfile(**rec))
    return out


def write_profiles(path, profiles: Iterable[RawProfile]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROFILE_FIELDS)
        for p in profiles:
            w.writerow([fmt(getattr(p, f)) for f in PROFILE_FIELDS])


@dataclass
class FeatureTable:
    """Rows ready for the models: ids, ``(n, 12)`` features, labels (NaN if absent)."""

    ids: list[str]
    features: np.ndarray
    labels: np.ndarray

    @property
    def has_all_labels(self) -> bool:
        return bool(len(self.labels)) and not np.any(np.isnan(self.labels))

    def cohort(self, provenance: str = "external") -> LabeledCohort:
        if not self.has_all_labels:
            missing = [i for i, v in zip(self.ids, self.labels) if math.isnan(v)]
            raise InputError(f"true_introversion is required for every row; missing for {missing[:5]}")
        return LabeledCohort(self.features, self.labels, self.ids, provenance)


def _sniff_header(path) -> list[str]:
    path, fh = _open_reader(path)
    with fh:
        header = next(csv.reader(fh), None)
    if header is None:
        raise InputError(f"{path}: empty file, expected a header row")
    return header


def read_table(path, cfg: NormConfig | None = None) -> FeatureTable:
    """Read either schema into a :class:`FeatureTable`.

    Profile rows are validated and normalized; the first invalid row raises
    :class:`InputError` naming the file, row number (1-based, header
    excluded) and column.
    """
    header = _sniff_header(path)
    if "solo_share" in header:
        return _read_feature_csv(path)
    ids, rows, labels = [], [], []
    for i, raw in enumerate(read_profiles(path), start=1):
        bad = validate(raw)
        if bad:
            v = bad[0]
            raise InputError(f"{path}: row {i}, column {v.field!r}: violates {v.constraint}")
        ids.append(raw.id)
        rows.append(normalize(raw, cfg))
        labels.append(math.nan if raw.true_introversion is None else float(raw.true_introversion))
    X = np.vstack(rows) if rows else np.empty((0, len(FEATURE_NAMES)))
    return FeatureTable(ids, X, np.array(labels, dtype=float))


def _read_feature_csv(path) -> FeatureTable:
    path, fh = _open_reader(path)
    ids, rows, labels = [], [], []
    with fh:
        reader = csv.DictReader(fh)
        _check_header(path, reader.fieldnames, FEATURE_FIELDS[:-1], ("true_introversion",))
        for i, row in enumerate(reader, start=1):
            x = []
            for name in FEATURE_NAMES:
                v = _parse_cell(row[name] or "", False)
                if not isinstance(v, float) or not math.isfinite(v) or not 0.0 <= v <= 1.0:
                    raise InputError(f"{path}: row {i}, column {name!r}: must be a number in [0, 1], got {row[name]!r}")
                x.append(v)
            label = (row.get("true_introversion") or "").strip()
            if label:
                y = _parse_cell(label, False)
                if not isinstance(y, float) or not 0.0 <= y <= 1.0:
                    raise InputError(f"{path}: row {i}, column 'true_introversion': must be a number in [0, 1], got {label!r}")
            else:
                y = math.nan
            ids.append(row["id"])
            rows.append(x)
            labels.append(y)
    X = np.array(rows, dtype=float).reshape(-1, len(FEATURE_NAMES))
    return FeatureTable(ids, X, np.array(labels, dtype=float))


def write_cohort(path, cohort: LabeledCohort) -> None:
    """Write a labelled cohort in the feature schema."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FEATURE_FIELDS)
        for rid, x, y in zip(cohort.ids, cohort.features, cohort.labels):
            w.writerow([rid, *(fmt(v) for v in x), fmt(y)])


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text; non-finite floats become ``null``."""
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def load_json(path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return doc
