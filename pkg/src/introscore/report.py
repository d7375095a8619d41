"""Run manifests and posterior density reports."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .bayes import Posterior
from .errors import InputError
from .formats import dumps, write_rows

FORMAT_VERSION = "1"


@dataclass
class RunManifest:
    """Provenance block embedded in every CLI output.

    Holds nothing time- or host-dependent, so identical invocations give
    identical bytes.
    """

    command: str
    input_paths: list[str] = field(default_factory=list)
    parameter_paths: list[str] = field(default_factory=list)
    seed: int | None = None
    tool_version: str = __version__
    format_version: str = FORMAT_VERSION

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def summary_path(destination) -> Path:
    return Path(destination).with_suffix(".json")


def emit_report(posterior: Posterior, destination, manifest: RunManifest | None = None) -> dict[str, Any]:
    """Write ``destination`` as an ``I,density`` CSV and a JSON summary beside it.

    The summary goes to the same path with a ``.json`` suffix and is also
    returned.
    """
    dest = Path(destination)
    summary = {"format_version": FORMAT_VERSION, **posterior.summary()}
    summary["n_points"] = len(posterior.grid)
    if manifest is not None:
        summary["manifest"] = manifest.to_dict()
    try:
        write_rows(dest, ("I", "density"), zip(posterior.grid, posterior.density))
        summary_path(dest).write_text(dumps(summary), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{dest}: cannot write report ({exc.strerror})") from None
    return summary
