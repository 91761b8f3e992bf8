"""Reproducible output files.

Every table this package writes is a plain CSV preceded by ``#`` comment
lines carrying the tool name, the seed, and the fully resolved configuration
as one compact JSON blob.  Floats are printed with ``%.17g`` so a re-read
recovers the exact binary value.  Writing a non-finite number is an error,
not a quiet ``nan`` cell: artifacts are the public face of a run, and a NaN
there means something upstream already went wrong.

A run may also emit a ``manifest.json`` sidecar listing checksums of the
data files.  The sidecar carries wall-clock duration and so is the one file
exempt from byte-for-byte reproducibility; everything else must be
byte-identical for identical (config, seed, version) triples.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from . import __version__
from .dynamics import RateDataset
from .errors import ConfigurationError, NumericalError

__all__ = ["format_float", "write_table", "write_json_artifact",
           "write_rate_dataset", "read_rate_dataset", "write_manifest",
           "file_digest"]


def format_float(value: float) -> str:
    """Lossless decimal rendering; refuses NaN and infinities."""
    value = float(value)
    if not math.isfinite(value):
        raise NumericalError(f"refusing to write non-finite value {value!r}")
    return "%.17g" % value


def _compact_json(payload: Mapping[str, Any]) -> str:
    try:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                          allow_nan=False)
    except ValueError as exc:
        raise NumericalError(f"refusing to write non-finite JSON: {exc}") from exc


def _header_lines(tool: str, seed: int | None,
                  config: Mapping[str, Any] | None,
                  extra: Mapping[str, Mapping[str, Any]] | None = None) -> list[str]:
    lines = [f"# levicat {__version__}", f"# tool: {tool}"]
    if seed is not None:
        lines.append(f"# seed: {int(seed)}")
    if config is not None:
        lines.append(f"# config: {_compact_json(config)}")
    for key, payload in (extra or {}).items():
        lines.append(f"# {key}: {_compact_json(payload)}")
    return lines


def write_table(path: str | Path, names: Sequence[str],
                rows: Iterable[Sequence[Any]], *, tool: str,
                seed: int | None = None,
                config: Mapping[str, Any] | None = None,
                extra: Mapping[str, Mapping[str, Any]] | None = None) -> Path:
    """Write a commented CSV; an empty row iterable yields a header-only file."""
    path = Path(path)
    lines = _header_lines(tool, seed, config, extra)
    lines.append(",".join(names))
    for row in rows:
        if len(row) != len(names):
            raise ConfigurationError(
                f"row width {len(row)} does not match {len(names)} columns")
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("1" if cell else "0")
            elif isinstance(cell, int):
                cells.append(str(cell))
            else:
                cells.append(format_float(cell))
        lines.append(",".join(cells))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json_artifact(path: str | Path, payload: Mapping[str, Any], *,
                        tool: str, seed: int | None = None,
                        config: Mapping[str, Any] | None = None) -> Path:
    """Write a JSON artifact with the same provenance fields as the CSVs."""
    path = Path(path)
    document = {
        "levicat_version": __version__,
        "tool": tool,
        "seed": None if seed is None else int(seed),
        "config": None if config is None else dict(config),
        "result": payload,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        text = json.dumps(document, indent=2, sort_keys=True, allow_nan=False)
    except ValueError as exc:
        raise NumericalError(f"refusing to write non-finite JSON: {exc}") from exc
    path.write_text(text + "\n")
    return path


def write_rate_dataset(path: str | Path, dataset: RateDataset, *,
                       config: Mapping[str, Any] | None = None) -> Path:
    """Persist a synthetic dataset so a later fit can reload it exactly."""
    truth = {
        "lambda_true": dataset.lambda_true,
        "d_pp_true": dataset.d_pp_true,
        "noise_fraction": dataset.noise_fraction,
        "n_resampled": dataset.n_resampled,
    }
    rows = zip(dataset.delta_x, dataset.gamma, dataset.sigma)
    return write_table(path, ("delta_x", "gamma", "sigma"), list(rows),
                       tool="gen-data", seed=dataset.seed, config=config,
                       extra={"dataset": truth})


def read_rate_dataset(path: str | Path) -> RateDataset:
    """Inverse of :func:`write_rate_dataset`, including the truth metadata."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"dataset file not found: {path}")
    seed = 0
    truth: dict[str, Any] = {}
    names: list[str] | None = None
    columns: dict[str, list[float]] = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("seed:"):
                seed = int(body.partition(":")[2])
            elif body.startswith("dataset:"):
                truth = json.loads(body.partition(":")[2])
            continue
        cells = line.split(",")
        if names is None:
            names = cells
            if names != ["delta_x", "gamma", "sigma"]:
                raise ConfigurationError(
                    f"{path}: expected columns delta_x,gamma,sigma, got {names}")
            columns = {name: [] for name in names}
            continue
        if len(cells) != len(names):
            raise ConfigurationError(f"{path}: ragged row {line!r}")
        for name, cell in zip(names, cells):
            columns[name].append(float(cell))
    if names is None:
        raise ConfigurationError(f"{path}: no column header found")
    return RateDataset(
        delta_x=tuple(columns["delta_x"]),
        gamma=tuple(columns["gamma"]),
        sigma=tuple(columns["sigma"]),
        lambda_true=float(truth.get("lambda_true", 0.0)),
        d_pp_true=float(truth.get("d_pp_true", 0.0)),
        noise_fraction=float(truth.get("noise_fraction", 0.0)),
        seed=seed,
        n_resampled=int(truth.get("n_resampled", 0)),
    )


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(directory: str | Path, files: Sequence[str | Path], *,
                   tool: str, seed: int | None, duration_s: float) -> Path:
    """Checksum sidecar; the only artifact allowed to vary between reruns."""
    directory = Path(directory)
    entries = {Path(f).name: file_digest(f) for f in files}
    payload = {
        "levicat_version": __version__,
        "tool": tool,
        "seed": None if seed is None else int(seed),
        "files": entries,
        "duration_s": float(duration_s),
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
