"""
Trace CSV and summary JSON files.

A trace file starts with one comment line carrying the config hash,
followed by the fixed header and one row per sample:

    # config_hash=<sha256>
    t,E,E1,ut_l2sq,diss_integral,l10,l12,sm_defect
    0,0.5,...

Floats are written with 17 significant digits, so reading a trace back
reproduces it exactly and identical runs give identical bytes.
"""
import json
import math
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from dampwave.diagnostics.trace import COLUMNS, EnergyTrace
from dampwave.errors import ConfigHashMismatch, DegenerateTraceError, PersistenceError

HASH_PREFIX = "# config_hash="
TRACE_FILE = "trace.csv"
SUMMARY_FILE = "summary.json"

PathLike = Union[str, Path]


def ensure_output_dir(path: PathLike) -> Path:
    directory = Path(path)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise PersistenceError(f"Cannot create output directory {directory}: {e}") from e
    return directory


def write_trace(path: PathLike, trace: EnergyTrace, config_hash: str) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{HASH_PREFIX}{config_hash}\n")
            fh.write(",".join(COLUMNS) + "\n")
            np.savetxt(fh, trace.columns(), fmt="%.17g", delimiter=",")
    except OSError as e:
        raise PersistenceError(f"Cannot write trace {path}: {e}") from e
    return path


def read_trace(path: PathLike, expected_hash: Optional[str] = None) -> tuple[EnergyTrace, str]:
    """Load a trace; if expected_hash is given it must match the file's hash"""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            first = fh.readline().strip()
            header = fh.readline().strip()
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as e:
        raise PersistenceError(f"Cannot read trace {path}: {e}") from e
    except ValueError as e:
        raise PersistenceError(f"Malformed trace {path}: {e}") from e

    if not first.startswith(HASH_PREFIX):
        raise PersistenceError(f"{path} has no config hash line")
    config_hash = first[len(HASH_PREFIX):]
    if header != ",".join(COLUMNS):
        raise PersistenceError(f"{path} has header {header!r}, expected {','.join(COLUMNS)!r}")
    if expected_hash is not None and config_hash != expected_hash:
        raise ConfigHashMismatch(
            f"{path} was written for config {config_hash[:12]}, current config is {expected_hash[:12]}",
            {"file_hash": config_hash, "config_hash": expected_hash},
        )
    if rows.size == 0:
        raise DegenerateTraceError(f"{path} has no samples")
    return EnergyTrace.from_columns(rows), config_hash


def _jsonable(value: Any) -> Any:
    """Non-finite floats become null; numpy scalars and arrays become Python values"""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(path: PathLike, payload: dict) -> Path:
    path = Path(path)
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2, allow_nan=False)
    try:
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise PersistenceError(f"Cannot write {path}: {e}") from e
    return path


def read_json(path: PathLike) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise PersistenceError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise PersistenceError(f"Malformed JSON in {path}: {e}") from e
