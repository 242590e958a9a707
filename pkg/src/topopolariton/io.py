"""CSV/JSON persistence and run manifests."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


def fmt(x: Any) -> str:
    """17 significant digits for floats so files round-trip exactly."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_records(path: str | Path, records: Sequence[dict]) -> Path:
    header = list(records[0]) if records else []
    return write_csv(path, header, ([r[k] for k in header] for r in records))


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Columns of a CSV written by :func:`write_csv` (numeric where possible)."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    cols = list(zip(*(ln.split(",") for ln in lines[1:]))) if len(lines) > 1 else [()] * len(header)
    out = {}
    for name, col in zip(header, cols):
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = np.array(col)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path: str | Path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


def sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path: str | Path, info: dict, outputs: Sequence[Path]) -> Path:
    """Manifest listing every output with its SHA-256 (paths relative to the manifest)."""
    path = Path(path)
    files = []
    for p in outputs:
        p = Path(p)
        try:
            rel = p.resolve().relative_to(path.parent.resolve())
        except ValueError:
            rel = p
        files.append({"path": str(rel), "sha256": sha256(p)})
    return write_json(path, {**info, "outputs": files})


def verify_manifest(path: str | Path) -> list[str]:
    """Problems found (missing files, hash mismatches); empty when consistent."""
    path = Path(path)
    data = json.loads(path.read_text())
    problems = []
    for entry in data.get("outputs", []):
        f = path.parent / entry["path"]
        if not f.exists():
            problems.append(f"missing {entry['path']}")
        elif sha256(f) != entry["sha256"]:
            problems.append(f"hash mismatch {entry['path']}")
    return problems
