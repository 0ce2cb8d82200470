"""CSV/JSON writers with fixed numeric formatting, plus file digests."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ingest import RegionAliases, RegistryError


def fmt(x) -> str:
    """17 significant digits for floats (lossless round trip), plain ints, '' for None."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} in numeric output")
        return format(x, ".17g")
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def write_matrix(path: Path, matrix, row_labels: Sequence[str], col_labels: Sequence[str], corner: str = "region") -> Path:
    matrix = np.asarray(matrix)
    return write_csv(path, [corner, *col_labels], ([label, *row.tolist()] for label, row in zip(row_labels, matrix)))


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def read_income(path: str | Path, aliases: RegionAliases | None = None) -> dict[str, float]:
    """Two-column CSV (region, gsdp_per_capita) with a header row."""
    aliases = aliases or RegionAliases()
    out: dict[str, float] = {}
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise RegistryError(f"{path}: income table needs a header with two columns")
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            region = aliases.normalize(row[0])
            if region is None:
                raise RegistryError(f"{path}:{lineno}: unknown region {row[0]!r}")
            try:
                value = float(row[1])
            except (IndexError, ValueError):
                raise RegistryError(f"{path}:{lineno}: bad income value") from None
            if not (value > 0 and math.isfinite(value)):
                raise RegistryError(f"{path}:{lineno}: income must be positive")
            if region in out:
                raise RegistryError(f"{path}:{lineno}: duplicate region {region!r}")
            out[region] = value
    return out


def node_link(nodes: Sequence[str], edges: Iterable[tuple[str, str, float]], **graph_attrs) -> Mapping:
    """Graph-interchange JSON in the common node-link layout."""
    return {
        "directed": False,
        "multigraph": False,
        "graph": dict(graph_attrs),
        "nodes": [{"id": n} for n in nodes],
        "links": [{"source": u, "target": v, "weight": w} for u, v, w in edges],
    }
