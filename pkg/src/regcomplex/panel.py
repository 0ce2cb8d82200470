"""Region x industry capital panel, revealed comparative advantage and the binary specialization matrix."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .ingest import FirmRecord

logger = logging.getLogger(__name__)

INT64_MAX = np.iinfo(np.int64).max


class PanelError(ValueError):
    pass


def _labels(labels: Sequence[str], n: int, what: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise PanelError(f"{len(labels)} {what} labels for {n} {what}s")
    if len(set(labels)) != n:
        raise PanelError(f"duplicate {what} labels")
    return labels


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RegionIndustryPanel:
    regions: tuple[str, ...]
    industries: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.ndim != 2:
            raise PanelError("weights must be a 2-d matrix")
        if w.dtype.kind not in "iuf":
            raise PanelError(f"unsupported weight dtype {w.dtype}")
        if w.dtype.kind == "f" and not np.all(np.isfinite(w)):
            raise PanelError("weights must be finite")
        if np.any(w < 0):
            raise PanelError("weights must be non-negative")
        object.__setattr__(self, "regions", _labels(self.regions, w.shape[0], "region"))
        object.__setattr__(self, "industries", _labels(self.industries, w.shape[1], "industry"))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape

    def total(self) -> int | Fraction:
        return sum(_exact_values(self.weights).ravel().tolist(), 0)


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """The 0/1 specialization matrix with its degree vectors."""

    m: np.ndarray
    regions: tuple[str, ...]
    industries: tuple[str, ...]
    diversification: np.ndarray = field(init=False)
    ubiquity: np.ndarray = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.m)
        if m.ndim != 2:
            raise PanelError("binary matrix must be 2-d")
        if not np.all((m == 0) | (m == 1)):
            raise PanelError("binary matrix entries must be 0 or 1")
        m = m.astype(np.uint8)
        object.__setattr__(self, "regions", _labels(self.regions, m.shape[0], "region"))
        object.__setattr__(self, "industries", _labels(self.industries, m.shape[1], "industry"))
        object.__setattr__(self, "m", _frozen(m))
        object.__setattr__(self, "diversification", _frozen(m.sum(axis=1, dtype=np.int64)))
        object.__setattr__(self, "ubiquity", _frozen(m.sum(axis=0, dtype=np.int64)))

    @classmethod
    def from_array(cls, m, regions: Sequence[str] | None = None, industries: Sequence[str] | None = None) -> BinaryMatrix:
        m = np.asarray(m)
        if regions is None:
            regions = [f"r{i}" for i in range(m.shape[0])]
        if industries is None:
            industries = [f"p{j}" for j in range(m.shape[1])]
        return cls(m, tuple(regions), tuple(industries))

    @property
    def shape(self) -> tuple[int, int]:
        return self.m.shape

    def take(self, rows: Sequence[int], cols: Sequence[int]) -> BinaryMatrix:
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        return BinaryMatrix(
            self.m[np.ix_(rows, cols)],
            tuple(self.regions[i] for i in rows),
            tuple(self.industries[j] for j in cols),
        )

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.regions == other.regions and self.industries == other.industries and np.array_equal(self.m, other.m)


@dataclass
class PruneLog:
    """Labels removed by :func:`prune` or :func:`drop_empty`, as (pass, axis, label)."""

    removed: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def regions(self) -> list[str]:
        return [label for _, axis, label in self.removed if axis == "region"]

    @property
    def industries(self) -> list[str]:
        return [label for _, axis, label in self.removed if axis == "industry"]

    def to_dict(self) -> list[dict]:
        return [{"pass": p, "axis": a, "label": label} for p, a, label in self.removed]


def aggregate(
    records: Iterable[FirmRecord],
    regions: Sequence[str] | None = None,
    industries: Sequence[str] | None = None,
) -> RegionIndustryPanel:
    """Sum paid-up capital (minor units) per (region, two-digit industry)."""
    records = list(records)
    if not records:
        raise PanelError("no records to aggregate")
    regions = sorted(set(regions) if regions is not None else {r.region for r in records})
    industries = sorted(set(industries) if industries is not None else {r.nic2 for r in records})
    ri = {label: i for i, label in enumerate(regions)}
    ii = {label: j for j, label in enumerate(industries)}
    try:
        region_idx = np.fromiter((ri[r.region] for r in records), dtype=np.int64, count=len(records))
        industry_idx = np.fromiter((ii[r.nic2] for r in records), dtype=np.int64, count=len(records))
    except KeyError as exc:
        raise PanelError(f"record label {exc.args[0]!r} not in the given label set") from None
    if sum(r.capital_minor for r in records) > INT64_MAX:
        raise PanelError("total capital overflows 64-bit integers")
    capital = np.fromiter((r.capital_minor for r in records), dtype=np.int64, count=len(records))
    weights = kernels.aggregate(region_idx, industry_idx, capital, len(regions), len(industries))
    return RegionIndustryPanel(tuple(regions), tuple(industries), np.asarray(weights))


def drop_empty(panel: RegionIndustryPanel) -> tuple[RegionIndustryPanel, PruneLog]:
    """Remove regions and industries whose total weight is zero."""
    log = PruneLog()
    w = panel.weights
    keep_r = w.sum(axis=1) > 0
    keep_c = w.sum(axis=0) > 0
    log.removed += [(1, "region", panel.regions[i]) for i in np.flatnonzero(~keep_r)]
    log.removed += [(1, "industry", panel.industries[j]) for j in np.flatnonzero(~keep_c)]
    if not keep_r.any() or not keep_c.any():
        raise PanelError("panel has zero total weight")
    if log.removed:
        logger.info("dropped zero-weight labels: %s", [lab for _, _, lab in log.removed])
    return (
        RegionIndustryPanel(
            tuple(np.array(panel.regions, dtype=object)[keep_r]),
            tuple(np.array(panel.industries, dtype=object)[keep_c]),
            w[np.ix_(keep_r, keep_c)],
        ),
        log,
    )


def _exact_values(w: np.ndarray) -> np.ndarray:
    if w.dtype.kind in "iu":
        return w.astype(object)
    return np.vectorize(Fraction, otypes=[object])(w)


def rca(panel: RegionIndustryPanel) -> np.ndarray:
    """Revealed comparative advantage of every (region, industry) pair.

    Shares are evaluated in exact rational arithmetic and rounded once, so the
    result is correctly rounded and invariant to rescaling integer weights.
    """
    x = _exact_values(panel.weights)
    row = x.sum(axis=1)
    col = x.sum(axis=0)
    for i, total in enumerate(row):
        if total == 0:
            raise PanelError(f"region {panel.regions[i]!r} has zero total weight")
    for j, total in enumerate(col):
        if total == 0:
            raise PanelError(f"industry {panel.industries[j]!r} has zero total weight")
    grand = sum(row.tolist(), 0)
    S, P = x.shape
    out = np.empty((S, P))
    for i in range(S):
        for j in range(P):
            num = x[i, j] * grand
            den = row[i] * col[j]
            out[i, j] = float(Fraction(num, den)) if isinstance(num, Fraction) else num / den
    return out


def binarize(
    rca_matrix: np.ndarray,
    threshold: float = 1.0,
    regions: Sequence[str] | None = None,
    industries: Sequence[str] | None = None,
) -> BinaryMatrix:
    if not threshold > 0:
        raise PanelError("threshold must be positive")
    r = np.asarray(rca_matrix, dtype=np.float64)
    if not np.all(np.isfinite(r)):
        raise PanelError("RCA matrix has non-finite entries")
    return BinaryMatrix.from_array((r >= threshold).astype(np.uint8), regions, industries)


def prune(bm: BinaryMatrix) -> tuple[BinaryMatrix, PruneLog]:
    """Drop all-zero rows, then all-zero columns, repeating until neither exists."""
    log = PruneLog()
    rows = np.arange(bm.shape[0])
    cols = np.arange(bm.shape[1])
    m = bm.m
    n_pass = 0
    while True:
        n_pass += 1
        sub = m[np.ix_(rows, cols)]
        dead_r = sub.sum(axis=1) == 0
        log.removed += [(n_pass, "region", bm.regions[i]) for i in rows[dead_r]]
        rows = rows[~dead_r]
        sub = m[np.ix_(rows, cols)]
        dead_c = sub.sum(axis=0) == 0
        log.removed += [(n_pass, "industry", bm.industries[j]) for j in cols[dead_c]]
        cols = cols[~dead_c]
        if not dead_r.any() and not dead_c.any():
            break
    if rows.size == 0 or cols.size == 0:
        raise PanelError("binary matrix is empty after pruning")
    if log.removed:
        logger.info("pruned %d label(s): %s", len(log.removed), [lab for _, _, lab in log.removed])
    return bm.take(rows, cols), log


def specialization(
    panel: RegionIndustryPanel, threshold: float = 1.0
) -> tuple[BinaryMatrix, np.ndarray, RegionIndustryPanel, PruneLog]:
    """Panel -> (pruned M, RCA, the panel RCA was computed on, combined removal log)."""
    trimmed, log = drop_empty(panel)
    ratios = rca(trimmed)
    bm, prune_log = prune(binarize(ratios, threshold, trimmed.regions, trimmed.industries))
    log.removed += [(p + 1, a, lab) for p, a, lab in prune_log.removed]
    return bm, ratios, trimmed, log
