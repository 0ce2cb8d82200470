"""Statistical fits: firm growth, capital CCDF power law, income regressions, ECI rank evolution."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .complexity import ComplexityError, eci, reflections
from .fitness import ordinal_ranks
from .panel import BinaryMatrix

logger = logging.getLogger(__name__)

EXPONENTIAL_GROWTH = "ExponentialGrowth"
POWER_LAW_CCDF = "PowerLawCCDF"
EXPONENTIAL_OF_X = "ExponentialOfX"
POWER_LAW_LOGLOG = "PowerLawLogLog"
LINEAR = "Linear"


class FitError(ValueError):
    pass


@dataclass
class FitSummary:
    model: str
    params: dict[str, float]
    pearson_r: float
    p_value: float
    n: int
    range: tuple[float, float] | None = None
    residuals: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "params": self.params,
            "r": self.pearson_r,
            "p": self.p_value,
            "n": self.n,
            "range": list(self.range) if self.range is not None else None,
        }
        if self.residuals:
            out["residuals"] = self.residuals
        return out


@dataclass(frozen=True)
class OLS:
    intercept: float
    slope: float
    residuals: np.ndarray


def ols(x, y) -> OLS:
    """Least-squares line y = intercept + slope * x (centered closed form)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("x and y must be 1-d and of equal length")
    if len(x) < 2:
        raise FitError("need at least 2 points for a line")
    xm, ym = math.fsum(x) / len(x), math.fsum(y) / len(y)
    dx, dy = x - xm, y - ym
    sxx = math.fsum(dx * dx)
    if sxx == 0:
        raise FitError("x has zero variance")
    slope = math.fsum(dx * dy) / sxx
    intercept = ym - slope * xm
    return OLS(intercept, slope, y - (intercept + slope * x))


def pearson(xs, ys) -> tuple[float, float]:
    """Pearson r and its two-sided p-value from Student's t with n-2 dof."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("xs and ys must be 1-d and of equal length")
    n = len(x)
    if n < 3:
        raise FitError("need at least 3 points")
    dx = x - math.fsum(x) / n
    dy = y - math.fsum(y) / n
    sxx, syy = math.fsum(dx * dx), math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        raise FitError("zero variance")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * stats.t.sf(abs(t), n - 2)
    return r, float(min(1.0, p))


def _summary(model, x, y, params, n=None, range_=None, labels=None, fit=None) -> FitSummary:
    r, p = pearson(x, y)
    residuals = {}
    if labels is not None and fit is not None:
        residuals = dict(zip(labels, fit.residuals.tolist()))
    return FitSummary(model, params, r, p, n if n is not None else len(x), range_, residuals)


def firm_growth_fit(counts: Mapping[int, int]) -> FitSummary:
    """Exponential growth N(t) ~ exp(rate * t): OLS of ln N on the year."""
    if len(counts) < 3:
        raise FitError("need at least 3 years")
    years = sorted(counts)
    values = [counts[y] for y in years]
    if any(v <= 0 for v in values):
        raise FitError("firm counts must be positive")
    x = np.array(years, dtype=np.float64)
    y = np.log(np.array(values, dtype=np.float64))
    fit = ols(x, y)
    return _summary(EXPONENTIAL_GROWTH, x, y, {"rate": fit.slope, "intercept": fit.intercept})


def ccdf(values) -> tuple[np.ndarray, np.ndarray]:
    """Empirical P(X >= x) at each distinct value x, ascending."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    if v.size == 0:
        raise FitError("no values")
    if not np.all(np.isfinite(v)) or v[0] <= 0:
        raise FitError("values must be positive and finite")
    x, first = np.unique(v, return_index=True)
    return x, (v.size - first) / v.size


def default_window(values, lo_pct: float = 10.0, hi_pct: float = 90.0) -> tuple[float, float]:
    v = np.asarray(values, dtype=np.float64)
    v = v[v > 0]
    if v.size == 0:
        raise FitError("no positive values")
    lo, hi = np.percentile(v, [lo_pct, hi_pct])
    return float(lo), float(hi)


def powerlaw_fit(x, p, window: tuple[float, float] | None = None) -> FitSummary:
    """OLS of ln P on ln x over ``lo <= x <= hi``.

    ``slope`` is the CCDF log-log slope m; ``alpha = m - 1`` is the matching
    density exponent (density ~ x**alpha).
    """
    x = np.asarray(x, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    lo, hi = window if window is not None else (float(x.min()), float(x.max()))
    inside = (x >= lo) & (x <= hi)
    if not inside.any():
        raise FitError(f"no CCDF points inside window [{lo}, {hi}]")
    if inside.sum() < 3:
        raise FitError("need at least 3 CCDF points inside the window")
    lx, lp = np.log(x[inside]), np.log(p[inside])
    fit = ols(lx, lp)
    params = {"slope": fit.slope, "alpha": fit.slope - 1.0, "intercept": fit.intercept}
    return _summary(POWER_LAW_CCDF, lx, lp, params, range_=(float(lo), float(hi)))


def hill_alpha(values, xmin: float) -> float:
    """Maximum-likelihood (Hill) density exponent for values >= xmin, returned negative (density ~ x**alpha)."""
    v = np.asarray(values, dtype=np.float64)
    tail = v[v >= xmin]
    if tail.size < 2:
        raise FitError("need at least 2 values above xmin")
    s = math.fsum(np.log(tail / xmin))
    if s == 0:
        raise FitError("all tail values equal xmin")
    return -(1.0 + tail.size / s)


def diversification_ubiquity(bm: BinaryMatrix) -> FitSummary:
    """Linear fit of average neighbour ubiquity k_{s,1} on diversification k_{s,0}."""
    tr = reflections(bm, 1)
    x, y = tr[0].region_values, tr[1].region_values
    fit = ols(x, y)
    return _summary(LINEAR, x, y, {"slope": fit.slope, "intercept": fit.intercept}, labels=bm.regions, fit=fit)


def _match(scores: Mapping[str, float], income: Mapping[str, float]) -> tuple[list[str], np.ndarray, np.ndarray]:
    labels = sorted(set(scores) & set(income))
    if len(labels) < 3:
        raise FitError(f"only {len(labels)} region(s) present in both inputs; need 3")
    inc = np.array([income[k] for k in labels], dtype=np.float64)
    if np.any(inc <= 0):
        raise FitError("income values must be positive")
    return labels, np.array([scores[k] for k in labels], dtype=np.float64), inc


def income_regression_eci(eci_values: Mapping[str, float], income: Mapping[str, float]) -> FitSummary:
    """ln(income) = a + b * ECI; residuals per region."""
    labels, e, inc = _match(eci_values, income)
    y = np.log(inc)
    fit = ols(e, y)
    return _summary(EXPONENTIAL_OF_X, e, y, {"intercept": fit.intercept, "slope": fit.slope}, labels=labels, fit=fit)


def income_regression_fitness(fitness_values: Mapping[str, float], income: Mapping[str, float]) -> FitSummary:
    """ln(income) = ln c + k * ln(fitness); residuals per region."""
    labels, f, inc = _match(fitness_values, income)
    if np.any(f <= 0):
        raise FitError("fitness values must be positive")
    x, y = np.log(f), np.log(inc)
    fit = ols(x, y)
    params = {"c": math.exp(fit.intercept), "k": fit.slope, "intercept": fit.intercept, "slope": fit.slope}
    return _summary(POWER_LAW_LOGLOG, x, y, params, labels=labels, fit=fit)


@dataclass
class RankTable:
    years: list[int]
    regions: list[str]
    ranks: dict[int, dict[str, int | None]]
    skipped: dict[int, str]

    def rows(self):
        for y in self.years:
            yield y, [self.ranks[y][r] for r in self.regions]


def rank_evolution(snapshots: Mapping[int, BinaryMatrix]) -> RankTable:
    """Per-year ECI ranks (1 = highest ECI); years where ECI is undefined are skipped."""
    ranks: dict[int, dict[str, int]] = {}
    skipped: dict[int, str] = {}
    for year in sorted(snapshots):
        bm = snapshots[year]
        try:
            res = eci(bm)
        except ComplexityError as exc:
            logger.warning("skipping fiscal year %s: %s", year, exc)
            skipped[year] = str(exc)
            continue
        ranks[year] = dict(zip(bm.regions, ordinal_ranks(res.eci, bm.regions).tolist()))
    if not ranks:
        raise FitError("no fiscal year admits an ECI")
    regions = sorted(set().union(*(r.keys() for r in ranks.values())))
    years = sorted(ranks)
    table = {y: {reg: ranks[y].get(reg) for reg in regions} for y in years}
    return RankTable(years, regions, table, skipped)
