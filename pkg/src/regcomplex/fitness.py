"""Nonlinear fitness-complexity iteration with rank-stability stopping."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import kernels
from .panel import BinaryMatrix

logger = logging.getLogger(__name__)


class FitnessError(ValueError):
    pass


class NumericalUnderflow(ArithmeticError):
    def __init__(self, iteration: int):
        super().__init__(f"fitness/complexity left the positive finite range at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class FitnessResult:
    regions: tuple[str, ...]
    industries: tuple[str, ...]
    fitness: np.ndarray
    industry_complexity: np.ndarray
    log_fitness: np.ndarray
    log_complexity: np.ndarray
    iterations_run: int
    converged: bool
    stable_iterations: int
    window: int
    precision: str
    trace_fitness: np.ndarray | None = None
    trace_complexity: np.ndarray | None = None

    def diagnostics(self) -> dict:
        return {
            "iterations_run": self.iterations_run,
            "converged": self.converged,
            "stable_iterations": self.stable_iterations,
            "stability_window": self.window,
            "precision": self.precision,
            "initialization": "uniform (F = Q = 1)",
            "update": "simultaneous; each iterate divided by its arithmetic mean",
        }


def label_order(labels: Sequence[str]) -> np.ndarray:
    """Position of each label in lexicographic order (used to break ties)."""
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    pos = np.empty(len(labels), dtype=np.int64)
    pos[order] = np.arange(len(labels))
    return pos


def ordinal_ranks(values, labels: Sequence[str]) -> np.ndarray:
    """1-based ranks, largest value first, ties broken by label."""
    values = np.asarray(values, dtype=np.float64)
    order = np.lexsort((label_order(labels), -values))
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks


def _check(bm: BinaryMatrix, max_iter: int, window: int) -> None:
    if max_iter < 1:
        raise FitnessError("max_iter must be >= 1")
    if window < 1:
        raise FitnessError("rank_stability_window must be >= 1")
    if bm.m.size == 0 or np.any(bm.diversification == 0) or np.any(bm.ubiquity == 0):
        raise FitnessError("binary matrix has empty rows or columns; prune it first")


def _log_iterate(m, max_iter, window, tb_f, tb_q, keep_trace):
    mask = m.astype(bool)
    S, P = m.shape
    lF = np.zeros(S)
    lQ = np.zeros(P)
    order_f = np.lexsort((tb_f, -lF))
    order_q = np.lexsort((tb_q, -lQ))
    tf, tq = [], []
    streak = 0
    n = 0
    for n in range(1, max_iter + 1):
        lF_new = logsumexp(np.where(mask, lQ[None, :], -np.inf), axis=1)
        lQ_new = -logsumexp(np.where(mask, -lF[:, None], -np.inf), axis=0)
        lF = lF_new - (logsumexp(lF_new) - np.log(S))
        lQ = lQ_new - (logsumexp(lQ_new) - np.log(P))
        if not (np.all(np.isfinite(lF)) and np.all(np.isfinite(lQ))):
            raise NumericalUnderflow(n)
        if keep_trace:
            tf.append(lF)
            tq.append(lQ)
        new_f = np.lexsort((tb_f, -lF))
        new_q = np.lexsort((tb_q, -lQ))
        streak = streak + 1 if np.array_equal(new_f, order_f) and np.array_equal(new_q, order_q) else 0
        order_f, order_q = new_f, new_q
        if streak >= window:
            break
    trace = (np.exp(np.array(tf)), np.exp(np.array(tq))) if keep_trace else (None, None)
    return lF, lQ, n, streak, trace


def fitness_complexity(
    bm: BinaryMatrix,
    max_iter: int = 1000,
    rank_stability_window: int = 10,
    trace: bool = False,
    precision: str = "auto",
) -> FitnessResult:
    """Region fitness and industry complexity of a pruned binary matrix.

    Starting from F = Q = 1, every iteration computes
    F_s = sum_p M_sp Q_p and Q_p = 1 / sum_s M_sp / F_s from the previous
    iterates, then divides each vector by its mean.  Iteration stops once both
    rankings have been unchanged for ``rank_stability_window`` consecutive
    iterations, or after ``max_iter``.

    ``precision`` is "float", "log" (values carried as logarithms) or "auto",
    which retries in log form only if the float iteration under/overflows.
    """
    if precision not in ("auto", "float", "log"):
        raise FitnessError(f"unknown precision mode {precision!r}")
    _check(bm, max_iter, rank_stability_window)
    tb_f = label_order(bm.regions)
    tb_q = label_order(bm.industries)
    mode = precision
    if precision != "log":
        F, Q, n, streak, failed_at, tF, tQ = kernels.fitness_iterate(bm.m, max_iter, rank_stability_window, tb_f, tb_q, trace)
        if failed_at:
            if precision == "float":
                raise NumericalUnderflow(failed_at)
            logger.warning("float iteration failed at step %d; recomputing in log domain", failed_at)
            mode = "log"
        else:
            mode = "float"
            lF, lQ = np.log(F), np.log(Q)
    if mode == "log":
        lF, lQ, n, streak, (tF, tQ) = _log_iterate(bm.m, max_iter, rank_stability_window, tb_f, tb_q, trace)
        F, Q = np.exp(lF), np.exp(lQ)
    return FitnessResult(
        regions=bm.regions,
        industries=bm.industries,
        fitness=np.asarray(F),
        industry_complexity=np.asarray(Q),
        log_fitness=lF,
        log_complexity=lQ,
        iterations_run=int(n),
        converged=bool(streak >= rank_stability_window),
        stable_iterations=int(streak),
        window=rank_stability_window,
        precision=mode,
        trace_fitness=tF,
        trace_complexity=tQ,
    )


def ranks(result: FitnessResult) -> tuple[dict[str, int], dict[str, int]]:
    """Region and industry ranks (1 = fittest / most complex), ties by label."""
    if result.precision == "log":
        f_key, q_key = result.log_fitness, result.log_complexity
    else:
        f_key, q_key = result.fitness, result.industry_complexity
    r = ordinal_ranks(f_key, result.regions)
    q = ordinal_ranks(q_key, result.industries)
    return dict(zip(result.regions, r.tolist())), dict(zip(result.industries, q.tolist()))
