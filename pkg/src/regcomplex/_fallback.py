"""Pure numpy kernels; same contract as the compiled ``_kernels`` module."""

import numpy as np

BACKEND = "python"


def aggregate(region_idx, industry_idx, capital, n_regions, n_industries):
    ri = np.asarray(region_idx, dtype=np.intp)
    ii = np.asarray(industry_idx, dtype=np.intp)
    cap = np.asarray(capital, dtype=np.int64)
    if ii.shape != ri.shape or cap.shape != ri.shape:
        raise ValueError("index and capital arrays differ in length")
    bad = (ri < 0) | (ri >= n_regions) | (ii < 0) | (ii >= n_industries)
    if bad.any():
        k = int(np.argmax(bad))
        raise IndexError(f"record {k} has out-of-range panel index ({ri[k]}, {ii[k]})")
    out = np.zeros((n_regions, n_industries), dtype=np.int64)
    np.add.at(out, (ri, ii), cap)
    return out


def _order(values, tiebreak):
    return np.lexsort((tiebreak, -values))


def _seqsum(a, axis):
    if a.shape[axis] == 0:
        return np.zeros(a.shape[:axis] + a.shape[axis + 1 :])
    return np.take(np.cumsum(a, axis=axis), -1, axis=axis)


def _bad(x):
    return not (np.all(np.isfinite(x)) and np.all(x > 0))


def fitness_iterate(m, max_iter, window, region_tiebreak, industry_tiebreak, keep_trace=False):
    """Run the normalized fitness/complexity map from uniform start.

    Returns ``(F, Q, iterations_run, streak, failed_at, trace_F, trace_Q)``.
    ``failed_at`` is the 1-based iteration where a value stopped being finite
    and positive, 0 otherwise; F and Q are then the last good iterates.
    """
    m = np.asarray(m, dtype=np.float64)
    n_regions, n_industries = m.shape
    region_tiebreak = np.asarray(region_tiebreak)
    industry_tiebreak = np.asarray(industry_tiebreak)
    F = np.ones(n_regions)
    Q = np.ones(n_industries)
    order_f = _order(F, region_tiebreak)
    order_q = _order(Q, industry_tiebreak)
    trace_F = np.empty((max_iter, n_regions)) if keep_trace else None
    trace_Q = np.empty((max_iter, n_industries)) if keep_trace else None
    streak = 0
    n = 0
    failed_at = 0
    with np.errstate(all="ignore"):
        for n in range(1, max_iter + 1):
            # sequential sums keep results bit-identical to the compiled loops
            F_new = _seqsum(m * Q, axis=1)
            Q_new = 1.0 / _seqsum(m * (1.0 / F)[:, None], axis=0)
            if _bad(F_new) or _bad(Q_new):
                failed_at = n
                n -= 1
                break
            F_new = F_new / (_seqsum(F_new, axis=0) / n_regions)
            Q_new = Q_new / (_seqsum(Q_new, axis=0) / n_industries)
            if _bad(F_new) or _bad(Q_new):
                failed_at = n
                n -= 1
                break
            F, Q = F_new, Q_new
            if keep_trace:
                trace_F[n - 1] = F
                trace_Q[n - 1] = Q
            new_f = _order(F, region_tiebreak)
            new_q = _order(Q, industry_tiebreak)
            if np.array_equal(new_f, order_f) and np.array_equal(new_q, order_q):
                streak += 1
            else:
                streak = 0
            order_f, order_q = new_f, new_q
            if streak >= window:
                break
    if keep_trace:
        trace_F = trace_F[:n]
        trace_Q = trace_Q[:n]
    return F, Q, n, streak, failed_at, trace_F, trace_Q
