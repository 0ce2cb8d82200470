"""Independent oracles and random-input generators shared by the tests.

Nothing here calls into regcomplex except to build a BinaryMatrix, so the
oracles can be compared against the library without sharing code paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from regcomplex.panel import BinaryMatrix

DATA = __import__("pathlib").Path(__file__).parent / "data"


# ---------------------------------------------------------------- generators


def random_pruned(rng: np.random.Generator, max_s: int = 12, max_p: int = 12, min_s: int = 3, min_p: int = 3) -> BinaryMatrix:
    """Random 0/1 matrix with no empty row or column."""
    while True:
        S = int(rng.integers(min_s, max_s + 1))
        P = int(rng.integers(min_p, max_p + 1))
        density = rng.uniform(0.2, 0.8)
        m = (rng.random((S, P)) < density).astype(np.uint8)
        if m.sum(axis=1).all() and m.sum(axis=0).all():
            return BinaryMatrix.from_array(m)


def nested(degrees, P: int) -> np.ndarray:
    """Row i holds ones in its first degrees[i] columns."""
    d = np.asarray(degrees)
    return (np.arange(P)[None, :] < d[:, None]).astype(np.uint8)


def random_nested(rng: np.random.Generator, max_s: int = 10, max_p: int = 12):
    """Perfectly nested matrix with distinct row degrees, rows and columns shuffled.

    Returns (BinaryMatrix, degrees in the shuffled row order).
    """
    S = int(rng.integers(3, max_s + 1))
    P = int(rng.integers(S, max_p + 1))
    d = np.sort(rng.choice(np.arange(1, P), size=S - 1, replace=False))[::-1]
    d = np.concatenate([[P], d])
    m = nested(d, P)
    rows = rng.permutation(S)
    cols = rng.permutation(P)
    return BinaryMatrix.from_array(m[np.ix_(rows, cols)]), d[rows]


def random_panel(rng: np.random.Generator, max_s: int = 15, max_p: int = 15) -> np.ndarray:
    S = int(rng.integers(1, max_s + 1))
    P = int(rng.integers(1, max_p + 1))
    w = rng.integers(0, 10**9, size=(S, P))
    w[rng.random((S, P)) < 0.3] = 0
    w[:, 0] += 1  # no empty row
    w[0, :] += 1  # no empty column
    return w


# ---------------------------------------------------------------- oracles


def rca_oracle(w) -> list[list[Fraction]]:
    w = [[Fraction(int(v)) for v in row] for row in w]
    S, P = len(w), len(w[0])
    row = [sum(r) for r in w]
    col = [sum(w[i][j] for i in range(S)) for j in range(P)]
    total = sum(row)
    return [[(w[i][j] / row[i]) / (col[j] / total) for j in range(P)] for i in range(S)]


def transformed_oracle(m) -> np.ndarray:
    """M~_{ss'} by its defining double sum."""
    m = np.asarray(m, dtype=int)
    S, P = m.shape
    ks = m.sum(axis=1)
    kp = m.sum(axis=0)
    out = np.zeros((S, S))
    for s in range(S):
        for t in range(S):
            out[s, t] = sum(m[s, p] * m[t, p] / (ks[s] * kp[p]) for p in range(P))
    return out


def eci_oracle(m) -> np.ndarray:
    """Second eigenvector of M~ from a general (non-symmetric) eigensolver,
    standardized and oriented by diversification."""
    t = transformed_oracle(m)
    w, v = np.linalg.eig(t)
    order = np.argsort(-w.real)
    vec = v[:, order[1]].real
    e = (vec - vec.mean()) / vec.std(ddof=1)
    ks = np.asarray(m).sum(axis=1)
    if np.ptp(ks) > 0 and np.corrcoef(e, ks)[0, 1] < 0:
        e = -e
    return e


def fitness_oracle(m, labels_r, labels_p, max_iter=1000, window=10):
    """Straight-line fitness/complexity iteration on Python floats.

    Returns (F, Q, iterations, converged).
    """
    m = [[int(v) for v in row] for row in np.asarray(m)]
    S, P = len(m), len(m[0])
    F = [1.0] * S
    Q = [1.0] * P

    def order(values, labels):
        return sorted(range(len(values)), key=lambda i: (-values[i], labels[i]))

    of, oq = order(F, labels_r), order(Q, labels_p)
    streak = 0
    n = 0
    for n in range(1, max_iter + 1):
        Fn = []
        for s in range(S):
            acc = 0.0
            for p in range(P):
                acc += m[s][p] * Q[p]
            Fn.append(acc)
        Qn = []
        for p in range(P):
            acc = 0.0
            for s in range(S):
                acc += m[s][p] * (1.0 / F[s])
            Qn.append(1.0 / acc)
        mean_f = 0.0
        for v in Fn:
            mean_f += v
        mean_f /= S
        mean_q = 0.0
        for v in Qn:
            mean_q += v
        mean_q /= P
        F = [v / mean_f for v in Fn]
        Q = [v / mean_q for v in Qn]
        nf, nq = order(F, labels_r), order(Q, labels_p)
        streak = streak + 1 if (nf == of and nq == oq) else 0
        of, oq = nf, nq
        if streak >= window:
            break
    return F, Q, n, streak >= window


def mst_oracle(nodes, weights):
    """Maximum total similarity spanning tree by exhaustive enumeration."""
    n = len(nodes)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if weights[i][j] > 0]
    best, best_set = None, None
    for subset in itertools.combinations(edges, n - 1):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        ok = True
        for i, j in subset:
            ri, rj = find(i), find(j)
            if ri == rj:
                ok = False
                break
            parent[ri] = rj
        if not ok:
            continue
        total = sum(weights[i][j] for i, j in subset)
        if best is None or total > best:
            best, best_set = total, subset
    return {tuple(sorted((nodes[i], nodes[j]))) for i, j in best_set}


def ols_oracle(x, y) -> tuple[float, float]:
    """(intercept, slope) from numpy's least-squares solver."""
    x = np.asarray(x, dtype=float)
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, np.asarray(y, dtype=float), rcond=None)
    return float(coef[0]), float(coef[1])


def ccdf_oracle(values):
    values = list(values)
    n = len(values)
    return {x: sum(1 for v in values if v >= x) / n for x in sorted(set(values))}


def reflections_well_posed(bm: BinaryMatrix, order: int = 20, tol: float = 0.05) -> bool:
    """True when order-``order`` reflections can resolve the second eigenvector.

    In symmetric coordinates y = D^1/2 k_{s,0} the even reflection is
    M~^(order/2) applied to k_{s,0}.  Its component outside the leading two
    eigendirections, relative to the second one, must be below ``tol``;
    otherwise the iterate has not separated (slow spectral gap) or k_{s,0}
    carries no weight on the second eigenvector at all.
    """
    m = bm.m.astype(float)
    ks = m.sum(axis=1)
    kp = m.sum(axis=0)
    scale = 1 / np.sqrt(ks)
    sym = scale[:, None] * ((m / kp) @ m.T) * scale[None, :]
    w, u = np.linalg.eigh((sym + sym.T) / 2)
    w, u = w[::-1], u[:, ::-1]
    c = u.T @ (np.sqrt(ks) * ks)
    half = order // 2
    if abs(c[1]) <= 1e-9 * np.linalg.norm(c):
        return False  # no weight on the second direction beyond rounding
    lead = abs(c[1]) * abs(w[1]) ** half
    rest = np.linalg.norm(c[2:] * np.abs(w[2:]) ** half)
    return rest / lead <= tol
