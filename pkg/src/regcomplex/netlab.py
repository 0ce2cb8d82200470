"""Region similarity, maximum-similarity spanning tree, ordered matrix and triangularity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexity import transformed_region_matrix
from .fitness import FitnessResult, label_order
from .panel import BinaryMatrix


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SimilarityGraph:
    nodes: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (len(self.nodes), len(self.nodes)):
            raise GraphError("weight matrix does not match node count")
        if not np.array_equal(w, w.T):
            raise GraphError("similarity must be symmetric")
        if np.any(np.diag(w) != 0) or np.any(w < 0):
            raise GraphError("similarity must be non-negative with zero diagonal")


@dataclass(frozen=True)
class Tree:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]


def similarity(bm: BinaryMatrix) -> SimilarityGraph:
    """Symmetrized region-region transformed matrix with a zero diagonal."""
    t = transformed_region_matrix(bm)
    s = (t + t.T) / 2
    np.fill_diagonal(s, 0.0)
    return SimilarityGraph(bm.regions, s)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def components(g: SimilarityGraph) -> list[list[str]]:
    n = len(g.nodes)
    ds = _DisjointSet(n)
    for i, j in zip(*np.nonzero(np.triu(g.weights > 0, k=1))):
        ds.union(int(i), int(j))
    groups: dict[int, list[str]] = {}
    for i in range(n):
        groups.setdefault(ds.find(i), []).append(g.nodes[i])
    return sorted(sorted(c) for c in groups.values())


def mst(g: SimilarityGraph) -> Tree:
    """Maximum-similarity spanning tree (Kruskal on distance 1 - s / s_max).

    Only positive similarities are edges.  Equal distances are taken in
    lexicographic order of the (smaller label, larger label) pair.
    """
    n = len(g.nodes)
    if n == 0:
        raise GraphError("empty graph")
    w = g.weights
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] > 0:
                u, v = sorted((g.nodes[i], g.nodes[j]))
                edges.append((-w[i, j], u, v, i, j))
    # ascending 1 - s/s_max is descending s; sorting on s avoids the rounding
    # of the division, so the tree is invariant to rescaling
    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    ds = _DisjointSet(n)
    chosen = []
    for neg_s, u, v, i, j in edges:
        if ds.union(i, j):
            chosen.append((u, v, -neg_s))
            if len(chosen) == n - 1:
                break
    if len(chosen) != n - 1:
        comps = components(g)
        raise GraphError(f"similarity graph is disconnected: {comps}")
    return Tree(g.nodes, tuple(sorted(chosen, key=lambda e: (e[0], e[1]))))


@dataclass(frozen=True)
class OrderedMatrix:
    matrix: BinaryMatrix
    row_order: np.ndarray
    col_order: np.ndarray


def ordered_matrix(bm: BinaryMatrix, result: FitnessResult) -> OrderedMatrix:
    """Rows by decreasing fitness, columns by increasing complexity; ties by label."""
    if tuple(result.regions) != tuple(bm.regions) or tuple(result.industries) != tuple(bm.industries):
        raise GraphError("fitness result labels do not match the binary matrix")
    if result.precision == "log":
        f, q = result.log_fitness, result.log_complexity
    else:
        f, q = result.fitness, result.industry_complexity
    rows = np.lexsort((label_order(bm.regions), -np.asarray(f)))
    cols = np.lexsort((label_order(bm.industries), np.asarray(q)))
    return OrderedMatrix(bm.take(rows, cols), rows, cols)


def triangularity(ordered: BinaryMatrix | np.ndarray) -> float:
    """Agreement of an ordered matrix with its ideal staircase, in [0, 1].

    The staircase fills, in row i, the first d_i columns, where d is the
    sequence of row sums sorted in decreasing order.  The score is the
    fraction of cells where the matrix equals the staircase.  A perfectly
    nested matrix in fitness order scores 1; a 4x4 checkerboard scores 0.5.
    """
    m = ordered.m if isinstance(ordered, BinaryMatrix) else np.asarray(ordered)
    S, P = m.shape
    if S == 0 or P == 0:
        raise GraphError("empty matrix")
    d = np.sort(m.sum(axis=1))[::-1]
    ideal = np.arange(P)[None, :] < d[:, None]
    return float(np.count_nonzero((m != 0) == ideal)) / (S * P)


def linear_band_triangularity(ordered: BinaryMatrix | np.ndarray) -> float:
    """Agreement with a fixed anti-diagonal band: cell (i, j), 0-based, is
    expected filled when (j + 1) / P <= 1 - i / S."""
    m = ordered.m if isinstance(ordered, BinaryMatrix) else np.asarray(ordered)
    S, P = m.shape
    i = np.arange(S)[:, None]
    j = np.arange(P)[None, :]
    expected = (j + 1) * S <= (S - i) * P
    return float(np.count_nonzero((m != 0) == expected)) / (S * P)
