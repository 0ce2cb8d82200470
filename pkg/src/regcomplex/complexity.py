"""Method of reflections and the spectral Economic / Industry Complexity Index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .panel import BinaryMatrix

DEGENERACY_TOL = 1e-9
LEADING_TOL = 1e-8


class ComplexityError(ValueError):
    pass


class DegenerateSpectrum(ComplexityError):
    """Second eigenvector is not uniquely defined."""


@dataclass(frozen=True)
class ReflectionsTrace:
    order: int
    region_values: np.ndarray
    industry_values: np.ndarray


@dataclass(frozen=True)
class ComplexityResult:
    regions: tuple[str, ...]
    industries: tuple[str, ...]
    eci: np.ndarray
    pci: np.ndarray
    eigenvalues: np.ndarray
    industry_eigenvalues: np.ndarray
    sign_anchor: dict

    def eci_by_region(self) -> dict[str, float]:
        return dict(zip(self.regions, self.eci.tolist()))

    def pci_by_industry(self) -> dict[str, float]:
        return dict(zip(self.industries, self.pci.tolist()))

    def diagnostics(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "industry_eigenvalues": self.industry_eigenvalues.tolist(),
            "sign_anchor": self.sign_anchor,
            "standardization": "mean 0, sample standard deviation (ddof=1)",
        }


def _check_pruned(bm: BinaryMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = bm.m.astype(np.float64)
    ks = bm.diversification.astype(np.float64)
    kp = bm.ubiquity.astype(np.float64)
    if m.size == 0 or np.any(ks == 0) or np.any(kp == 0):
        raise ComplexityError("binary matrix has empty rows or columns; prune it first")
    return m, ks, kp


def standardize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    sd = v.std(ddof=1)
    if not sd > 0:
        raise ComplexityError("cannot standardize a constant vector")
    return (v - v.mean()) / sd


def reflections(bm: BinaryMatrix, max_order: int, restandardize: bool = False) -> list[ReflectionsTrace]:
    """Iterates k_{s,N}, k_{p,N} for N = 0..max_order.

    With ``restandardize`` each iterate is rescaled to mean 0 / sample sd 1
    before feeding the next order (a constant iterate is left as is); raw
    iterates otherwise flatten towards the uniform vector.
    """
    if max_order < 0:
        raise ComplexityError("max_order must be >= 0")
    m, ks, kp = _check_pruned(bm)
    k_s, k_p = ks.copy(), kp.copy()
    traces = [ReflectionsTrace(0, ks.copy(), kp.copy())]
    for order in range(1, max_order + 1):
        k_s, k_p = (m @ k_p) / ks, (m.T @ k_s) / kp
        if restandardize:
            if k_s.std(ddof=1) > 0:
                k_s = standardize(k_s)
            if k_p.std(ddof=1) > 0:
                k_p = standardize(k_p)
        traces.append(ReflectionsTrace(order, k_s, k_p))
    return traces


def transformed_region_matrix(bm: BinaryMatrix) -> np.ndarray:
    m, ks, kp = _check_pruned(bm)
    return (m / ks[:, None]) @ (m / kp[None, :]).T


def transformed_industry_matrix(bm: BinaryMatrix) -> np.ndarray:
    m, ks, kp = _check_pruned(bm)
    return (m / kp[None, :]).T @ (m / ks[:, None])


def _second_eigenvector(m: np.ndarray, k_row: np.ndarray, k_col: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Second right eigenvector of D_row^-1 M D_col^-1 M^T and its spectrum (descending).

    The matrix is conjugated by D_row^1/2 into a symmetric one so a symmetric
    solver applies; eigenvectors are mapped back with D_row^-1/2.
    """
    n = m.shape[0]
    if n < 3:
        raise DegenerateSpectrum(f"{what}: need at least 3 {what}s, have {n}")
    scale = 1.0 / np.sqrt(k_row)
    a = (m / k_col[None, :]) @ m.T
    sym = scale[:, None] * a * scale[None, :]
    sym = (sym + sym.T) / 2
    w, u = np.linalg.eigh(sym)
    w, u = w[::-1], u[:, ::-1]
    if abs(w[0] - 1.0) > LEADING_TOL:
        raise ComplexityError(f"{what}: leading eigenvalue {w[0]!r} is not 1")
    if w[0] - w[1] < DEGENERACY_TOL:
        raise DegenerateSpectrum(f"{what}: eigenvalue 1 is repeated (disconnected bipartite network)")
    if abs(w[1] - w[2]) < DEGENERACY_TOL:
        raise DegenerateSpectrum(f"{what}: second and third eigenvalues coincide ({w[1]!r}, {w[2]!r})")
    return scale * u[:, 1], w


def _orient(v: np.ndarray, reference: np.ndarray) -> tuple[np.ndarray, str]:
    ref = reference - reference.mean()
    c = float(v @ ref)
    if abs(c) > 1e-12 * np.linalg.norm(v) * (np.linalg.norm(ref) or 1.0):
        return (v if c > 0 else -v), "correlation"
    skew = float(np.sum(v**3))
    if abs(skew) > 1e-12 * len(v):
        return (v if skew > 0 else -v), "skewness"
    return v, "none"


def eci(bm: BinaryMatrix) -> ComplexityResult:
    m, ks, kp = _check_pruned(bm)
    v, w_regions = _second_eigenvector(m, ks, kp, "region")
    u, w_industries = _second_eigenvector(m.T, kp, ks, "industry")
    try:
        e = standardize(v)
        q = standardize(u)
    except ComplexityError:
        raise DegenerateSpectrum("second eigenvector is constant") from None
    e, e_rule = _orient(e, ks)
    q, q_rule = _orient(q, -kp)
    anchor = {
        "eci": {"reference": "diversification", "rule": e_rule},
        "pci": {"reference": "-ubiquity", "rule": q_rule},
    }
    return ComplexityResult(bm.regions, bm.industries, e, q, w_regions, w_industries, anchor)
