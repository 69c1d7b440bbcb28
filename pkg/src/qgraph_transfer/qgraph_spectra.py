"""Closed-form eigenvalues, eigenvectors and eigenprojectors of Q(G).

For an r-regular connected G with distinct eigenvalues ``lam_i`` write
``s_i = lam_i + r`` and ``Delta_i = sqrt(s_i**2 + 4)``. Each ``lam_i`` gives
two Q-graph eigenvalues ``(s_i - 2 +- Delta_i) / 2`` with the multiplicity
of ``lam_i``; the null space of the incidence matrix contributes ``-2``.
For bipartite G the pair coming from ``lam = -r`` degenerates into the
eigenvalue ``0`` (top block ``E_{-r}``) and one extra ``-2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisError, InvariantViolation
from .graph_core import Graph, classify, incidence
from .quadratic import QuadraticNumber
from .spectral import SpectralDecomposition, kernel_basis

__all__ = [
    "PLUS",
    "MINUS",
    "MINUS_TWO",
    "ZERO",
    "QGraphEigenpair",
    "QGraphEigenvector",
    "QGraphProjectorSet",
    "regular_structure",
    "branch_coefficient",
    "closed_form_spectrum",
    "closed_form_eigenvectors",
    "qgraph_projectors",
]

PLUS, MINUS, MINUS_TWO, ZERO = "plus", "minus", "minus_two", "zero"
NORM_TOL = 1e-10


@dataclass(frozen=True)
class QGraphEigenpair:
    branch: str
    source_eigenvalue: int | float | None
    value: QuadraticNumber | float
    multiplicity: int

    def __float__(self) -> float:
        return float(self.value)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, QuadraticNumber)


@dataclass(frozen=True)
class QGraphEigenvector:
    branch: str
    source: tuple[int, ...]
    value: QuadraticNumber | float
    vector: np.ndarray


@dataclass(frozen=True)
class QGraphProjectorSet:
    projectors: dict

    def __iter__(self):
        return iter(self.projectors.items())

    def __len__(self):
        return len(self.projectors)

    def total(self) -> np.ndarray:
        return sum(self.projectors.values())

    def reconstruct(self) -> np.ndarray:
        return sum(float(pair.value) * f for pair, f in self.projectors.items())


def regular_structure(g: Graph) -> tuple[int, bool]:
    """Return ``(r, bipartite)`` or raise if G is not connected and regular."""
    info = classify(g)
    if g.n < 2 or not info.is_connected or info.regularity is None:
        raise HypothesisError("requires connected regular base graph")
    r = info.regularity
    if r < 2:
        if r == 1:
            warnings.warn("r = 1: G is P_2, outside the r >= 2 setting", stacklevel=3)
        else:
            raise HypothesisError("requires connected regular base graph")
    return r, info.is_bipartite


def _is_minus_r(lam, r: int, dec: SpectralDecomposition) -> bool:
    return abs(float(lam) + r) <= dec.grouping_tol * max(1.0, r)


def _branch_value(dec: SpectralDecomposition, i: int, r: int, sign: int):
    lam = dec.eigenvalues[i]
    q = dec.quadratic[i] if dec.quadratic is not None else None
    if q is not None and q.is_integer():
        s = int(q.rational_part) + r
        return QuadraticNumber(s - 2, sign, s * s + 4)
    s = float(lam) + r
    return (s - 2 + sign * math.sqrt(s * s + 4)) / 2


def branch_coefficient(value, source_eigenvalue, r: int):
    """Top-block coefficient ``value + 2 - r - lam`` of the closed-form eigenvector."""
    return value + 2 - r - source_eigenvalue


def closed_form_spectrum(g: Graph, dec: SpectralDecomposition) -> list[QGraphEigenpair]:
    r, bipartite = regular_structure(g)
    pairs = []
    for i, (lam, a) in enumerate(zip(dec.eigenvalues, dec.multiplicities)):
        if bipartite and _is_minus_r(lam, r, dec):
            zero = QuadraticNumber(0) if dec.exact or dec.is_integral else 0.0
            pairs.append(QGraphEigenpair(ZERO, -r, zero, a))
            continue
        for branch, sign in ((PLUS, 1), (MINUS, -1)):
            pairs.append(QGraphEigenpair(branch, lam, _branch_value(dec, i, r, sign), a))
    eta = g.m - g.n + (1 if bipartite else 0)
    if eta > 0:
        minus_two = QuadraticNumber(-4) if dec.exact or dec.is_integral else -2.0
        pairs.append(QGraphEigenpair(MINUS_TWO, None, minus_two, eta))
    return pairs


def _bipartite_sign_vector(g: Graph) -> np.ndarray:
    colouring = classify(g).bipartition
    return np.array([1.0 if c == 0 else -1.0 for c in colouring])


def closed_form_eigenvectors(g: Graph, dec: SpectralDecomposition) -> list[QGraphEigenvector]:
    """Orthonormal eigenbasis of A(Q(G)) assembled from G's eigenvectors.

    The zero-branch vector is ``n**-1/2 (c, 0)`` with ``c`` the +-1
    bipartition colouring; it reads ``(j, -j, 0)`` once vertices are ordered
    colour class first.
    """
    r, bipartite = regular_structure(g)
    R = incidence(g).astype(float)
    n, m = g.n, g.m
    out = []
    for i, lam in enumerate(dec.eigenvalues):
        basis = dec.bases[i]
        if bipartite and _is_minus_r(lam, r, dec):
            vec = np.concatenate([_bipartite_sign_vector(g), np.zeros(m)]) / math.sqrt(n)
            zero = QuadraticNumber(0) if dec.exact or dec.is_integral else 0.0
            out.append(QGraphEigenvector(ZERO, (i,), zero, vec))
            continue
        for branch, sign in ((PLUS, 1), (MINUS, -1)):
            value = _branch_value(dec, i, r, sign)
            c = float(value) + 2 - r - float(lam)
            scale = 1.0 / math.sqrt(c * c + float(lam) + r)
            for j in range(basis.shape[1]):
                x = basis[:, j]
                vec = scale * np.concatenate([c * x, R.T @ x])
                norm = float(np.linalg.norm(vec))
                if abs(norm - 1.0) > NORM_TOL:
                    raise InvariantViolation(
                        f"closed-form eigenvector ({branch}, lambda={lam}) has norm {norm}, expected 1"
                    )
                out.append(QGraphEigenvector(branch, (i, j), value, vec))
    zeta = kernel_basis(R)
    minus_two = QuadraticNumber(-4) if dec.exact or dec.is_integral else -2.0
    for k in range(zeta.shape[1]):
        vec = np.concatenate([np.zeros(n), zeta[:, k] / np.linalg.norm(zeta[:, k])])
        out.append(QGraphEigenvector(MINUS_TWO, (k,), minus_two, vec))
    return out


def qgraph_projectors(g: Graph, dec: SpectralDecomposition) -> QGraphProjectorSet:
    """Eigenprojectors of A(Q(G)) built blockwise from E_lam, R and the kernel of R."""
    r, bipartite = regular_structure(g)
    R = incidence(g).astype(float)
    n, m = g.n, g.m
    out = {}
    for pair in closed_form_spectrum(g, dec):
        if pair.branch == ZERO:
            k = next(i for i, lam in enumerate(dec.eigenvalues) if _is_minus_r(lam, r, dec))
            f = np.zeros((n + m, n + m))
            f[:n, :n] = dec.projectors[k]
        elif pair.branch == MINUS_TWO:
            zeta = kernel_basis(R)
            f = np.zeros((n + m, n + m))
            f[n:, n:] = zeta @ zeta.T
        else:
            i = dec.eigenvalues.index(pair.source_eigenvalue)
            e = dec.projectors[i]
            lam = float(pair.source_eigenvalue)
            c = float(pair.value) + 2 - r - lam
            er = e @ R
            f = np.block([[c * c * e, c * er], [c * er.T, R.T @ er]]) / (c * c + lam + r)
        out[pair] = f
    return QGraphProjectorSet(out)
