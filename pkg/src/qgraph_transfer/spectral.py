"""Spectral decompositions of symmetric integer matrices.

Floating eigenpairs come from ``numpy.linalg.eigh``. For integer input the
distinct eigenvalues are additionally recognised as integers or quadratic
surds, and the recognition is certified exactly by checking that the
product of the recovered minimal polynomials annihilates the matrix. When
every eigenvalue is an integer, the projectors are rebuilt in exact
rational arithmetic by Lagrange interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import SpectrumValidationError
from .quadratic import QuadraticNumber, is_perfect_square

__all__ = [
    "GROUPING_TOL",
    "SUPPORT_TOL",
    "SpectralDecomposition",
    "EigenvalueSupport",
    "CospectralityReport",
    "eigendecompose",
    "exact_integer_projectors",
    "eigenvalue_support",
    "strong_cospectrality",
    "kernel_basis",
    "is_integer_matrix",
]

GROUPING_TOL = 1e-8
SUPPORT_TOL = 1e-8
# how far a float may sit from an integer / integer symmetric function
# before recognition gives up; exact validation follows either way
RECOGNITION_TOL = 1e-6


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues (decreasing), multiplicities and eigenprojectors.

    ``quadratic`` holds, per eigenvalue, an exact :class:`QuadraticNumber`
    when the eigenvalue was recognised, else ``None``. ``validated`` is true
    only when the recognised minimal polynomials were checked exactly.
    ``exact_projectors`` are object arrays of ``Fraction`` in exact mode.
    """

    eigenvalues: tuple
    multiplicities: tuple[int, ...]
    projectors: tuple[np.ndarray, ...]
    bases: tuple[np.ndarray, ...] = field(repr=False)
    exact: bool = False
    exact_projectors: tuple[np.ndarray, ...] | None = field(default=None, repr=False)
    quadratic: tuple[QuadraticNumber | None, ...] | None = None
    validated: bool = False
    grouping_tol: float = GROUPING_TOL
    support_tol: float = SUPPORT_TOL

    @property
    def dimension(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def mode(self) -> str:
        return "exact-rational" if self.exact else "floating"

    @property
    def is_integral(self) -> bool:
        return self.quadratic is not None and all(
            q is not None and q.is_integer() for q in self.quadratic
        )

    def index_of(self, value: float, tol: float | None = None) -> int:
        tol = self.grouping_tol * max(1.0, max(abs(float(x)) for x in self.eigenvalues)) if tol is None else tol
        for k, lam in enumerate(self.eigenvalues):
            if abs(float(lam) - float(value)) <= tol:
                return k
        raise KeyError(f"{value} is not an eigenvalue")

    def reconstruct(self) -> np.ndarray:
        return sum(float(lam) * e for lam, e in zip(self.eigenvalues, self.projectors))


@dataclass(frozen=True)
class EigenvalueSupport:
    vertex: int
    indices: tuple[int, ...]
    members: tuple


@dataclass(frozen=True)
class CospectralityReport:
    u: int
    v: int
    strongly_cospectral: bool
    s_plus: tuple
    s_minus: tuple
    neither: tuple = ()


def is_integer_matrix(a) -> bool:
    a = np.asarray(a)
    if a.dtype.kind in "iub":
        return True
    if a.dtype.kind == "f":
        return bool(np.all(np.isfinite(a)) and np.all(a == np.round(a)))
    return False


def _check_symmetric(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.dtype.kind in "iub":
        ok = np.array_equal(a, a.T)
    else:
        ok = np.allclose(a, a.T, rtol=0.0, atol=1e-12)
    if not ok:
        raise ValueError("matrix must be symmetric")


# -- exact polynomial evaluation ----------------------------------------------


def _int_matrix(a) -> np.ndarray:
    return np.asarray(np.round(np.asarray(a, dtype=float))).astype(np.int64)


def _poly_at(a: np.ndarray, a2: np.ndarray | None, coeffs: tuple[int, ...]) -> np.ndarray:
    """Evaluate a monic polynomial of degree 1 or 2 at an integer matrix."""
    n = a.shape[0]
    eye = np.eye(n, dtype=a.dtype)
    if len(coeffs) == 1:
        (c0,) = coeffs
        return a + c0 * eye
    c1, c0 = coeffs
    return a2 + c1 * a + c0 * eye


def _inf_norm(a: np.ndarray) -> int:
    return int(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0


def _product_is_zero(a_int: np.ndarray, polys: Sequence[tuple[int, ...]]) -> bool:
    """Exactly decide whether prod p(A) == 0 for monic integer polynomials p."""
    a2 = a_int @ a_int if any(len(p) == 2 for p in polys) else None
    factors = [_poly_at(a_int, a2, p) for p in polys]
    bound = 1
    for f in factors:
        bound *= max(1, _inf_norm(f))
    if bound >= 2**62:
        factors = [f.astype(object) for f in factors]
    acc = factors[0]
    for f in factors[1:]:
        acc = acc @ f
    return not np.any(acc != 0)


def _recognize(values: Sequence[float]) -> list[tuple[QuadraticNumber, tuple[int, ...]] | None]:
    """Guess each eigenvalue as an integer or a quadratic surd.

    Uses the fact that the algebraic conjugate of an eigenvalue of an integer
    matrix is an eigenvalue too, so a quadratic lambda pairs with some mu
    with lambda+mu and lambda*mu both integers.
    """
    out: list[tuple[QuadraticNumber, tuple[int, ...]] | None] = []
    for k, lam in enumerate(values):
        c = round(lam)
        if abs(lam - c) <= RECOGNITION_TOL:
            out.append((QuadraticNumber.from_rational(int(c)), (-int(c),)))
            continue
        found = None
        for j, mu in enumerate(values):
            if j == k:
                continue
            t, nn = lam + mu, lam * mu
            ti, ni = round(t), round(nn)
            if abs(t - ti) > RECOGNITION_TOL or abs(nn - ni) > RECOGNITION_TOL:
                continue
            disc = int(ti) ** 2 - 4 * int(ni)
            if disc <= 0 or is_perfect_square(disc):
                continue
            sgn = 1 if lam > mu else -1
            found = (QuadraticNumber(int(ti), sgn, disc), (-int(ti), int(ni)))
            break
        out.append(found)
    return out


# -- decompositions -----------------------------------------------------------


def _group(w: np.ndarray, tol: float) -> list[list[int]]:
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    groups: list[list[int]] = []
    for k in range(len(w)):
        if groups and abs(w[groups[-1][-1]] - w[k]) <= tol * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def eigendecompose(
    adjacency,
    tol: float = GROUPING_TOL,
    support_tol: float = SUPPORT_TOL,
    exact: str | bool = "auto",
) -> SpectralDecomposition:
    """Decompose a symmetric matrix into eigenvalues and eigenprojectors.

    With ``exact="auto"`` an integer matrix whose spectrum validates as
    integral comes back in exact-rational mode; ``exact=False`` forces the
    floating decomposition (recognition of quadratic eigenvalues still runs).
    """
    a = np.asarray(adjacency)
    _check_symmetric(a)
    w, vecs = np.linalg.eigh(a.astype(float))
    order = np.argsort(-w, kind="stable")
    w, vecs = w[order], vecs[:, order]
    groups = _group(w, tol)
    values = [float(np.mean(w[g])) for g in groups]
    bases = tuple(vecs[:, g] for g in groups)
    projectors = tuple(b @ b.T for b in bases)
    mults = tuple(len(g) for g in groups)

    quadratic = None
    validated = False
    if is_integer_matrix(a) and a.size:
        rec = _recognize(values)
        if all(r is not None for r in rec):
            polys = sorted({r[1] for r in rec})
            if _product_is_zero(_int_matrix(a), polys):
                validated = True
                quadratic = tuple(r[0] for r in rec)
        if quadratic is None:
            quadratic = tuple(r[0] if r is not None else None for r in rec)

    if validated and exact in ("auto", True) and all(q.is_integer() for q in quadratic):
        spectrum = [int(q.rational_part) for q in quadratic]
        return exact_integer_projectors(a, spectrum, tol=tol, support_tol=support_tol)
    if exact is True:
        raise SpectrumValidationError("exact mode requested but the spectrum is not integral")
    return SpectralDecomposition(
        eigenvalues=tuple(values),
        multiplicities=mults,
        projectors=projectors,
        bases=bases,
        exact=False,
        quadratic=quadratic,
        validated=validated,
        grouping_tol=tol,
        support_tol=support_tol,
    )


def exact_integer_projectors(
    adjacency,
    spectrum: Sequence[int],
    tol: float = GROUPING_TOL,
    support_tol: float = SUPPORT_TOL,
) -> SpectralDecomposition:
    """Exact eigenprojectors ``E_l = prod_{mu != l} (A - mu I) / (l - mu)``.

    ``spectrum`` must be exactly the set of distinct eigenvalues; this is
    checked by ``prod (A - l I) == 0`` and by every projector having
    positive trace.
    """
    a = np.asarray(adjacency)
    _check_symmetric(a)
    if not is_integer_matrix(a):
        raise SpectrumValidationError("exact projectors need an integer matrix")
    a_int = _int_matrix(a)
    spectrum = sorted({int(x) for x in spectrum}, reverse=True)
    if len(spectrum) == 0:
        raise SpectrumValidationError("empty spectrum")
    if not _product_is_zero(a_int, [(-lam,) for lam in spectrum]):
        raise SpectrumValidationError(
            f"prod(A - lambda I) != 0 for spectrum {spectrum}: graph not integral or spectrum wrong"
        )
    n = a_int.shape[0]
    a_obj = a_int.astype(object)
    eye = np.eye(n, dtype=np.int64).astype(object)
    exact_proj = []
    mults = []
    for lam in spectrum:
        num = eye.copy()
        den = 1
        for mu in spectrum:
            if mu == lam:
                continue
            num = num @ (a_obj - mu * eye)
            den *= lam - mu
        proj = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                proj[i, j] = Fraction(int(num[i, j]), den)
        tr = sum(proj[i, i] for i in range(n))
        if tr == 0 or tr.denominator != 1:
            raise SpectrumValidationError(f"{lam} is not an eigenvalue (projector trace {tr})")
        exact_proj.append(proj)
        mults.append(int(tr))
    float_proj = tuple(p.astype(float) for p in exact_proj)
    bases = []
    for p, k in zip(float_proj, mults):
        pw, pv = np.linalg.eigh(p)
        bases.append(pv[:, np.argsort(-pw, kind="stable")[:k]])
    return SpectralDecomposition(
        eigenvalues=tuple(spectrum),
        multiplicities=tuple(mults),
        projectors=float_proj,
        bases=tuple(bases),
        exact=True,
        exact_projectors=tuple(exact_proj),
        quadratic=tuple(QuadraticNumber.from_rational(lam) for lam in spectrum),
        validated=True,
        grouping_tol=tol,
        support_tol=support_tol,
    )


# -- support and cospectrality ------------------------------------------------


def _column_nonzero(dec: SpectralDecomposition, k: int, u: int) -> bool:
    if dec.exact:
        return any(x != 0 for x in dec.exact_projectors[k][:, u])
    return float(np.linalg.norm(dec.projectors[k][:, u])) > dec.support_tol


def eigenvalue_support(dec: SpectralDecomposition, u: int) -> EigenvalueSupport:
    if not 0 <= u < dec.dimension:
        raise IndexError(f"vertex {u} out of range")
    idx = tuple(k for k in range(len(dec.eigenvalues)) if _column_nonzero(dec, k, u))
    return EigenvalueSupport(u, idx, tuple(dec.eigenvalues[k] for k in idx))


def strong_cospectrality(dec: SpectralDecomposition, u: int, v: int) -> CospectralityReport:
    """Split the joint support of ``u`` and ``v`` into S+, S- and failures."""
    if u == v:
        raise ValueError("strong cospectrality needs two distinct vertices")
    su = set(eigenvalue_support(dec, u).indices)
    sv = set(eigenvalue_support(dec, v).indices)
    plus, minus, neither = [], [], []
    for k in sorted(su | sv):
        if dec.exact:
            cu, cv = dec.exact_projectors[k][:, u], dec.exact_projectors[k][:, v]
            same = all(x == y for x, y in zip(cu, cv))
            opposite = all(x == -y for x, y in zip(cu, cv))
        else:
            cu, cv = dec.projectors[k][:, u], dec.projectors[k][:, v]
            same = float(np.linalg.norm(cu - cv)) <= dec.support_tol
            opposite = float(np.linalg.norm(cu + cv)) <= dec.support_tol
        lam = dec.eigenvalues[k]
        if same:
            plus.append(lam)
        elif opposite:
            minus.append(lam)
        else:
            neither.append(lam)
    return CospectralityReport(
        u=u,
        v=v,
        strongly_cospectral=not neither,
        s_plus=tuple(plus),
        s_minus=tuple(minus),
        neither=tuple(neither),
    )


def kernel_basis(r) -> np.ndarray:
    """Orthonormal basis of the right null space of ``r``, one vector per column."""
    r = np.asarray(r, dtype=float)
    if r.shape[1] == 0:
        return np.zeros((0, 0))
    return scipy.linalg.null_space(r, rcond=1e-10)
