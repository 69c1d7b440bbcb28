"""Perfect and pretty good state transfer between vertices.

* :func:`pst_check` decides PST from strong cospectrality, the quadratic
  shape of the eigenvalue support and the parity split of normalised gaps.
* :func:`qgraph_no_pst_certificate` shows, vertex by vertex, that no vertex
  of Q(G) is periodic when G is regular and integral, which rules out PST.
* :func:`pgst_witness_search` looks for times ``t0 = (4*alpha + 2/g)*pi``
  at which the walk on Q(G) moves ``u`` to ``v`` with fidelity above
  ``1 - eps``, given that G has PST between them at ``pi/g``.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import HypothesisError, InvariantViolation
from .graph_core import Graph, classify, incidence
from .quadratic import QuadraticNumber, is_perfect_square, is_quadratic_integer, square_free_part
from .spectral import (
    SpectralDecomposition,
    eigendecompose,
    eigenvalue_support,
    strong_cospectrality,
)
from .walk import amplitude, qgraph_amplitude

__all__ = [
    "PST",
    "NO_PST",
    "NOT_STRONGLY_COSPECTRAL",
    "SUPPORT_NOT_QUADRATIC",
    "PARITY_MISMATCH",
    "PSTCertificate",
    "PeriodicityReport",
    "VertexNoPSTCertificate",
    "QGraphNoPSTReport",
    "PGSTWitness",
    "compute_g",
    "pst_check",
    "periodicity_check",
    "qgraph_no_pst_certificate",
    "pgst_witness_search",
]

PST, NO_PST, NOT_APPLICABLE = "pst", "no_pst", "not_applicable"
NOT_STRONGLY_COSPECTRAL = "not_strongly_cospectral"
SUPPORT_NOT_QUADRATIC = "support_not_quadratic"
PARITY_MISMATCH = "parity_mismatch"

AMPLITUDE_TOL = 1e-9
# agreement required between the reduced-phase search fidelity and the
# direct Q-graph amplitude at the returned t0
WITNESS_CROSSCHECK_TOL = 1e-6


def _as_quadratic(x) -> QuadraticNumber:
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadraticNumber.from_rational(x)
    raise TypeError(f"expected an exact number, got {x!r}")


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class PSTCertificate:
    verdict: str
    u: int
    v: int
    delta: int | None = None
    g: int | None = None
    tau0: float | None = None
    phase: complex | None = None
    lambda0: QuadraticNumber | None = None
    s_plus: tuple = ()
    s_minus: tuple = ()
    violated_condition: str | None = None
    witness: dict = field(default_factory=dict)
    amplitude_at_tau0: complex | None = None
    support_tol: float = 0.0
    grouping_tol: float = 0.0

    @property
    def pst_times_rule(self) -> str:
        return "odd multiples of tau0"


@dataclass(frozen=True)
class PeriodicityReport:
    vertex: int
    periodic: bool
    mode: str
    witness: tuple = ()
    delta: int | None = None
    a: int | Fraction | None = None


@dataclass(frozen=True)
class VertexNoPSTCertificate:
    vertex: int
    kind: str
    source_eigenvalue: int
    delta_squared: int
    sigma: int
    theta: int
    support: tuple[QuadraticNumber, ...]
    periodicity: PeriodicityReport


@dataclass(frozen=True)
class QGraphNoPSTReport:
    applicable: bool
    verdict: str
    preamble: dict
    reason: str | None = None
    vertices: tuple[VertexNoPSTCertificate, ...] = ()


@dataclass(frozen=True)
class PGSTWitness:
    u: int
    v: int
    epsilon: float
    alpha: int
    t0: float
    fidelity: float
    reached: bool
    g: int
    r: int
    bipartite: bool
    alpha_max: int
    theta_sigma: tuple[dict, ...]
    search_fidelity: float = 0.0
    max_residual: float = 0.0
    max_phase_residual: float = 0.0
    residual_bound: float | None = None


# -- shared shape test --------------------------------------------------------


def _common_form(values: Sequence[QuadraticNumber]):
    """Return ``(delta, a, witness)`` for the shape ``(a + b*sqrt(delta))/2``.

    ``delta == 1`` means every value is rational; ``a`` is the shared
    rational coordinate when ``delta > 1``. ``witness`` is non-empty when no
    single shape fits.
    """
    surds = {}
    for q in values:
        if q.b != 0:
            surds.setdefault(q.D, q)
    if len(surds) > 1:
        first, second = list(surds.values())[:2]
        return None, None, ("distinct_surds", first, second)
    if not surds:
        for q in values:
            if not q.is_integer():
                return None, None, ("not_algebraic_integer", q)
        return 1, None, ()
    (delta,) = surds
    by_a = {}
    for q in values:
        by_a.setdefault(q.a, q)
    if len(by_a) > 1:
        first, second = list(by_a.values())[:2]
        return None, None, ("mismatched_rational_part", first, second)
    for q in values:
        if not is_quadratic_integer(q):
            return None, None, ("not_algebraic_integer", q)
    return delta, next(iter(by_a)), ()


def compute_g(support: Iterable, lambda0, delta: int) -> int:
    """gcd of the normalised gaps ``(lambda0 - lam) / sqrt(delta)`` over the support."""
    lambda0 = _as_quadratic(lambda0)
    gaps = []
    for lam in support:
        diff = lambda0 - _as_quadratic(lam)
        if delta == 1:
            if not diff.is_integer():
                raise ValueError(f"gap {diff} is not an integer")
            k = diff.rational_part
        else:
            if diff.rational_part != 0 or (diff.b != 0 and diff.D != delta):
                raise ValueError(f"gap {diff} is not an integer multiple of sqrt({delta})")
            k = diff.surd_coefficient
            if k.denominator != 1:
                raise ValueError(f"gap {diff} is not an integer multiple of sqrt({delta})")
        if k < 0:
            raise ValueError(f"lambda0={lambda0} is not the largest support eigenvalue")
        gaps.append(int(k))
    g = 0
    for k in gaps:
        g = math.gcd(g, k)
    if g == 0:
        raise ValueError("support has a single eigenvalue; g is undefined")
    return g


def periodicity_check(support: Iterable, vertex: int = 0) -> PeriodicityReport:
    values = [_as_quadratic(x) for x in support]
    if not values:
        raise ValueError("empty support")
    delta, a, witness = _common_form(values)
    if witness:
        return PeriodicityReport(vertex, False, "none", witness)
    if delta == 1:
        return PeriodicityReport(vertex, True, "all_integer", (), 1, None)
    return PeriodicityReport(vertex, True, "single_surd", (), delta, a)


# -- PST ----------------------------------------------------------------------


def pst_check(dec: SpectralDecomposition, u: int, v: int) -> PSTCertificate:
    """Decide PST between ``u`` and ``v``; positive verdicts are re-checked dynamically."""
    if u == v:
        raise ValueError("PST needs two distinct vertices")
    common = dict(u=u, v=v, support_tol=dec.support_tol, grouping_tol=dec.grouping_tol)
    cos = strong_cospectrality(dec, u, v)
    if not cos.strongly_cospectral:
        return PSTCertificate(
            NO_PST,
            s_plus=cos.s_plus,
            s_minus=cos.s_minus,
            violated_condition=NOT_STRONGLY_COSPECTRAL,
            witness={"eigenvalues": list(cos.neither)},
            **common,
        )
    supp = eigenvalue_support(dec, u)
    quads = [dec.quadratic[k] if dec.quadratic is not None else None for k in supp.indices]
    unknown = [dec.eigenvalues[k] for k, q in zip(supp.indices, quads) if q is None]
    if unknown or not dec.validated:
        return PSTCertificate(
            NO_PST,
            s_plus=cos.s_plus,
            s_minus=cos.s_minus,
            violated_condition=SUPPORT_NOT_QUADRATIC,
            witness={"reason": "eigenvalue not recognised as a quadratic integer", "eigenvalues": unknown},
            **common,
        )
    delta, _, bad = _common_form(quads)
    if bad:
        return PSTCertificate(
            NO_PST,
            s_plus=cos.s_plus,
            s_minus=cos.s_minus,
            violated_condition=SUPPORT_NOT_QUADRATIC,
            witness={"reason": bad[0], "eigenvalues": list(bad[1:])},
            **common,
        )
    # for connected graphs the largest eigenvalue always lies in every support
    lambda0 = max(quads)
    g = compute_g(quads, lambda0, delta)
    plus_idx = {k for k in supp.indices if dec.eigenvalues[k] in cos.s_plus}
    for k, q in zip(supp.indices, quads):
        diff = lambda0 - q
        step = diff.rational_part if delta == 1 else diff.surd_coefficient
        parity = int(step) // g % 2
        in_plus = k in plus_idx
        if (parity == 0) != in_plus:
            return PSTCertificate(
                NO_PST,
                delta=delta,
                g=g,
                lambda0=lambda0,
                s_plus=cos.s_plus,
                s_minus=cos.s_minus,
                violated_condition=PARITY_MISMATCH,
                witness={"eigenvalue": q, "normalized_gap": int(step) // g, "in_s_plus": in_plus},
                **common,
            )
    tau0 = math.pi / (g * math.sqrt(delta))
    phase = cmath.exp(-1j * tau0 * float(lambda0))
    amp = amplitude(dec, tau0, u, v)
    if abs(abs(amp) - 1.0) > AMPLITUDE_TOL or abs(amp - phase) > AMPLITUDE_TOL:
        raise InvariantViolation(
            f"PST predicted between {u} and {v} at tau0={tau0!r} but amplitude is {amp!r} (phase {phase!r})"
        )
    return PSTCertificate(
        PST,
        delta=delta,
        g=g,
        tau0=tau0,
        phase=phase,
        lambda0=lambda0,
        s_plus=cos.s_plus,
        s_minus=cos.s_minus,
        amplitude_at_tau0=amp,
        **common,
    )


# -- Q-graph certificates -----------------------------------------------------


def _preamble(g: Graph) -> dict:
    info = classify(g)
    return {
        "n": g.n,
        "m": g.m,
        "connected": info.is_connected,
        "bipartite": info.is_bipartite,
        "regularity": info.regularity,
        "n_greater_than_2": g.n > 2,
    }


def _branch_pair(lam: int, r: int) -> tuple[QuadraticNumber, QuadraticNumber]:
    s = lam + r
    return QuadraticNumber(s - 2, 1, s * s + 4), QuadraticNumber(s - 2, -1, s * s + 4)


def qgraph_no_pst_certificate(g: Graph, dec: SpectralDecomposition | None = None) -> QGraphNoPSTReport:
    """Certify that Q(G) has no PST when G is connected, r-regular (r >= 2), n > 2 and integral.

    For every vertex ``z`` of Q(G) the support of ``z`` is computed exactly
    from G's projectors; it always contains a pair ``(s-2 +- sqrt(s^2+4))/2``
    with ``s^2 + 4`` not a perfect square, and the whole support fails the
    periodicity test. A non-periodic vertex cannot take part in PST.
    """
    pre = _preamble(g)
    r = pre["regularity"]

    def not_applicable(reason):
        return QGraphNoPSTReport(False, NOT_APPLICABLE, pre, reason)

    if not pre["connected"]:
        return not_applicable("base graph is not connected")
    if r is None:
        return not_applicable("base graph is not regular")
    if r < 2:
        return not_applicable("base graph has degree r < 2")
    if not pre["n_greater_than_2"]:
        return not_applicable("base graph has n <= 2")
    dec = dec if dec is not None else eigendecompose(g.adjacency)
    if not dec.exact:
        return not_applicable("base graph spectrum is not integral")
    pre["integral"] = True
    pre["spectrum"] = list(dec.eigenvalues)

    n, m = g.n, g.m
    R = incidence(g).astype(object)
    lams = [int(x) for x in dec.eigenvalues]
    ER = [e @ R for e in dec.exact_projectors]
    # bottom-right block of F_{-2}: I - sum_{s != 0} R^T E R / s
    kernel_block = np.eye(m, dtype=np.int64).astype(object) * Fraction(1)
    for lam, er in zip(lams, ER):
        if lam + r != 0:
            kernel_block = kernel_block - (R.T @ er) * Fraction(1, lam + r)

    certs = []
    for z in range(n + m):
        support: list[QuadraticNumber] = []
        witness_lam = None
        if z < n:
            kind = "original"
            for k in eigenvalue_support(dec, z).indices:
                lam = lams[k]
                if lam + r == 0:
                    support.append(QuadraticNumber(0))
                    continue
                support.extend(_branch_pair(lam, r))
                if witness_lam is None:
                    witness_lam = lam
        else:
            kind = "edge"
            col = z - n
            for lam, er in zip(lams, ER):
                if any(x != 0 for x in er[:, col]):
                    if lam + r == 0:
                        raise InvariantViolation("E_{-r} R has a nonzero column")
                    support.extend(_branch_pair(lam, r))
                    if witness_lam is None:
                        witness_lam = lam
            if any(x != 0 for x in kernel_block[:, col]):
                support.append(QuadraticNumber(-4))
        if witness_lam is None:
            raise InvariantViolation(f"vertex {z} of Q(G) has no eigenvalue pair with lambda + r != 0")
        dsq = (witness_lam + r) ** 2 + 4
        if is_perfect_square(dsq):
            raise InvariantViolation(f"(lambda + r)^2 + 4 = {dsq} is a perfect square")
        sigma, theta = square_free_part(dsq)
        report = periodicity_check(sorted(support, reverse=True), z)
        if report.periodic:
            raise InvariantViolation(f"vertex {z} of Q(G) came out periodic: {report}")
        certs.append(
            VertexNoPSTCertificate(
                vertex=z,
                kind=kind,
                source_eigenvalue=witness_lam,
                delta_squared=dsq,
                sigma=sigma,
                theta=theta,
                support=tuple(sorted(support, reverse=True)),
                periodicity=report,
            )
        )
    return QGraphNoPSTReport(True, NO_PST, pre, None, tuple(certs))


# -- PGST ---------------------------------------------------------------------

_FRAC_BITS = 64
_MASK = (1 << _FRAC_BITS) - 1


def _fixed_point_fraction(theta: int, g: int) -> int:
    """Low 64 fractional bits of ``sqrt(theta) / (2g)``, truncated."""
    return (math.isqrt(theta << (2 * _FRAC_BITS)) // (2 * g)) & _MASK


@dataclass(frozen=True)
class _Term:
    lam: int
    weight: float
    s: int
    sigma: int
    theta: int
    fixed: np.uint64


def _fractions(alphas: np.ndarray, term: _Term, g: int, sigma: int) -> np.ndarray:
    """Fractional part of ``sigma * (alpha + 1/(2g)) * sqrt(theta)`` for each alpha.

    Works in 64-bit fixed point with wrapping ``uint64`` products, so the
    integer part never has to be represented and the error stays below
    ``(2g*alpha + 1) * sigma * 2**-64``.
    """
    mult = (np.uint64(2 * g) * alphas.astype(np.uint64) + np.uint64(1)).astype(np.uint64)
    return (mult * term.fixed * np.uint64(sigma)).astype(np.float64) / 2.0**_FRAC_BITS


def _distance_to_integer(frac: np.ndarray) -> np.ndarray:
    return np.minimum(frac, 1.0 - frac)


def _search_fidelity(alphas: np.ndarray, terms: Sequence[_Term], constant: float, g: int, r: int) -> np.ndarray:
    """|amplitude(u, v, t0(alpha))| on Q(G) with every phase reduced exactly mod 2*pi."""
    total = np.zeros(alphas.shape, dtype=complex)
    for term in terms:
        x = 2 * math.pi * _fractions(alphas, term, g, term.sigma)
        delta = math.sqrt(term.s * term.s + 4)
        rot = cmath.exp(-1j * math.pi * term.lam / g)
        total += rot * term.weight * (np.cos(x) + 1j * ((term.s - 2) / delta) * np.sin(x))
    glob = cmath.exp(-1j * math.pi * (r - 2) / g)
    return np.abs(glob * total + constant)


def pgst_witness_search(
    g: Graph,
    u: int,
    v: int,
    epsilon: float = 0.01,
    alpha_max: int = 10**6,
    jobs: int = 1,
    chunk: int = 1 << 16,
    residual_bound: float | None = None,
) -> PGSTWitness:
    """Smallest ``alpha`` in ``1..alpha_max`` whose time ``(4 alpha + 2/g) pi`` beats ``1 - epsilon``.

    Requires PST in G between ``u`` and ``v`` at ``pi/g`` with integral
    support, and ``r/g`` even when G is bipartite. If no alpha qualifies the
    best one seen is returned with ``reached=False``.

    The acceptance test is the Q-graph fidelity itself. With
    ``residual_bound`` set, an alpha is also required to bring every
    ``(alpha + 1/(2g)) * sqrt(theta_j)`` within that distance of an integer.
    For bipartite G that restriction can cap the fidelity below 1 (the
    factor ``exp(-i t0 (r-2)/2)`` does not multiply the ``E_{-r}`` term), so
    it is off by default.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if alpha_max < 1:
        raise ValueError("alpha_max must be >= 1")
    pre = _preamble(g)
    r = pre["regularity"]
    if not pre["connected"] or r is None or r < 2:
        raise HypothesisError("hypotheses unmet: G must be connected and r-regular with r >= 2")
    if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
        raise HypothesisError("hypotheses unmet: u and v must be distinct vertices of G")
    bipartite = pre["bipartite"]
    dec = eigendecompose(g.adjacency)
    cert = pst_check(dec, u, v)
    if cert.verdict != PST:
        raise HypothesisError(f"hypotheses unmet: G has no PST between {u} and {v} ({cert.violated_condition})")
    if cert.delta != 1 or not dec.exact:
        raise HypothesisError("hypotheses unmet: PST in G must occur at pi/g with integral support")
    gg = cert.g
    if bipartite and (r % gg != 0 or (r // gg) % 2 != 0):
        raise HypothesisError(f"hypotheses unmet: G is bipartite and r/g = {Fraction(r, gg)} is not an even integer")

    terms: list[_Term] = []
    constant = 0.0
    for k in eigenvalue_support(dec, u).indices:
        lam = int(dec.eigenvalues[k])
        w = float(dec.exact_projectors[k][v, u])
        if lam + r == 0:
            constant += w
            continue
        sigma, theta = square_free_part((lam + r) ** 2 + 4)
        terms.append(_Term(lam, w, lam + r, sigma, theta, np.uint64(_fixed_point_fraction(theta, gg))))

    target = 1.0 - epsilon
    starts = list(range(1, alpha_max + 1, chunk))

    def scan(start):
        alphas = np.arange(start, min(start + chunk, alpha_max + 1), dtype=np.int64)
        fid = _search_fidelity(alphas, terms, constant, gg, r)
        if residual_bound is not None:
            for term in terms:
                dist = _distance_to_integer(_fractions(alphas, term, gg, 1))
                fid = np.where(dist <= residual_bound, fid, -1.0)
        hits = np.flatnonzero(fid > target)
        best = int(np.argmax(fid))
        first = (int(alphas[hits[0]]), float(fid[hits[0]])) if hits.size else None
        return first, (int(alphas[best]), float(fid[best]))

    found = None
    best = (1, -1.0)
    batch = max(1, jobs)
    with ThreadPoolExecutor(max_workers=batch) as pool:
        for i in range(0, len(starts), batch):
            results = list(pool.map(scan, starts[i : i + batch]))
            for first, cand in results:
                if cand[1] > best[1]:
                    best = cand
                if first is not None and found is None:
                    found = first
            if found is not None:
                break

    alpha, search_fid = found if found is not None else best
    t0 = (4 * alpha + 2 / gg) * math.pi
    direct = abs(qgraph_amplitude(dec, r, bipartite, t0, u, v))
    if abs(direct - search_fid) > WITNESS_CROSSCHECK_TOL:
        raise InvariantViolation(
            f"search fidelity {search_fid!r} disagrees with direct amplitude {direct!r} at alpha={alpha}"
        )
    rows = []
    max_res = max_phase = 0.0
    alpha_arr = np.array([alpha], dtype=np.int64)
    for term in terms:
        m2 = (2 * gg * alpha + 1) ** 2 * term.theta
        p = (math.isqrt(m2) + gg) // (2 * gg)
        frac = float(_fractions(alpha_arr, term, gg, 1)[0])
        residual = frac if frac < 0.5 else frac - 1.0
        phase = float(_distance_to_integer(_fractions(alpha_arr, term, gg, term.sigma))[0])
        max_res = max(max_res, abs(residual))
        max_phase = max(max_phase, phase)
        rows.append(
            {
                "lambda": term.lam,
                "delta_squared": term.s * term.s + 4,
                "sigma": term.sigma,
                "theta": term.theta,
                "p": p,
                "residual": residual,
                "phase_residual": phase,
            }
        )
    return PGSTWitness(
        u=u,
        v=v,
        epsilon=epsilon,
        alpha=alpha,
        t0=t0,
        fidelity=direct,
        reached=found is not None and direct > target,
        g=gg,
        r=r,
        bipartite=bipartite,
        alpha_max=alpha_max,
        theta_sigma=tuple(rows),
        search_fidelity=search_fid,
        max_residual=max_res,
        max_phase_residual=max_phase,
        residual_bound=residual_bound,
    )
