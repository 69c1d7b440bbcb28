import warnings

import numpy as np
import pytest

from qgraph_transfer.errors import HypothesisError
from qgraph_transfer.graph_core import Graph, classify, incidence, make_family, q_graph
from qgraph_transfer.qgraph_spectra import (
    MINUS,
    MINUS_TWO,
    PLUS,
    ZERO,
    branch_coefficient,
    closed_form_eigenvectors,
    closed_form_spectrum,
    qgraph_projectors,
    regular_structure,
)
from qgraph_transfer.quadratic import QuadraticNumber
from qgraph_transfer.spectral import eigendecompose

from conftest import CORPUS, INTEGRAL, build, corpus_id


def _setup(case):
    g = build(case)
    dec = eigendecompose(g.adjacency)
    return g, dec


def _multiset(pairs):
    return np.sort(np.concatenate([np.full(p.multiplicity, float(p.value)) for p in pairs]))


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_closed_form_matches_numeric(case):
    g, dec = _setup(case)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pairs = closed_form_spectrum(g, dec)
    numeric = np.linalg.eigvalsh(q_graph(g).adjacency.astype(float))
    closed = _multiset(pairs)
    assert closed.shape == numeric.shape
    assert np.abs(closed - numeric).max() < 1e-8


def test_q3_closed_form():
    g, dec = _setup(("hypercube", [3]))
    pairs = {(p.branch, p.source_eigenvalue): p for p in closed_form_spectrum(g, dec)}
    assert pairs[(PLUS, 3)].value == QuadraticNumber(4, 2, 10)  # 2 + sqrt(10)
    assert pairs[(ZERO, -3)].value == 0 and pairs[(ZERO, -3)].multiplicity == 1
    assert pairs[(MINUS_TWO, None)].multiplicity == 12 - 8 + 1


def test_c3_has_no_minus_two():
    g, dec = _setup(("cycle", [3]))
    pairs = closed_form_spectrum(g, dec)
    assert not any(p.branch == MINUS_TWO for p in pairs)  # m - n = 0
    assert not any(p.branch in (PLUS, MINUS) and p.value == -2 for p in pairs)


@pytest.mark.parametrize("case", [c for c in CORPUS if not classify(build(c)).is_bipartite], ids=corpus_id)
def test_non_bipartite_branches_avoid_minus_two(case):
    g, dec = _setup(case)
    for p in closed_form_spectrum(g, dec):
        if p.branch in (PLUS, MINUS):
            assert abs(float(p.value) + 2) > 1e-9


def test_rejects_irregular_and_disconnected():
    g, dec = _setup(("path", [3]))
    with pytest.raises(HypothesisError):
        closed_form_spectrum(g, dec)
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(HypothesisError, match="connected regular"):
        regular_structure(two_triangles)


def test_p2_warns_but_works():
    g, dec = _setup(("path", [2]))
    with pytest.warns(UserWarning):
        pairs = closed_form_spectrum(g, dec)
    assert np.allclose(_multiset(pairs), [-np.sqrt(2), 0, np.sqrt(2)])


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_eigenvectors_orthonormal(case):
    g, dec = _setup(case)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vecs = closed_form_eigenvectors(g, dec)
    a = q_graph(g).adjacency.astype(float)
    x = np.column_stack([v.vector for v in vecs])
    assert x.shape == (g.n + g.m, g.n + g.m)
    assert np.abs(x.T @ x - np.eye(x.shape[1])).max() < 1e-10
    for v in vecs:
        assert np.abs(a @ v.vector - float(v.value) * v.vector).max() < 1e-9


def _numeric_projector(a, value):
    w, u = np.linalg.eigh(a)
    cols = u[:, np.abs(w - value) < 1e-8]
    return cols @ cols.T


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_projectors_match_direct_eigendecomposition(case):
    g, dec = _setup(case)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        proj = qgraph_projectors(g, dec)
    a = q_graph(g).adjacency.astype(float)
    # merge branches that coincide numerically before comparing eigenspaces
    merged = {}
    for pair, f in proj:
        key = round(float(pair.value), 9)
        merged[key] = merged.get(key, 0) + f
    for value, f in merged.items():
        assert np.abs(f - _numeric_projector(a, value)).max() < 1e-8


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_projector_algebra(case):
    g, dec = _setup(case)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        proj = qgraph_projectors(g, dec)
    size = g.n + g.m
    fs = [f for _, f in proj]
    assert np.abs(proj.total() - np.eye(size)).max() < 1e-10
    assert np.abs(proj.reconstruct() - q_graph(g).adjacency).max() < 1e-10
    for i, f in enumerate(fs):
        assert np.abs(f @ f - f).max() < 1e-10
        for h in fs[i + 1 :]:
            assert np.abs(f @ h).max() < 1e-10


def test_c4_zero_projector_top_block():
    g, dec = _setup(("cycle", [4]))
    proj = qgraph_projectors(g, dec)
    f0 = next(f for p, f in proj if p.branch == ZERO)
    e = dec.projectors[dec.index_of(-2)]
    assert np.allclose(f0[:4, :4], e) and not f0[4:, :].any() and not f0[:, 4:].any()
    x = np.array([1, -1, 1, -1])
    assert np.allclose(f0[:4, :4], np.outer(x, x) / 4)


def test_petersen_branch_pairs_orthogonal():
    g, dec = _setup(("petersen", []))
    proj = dict((p, f) for p, f in qgraph_projectors(g, dec))
    for lam in dec.eigenvalues:
        fp = next(f for p, f in proj.items() if p.branch == PLUS and p.source_eigenvalue == lam)
        fm = next(f for p, f in proj.items() if p.branch == MINUS and p.source_eigenvalue == lam)
        assert np.abs(fp @ fm).max() < 1e-10


@pytest.mark.parametrize("case", INTEGRAL, ids=corpus_id)
def test_coefficient_identities_exact(case):
    g, dec = _setup(case)
    r = classify(g).regularity
    for lam in dec.eigenvalues:
        lam = int(lam)
        s = lam + r
        delta = QuadraticNumber.sqrt(s * s + 4)
        lp = QuadraticNumber(s - 2, 1, s * s + 4)
        lm = QuadraticNumber(s - 2, -1, s * s + 4)
        cp = branch_coefficient(lp, lam, r)
        cm = branch_coefficient(lm, lam, r)
        assert cp * cm == -s
        assert cp * cp + cm * cm == delta * delta - 2 * s
        assert cm * cm - cp * cp == (s - 2) * delta
