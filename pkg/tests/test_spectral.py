from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgraph_transfer.errors import SpectrumValidationError
from qgraph_transfer.graph_core import Graph, classify, incidence, make_family, q_graph
from qgraph_transfer.quadratic import QuadraticNumber
from qgraph_transfer.spectral import (
    eigendecompose,
    eigenvalue_support,
    exact_integer_projectors,
    kernel_basis,
    strong_cospectrality,
)

from conftest import CORPUS, INTEGRAL, build, corpus_id


def _check_projectors(dec, a, tol):
    n = a.shape[0]
    total = sum(dec.projectors)
    assert np.abs(total - np.eye(n)).max() < tol
    for i, e in enumerate(dec.projectors):
        assert np.abs(e @ e - e).max() < tol
        assert np.abs(e - e.T).max() < tol
        assert abs(np.trace(e) - dec.multiplicities[i]) < tol
        for f in dec.projectors[i + 1 :]:
            assert np.abs(e @ f).max() < tol
    assert np.abs(dec.reconstruct() - a).max() < tol


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_projector_invariants(case):
    g = build(case)
    dec = eigendecompose(g.adjacency)
    _check_projectors(dec, g.adjacency.astype(float), 1e-9)


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_qgraph_projector_invariants(case):
    q = q_graph(build(case))
    dec = eigendecompose(q.adjacency)
    _check_projectors(dec, q.adjacency.astype(float), 1e-9)


@pytest.mark.parametrize("case", INTEGRAL, ids=corpus_id)
def test_exact_projectors_are_exact(case):
    g = build(case)
    dec = eigendecompose(g.adjacency)
    assert dec.exact and dec.mode == "exact-rational"
    a = g.adjacency.astype(object)
    eye = np.array([[Fraction(int(i == j)) for j in range(g.n)] for i in range(g.n)], dtype=object)
    assert (sum(dec.exact_projectors) == eye).all()
    recon = sum(lam * e for lam, e in zip(dec.eigenvalues, dec.exact_projectors))
    assert (recon == a).all()
    for e in dec.exact_projectors:
        assert (e.dot(e) == e).all()
    # float projectors agree with the exact ones
    for e, ef in zip(dec.exact_projectors, dec.projectors):
        assert np.abs(e.astype(float) - ef).max() < 1e-12


def test_q3_spectrum_values():
    dec = eigendecompose(make_family("hypercube", [3]).adjacency)
    assert list(dec.eigenvalues) == [3, 1, -1, -3]
    assert list(dec.multiplicities) == [1, 3, 3, 1]


def test_petersen_is_integral_c5_is_not():
    dec = eigendecompose(make_family("petersen").adjacency)
    assert list(dec.eigenvalues) == [3, 1, -2] and list(dec.multiplicities) == [1, 5, 4]
    c5 = eigendecompose(make_family("cycle", [5]).adjacency)
    assert not c5.exact and c5.mode == "floating"
    assert len(c5.eigenvalues) == 3
    # (-1 +- sqrt 5)/2 are recognised exactly
    assert QuadraticNumber(-1, 1, 5) in c5.quadratic
    assert QuadraticNumber(-1, -1, 5) in c5.quadratic


def test_path3_quadratic_spectrum():
    dec = eigendecompose(make_family("path", [3]).adjacency)
    assert dec.quadratic == (QuadraticNumber(0, 2, 2), QuadraticNumber(0), QuadraticNumber(0, -2, 2))


def test_exact_integer_projectors_rejects_wrong_spectrum():
    a = make_family("cycle", [4]).adjacency
    with pytest.raises(SpectrumValidationError):
        exact_integer_projectors(a, [-2, 0, 1])
    with pytest.raises(SpectrumValidationError):
        exact_integer_projectors(make_family("cycle", [5]).adjacency, [-2, 2])


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[0, 1], [0, 0]]))


def test_c4_projector_at_minus_two():
    dec = eigendecompose(make_family("cycle", [4]).adjacency)
    e = dec.exact_projectors[dec.index_of(-2)]
    x = np.array([1, -1, 1, -1])  # alternating around 0-1-2-3
    expected = np.outer(x, x) / 4
    assert np.allclose(e.astype(float), expected)


def test_support():
    dec = eigendecompose(make_family("hypercube", [3]).adjacency)
    assert eigenvalue_support(dec, 0).members == (3, 1, -1, -3)
    dec = eigendecompose(make_family("path", [3]).adjacency)
    supp = eigenvalue_support(dec, 0)
    assert len(supp.indices) == 3
    # the middle vertex of P3 misses eigenvalue 0
    assert 0 not in [float(x) for x in eigenvalue_support(dec, 1).members]


def test_strong_cospectrality_q3_antipodal():
    dec = eigendecompose(make_family("hypercube", [3]).adjacency)
    rep = strong_cospectrality(dec, 0, 7)
    assert rep.strongly_cospectral
    assert set(rep.s_plus) == {3, -1} and set(rep.s_minus) == {1, -3}


def test_strong_cospectrality_c4_adjacent():
    dec = eigendecompose(make_family("cycle", [4]).adjacency)
    rep = strong_cospectrality(dec, 0, 1)
    assert not rep.strongly_cospectral
    assert rep.neither


def _sign_oracle(dec, u, v):
    """Brute force: compare E e_u with +-E e_v column by column."""
    plus, minus = [], []
    for lam, e in zip(dec.eigenvalues, dec.projectors):
        cu, cv = e[:, u], e[:, v]
        if np.linalg.norm(cu) < 1e-8 and np.linalg.norm(cv) < 1e-8:
            continue
        if np.allclose(cu, cv, atol=1e-8):
            plus.append(lam)
        elif np.allclose(cu, -cv, atol=1e-8):
            minus.append(lam)
        else:
            return None
    return tuple(plus), tuple(minus)


@pytest.mark.parametrize("case", INTEGRAL, ids=corpus_id)
def test_cospectrality_matches_oracle(case):
    g = build(case)
    dec = eigendecompose(g.adjacency)
    for v in range(1, g.n):
        rep = strong_cospectrality(dec, 0, v)
        oracle = _sign_oracle(dec, 0, v)
        assert rep.strongly_cospectral == (oracle is not None)
        if oracle is not None:
            assert (tuple(rep.s_plus), tuple(rep.s_minus)) == oracle


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_kernel_dimension(case):
    g = build(case)
    k = kernel_basis(incidence(g))
    expected = g.m - g.n + (1 if classify(g).is_bipartite else 0)
    assert k.shape == (g.m, expected)
    if expected:
        assert np.abs(incidence(g) @ k).max() < 1e-10
        assert np.abs(k.T @ k - np.eye(expected)).max() < 1e-10


@st.composite
def random_graphs(draw):
    n = draw(st.integers(min_value=2, max_value=9))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph.from_edges(n, chosen)


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_random_graph_decomposition(g):
    dec = eigendecompose(g.adjacency)
    _check_projectors(dec, g.adjacency.astype(float), 1e-8)
    assert sum(dec.multiplicities) == g.n
    w = np.linalg.eigvalsh(g.adjacency.astype(float))
    ours = np.repeat([float(x) for x in dec.eigenvalues], dec.multiplicities)
    assert np.abs(np.sort(ours) - w).max() < 1e-8
