import numpy as np
import pytest

from qgraph_transfer.errors import EdgeListParseError, GraphError
from qgraph_transfer.graph_core import (
    Graph,
    classify,
    incidence,
    line_graph,
    make_family,
    q_graph,
    read_edge_list,
    write_edge_list,
)

from conftest import CORPUS, build, corpus_id


def test_hypercube_q3():
    g = make_family("hypercube", [3])
    info = classify(g)
    assert (g.n, g.m) == (8, 12)
    assert info.regularity == 3 and info.is_bipartite and info.is_connected
    # binary-counting labels: neighbours differ in one bit
    assert all(bin(i ^ j).count("1") == 1 for i, j in g.edges)


def test_cocktail_octahedron():
    g = make_family("cocktail", [3])
    info = classify(g)
    assert (g.n, g.m) == (6, 12)
    assert info.regularity == 4 and not info.is_bipartite
    for k in range(3):
        assert g.adjacency[2 * k, 2 * k + 1] == 0


def test_halved_hypercube_small():
    g = make_family("halved_hypercube", [1])
    assert (g.n, g.m) == (2, 1)


def test_halved_hypercube_4_is_6_regular():
    g = make_family("halved_hypercube", [2])
    assert g.n == 8 and classify(g).regularity == 6


@pytest.mark.parametrize(
    "name,params",
    [("hypercube", [0]), ("cocktail", [1]), ("cycle", [2]), ("halved_hypercube", [0]), ("hypercube", [])],
)
def test_bad_parameters(name, params):
    with pytest.raises(GraphError):
        make_family(name, params)


def test_unknown_family():
    with pytest.raises(GraphError, match="unknown family"):
        make_family("moebius", [3])


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_handshake(case):
    g = build(case)
    assert 2 * g.m == int(g.degrees().sum())


def test_classify_path2():
    info = classify(make_family("path", [2]))
    assert info.is_connected and info.is_bipartite and info.regularity == 1


def test_classify_bipartition_is_proper():
    g = make_family("hypercube", [4])
    colour = classify(g).bipartition
    assert all(colour[i] != colour[j] for i, j in g.edges)


def test_classify_disconnected_and_irregular():
    g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
    info = classify(g)
    assert not info.is_connected and info.regularity is None


def test_incidence_small():
    assert incidence(make_family("path", [2])).tolist() == [[1], [1]]
    r = incidence(make_family("cycle", [3]))
    assert r.shape == (3, 3)
    assert (r.sum(axis=0) == 2).all() and (r.sum(axis=1) == 2).all()


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_incidence_identities(case):
    g = build(case)
    r = incidence(g)
    assert (r.sum(axis=0) == 2).all()
    deg = classify(g).regularity
    assert np.array_equal(r @ r.T, np.diag(g.degrees()) + g.adjacency)
    if deg is not None:
        assert np.array_equal(r @ r.T, deg * np.eye(g.n, dtype=int) + g.adjacency)
    assert np.array_equal(line_graph(g).adjacency, r.T @ r - 2 * np.eye(g.m, dtype=int))


def test_line_graphs():
    c3 = make_family("cycle", [3])
    assert line_graph(c3) == c3
    assert line_graph(make_family("path", [3])) == make_family("path", [2])
    lp = line_graph(make_family("petersen"))
    assert lp.n == 15 and classify(lp).regularity == 4


def test_qgraph_of_p2_is_p3():
    q = q_graph(make_family("path", [2]))
    # P_3 with the subdivision vertex (label 2) in the middle
    assert q.n == 3 and q.edges == ((0, 2), (1, 2))
    assert classify(q).regularity is None


def test_qgraph_of_triangle():
    q = q_graph(make_family("cycle", [3]))
    assert q.n == 6 and q.m == 9
    assert q.adjacency[3:, 3:].sum() == 6  # new vertices form a triangle


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_qgraph_counts(case):
    g = build(case)
    q = q_graph(g)
    assert q.n == g.n + g.m
    assert q.m == 2 * g.m + line_graph(g).m
    assert not q.adjacency[: g.n, : g.n].any()
    r = incidence(g)
    assert np.array_equal(q.adjacency[: g.n, g.n :], r)


def test_q3_qgraph_size():
    assert q_graph(make_family("hypercube", [3])).n == 20


def test_read_edge_list_path():
    g = read_edge_list("3\n0 1\n1 2\n")
    assert g == make_family("path", [3])


def test_write_triangle():
    assert write_edge_list(make_family("cycle", [3])) == "3\n0 1\n0 2\n1 2\n"


def test_comments_and_bytes():
    g = read_edge_list(b"# a comment\n3\n\n# more\n1 2\n0 1\n")
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "text,msg",
    [
        ("2\n0 0\n", "self-loop"),
        ("2\n0 2\n", "out of range"),
        ("3\n0 1\n0 1\n", "duplicate"),
        ("3\n0 1 2\n", "expected"),
        ("x\n", "vertex count"),
        ("", "missing"),
        ("3\n2 1\n", "i < j"),
    ],
)
def test_read_errors(text, msg):
    with pytest.raises(EdgeListParseError, match=msg):
        read_edge_list(text)


def test_parse_error_reports_line():
    with pytest.raises(EdgeListParseError) as info:
        read_edge_list("3\n0 1\n# c\n1 1\n")
    assert info.value.lineno == 4


@pytest.mark.parametrize("case", CORPUS, ids=corpus_id)
def test_round_trip(case):
    g = build(case)
    again = read_edge_list(write_edge_list(g))
    assert again == g and again.edges == g.edges


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, ((1, 0),))
    with pytest.raises(GraphError):
        Graph(3, ((1, 2), (0, 1)))
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1), (1, 0)])


def test_graph_is_immutable():
    g = make_family("cycle", [4])
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = 0
