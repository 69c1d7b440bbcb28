import warnings

import pytest

from qgraph_transfer.graph_core import make_family

# (family, params) for every graph the acceptance criteria name
CORPUS = [
    ("cycle", [3]),
    ("cycle", [4]),
    ("cycle", [5]),
    ("path", [2]),
    ("complete", [4]),
    ("petersen", []),
    ("hypercube", [3]),
    ("hypercube", [4]),
    ("cocktail", [2]),
    ("cocktail", [3]),
    ("cocktail", [4]),
    ("halved_hypercube", [2]),
]

INTEGRAL = [c for c in CORPUS if c not in (("cycle", [5]), ("petersen", []))] + [("hypercube", [2])]


def corpus_id(case):
    name, params = case
    return f"{name}{''.join(map(str, params))}"


def build(case):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return make_family(*case)


@pytest.fixture(params=CORPUS, ids=corpus_id)
def corpus_graph(request):
    return build(request.param)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
