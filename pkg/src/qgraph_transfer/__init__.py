"""Quantum state transfer on Q-graphs of regular graphs."""

from .graph_core import (
    Graph,
    GraphClassification,
    classify,
    incidence,
    line_graph,
    make_family,
    q_graph,
    read_edge_list,
    write_edge_list,
)
from .quadratic import QuadraticNumber, is_quadratic_integer, square_free_part
from .qgraph_spectra import closed_form_eigenvectors, closed_form_spectrum, qgraph_projectors
from .spectral import (
    SpectralDecomposition,
    eigendecompose,
    eigenvalue_support,
    exact_integer_projectors,
    kernel_basis,
    strong_cospectrality,
)
from .transfer_analysis import (
    compute_g,
    periodicity_check,
    pgst_witness_search,
    pst_check,
    qgraph_no_pst_certificate,
)
from .walk import amplitude, fidelity_scan, qgraph_amplitude, transition_matrix

__version__ = "0.1.0"
