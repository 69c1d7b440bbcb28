"""Command-line interface.

Exit codes: 0 when the analysis completed (whatever the verdict), 2 for
bad input or unmet hypotheses, 3 when an internal numerical self-check
fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import GraphError, HypothesisError, InvariantViolation, QGraphError, SpectrumValidationError
from .graph_core import load_edge_list, make_family, q_graph, write_edge_list
from .qgraph_spectra import closed_form_spectrum, regular_structure
from .serialize import dumps, to_jsonable
from .spectral import GROUPING_TOL, SUPPORT_TOL, eigendecompose
from .transfer_analysis import pgst_witness_search, pst_check, qgraph_no_pst_certificate
from .walk import fidelity_scan

log = logging.getLogger("qgraph_transfer")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    tol_eigen: float = GROUPING_TOL
    tol_support: float = SUPPORT_TOL
    alpha_max: int = 10**6
    epsilon: float = 0.01
    jobs: int = 1
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol_eigen <= 0 or self.tol_support <= 0:
            raise ValueError("tolerances must be positive")
        if self.alpha_max < 1:
            raise ValueError("--alpha-max must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("--eps must lie in (0, 1)")
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")

    def tolerances(self) -> dict:
        return {"eigen_grouping": self.tol_eigen, "support": self.tol_support}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _decompose(adjacency, cfg: RunConfig):
    return eigendecompose(adjacency, tol=cfg.tol_eigen, support_tol=cfg.tol_support)


def cmd_family(args, cfg: RunConfig) -> int:
    g = make_family(args.name, args.params)
    _emit(write_edge_list(g), cfg.out)
    return EXIT_OK


def cmd_qgraph(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    _emit(write_edge_list(q_graph(g)), cfg.out)
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    if args.closed_form:
        r, bipartite = regular_structure(g)
        dec = _decompose(g.adjacency, cfg)
        pairs = closed_form_spectrum(g, dec)
        numeric = np.sort(np.linalg.eigvalsh(q_graph(g).adjacency.astype(float)))
        closed = np.sort(np.concatenate([np.full(p.multiplicity, float(p.value)) for p in pairs]))
        err = float(np.max(np.abs(numeric - closed)))
        if err > 1e-8:
            raise InvariantViolation(f"closed-form spectrum differs from numeric spectrum by {err}")
        doc = {
            "command": "spectrum",
            "mode": "closed_form",
            "base": {"n": g.n, "m": g.m, "r": r, "bipartite": bipartite},
            "eigenvalues": [
                {
                    "branch": p.branch,
                    "source_eigenvalue": p.source_eigenvalue,
                    "value": float(p.value),
                    "exact": p.value if p.is_exact else None,
                    "multiplicity": p.multiplicity,
                }
                for p in pairs
            ],
            "numeric_check_max_error": err,
            "tolerances": cfg.tolerances(),
        }
    else:
        dec = _decompose(g.adjacency, cfg)
        quad = dec.quadratic or (None,) * len(dec.eigenvalues)
        doc = {
            "command": "spectrum",
            "mode": "numeric",
            "decomposition": dec.mode,
            "n": g.n,
            "eigenvalues": [
                {"value": lam, "multiplicity": a, "exact": q}
                for lam, a, q in zip(dec.eigenvalues, dec.multiplicities, quad)
            ],
            "tolerances": cfg.tolerances(),
        }
    _emit(dumps(doc), cfg.out)
    return EXIT_OK


def cmd_pst(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    for x in (args.u, args.v):
        if not 0 <= x < g.n:
            raise GraphError(f"vertex {x} out of range for n={g.n}")
    if args.u == args.v:
        raise GraphError("u and v must differ")
    dec = _decompose(g.adjacency, cfg)
    cert = pst_check(dec, args.u, args.v)
    doc = {"command": "pst", **to_jsonable(cert)}
    doc["pst_times"] = cert.pst_times_rule if cert.verdict == "pst" else None
    doc["decomposition"] = dec.mode
    doc["tolerances"] = cfg.tolerances()
    _emit(dumps(doc), cfg.out)
    return EXIT_OK


def cmd_no_pst_qgraph(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    dec = _decompose(g.adjacency, cfg)
    report = qgraph_no_pst_certificate(g, dec)
    doc = {"command": "no-pst-qgraph", **to_jsonable(report), "tolerances": cfg.tolerances()}
    _emit(dumps(doc), cfg.out)
    return EXIT_OK


def cmd_pgst(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    w = pgst_witness_search(g, args.u, args.v, epsilon=cfg.epsilon, alpha_max=cfg.alpha_max, jobs=cfg.jobs)
    doc = {"command": "pgst", **to_jsonable(w), "tolerances": cfg.tolerances()}
    _emit(dumps(doc), cfg.out)
    return EXIT_OK


def cmd_fidelity(args, cfg: RunConfig) -> int:
    g = load_edge_list(args.input)
    for x in (args.u, args.v):
        if not 0 <= x < g.n:
            raise GraphError(f"vertex {x} out of range for n={g.n}")
    dec = _decompose(g.adjacency, cfg)
    series = fidelity_scan(dec, args.u, args.v, args.t0, args.t1, args.steps, jobs=cfg.jobs)
    _emit(series.to_csv(), cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--out", help="output path (default: stdout)")
    common.add_argument("--tol-eigen", type=float, default=GROUPING_TOL, help="relative eigenvalue grouping tolerance")
    common.add_argument("--tol-support", type=float, default=SUPPORT_TOL, help="eigenvalue support threshold")

    parser = argparse.ArgumentParser(prog="qgraph-transfer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common], help="write a named graph as an edge list")
    p.add_argument("name")
    p.add_argument("params", nargs="*", type=int)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("qgraph", parents=[common], help="write the Q-graph of an edge-list graph")
    p.add_argument("input")
    p.set_defaults(func=cmd_qgraph)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum report as JSON")
    p.add_argument("input")
    p.add_argument("--closed-form", action="store_true", help="treat input as base graph G and report Q(G) in closed form")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("pst", parents=[common], help="PST certificate for a vertex pair")
    p.add_argument("input")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.set_defaults(func=cmd_pst)

    p = sub.add_parser("no-pst-qgraph", parents=[common], help="no-PST certificate for Q(G) of a base graph")
    p.add_argument("input")
    p.set_defaults(func=cmd_no_pst_qgraph)

    p = sub.add_parser("pgst", parents=[common], help="PGST witness time on Q(G) for a base-graph pair")
    p.add_argument("input")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--alpha-max", type=int, default=10**6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_pgst)

    p = sub.add_parser("fidelity", parents=[common], help="fidelity scan as CSV")
    p.add_argument("input")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=float(np.pi))
    p.add_argument("--steps", type=int, default=1001)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(
            tol_eigen=args.tol_eigen,
            tol_support=args.tol_support,
            alpha_max=getattr(args, "alpha_max", 10**6),
            epsilon=getattr(args, "eps", 0.01),
            jobs=getattr(args, "jobs", 1),
            out=args.out,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if not args.verbose else "default")
            return args.func(args, cfg)
    except InvariantViolation as exc:
        print(f"error: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GraphError, HypothesisError, SpectrumValidationError, QGraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
