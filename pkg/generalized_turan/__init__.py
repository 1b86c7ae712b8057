"""generalized-turan - extremal graphs, copy counting and exact values of ex(n, H, F)."""

from generalized_turan.__version__ import __version__
from generalized_turan.constructions import (
    asymptotic_profile,
    best_known_construction,
    classify_forbidden,
    clique_blocks,
    construct_g0,
    optimize_multipartite,
)
from generalized_turan.counting import count_copies, count_embeddings, count_embeddings_fixed, count_k2t
from generalized_turan.furedi import build_furedi, select_q, verify_furedi
from generalized_turan.galois import make_field
from generalized_turan.graph_core import Graph, graph6_decode, graph6_encode
from generalized_turan.main import main
from generalized_turan.oracle import enumerate_maximal_free, exact_ex
from generalized_turan.suite import run_suite
from generalized_turan.tree_analysis import decompose_tree, exponent_report

__all__ = [
    "Graph",
    "__version__",
    "asymptotic_profile",
    "best_known_construction",
    "build_furedi",
    "classify_forbidden",
    "clique_blocks",
    "construct_g0",
    "count_copies",
    "count_embeddings",
    "count_embeddings_fixed",
    "count_k2t",
    "decompose_tree",
    "enumerate_maximal_free",
    "exact_ex",
    "exponent_report",
    "graph6_decode",
    "graph6_encode",
    "main",
    "make_field",
    "optimize_multipartite",
    "run_suite",
    "select_q",
    "verify_furedi",
]
