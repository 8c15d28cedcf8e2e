"""Graph-coloring check digits and verifiable secret sharing built on them."""

from .checkdigit import Envelope, TamperModel, VerifyOutcome, encode, verify
from .coloring import chromatic_number, find_coloring, is_valid_coloring
from .graph import Coloring, Graph, build_graph, graph_from_number, number_from_graph
from .secretshare import GraphShare, kgh_combine, kgh_split
from .vss import deal, pairwise_structure, recover_secret, verify_structure

__all__ = [
    "Coloring",
    "Envelope",
    "Graph",
    "GraphShare",
    "TamperModel",
    "VerifyOutcome",
    "build_graph",
    "chromatic_number",
    "deal",
    "encode",
    "find_coloring",
    "graph_from_number",
    "is_valid_coloring",
    "kgh_combine",
    "kgh_split",
    "number_from_graph",
    "pairwise_structure",
    "recover_secret",
    "verify",
    "verify_structure",
]
