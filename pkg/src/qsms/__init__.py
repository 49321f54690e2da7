"""Graph search as 2-QBF with isomorphism pruning inside a CEGAR solver."""

from .circuit import Circuit, Pool, Qbf
from .graph import Graph, OrderKind, PartialGraph, cell_order

__version__ = "0.1.0"

__all__ = ["Circuit", "Graph", "OrderKind", "PartialGraph", "Pool", "Qbf", "cell_order"]
