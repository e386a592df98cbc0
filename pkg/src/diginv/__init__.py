"""Directed-graph invariants with brute-force cross-checks.

Modules: ``digraph`` (representation, routes, connectivity, I/O), ``weight``
(w, D, d, epimorphisms, tensor criteria), ``linalg`` (exact linear algebra,
Smith form, power series), ``homology`` (path homology), ``laplacian``
(spectra, Cheeger constant, critical group), ``zeta`` (Markov-shift zeta
series), ``posets`` (graded graphs, differential posets) and ``cli``.
"""

from .digraph import Digraph, Route, cycle_graph, parse_edge_list, path_graph, path_of_length, tensor_product
from .errors import InvariantViolation, SearchBudgetExceeded
from .weight import cycle_gcd, diameter_zero_weight, weight_invariant

__version__ = "0.1.0"

__all__ = [
    "Digraph", "Route", "cycle_graph", "path_graph", "path_of_length", "parse_edge_list",
    "tensor_product", "InvariantViolation", "SearchBudgetExceeded", "weight_invariant",
    "cycle_gcd", "diameter_zero_weight",
]
