"""Routing qubit permutations on connectivity graphs.

Synthesize, verify, and benchmark permutation-routing schedules under
three primitives: nearest-neighbor swaps, ancilla-assisted token trains
for sparse permutations, and entanglement-mediated state transfer along
vertex paths.  Includes exact vertex-expansion computation, routing-time
bounds, a token-level schedule verifier, and a stabilizer check of the
transfer circuits.
"""

from .graphs import (
    ArchGraph,
    Permutation,
    generate_graph,
    generate_permutation,
    cartesian_product,
    diameter,
    shortest_path,
    vertex_boundary,
    spanning_tree,
    graph_to_json,
    graph_from_json,
    graph_to_dot,
)

__version__ = "0.1.0"
