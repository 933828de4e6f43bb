"""subdivlab: a workbench for subdivision-extremal graph theory.

Core containers and the operations most callers need are re-exported here;
the full surface lives in the submodules (graphs, homcount, patterns,
regularize, density, drc, structure, extremal, cli).
"""

from .errors import InputError, ResourceError, RetriesExhausted
from .graphs import (
    BipartiteGraph,
    Graph,
    WeightedGraph,
    build_bipartite,
    codegree,
    neighbourhood_graph,
)
from .homcount import (
    Pattern,
    count_kst_labelled,
    hom_c4_oriented,
    hom_generic,
    hom_star_oriented,
    norming_check,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "Graph",
    "WeightedGraph",
    "build_bipartite",
    "codegree",
    "neighbourhood_graph",
    "Pattern",
    "hom_c4_oriented",
    "hom_star_oriented",
    "hom_generic",
    "count_kst_labelled",
    "norming_check",
    "InputError",
    "ResourceError",
    "RetriesExhausted",
    "__version__",
]
