"""Exactly m-coloured subgraphs of edge-colourings of the complete graph on the naturals."""

from .colouring import (
    B,
    INJECTIVE,
    LAZY_COLOURINGS,
    LazyColouring,
    T,
    TemplateColouring,
    Vertex,
    bipartite_rainbow,
    embed_graph_rainbow,
    new_colours,
    small_rainbow,
    spectrum,
    validate,
)
from .homogeneity import (
    HomogTuple,
    build_homogeneous,
    build_weakly_homogeneous,
    canonical_check,
    is_homogeneous,
    rank,
    rank_less,
)
from .induced import SimpleGraph, induced_size_set, min_size_set
from .search import (
    FSet,
    GSet,
    SearchReport,
    canonical_form,
    enumerate_templates,
    f_set,
    g_set_prefix,
    law_report,
    psi_bounded,
)

__version__ = "0.1.0"
