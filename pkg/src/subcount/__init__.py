"""Estimate subgraph embedding counts by degree-truncated sampling with
Hoeffding confidence intervals."""

__version__ = "0.1.0"

from .counting import (
    WeightVector,
    anchor_embeddings,
    count_anchored,
    count_rooted_embeddings,
    count_truncated,
    enumerate_embeddings,
    exact_emb,
    hom_count,
    hom_trunc,
    hom_weighted,
    star_bound,
)
from .errors import SubcountError
from .estimator import (
    DegreeTailProfile,
    EstimateResult,
    degree_profile,
    estimate,
    estimate_anchored,
    make_sampler,
    sample_anchor_embedding,
    sample_size_absolute,
    sample_size_anchored,
    sample_size_relative,
)
from .graph import Graph, complete_graph, degree_moment, degree_tail, erdos_renyi, load_graph
from .pattern import Anchor, Pattern, RootedSpanningTree, make_pattern, o_internal_count, spanning_tree
