"""Distinguishability of timestamped nodes under temporal message passing.

Temporal graphs compile into two knowledge-graph encodings; relational
colour refinement over those encodings decides which timestamped nodes
global and local message-passing models can tell apart. An exact integer
forward simulator and exact isomorphism checkers cross-check the refinement
verdicts.
"""

from tempowl.distinguish import (
    ClassifyResult,
    Verdict,
    classify_all,
    classify_pair,
    distinguishable_global,
    distinguishable_local,
)
from tempowl.gen import fixture, permuted_copy, random_tg
from tempowl.iso import IsoWitness, pointwise_iso, timewise_iso
from tempowl.kgraph import (
    KnowledgeGraph,
    disjoint_union,
    in_neighbourhood,
    k_glob,
    k_loc,
    temporal_neighbourhood,
)
from tempowl.rwl import REFINE_BACKEND, Colouring, colours_at, partition_at, refine
from tempowl.tgnn import EmbeddingState, ModelConfig, embedding_equal, forward
from tempowl.tgraph import (
    Snapshot,
    TemporalGraph,
    TimestampedNode,
    from_aggregated,
    from_events,
    is_colour_persistent,
    to_aggregated,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ClassifyResult",
    "Colouring",
    "EmbeddingState",
    "IsoWitness",
    "KnowledgeGraph",
    "ModelConfig",
    "REFINE_BACKEND",
    "Snapshot",
    "TemporalGraph",
    "TimestampedNode",
    "Verdict",
    "classify_all",
    "classify_pair",
    "colours_at",
    "disjoint_union",
    "distinguishable_global",
    "distinguishable_local",
    "embedding_equal",
    "fixture",
    "forward",
    "from_aggregated",
    "from_events",
    "in_neighbourhood",
    "is_colour_persistent",
    "k_glob",
    "k_loc",
    "partition_at",
    "permuted_copy",
    "pointwise_iso",
    "random_tg",
    "refine",
    "temporal_neighbourhood",
    "timewise_iso",
    "to_aggregated",
    "validate",
]
