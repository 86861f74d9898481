"""Node-distinguishability oracles and the four-way pair classifier.

Whether some global (resp. local) model can tell two timestamped nodes apart
is decided by refining the disjoint union of the corresponding encodings of
the two graphs and comparing the nodes' colours layer by layer. Running to
stabilisation decides distinguishability by any number of layers; the first
separating layer is recorded so fixed-depth networks can be emulated.

Cross-graph comparison needs no time alignment: relation labels are time
differences shared by value across the union.
"""

from __future__ import annotations

from dataclasses import dataclass

from tempowl import rwl
from tempowl.errors import UnknownNode
from tempowl.kgraph import disjoint_union, k_glob, k_loc
from tempowl.tgraph import TemporalGraph, TimestampedNode

PAIR_CLASSES = ("both", "global_only", "local_only", "neither")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one mode's distinguishability query."""

    distinguishable: bool
    first_layer: int | None
    mode: str


def _check_node(tg: TemporalGraph, tn: TimestampedNode) -> None:
    if tn.node not in tg.node_ids or not 0 <= tn.time_index < len(tg.times):
        raise UnknownNode(f"{tn} is not a timestamped node of this graph")


def _union_colouring(tg1, tg2, encode, max_layers):
    merged, _ = disjoint_union(encode(tg1), encode(tg2))
    return rwl.refine(merged, max_layers)


def _tagged(origin: int, tn: TimestampedNode) -> TimestampedNode:
    return TimestampedNode(f"{origin}:{tn.node}", tn.time_index)


def _first_separating_layer(colouring, a, b):
    pa, pb = colouring.position(a), colouring.position(b)
    for layer, ids in enumerate(colouring.layers):
        if ids[pa] != ids[pb]:
            return layer
    return None


def _verdict(tg1, node1, tg2, node2, encode, mode, max_layers):
    _check_node(tg1, node1)
    _check_node(tg2, node2)
    colouring = _union_colouring(tg1, tg2, encode, max_layers)
    layer = _first_separating_layer(
        colouring, _tagged(0, node1), _tagged(1, node2)
    )
    return Verdict(layer is not None, layer, mode)


def distinguishable_global(
    tg1: TemporalGraph,
    node1: TimestampedNode,
    tg2: TemporalGraph,
    node2: TimestampedNode,
    max_layers: int | None = None,
) -> Verdict:
    """Can some global message-passing model separate the pair?

    With the default unbounded run the answer covers models of any depth;
    a `max_layers` bound answers relative to networks of at most that depth.
    """
    return _verdict(tg1, node1, tg2, node2, k_glob, "global", max_layers)


def distinguishable_local(
    tg1: TemporalGraph,
    node1: TimestampedNode,
    tg2: TemporalGraph,
    node2: TimestampedNode,
    max_layers: int | None = None,
) -> Verdict:
    """Can some local message-passing model separate the pair?"""
    return _verdict(tg1, node1, tg2, node2, k_loc, "local", max_layers)


def _combine(global_hit: bool, local_hit: bool) -> str:
    if global_hit and local_hit:
        return "both"
    if global_hit:
        return "global_only"
    if local_hit:
        return "local_only"
    return "neither"


def classify_pair(
    tg1: TemporalGraph,
    node1: TimestampedNode,
    tg2: TemporalGraph,
    node2: TimestampedNode,
) -> str:
    """Four-way class of one pair, with both refinements run to stabilisation."""
    g = distinguishable_global(tg1, node1, tg2, node2)
    l = distinguishable_local(tg1, node1, tg2, node2)
    return _combine(g.distinguishable, l.distinguishable)


@dataclass(frozen=True)
class ClassifyResult:
    """classify_all output: per-pair classes and layers, plus summary counts."""

    rows: tuple[TimestampedNode, ...]
    cols: tuple[TimestampedNode, ...]
    classes: dict[tuple[TimestampedNode, TimestampedNode], str]
    global_layers: dict[tuple[TimestampedNode, TimestampedNode], int | None]
    local_layers: dict[tuple[TimestampedNode, TimestampedNode], int | None]
    counts: dict[str, int]


def classify_all(tg1: TemporalGraph, tg2: TemporalGraph) -> ClassifyResult:
    """Classify every cross pair from two shared refinement runs.

    Both encodings are refined once on the disjoint union; pair extraction
    then only reads colour histories, so the result matches (and is much
    cheaper than) one classify_pair call per pair.
    """
    glob = _union_colouring(tg1, tg2, k_glob, None)
    loc = _union_colouring(tg1, tg2, k_loc, None)
    rows = tuple(tg1.timestamped_nodes())
    cols = tuple(tg2.timestamped_nodes())
    classes = {}
    global_layers = {}
    local_layers = {}
    counts = {name: 0 for name in PAIR_CLASSES}
    for a in rows:
        ta = _tagged(0, a)
        for b in cols:
            tb = _tagged(1, b)
            gl = _first_separating_layer(glob, ta, tb)
            ll = _first_separating_layer(loc, ta, tb)
            cls = _combine(gl is not None, ll is not None)
            classes[(a, b)] = cls
            global_layers[(a, b)] = gl
            local_layers[(a, b)] = ll
            counts[cls] += 1
    return ClassifyResult(rows, cols, classes, global_layers, local_layers, counts)
