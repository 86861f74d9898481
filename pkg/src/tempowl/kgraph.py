"""Multi-relational knowledge graphs and the two temporal-graph encodings.

Both encodings share the node set (one KG node per timestamped node of the
source graph) and label edges with exact time differences. They differ in
where the edges land:

* global form: an edge runs from the earlier endpoint ``(v, t_i)`` to the
  later one ``(u, t_j)``, so messages cross time slices;
* local form: the same generating pair instead yields an edge between the
  same-time copies ``(v, t_j)`` and ``(u, t_j)``, so edges never leave a
  slice and the time gap survives only in the label.

Unordered source edges induce both directions, and parallel edges between one
ordered node pair with distinct labels are allowed (and do occur).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Mapping

from tempowl.errors import UnknownNode, ValidationError
from tempowl.tgraph import TemporalGraph, TimestampedNode

Edge = tuple[int, TimestampedNode, TimestampedNode]


@dataclass(frozen=True)
class KnowledgeGraph:
    """Directed node-coloured graph with integer edge labels.

    Immutable after construction. An index of incoming edges sorted by
    (target, label, source) is built once so that in-neighbourhood reads in
    the refinement loop are contiguous range scans.
    """

    nodes: tuple[TimestampedNode, ...]
    relations: frozenset[int]
    edges: frozenset[Edge]
    colours: Mapping[TimestampedNode, str]
    _in_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "relations", frozenset(self.relations))
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "colours", dict(self.colours))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValidationError("duplicate knowledge-graph nodes")
        if set(self.colours) != node_set:
            raise ValidationError("colours are not total over the nodes")
        for r, src, tgt in self.edges:
            if r < 0:
                raise ValidationError(f"negative relation label {r}")
            if r not in self.relations:
                raise ValidationError(f"edge label {r} missing from relation set")
            if src not in node_set or tgt not in node_set:
                raise ValidationError(f"edge ({r}, {src}, {tgt}) leaves the node set")
        index: dict[TimestampedNode, list[tuple[int, TimestampedNode]]] = {}
        for r, src, tgt in sorted(self.edges, key=lambda e: (e[2], e[0], e[1])):
            index.setdefault(tgt, []).append((r, src))
        object.__setattr__(self, "_in_index", index)

    def incoming(self, node: TimestampedNode) -> list[tuple[int, TimestampedNode]]:
        """All (label, source) pairs of edges into `node`, sorted."""
        return self._in_index.get(node, [])


def _colour_map(tg: TemporalGraph) -> dict[TimestampedNode, str]:
    return {
        TimestampedNode(v, i): snap.colours[v]
        for i, snap in enumerate(tg.snapshots)
        for v in tg.node_ids
    }


def k_glob(tg: TemporalGraph) -> KnowledgeGraph:
    """Encoding whose refinement tracks message passing across time points."""
    n = len(tg.times)
    edges: set[Edge] = set()
    for i, snap in enumerate(tg.snapshots):
        for u, v in snap.edges:
            for j in range(i, n):
                r = tg.times[j] - tg.times[i]
                edges.add((r, TimestampedNode(v, i), TimestampedNode(u, j)))
                edges.add((r, TimestampedNode(u, i), TimestampedNode(v, j)))
    return KnowledgeGraph(
        tuple(tg.timestamped_nodes()),
        frozenset(r for r, _, _ in edges),
        frozenset(edges),
        _colour_map(tg),
    )


def k_loc(tg: TemporalGraph) -> KnowledgeGraph:
    """Encoding whose edges stay inside one time slice; gaps live in labels."""
    n = len(tg.times)
    edges: set[Edge] = set()
    for i, snap in enumerate(tg.snapshots):
        for u, v in snap.edges:
            for j in range(i, n):
                r = tg.times[j] - tg.times[i]
                edges.add((r, TimestampedNode(v, j), TimestampedNode(u, j)))
                edges.add((r, TimestampedNode(u, j), TimestampedNode(v, j)))
    return KnowledgeGraph(
        tuple(tg.timestamped_nodes()),
        frozenset(r for r, _, _ in edges),
        frozenset(edges),
        _colour_map(tg),
    )


def _tagged(origin: int, tn: TimestampedNode) -> TimestampedNode:
    return TimestampedNode(f"{origin}:{tn.node}", tn.time_index)


def disjoint_union(
    kg1: KnowledgeGraph, kg2: KnowledgeGraph
) -> tuple[KnowledgeGraph, dict[TimestampedNode, tuple[int, TimestampedNode]]]:
    """Merge two knowledge graphs on disjoint (origin-tagged) node sets.

    Relation labels are merged by value — they are time differences, hence
    comparable across graphs — so refinement colours computed on the result
    are directly comparable across origins. Returns the merged graph plus a
    map from each merged node back to (origin index, original node).
    """
    nodes = []
    edges: set[Edge] = set()
    colours: dict[TimestampedNode, str] = {}
    origin_map: dict[TimestampedNode, tuple[int, TimestampedNode]] = {}
    for k, kg in enumerate((kg1, kg2)):
        for tn in kg.nodes:
            tagged = _tagged(k, tn)
            nodes.append(tagged)
            colours[tagged] = kg.colours[tn]
            origin_map[tagged] = (k, tn)
        for r, src, tgt in kg.edges:
            edges.add((r, _tagged(k, src), _tagged(k, tgt)))
    return (
        KnowledgeGraph(
            tuple(nodes),
            kg1.relations | kg2.relations,
            frozenset(edges),
            colours,
        ),
        origin_map,
    )


def in_neighbourhood(
    kg: KnowledgeGraph, node: TimestampedNode, r: int
) -> set[TimestampedNode]:
    """Sources of r-labelled edges into `node`; empty for an unused label."""
    if node not in kg.colours:
        raise UnknownNode(f"{node} is not a node of this knowledge graph")
    pairs = kg.incoming(node)
    lo = bisect_left(pairs, r, key=lambda p: p[0])
    hi = bisect_right(pairs, r, key=lambda p: p[0])
    return {src for _, src in pairs[lo:hi]}


def temporal_neighbourhood(
    tg: TemporalGraph, v: str, time_index: int
) -> set[TimestampedNode]:
    """All (u, i) with an edge {u, v} in snapshot i and i at or before `time_index`."""
    if v not in tg.node_ids:
        raise UnknownNode(f"unknown node {v!r}")
    if not 0 <= time_index < len(tg.times):
        raise UnknownNode(f"time index {time_index} out of range")
    out: set[TimestampedNode] = set()
    for i in range(time_index + 1):
        for a, b in tg.snapshots[i].edges:
            if a == v:
                out.add(TimestampedNode(b, i))
            elif b == v:
                out.add(TimestampedNode(a, i))
    return out


# --- JSON interchange ---------------------------------------------------------

def to_dict(kg: KnowledgeGraph) -> dict:
    return {
        "nodes": [[tn.node, tn.time_index] for tn in sorted(kg.nodes)],
        "colours": {
            f"{tn.node}#{tn.time_index}": kg.colours[tn] for tn in sorted(kg.nodes)
        },
        "edges": [
            [r, [src.node, src.time_index], [tgt.node, tgt.time_index]]
            for r, src, tgt in sorted(kg.edges)
        ],
    }


def from_dict(data: dict) -> KnowledgeGraph:
    try:
        nodes = tuple(TimestampedNode(n, i) for n, i in data["nodes"])
        colours = {}
        for key, colour in data["colours"].items():
            name, _, idx = key.rpartition("#")
            colours[TimestampedNode(name, int(idx))] = colour
        edges = frozenset(
            (r, TimestampedNode(s, si), TimestampedNode(t, ti))
            for r, (s, si), (t, ti) in data["edges"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed knowledge-graph document: {exc}") from exc
    return KnowledgeGraph(nodes, frozenset(r for r, _, _ in edges), edges, colours)
