"""Exact-arithmetic forward simulator for temporal message-passing models.

Computes an embedding for every (node, time point) pair, layer by layer. In
global mode a message from temporal neighbour (u, t') carries u's embedding
at t'; in local mode it carries u's embedding at the current time t. Either
way the time gap t - t' rides along with the message.

Everything is integer arithmetic on Python ints (activations are sign and
max(0, .)), so embedding equality is exact — no float summation-order
flakiness. Weights are drawn from streams keyed by (seed, role, ...), which
makes a run bit-identical for a given (graph, config) and, importantly,
makes the same seed denote the same model across different graphs: colour
embeddings are keyed by colour token and time coefficients by the raw time
gap, never by per-graph indices.

Variants:
* sum_sign        — sign(W (h + sum of alpha-weighted messages) - b)
* concat_sum_relu — W2 [h || relu(W1 (sum of (message || gap) vectors))]
* hash_injective  — injective combine/aggregate via canonical interning; the
                    "embedding" is a dense id whose equality classes realise
                    the refinement partitions exactly. Ids are run-local:
                    compare classes, not raw ids, across separate runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from tempowl.errors import ConfigMismatch, LayerNotComputed, UnknownNode
from tempowl.gen import Xorshift64Star, derive_seed
from tempowl.kgraph import temporal_neighbourhood
from tempowl.tgraph import TemporalGraph, TimestampedNode

MODES = ("global", "local")
VARIANTS = ("sum_sign", "concat_sum_relu", "hash_injective")

WEIGHT_RANGE = (-3, 3)


def identity_time_encoding(gap: int) -> int:
    return gap


@dataclass(frozen=True)
class ModelConfig:
    """Structural form plus the seed that fixes all integer parameters."""

    mode: str
    layers: int
    width: int = 8
    variant: str = "sum_sign"
    seed: int = 0
    time_encoding: Callable[[int], int] = identity_time_encoding

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigMismatch(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.variant not in VARIANTS:
            raise ConfigMismatch(
                f"variant must be one of {VARIANTS}, got {self.variant!r}"
            )
        if self.layers < 0:
            raise ConfigMismatch("layers must be non-negative")
        if self.width < 1:
            raise ConfigMismatch("width must be positive")


@dataclass(frozen=True)
class EmbeddingState:
    """Embeddings per layer: integer vectors, or dense ids for hash_injective."""

    config: ModelConfig
    nodes: tuple[TimestampedNode, ...]
    layers: tuple[dict, ...]
    _node_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_node_set", frozenset(self.nodes))

    def value(self, node: TimestampedNode, layer: int):
        if node not in self._node_set:
            raise UnknownNode(f"{node} has no embedding in this state")
        if not 0 <= layer < len(self.layers):
            raise LayerNotComputed(
                f"layer {layer} not computed (0..{len(self.layers) - 1})"
            )
        return self.layers[layer][node]


# --- Seeded integer parameters ---------------------------------------------------

def _stream(seed: int, *tags) -> Xorshift64Star:
    return Xorshift64Star(derive_seed(seed, *tags))


def _entries(rng: Xorshift64Star, count: int) -> tuple[int, ...]:
    lo, hi = WEIGHT_RANGE
    return tuple(rng.randint(lo, hi) for _ in range(count))


def _matrix(seed: int, tag: str, layer: int, rows: int, cols: int):
    rng = _stream(seed, "W", tag, layer)
    return [_entries(rng, cols) for _ in range(rows)]


def _bias(seed: int, layer: int, width: int) -> tuple[int, ...]:
    return _entries(_stream(seed, "b", layer), width)


def _alpha(seed: int, gap: int) -> int:
    return _entries(_stream(seed, "alpha", gap), 1)[0]


def _colour_vector(seed: int, token: str, width: int) -> tuple[int, ...]:
    return _entries(_stream(seed, "x", token), width)


# --- Integer vector helpers -------------------------------------------------------

def _vadd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _scaled(k: int, a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(k * x for x in a)


def _matvec(m, a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(w * x for w, x in zip(row, a)) for row in m)


def _sign(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple((x > 0) - (x < 0) for x in a)


def _relu(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x if x > 0 else 0 for x in a)


# --- Forward pass ------------------------------------------------------------------

def forward(tg: TemporalGraph, cfg: ModelConfig) -> EmbeddingState:
    """Embeddings for every timestamped node at layers 0..cfg.layers."""
    tnodes = tg.timestamped_nodes()
    nbhd = {
        tn: sorted(temporal_neighbourhood(tg, tn.node, tn.time_index))
        for tn in tnodes
    }
    if cfg.variant == "hash_injective":
        layers = _forward_hash(tg, cfg, tnodes, nbhd)
    else:
        layers = _forward_vectors(tg, cfg, tnodes, nbhd)
    return EmbeddingState(cfg, tuple(tnodes), tuple(layers))


def _messages(cfg, tg, prev, tn, neighbours):
    t = tg.times[tn.time_index]
    msgs = []
    for u, j in neighbours:
        gap = t - tg.times[j]
        carried = prev[(u, j)] if cfg.mode == "global" else prev[(u, tn.time_index)]
        msgs.append((carried, gap))
    return msgs


def _forward_vectors(tg, cfg, tnodes, nbhd):
    d = cfg.width
    zero = (0,) * d
    layers = [
        {tn: _colour_vector(cfg.seed, tg.colour_of(tn), d) for tn in tnodes}
    ]
    for layer in range(1, cfg.layers + 1):
        prev = layers[-1]
        cur = {}
        if cfg.variant == "sum_sign":
            w = _matrix(cfg.seed, "sum", layer, d, d)
            b = _bias(cfg.seed, layer, d)
        else:
            w1 = _matrix(cfg.seed, "agg", layer, d, d + 1)
            w2 = _matrix(cfg.seed, "com", layer, d, 2 * d)
        for tn in tnodes:
            # sums over ints are order-free; sorting keeps the aggregation
            # canonical in case a non-commutative AGG is ever plugged in
            msgs = sorted(_messages(cfg, tg, prev, tn, nbhd[tn]))
            if cfg.variant == "sum_sign":
                acc = zero
                for vec, gap in msgs:
                    acc = _vadd(acc, _scaled(_alpha(cfg.seed, gap), vec))
                cur[tn] = _sign(
                    tuple(x - y for x, y in zip(_matvec(w, _vadd(prev[tn], acc)), b))
                )
            else:
                acc = (0,) * (d + 1)
                for vec, gap in msgs:
                    acc = _vadd(acc, vec + (cfg.time_encoding(gap),))
                hidden = _relu(_matvec(w1, acc))
                cur[tn] = _matvec(w2, prev[tn] + hidden)
        layers.append(cur)
    return layers


def _forward_hash(tg, cfg, tnodes, nbhd):
    intern: dict = {}

    def intern_id(key) -> int:
        cid = intern.get(key)
        if cid is None:
            cid = len(intern)
            intern[key] = cid
        return cid

    layers = [
        {tn: intern_id(("colour", tg.colour_of(tn))) for tn in tnodes}
    ]
    for _ in range(1, cfg.layers + 1):
        prev = layers[-1]
        cur = {
            tn: intern_id(
                (
                    "combine",
                    prev[tn],
                    tuple(sorted(_messages(cfg, tg, prev, tn, nbhd[tn]))),
                )
            )
            for tn in tnodes
        }
        layers.append(cur)
    return layers


# --- Queries -------------------------------------------------------------------

def embedding_equal(
    state: EmbeddingState,
    node1: TimestampedNode,
    node2: TimestampedNode,
    layer: int,
    state2: EmbeddingState | None = None,
) -> bool:
    """Exact equality of two embeddings at one layer.

    Pass `state2` to compare nodes living in two separate runs of the same
    model on different graphs (meaningful for the weighted variants; the
    hash variant's ids are run-local).
    """
    other = state if state2 is None else state2
    return state.value(node1, layer) == other.value(node2, layer)


def classes_at(state: EmbeddingState, layer: int) -> list[list[TimestampedNode]]:
    """Equality classes of embeddings at `layer`, ordered by smallest member."""
    groups: dict = {}
    for tn in state.nodes:
        groups.setdefault(state.value(tn, layer), []).append(tn)
    classes = [sorted(members) for members in groups.values()]
    return sorted(classes, key=lambda g: g[0])
