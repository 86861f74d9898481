"""Pure-Python refinement kernel (fallback for the compiled extension).

Both kernels implement the same contract and must stay bit-identical; see
tests/test_backends.py. Inputs are flat integer arrays: a CSR layout of the
incoming edges of each node (`indptr`, `srcs`, `rels`) plus the dense layer-0
colour ids. Relation ids must already be dense.
"""

from __future__ import annotations


def refine_rounds(
    n: int,
    indptr: list[int],
    srcs: list[int],
    rels: list[int],
    init: list[int],
    max_layers: int,
) -> tuple[list[list[int]], int | None]:
    """Iterate colour refinement until the partition stops splitting.

    Each layer maps every node to a dense id assigned in first-encounter
    order over the node sweep 0..n-1. Because consecutive layers with equal
    partitions then produce elementwise-equal arrays, stabilisation is a
    plain array comparison; the duplicate layer is not stored.

    Returns (layers, stable_at) where layers[0] is `init` and stable_at is
    None when `max_layers` ran out before a repeat was seen.
    """
    layers = [list(init)]
    cur = layers[0]
    stable_at = None
    for _ in range(max_layers):
        table: dict[tuple, int] = {}
        new = [0] * n
        for v in range(n):
            sig = (
                cur[v],
                tuple(
                    sorted(
                        (cur[srcs[e]], rels[e])
                        for e in range(indptr[v], indptr[v + 1])
                    )
                ),
            )
            cid = table.get(sig)
            if cid is None:
                cid = len(table)
                table[sig] = cid
            new[v] = cid
        if new == cur:
            stable_at = len(layers) - 1
            break
        layers.append(new)
        cur = new
    return layers, stable_at
