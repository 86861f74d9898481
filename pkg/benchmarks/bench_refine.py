"""Benchmark the compiled refinement kernel against the pure-Python fallback.

Both kernels consume identical flattened inputs (rwl.kernel_inputs), so the
comparison isolates the per-layer signature loop. Run:

    python benchmarks/bench_refine.py [--nodes N] [--snapshots K] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

from tempowl import _refine_py
from tempowl.gen import random_tg
from tempowl.kgraph import k_glob, k_loc
from tempowl.rwl import kernel_inputs

try:
    from tempowl import _refine_core
except ImportError:
    _refine_core = None


def _time_kernel(kernel, args, repeat: int) -> tuple[float, int]:
    best = float("inf")
    layers = None
    for _ in range(repeat):
        start = time.perf_counter()
        layers, stable = kernel.refine_rounds(*args)
        best = min(best, time.perf_counter() - start)
    return best, len(layers) - 1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=60)
    parser.add_argument("--snapshots", type=int, default=12)
    parser.add_argument("--edge-prob", type=float, default=0.15)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args()

    tg = random_tg(
        opts.seed,
        opts.nodes,
        opts.snapshots,
        opts.edge_prob,
        palette=("green", "blue"),
        colour_persistent=True,
    )
    print(
        f"graph: {opts.nodes} nodes x {opts.snapshots} snapshots "
        f"(edge prob {opts.edge_prob}, seed {opts.seed})"
    )
    header = f"{'encoding':10s} {'kg nodes':>9s} {'kg edges':>9s} {'kernel':>12s} {'layers':>7s} {'best time':>10s}"
    print(header)
    print("-" * len(header))
    for name, encode in (("global", k_glob), ("local", k_loc)):
        kg = encode(tg)
        nodes, indptr, srcs, rels, init = kernel_inputs(kg)
        args = (len(nodes), indptr, srcs, rels, init, len(nodes))
        rows = [("pure-python", _refine_py)]
        if _refine_core is not None:
            rows.append(("compiled", _refine_core))
        times = {}
        for label, kernel in rows:
            best, layers = _time_kernel(kernel, args, opts.repeat)
            times[label] = best
            print(
                f"{name:10s} {len(nodes):9d} {len(kg.edges):9d} {label:>12s} "
                f"{layers:7d} {best * 1000:8.1f} ms"
            )
        if "compiled" in times:
            print(
                f"{'':10s} {'':9s} {'':9s} {'speedup':>12s} "
                f"{'':7s} {times['pure-python'] / times['compiled']:8.1f} x"
            )
    if _refine_core is None:
        print("compiled kernel unavailable; showing the fallback only")


if __name__ == "__main__":
    main()
