"""Command-line surface; every output is UTF-8 JSON (or CSV where stated).

Timestamped nodes are addressed as ``name@time`` (exact timestamp) or
``name#index`` (0-based snapshot index); the last separator wins, so node
names containing neither character are unambiguous.

Exit codes: 0 success, 1 failed check or property violation, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from tempowl import distinguish, gen, iso, kgraph, properties, rwl, tgnn, tgraph
from tempowl.errors import TempowlError
from tempowl.tgraph import TimestampedNode, node_key


def _load_graph(path: str) -> tgraph.TemporalGraph:
    with open(path, encoding="utf-8") as handle:
        return tgraph.from_json(handle.read())


def _emit(data, output: str | None) -> None:
    text = json.dumps(data, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        click.echo(text)


def _parse_node_ref(ref: str, tg: tgraph.TemporalGraph) -> TimestampedNode:
    if "#" in ref:
        name, _, raw = ref.rpartition("#")
        try:
            index = int(raw)
        except ValueError:
            raise click.UsageError(f"bad node index in {ref!r}") from None
    elif "@" in ref:
        name, _, raw = ref.rpartition("@")
        try:
            stamp = int(raw)
        except ValueError:
            raise click.UsageError(f"bad timestamp in {ref!r}") from None
        if stamp not in tg.times:
            raise click.UsageError(f"{stamp} is not a time point of the graph")
        index = tg.times.index(stamp)
    else:
        raise click.UsageError(
            f"node reference {ref!r} needs name@time or name#index"
        )
    if name not in tg.node_ids or not 0 <= index < len(tg.times):
        raise click.UsageError(f"{ref!r} is not a timestamped node of the graph")
    return TimestampedNode(name, index)


_ENCODERS = {"glob": kgraph.k_glob, "loc": kgraph.k_loc}


@click.group()
def main() -> None:
    """Decide which timestamped nodes temporal message passing can tell apart."""


@main.command()
@click.argument("graph", type=click.Path(exists=True))
def validate(graph: str) -> None:
    """Check a temporal-graph JSON file against all invariants."""
    try:
        with open(graph, encoding="utf-8") as handle:
            tgraph.from_json(handle.read())
    except TempowlError as exc:
        _emit({"ok": False, "error": type(exc).__name__, "detail": str(exc)}, None)
        sys.exit(1)
    _emit({"ok": True}, None)


@main.command()
@click.argument("graph", type=click.Path(exists=True))
@click.option("--encoding", type=click.Choice(["glob", "loc"]), required=True)
@click.option("-o", "--output", type=click.Path())
def transform(graph: str, encoding: str, output: str | None) -> None:
    """Compile a temporal graph into one of the knowledge-graph encodings."""
    kg = _ENCODERS[encoding](_load_graph(graph))
    _emit(kgraph.to_dict(kg), output)


@main.command()
@click.argument("graph", type=click.Path(exists=True))
@click.option("--encoding", type=click.Choice(["glob", "loc"]), default="glob")
@click.option("--layers", type=int, default=None, help="Bound the iteration count.")
@click.option("-o", "--output", type=click.Path())
def refine(graph: str, encoding: str, layers: int | None, output: str | None) -> None:
    """Run colour refinement and emit the per-layer partitions."""
    kg = _ENCODERS[encoding](_load_graph(graph))
    colouring = rwl.refine(kg, layers)
    partitions = [
        [[node_key(tn) for tn in group] for group in rwl.partition_at(colouring, layer)]
        for layer in range(len(colouring.layers))
    ]
    _emit(
        {
            "backend": rwl.REFINE_BACKEND,
            "stable_at": colouring.stable_at,
            "partitions": partitions,
        },
        output,
    )


@main.command()
@click.option("--a", "graph_a", type=click.Path(exists=True), required=True)
@click.option("--node-a", required=True)
@click.option("--b", "graph_b", type=click.Path(exists=True), required=True)
@click.option("--node-b", required=True)
@click.option("--mode", type=click.Choice(["global", "local", "both"]), default="both")
@click.option("--layers", type=int, default=None)
def compare(graph_a, node_a, graph_b, node_b, mode, layers) -> None:
    """Distinguishability verdict for one pair of timestamped nodes."""
    tg1, tg2 = _load_graph(graph_a), _load_graph(graph_b)
    n1, n2 = _parse_node_ref(node_a, tg1), _parse_node_ref(node_b, tg2)
    queries = {
        "global": distinguish.distinguishable_global,
        "local": distinguish.distinguishable_local,
    }
    if mode == "both":
        payload = {}
        for name, query in queries.items():
            verdict = query(tg1, n1, tg2, n2, layers)
            payload[name] = {
                "distinguishable": verdict.distinguishable,
                "first_layer": verdict.first_layer,
            }
        payload["class"] = distinguish.classify_pair(tg1, n1, tg2, n2)
        _emit(payload, None)
    else:
        verdict = queries[mode](tg1, n1, tg2, n2, layers)
        _emit(
            {
                "mode": mode,
                "distinguishable": verdict.distinguishable,
                "first_layer": verdict.first_layer,
            },
            None,
        )


@main.command()
@click.option("--a", "graph_a", type=click.Path(exists=True), required=True)
@click.option("--b", "graph_b", type=click.Path(exists=True), required=True)
@click.option("-o", "--output", type=click.Path())
def classify(graph_a, graph_b, output) -> None:
    """CSV matrix of pair classes over all cross pairs of timestamped nodes."""
    result = distinguish.classify_all(_load_graph(graph_a), _load_graph(graph_b))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + [node_key(tn) for tn in result.cols])
    for row_node in result.rows:
        writer.writerow(
            [node_key(row_node)]
            + [result.classes[(row_node, col)] for col in result.cols]
        )
    text = buffer.getvalue()
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


@main.command("iso")
@click.argument("graph_a", type=click.Path(exists=True))
@click.argument("graph_b", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["pointwise", "timewise"]), required=True)
@click.option("--max-nodes", type=int, default=iso.DEFAULT_NODE_LIMIT)
def iso_command(graph_a, graph_b, kind, max_nodes) -> None:
    """Search for a pointwise or timewise isomorphism witness."""
    tg1, tg2 = _load_graph(graph_a), _load_graph(graph_b)
    search = iso.pointwise_iso if kind == "pointwise" else iso.timewise_iso
    try:
        witness = search(tg1, tg2, max_nodes)
    except TempowlError as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, None)
        sys.exit(1)
    if witness is None:
        _emit({"isomorphic": False}, None)
    else:
        _emit(
            {"isomorphic": True, "kind": witness.kind, "maps": list(witness.maps)},
            None,
        )


@main.command()
@click.argument("graph", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["global", "local"]), required=True)
@click.option(
    "--variant", type=click.Choice(list(tgnn.VARIANTS)), default="sum_sign"
)
@click.option("--seed", type=int, default=0)
@click.option("--layers", type=int, default=2)
@click.option("--width", type=int, default=8)
@click.option("-o", "--output", type=click.Path())
def simulate(graph, mode, variant, seed, layers, width, output) -> None:
    """Exact integer forward pass; emits all per-layer embeddings."""
    tg = _load_graph(graph)
    cfg = tgnn.ModelConfig(mode, layers, width, variant, seed)
    state = tgnn.forward(tg, cfg)

    def as_json(value):
        return list(value) if isinstance(value, tuple) else value

    embeddings = {
        node_key(tn): [as_json(state.value(tn, layer)) for layer in range(layers + 1)]
        for tn in state.nodes
    }
    _emit(
        {
            "mode": mode,
            "variant": variant,
            "seed": seed,
            "layers": layers,
            "width": width,
            "embeddings": embeddings,
        },
        output,
    )


@main.command()
@click.argument("name")
@click.option("--part", type=click.Choice(["a", "b"]), default=None)
@click.option("-o", "--output", type=click.Path())
def fixture(name, part, output) -> None:
    """Write a named figure fixture; use --part to pick one side of a pair."""
    try:
        value = gen.fixture(name)
    except TempowlError as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, None)
        sys.exit(1)
    if isinstance(value, tuple):
        if part:
            value = value[0 if part == "a" else 1]
            _emit(tgraph.to_dict(value), output)
        else:
            _emit(
                {"a": tgraph.to_dict(value[0]), "b": tgraph.to_dict(value[1])}, output
            )
    else:
        if part:
            raise click.UsageError(f"fixture {name} is not a pair")
        _emit(tgraph.to_dict(value), output)


@main.command("gen")
@click.option("--seed", type=int, required=True)
@click.option("--nodes", type=int, default=5)
@click.option("--snapshots", type=int, default=3)
@click.option("--edge-prob", type=float, default=0.4)
@click.option("--palette", default="green,blue,red", help="Comma-separated colours.")
@click.option("--colour-persistent", is_flag=True)
@click.option("--non-uniform-grid", is_flag=True)
@click.option("-o", "--output", type=click.Path())
def gen_command(
    seed, nodes, snapshots, edge_prob, palette, colour_persistent, non_uniform_grid, output
) -> None:
    """Emit a seeded random temporal graph."""
    tg = gen.random_tg(
        seed,
        nodes,
        snapshots,
        edge_prob,
        tuple(palette.split(",")),
        colour_persistent,
        not non_uniform_grid,
    )
    _emit(tgraph.to_dict(tg), output)


@main.command()
@click.option(
    "--property",
    "property_name",
    type=click.Choice(list(properties.PROPERTY_NAMES)),
    required=True,
)
@click.option("--trials", type=int, default=100)
@click.option("--seed", type=int, default=0)
@click.option("--jobs", type=int, default=None, help="Worker pool size (capped by TEMPOWL_THREADS).")
def fuzz(property_name, trials, seed, jobs) -> None:
    """Fuzz one property; exit 1 with the minimal reproducing seed on violation."""
    report = properties.run_property(property_name, trials, seed, jobs)
    _emit(
        {
            "property": report.property,
            "trials": report.trials,
            "passed": report.passed,
            "violations": report.violations,
            "min_seed": report.min_seed(),
        },
        None,
    )
    if not report.passed:
        sys.exit(1)


@main.command()
@click.argument("events", type=click.Path(exists=True))
def stats(events) -> None:
    """Node/edge/step counts of a CSV event file."""
    with open(events, encoding="utf-8") as handle:
        rows = tgraph.events_from_csv(handle.read())
    nodes = {x for u, v, _ in rows for x in (u, v)}
    steps = {t for _, _, t in rows}
    _emit({"nodes": len(nodes), "edges": len(rows), "steps": len(steps)}, None)


if __name__ == "__main__":
    main()
