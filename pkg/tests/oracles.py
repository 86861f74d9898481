"""Independent reference implementations used as test oracles.

Nothing here may call the engine code paths it is meant to check: the
refinement oracle compares nodes pairwise without interning or hashing, and
the isomorphism oracle enumerates every bijection.
"""

from __future__ import annotations

from itertools import permutations


def naive_refinement_partitions(kg):
    """Partition sequence by repeated O(|V|^2) pairwise comparison.

    Two nodes stay together at layer l iff they were together at l-1 and
    their incoming (source class, label) multisets match, where multiset
    equality is decided by explicit matching rather than canonical ids.
    Iterates to the fixpoint; returns one set-of-frozensets per layer, the
    final repeated layer excluded (mirroring the engine's storage rule).
    """
    nodes = sorted(kg.nodes)
    incoming = {v: kg.incoming(v) for v in nodes}

    same = {
        (u, v): kg.colours[u] == kg.colours[v] for u in nodes for v in nodes
    }
    partitions = [_classes(nodes, same)]
    while True:
        nxt = {}
        for u in nodes:
            for v in nodes:
                nxt[(u, v)] = same[(u, v)] and _multiset_match(
                    incoming[u], incoming[v], same
                )
        new_partition = _classes(nodes, nxt)
        if new_partition == partitions[-1]:
            return partitions
        partitions.append(new_partition)
        same = nxt


def _multiset_match(inc_u, inc_v, same) -> bool:
    if len(inc_u) != len(inc_v):
        return False
    used = [False] * len(inc_v)
    for r1, w1 in inc_u:
        for k, (r2, w2) in enumerate(inc_v):
            if not used[k] and r1 == r2 and same[(w1, w2)]:
                used[k] = True
                break
        else:
            return False
    return True


def _classes(nodes, same):
    groups = []
    for v in nodes:
        for group in groups:
            if same[(v, next(iter(group)))]:
                group.add(v)
                break
        else:
            groups.append({v})
    return {frozenset(g) for g in groups}


def brute_force_timewise_maps(tg1, tg2):
    """Every bijection that is an isomorphism on all snapshots simultaneously."""
    if len(tg1.node_ids) != len(tg2.node_ids):
        return []
    out = []
    for target in permutations(tg2.node_ids):
        f = dict(zip(tg1.node_ids, target))
        if _is_simultaneous_iso(tg1, tg2, f):
            out.append(f)
    return out


def brute_force_snapshot_iso_exists(tg1, tg2, index) -> bool:
    """Does any bijection map snapshot `index` of tg1 onto that of tg2?"""
    s1, s2 = tg1.snapshots[index], tg2.snapshots[index]
    for target in permutations(tg2.node_ids):
        f = dict(zip(tg1.node_ids, target))
        if all(s1.colours[v] == s2.colours[f[v]] for v in tg1.node_ids) and all(
            s1.has_edge(u, v) == s2.has_edge(f[u], f[v])
            for u in tg1.node_ids
            for v in tg1.node_ids
            if u < v
        ):
            return True
    return False


def _is_simultaneous_iso(tg1, tg2, f) -> bool:
    for s1, s2 in zip(tg1.snapshots, tg2.snapshots):
        for v in tg1.node_ids:
            if s1.colours[v] != s2.colours[f[v]]:
                return False
        for u in tg1.node_ids:
            for v in tg1.node_ids:
                if u < v and s1.has_edge(u, v) != s2.has_edge(f[u], f[v]):
                    return False
    return True


def refines(finer, coarser) -> bool:
    """Every class of `finer` lies inside one class of `coarser` (subset test)."""
    return all(
        any(cls <= big for big in coarser) for cls in finer
    )
