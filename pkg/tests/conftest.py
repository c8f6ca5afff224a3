"""Shared brute-force oracles for the test suite.

Everything here is deliberately naive: independent reference implementations
the fast code is checked against, not production paths.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from taulab.graph import Graph


def brute_isomorphic(a: Graph, b: Graph) -> bool:
    """Backtracking isomorphism test, exact for small graphs."""
    if a.n != b.n or a.edge_count != b.edge_count:
        return False
    deg_a = sorted(len(x) for x in a.adj)
    deg_b = sorted(len(x) for x in b.adj)
    if deg_a != deg_b:
        return False
    n = a.n
    # most-constrained-first: highest degree first
    order = sorted(range(n), key=lambda v: -len(a.adj[v]))
    mapping = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or len(a.adj[v]) != len(b.adj[w]):
                continue
            ok = True
            for x in a.adj[v]:
                mx = mapping[x]
                if mx >= 0 and not b.has_edge(*sorted((w, mx))):
                    ok = False
                    break
            if not ok:
                continue
            # also reject if w is adjacent to the image of a non-neighbour
            for x in range(n):
                mx = mapping[x]
                if mx >= 0 and not a.has_edge(*sorted((v, x))) and b.has_edge(
                    *sorted((w, mx))
                ):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used[w] = True
            if extend(i + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    return extend(0)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Copy of g with vertex v renamed perm[v]."""
    return Graph.from_edges(
        g.n, [tuple(sorted((perm[u], perm[v]))) for u, v in g.edges]
    )


def prufer_tree(seq: Sequence[int]) -> Graph:
    """Labelled tree on len(seq)+2 vertices from its Pruefer sequence."""
    n = len(seq) + 2
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    seq = list(seq)
    leaves = sorted(v for v in range(n) if degree[v] == 1)
    for v in seq:
        leaf = leaves.pop(0)
        edges.append(tuple(sorted((leaf, v))))
        degree[v] -= 1
        if degree[v] == 1:
            # insert keeping the leaf list sorted
            lo = 0
            while lo < len(leaves) and leaves[lo] < v:
                lo += 1
            leaves.insert(lo, v)
    edges.append(tuple(sorted(leaves[:2])))
    return Graph.from_edges(n, edges)


def all_graphs(n: int):
    """Every labelled simple graph on n vertices (use only for tiny n)."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph.from_edges(
            n, [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        )
