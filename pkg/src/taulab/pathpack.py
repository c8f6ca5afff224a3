"""Edge-disjoint long paths by depth-first search, and linear forests laid
out along them.

The path finder keeps the classic two-set invariant: U holds untouched
vertices, W holds vertices that dead-ended.  The current path is extended
from its last vertex to any unused neighbour still in U; when none exists
the endpoint moves to W and the path backtracks; when the path empties it
restarts from the lowest-index vertex of U.  A path is harvested the moment
its length reaches the target, its edges leave the residual graph, and the
sweep state is rebuilt from scratch.  There is no rollback: a sweep that
ends with U empty and no harvest proves no further path will be found.

Forests are then placed along the harvested paths, first fit in path order:
a sub-path of length x consumes x + 1 consecutive path vertices, so a forest
with lengths (x_1 >= ... >= x_l) occupies k + l consecutive vertices and the
next placement starts right after it.  Sub-paths of one forest never share a
vertex, so each class really is the disjoint union its label promises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .catalog import LinearForest
from .graph import Graph


@dataclass
class PathPack:
    """Harvested vertex-paths (each of exactly target_len edges) and the set
    of host edges they consumed."""

    n: int
    target_len: int
    paths: list[tuple[int, ...]]
    used_edges: set[tuple[int, int]]


def _sweep(
    adj: Sequence[Sequence[int]],
    n: int,
    used: set[tuple[int, int]],
    target_len: int,
) -> Optional[list[int]]:
    """One DFS sweep over the residual graph; returns a path of exactly
    target_len edges or None if the sweep exhausts U without one."""
    in_u = bytearray(b"\x01") * n
    ptr = [0] * n
    path: list[int] = []
    start_scan = 0
    while True:
        if not path:
            while start_scan < n and not in_u[start_scan]:
                start_scan += 1
            if start_scan == n:
                return None
            v = start_scan
            in_u[v] = 0
            path.append(v)
        v = path[-1]
        advanced = False
        neighbours = adj[v]
        i = ptr[v]
        while i < len(neighbours):
            w = neighbours[i]
            i += 1
            if not in_u[w]:
                continue
            e = (v, w) if v < w else (w, v)
            if e in used:
                continue
            ptr[v] = i
            in_u[w] = 0
            path.append(w)
            advanced = True
            break
        else:
            ptr[v] = i
        if advanced:
            if len(path) - 1 == target_len:
                return path
        else:
            # dead end: endpoint goes to W (never back to U)
            path.pop()


def dfs_path_pack(g: Graph, target_len: int, max_paths: int) -> PathPack:
    """Harvest up to max_paths edge-disjoint paths of exactly target_len
    edges, rerunning the DFS sweep on the residual graph after each one."""
    if target_len < 1:
        raise ValueError("target_len must be at least 1")
    if max_paths < 0:
        raise ValueError("max_paths must be nonnegative")
    used: set[tuple[int, int]] = set()
    paths: list[tuple[int, ...]] = []
    while len(paths) < max_paths:
        found = _sweep(g.adj, g.n, used, target_len)
        if found is None:
            break
        assert len(set(found)) == len(found)
        for a, b in zip(found, found[1:]):
            e = (a, b) if a < b else (b, a)
            assert e not in used
            used.add(e)
        paths.append(tuple(found))
    return PathPack(n=g.n, target_len=target_len, paths=paths, used_edges=used)


@dataclass(frozen=True)
class ForestPlacement:
    """One forest realised on one harvested path."""

    forest_index: int
    path_index: int
    offset: int
    lengths: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass
class PackResult:
    placements: list[ForestPlacement]
    stopped_at: Optional[int]
    attempted: int


def pack_forests(
    paths: Sequence[Sequence[int]], forests: Iterable[LinearForest]
) -> PackResult:
    """Lay forests along the paths, first fit, stopping at the first forest
    that fits nowhere (reported in stopped_at; later forests untouched).

    All forests must share the same total edge count k.
    """
    cursors = [0] * len(paths)
    placements: list[ForestPlacement] = []
    k: Optional[int] = None
    attempted = 0
    stopped_at: Optional[int] = None
    for idx, forest in enumerate(forests):
        attempted += 1
        if not isinstance(forest, LinearForest):
            raise ValueError("forests must be LinearForest instances")
        if k is None:
            k = forest.k
        elif forest.k != k:
            raise ValueError("forests must share one edge count k")
        footprint = forest.order
        target = None
        for i, path in enumerate(paths):
            if len(path) - cursors[i] >= footprint:
                target = i
                break
        if target is None:
            stopped_at = idx
            break
        path = paths[target]
        pos = cursors[target]
        offset = pos
        edges: list[tuple[int, int]] = []
        for x in forest.path_lengths:
            for j in range(x):
                a, b = path[pos + j], path[pos + j + 1]
                edges.append((a, b) if a < b else (b, a))
            pos += x + 1
        cursors[target] = pos
        placements.append(
            ForestPlacement(
                forest_index=idx,
                path_index=target,
                offset=offset,
                lengths=forest.path_lengths,
                edges=tuple(edges),
            )
        )
    return PackResult(placements=placements, stopped_at=stopped_at, attempted=attempted)
