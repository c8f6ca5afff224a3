"""Graph core: a small immutable graph type, G(n, p) sampling, component
census, and a plain text edge-list format.

Graphs are simple and undirected with vertices 0..n-1.  Edges are stored as
(u, v) pairs with u < v.  The G(n, p) sampler is deterministic for a fixed
seed: it either draws one Bernoulli per pair (vectorised, small or dense
inputs) or draws the edge count from a binomial and then a uniform random
subset of pair ranks (sparse inputs), which yields the same distribution
without touching all ~n^2/2 pairs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import rng as rngmod

# Above this many pairs, and below this density, edges are sampled by rank
# instead of one Bernoulli draw per pair.
_PAIR_BLOCK = 1 << 22
_RANK_SAMPLING_DENSITY = 0.05


def pair_rank(u: int, v: int) -> int:
    """Colexicographic rank of the pair u < v: rank = C(v, 2) + u."""
    return v * (v - 1) // 2 + u


def _unrank_pairs(ranks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of pair_rank, vectorised; exact for ranks below 2**52."""
    r = ranks.astype(np.int64)
    v = ((1.0 + np.sqrt(1.0 + 8.0 * r.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt can be off by one near triangular numbers
    v = np.where(r < v * (v - 1) // 2, v - 1, v)
    v = np.where(r >= v * (v + 1) // 2, v + 1, v)
    u = r - v * (v - 1) // 2
    return u, v


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen: set[tuple[int, int]] = set()
        neighbours: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            neighbours[e[0]].append(e[1])
            neighbours[e[1]].append(e[0])
        adj = tuple(tuple(sorted(ns)) for ns in neighbours)
        return Graph(n=n, edges=frozenset(seen), adj=adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        e = (u, v) if u < v else (v, u)
        return e in self.edges


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), bit-reproducible for a fixed (n, p, seed)."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    npairs = n * (n - 1) // 2
    gen = rngmod.stream(seed, 0)
    if npairs == 0 or p == 0.0:
        return Graph.from_edges(n, [])
    if npairs <= _PAIR_BLOCK or p >= _RANK_SAMPLING_DENSITY:
        edges: list[tuple[int, int]] = []
        for start in range(0, npairs, _PAIR_BLOCK):
            stop = min(start + _PAIR_BLOCK, npairs)
            hit = gen.random(stop - start) < p
            ranks = np.nonzero(hit)[0] + start
            us, vs = _unrank_pairs(ranks)
            edges.extend(zip(us.tolist(), vs.tolist()))
        return Graph.from_edges(n, edges)
    # sparse: edge count is Binomial(npairs, p), then a uniform random subset
    # of pair ranks, which is exactly G(n, p) conditioned on its edge count
    m = int(gen.binomial(npairs, p))
    chosen: set[int] = set()
    picked: list[int] = []
    while len(picked) < m:
        need = m - len(picked)
        batch = gen.integers(0, npairs, size=need + max(16, need // 8))
        for r in batch.tolist():
            if r not in chosen:
                chosen.add(r)
                picked.append(r)
                if len(picked) == m:
                    break
    us, vs = _unrank_pairs(np.asarray(picked, dtype=np.int64))
    return Graph.from_edges(n, list(zip(us.tolist(), vs.tolist())))


@dataclass(frozen=True)
class Component:
    """One connected component: its vertices and the edges among them."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def order(self) -> int:
        return len(self.vertices)

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    def is_path(self) -> bool:
        """Path on >= 2 vertices: a tree with maximum degree <= 2."""
        if self.order < 2 or not self.is_tree():
            return False
        deg: dict[int, int] = {v: 0 for v in self.vertices}
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg.values()) <= 2


def components(g: Graph) -> list[Component]:
    """Connected components in order of their smallest vertex."""
    seen = bytearray(g.n)
    out: list[Component] = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = 1
        stack = [s]
        verts = [s]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = 1
                    verts.append(w)
                    stack.append(w)
        verts.sort()
        vset = set(verts)
        edges = tuple(
            (u, v) for u in verts for v in g.adj[u] if u < v and v in vset
        )
        out.append(Component(vertices=tuple(verts), edges=edges))
    return out


@dataclass(frozen=True)
class ComponentCensus:
    """Classification of a graph's components by canonical code.

    counts maps each component's canonical code to its multiplicity, orders
    maps the same codes to the component order, and path_counts tallies the
    isolated path components by order (order >= 2).
    """

    counts: dict
    path_counts: dict[int, int]
    orders: dict

    def total_vertices(self) -> int:
        return sum(self.orders[c] * k for c, k in self.counts.items())


_EXACT_CENSUS_CAP = 12


def _component_code(comp: Component):
    # imported here to avoid a cycle: catalog and coloring build on Graph
    from .catalog import ahu_code
    from .coloring import canonical_form

    sub = _relabelled(comp)
    if comp.is_tree():
        return ahu_code(sub)
    if comp.order <= _EXACT_CENSUS_CAP:
        return canonical_form(sub, max_vertices=_EXACT_CENSUS_CAP)
    # too large to classify exactly; the coarse code is isomorphism-invariant
    # but may merge types (census never errors, exactness is promised only
    # for trees and small components)
    degseq = ",".join(map(str, sorted(sub.degree(v) for v in range(sub.n))))
    digest = hashlib.blake2b(degseq.encode("ascii"), digest_size=8).hexdigest()
    return b"L%d,%d:%s" % (comp.order, len(comp.edges), digest.encode("ascii"))


def _relabelled(comp: Component) -> Graph:
    index = {v: i for i, v in enumerate(comp.vertices)}
    return Graph.from_edges(
        comp.order, [(index[u], index[v]) for u, v in comp.edges]
    )


def census(g: Graph) -> ComponentCensus:
    """Classify every component of g by canonical code and tally paths."""
    counts: dict = {}
    orders: dict = {}
    path_counts: dict[int, int] = {}
    for comp in components(g):
        code = _component_code(comp)
        counts[code] = counts.get(code, 0) + 1
        orders[code] = comp.order
        if comp.is_path():
            path_counts[comp.order] = path_counts.get(comp.order, 0) + 1
    return ComponentCensus(counts=counts, path_counts=path_counts, orders=orders)


def write_edgelist(g: Graph, path: str) -> None:
    """Write the text edge-list format: "n m" header, then "u v" per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        for u, v in sorted(g.edges):
            fh.write(f"{u} {v}\n")


def read_edgelist(path: str) -> Graph:
    """Read the format written by write_edgelist, validating as it goes."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError("empty edge-list file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"malformed header line: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValueError(f"malformed header line: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise ValueError(f"malformed header line: {lines[0]!r}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise ValueError(f"header promises {m} edges, found {len(body)}")
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"malformed edge line: {ln!r}") from exc
        if u == v:
            raise ValueError(f"self-loop in edge line: {ln!r}")
        if not u < v:
            raise ValueError(f"edge line not in u < v order: {ln!r}")
        if v >= n:
            raise ValueError(f"vertex index {v} out of range for n={n}")
        if (u, v) in seen:
            raise ValueError(f"duplicate edge {(u, v)}")
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)
