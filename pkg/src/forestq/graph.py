"""Mutable simple directed graphs with dual adjacency lists.

Nodes are dense integers ``0..n-1`` fixed at construction time; edges can be
inserted and deleted freely.  Both forward and reverse adjacency are kept so
out- and in-neighborhoods are O(1) to enumerate.  Self-loops and parallel
edges are rejected.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

# Out-degree above which edge membership switches from a list scan to a
# per-node hash set.
_SET_THRESHOLD = 8


class Digraph:
    """Simple directed graph on a fixed node set."""

    __slots__ = ("_n", "_m", "_out", "_in", "_out_sets")

    def __init__(self, n: int) -> None:
        if n < 0:
            raise ValueError(f"node count must be >= 0, got {n}")
        self._n = n
        self._m = 0
        self._out: list[list[int]] = [[] for _ in range(n)]
        self._in: list[list[int]] = [[] for _ in range(n)]
        # Materialized lazily once a node's out-degree exceeds _SET_THRESHOLD.
        self._out_sets: list[set[int] | None] = [None] * n

    # ---- introspection ----

    @property
    def n(self) -> int:
        """Number of nodes."""
        return self._n

    @property
    def m(self) -> int:
        """Number of directed edges."""
        return self._m

    def out_degree(self, u: int) -> int:
        return len(self._out[u])

    def in_degree(self, u: int) -> int:
        return len(self._in[u])

    def out_neighbors(self, u: int) -> list[int]:
        """Successors of u.  The returned list is live; do not mutate it."""
        return self._out[u]

    def in_neighbors(self, u: int) -> list[int]:
        """Predecessors of u.  The returned list is live; do not mutate it."""
        return self._in[u]

    def has_edge(self, u: int, v: int) -> bool:
        s = self._out_sets[u]
        if s is not None:
            return v in s
        return v in self._out[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self._out):
            for v in nbrs:
                yield (u, v)

    # ---- mutation ----

    def insert_edge(self, u: int, v: int) -> None:
        """Add edge (u, v).  Raises ValueError on self-loops or duplicates."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) not allowed")
        if self.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) exists")
        out = self._out[u]
        out.append(v)
        self._in[v].append(u)
        self._m += 1
        s = self._out_sets[u]
        if s is not None:
            s.add(v)
        elif len(out) > _SET_THRESHOLD:
            self._out_sets[u] = set(out)

    def delete_edge(self, u: int, v: int) -> None:
        """Remove edge (u, v).  Raises ValueError if absent."""
        self._check_node(u)
        self._check_node(v)
        if not self.has_edge(u, v):
            raise ValueError(f"edge ({u}, {v}) not found")
        _swap_remove(self._out[u], v)
        _swap_remove(self._in[v], u)
        self._m -= 1
        s = self._out_sets[u]
        if s is not None:
            s.discard(v)

    # ---- misc ----

    def copy(self) -> "Digraph":
        g = Digraph(self._n)
        g._m = self._m
        g._out = [list(nbrs) for nbrs in self._out]
        g._in = [list(nbrs) for nbrs in self._in]
        g._out_sets = [set(s) if s is not None else None for s in self._out_sets]
        return g

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self._n:
            raise ValueError(f"node {u} out of range [0, {self._n})")

    def __repr__(self) -> str:
        return f"Digraph(n={self._n}, m={self._m})"


def _swap_remove(lst: list[int], value: int) -> None:
    i = lst.index(value)
    lst[i] = lst[-1]
    lst.pop()


@dataclass(frozen=True)
class LoadResult:
    """Graph plus bookkeeping from parsing an edge list."""

    graph: Digraph
    node_ids: list[int]  # original id of node k, inverse of the dense remap
    duplicates_dropped: int
    self_loops_dropped: int


def load_edge_list(source, mode: str = "directed") -> LoadResult:
    """Parse a whitespace-separated edge list into a :class:`Digraph`.

    ``source`` is a path or an iterable of lines.  Lines starting with ``#``
    or ``%`` and blank lines are skipped; extra columns after the first two
    are ignored.  Node ids may be arbitrary integers and are remapped densely
    to ``[0, n)`` in order of first appearance.  ``mode="undirected"`` inserts
    both directions for every line.  Self-loops and repeated edges are
    dropped and counted.
    """
    if mode not in ("directed", "undirected"):
        raise ValueError(f"mode must be 'directed' or 'undirected', got {mode!r}")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh, mode)

    remap: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    self_loops = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        for x in (a, b):
            if x not in remap:
                remap[x] = len(remap)
        if a == b:
            self_loops += 1
            continue
        u, v = remap[a], remap[b]
        pairs.append((u, v))
        if mode == "undirected":
            pairs.append((v, u))

    g = Digraph(len(remap))
    duplicates = 0
    for u, v in pairs:
        if g.has_edge(u, v):
            duplicates += 1
        else:
            g.insert_edge(u, v)
    node_ids = [0] * len(remap)
    for orig, dense in remap.items():
        node_ids[dense] = orig
    return LoadResult(g, node_ids, duplicates, self_loops)


def random_digraph(n: int, m: int, rng: np.random.Generator) -> Digraph:
    """Uniform random simple digraph with n nodes and m directed edges."""
    limit = n * (n - 1)
    if m > limit:
        raise ValueError(f"m={m} exceeds {limit} possible edges on {n} nodes")
    g = Digraph(n)
    if m == 0:
        return g
    if m > limit // 2:
        # Dense request: shuffle the full pair universe.
        pool = [(u, v) for u in range(n) for v in range(n) if u != v]
        idx = rng.permutation(limit)[:m]
        for k in idx:
            g.insert_edge(*pool[k])
        return g
    while g.m < m:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u != v and not g.has_edge(u, v):
            g.insert_edge(u, v)
    return g
