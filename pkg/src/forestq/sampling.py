"""Uniform random sampling of spanning converging forests.

The sampler runs a loop-erased random walk on the graph augmented with an
implicit absorbing state: at a node of out-degree d the walk stops and roots
there with probability 1/(1+d), otherwise it moves to a uniform out-neighbor.
Walks are started from every node in ascending order and terminate on
reaching the already-committed part of the forest; cycles are erased by
overwriting next-hops in place.  The resulting successor assignment is an
exact uniform draw over all spanning converging forests, in expected O(n)
steps per sample.

Randomness comes from a counter-based generator (Philox) wrapped with a
block buffer, so sampling is reproducible from a seed and cheap per step.
Worker streams for batch sampling are derived by splitting the master seed;
the output of :func:`sample_forest_list` depends only on (graph, count,
seed, workers), never on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .forest import Forest, ForestList
from .graph import Digraph

_BLOCK = 4096
# Root caches are filled eagerly for small graphs, where queries typically
# touch every forest, and left lazy for large ones, where they would
# dominate sampling cost.
_EAGER_ROOT_LIMIT = 64


class ForestRng:
    """Seeded, splittable random stream with buffered uniform draws."""

    __slots__ = ("seed_seq", "generator", "_buf", "_pos", "draws")

    def __init__(self, seed: int | np.random.SeedSequence = 0) -> None:
        if isinstance(seed, np.random.SeedSequence):
            self.seed_seq = seed
        else:
            self.seed_seq = np.random.SeedSequence(seed)
        self.generator = np.random.Generator(np.random.Philox(self.seed_seq))
        self._buf: list[float] = []
        self._pos = 0
        self.draws = 0

    def spawn(self, k: int) -> list["ForestRng"]:
        """k independent child streams, deterministic given call order."""
        return [ForestRng(child) for child in self.seed_seq.spawn(k)]

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._refill()
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def _refill(self) -> None:
        self._buf = self.generator.random(_BLOCK).tolist()
        self._pos = 0
        self.draws += _BLOCK


def sample_forest(g: Digraph, rng: ForestRng) -> Forest:
    """Draw one uniform spanning converging forest."""
    n = g.n
    nxt = [-1] * n
    in_tree = bytearray(n)
    out = g._out
    buf = rng._buf
    pos = rng._pos
    start_draws = rng.draws
    cap = (n + 1) << 32

    for start in range(n):
        if in_tree[start]:
            continue
        u = start
        while not in_tree[u]:
            adj = out[u]
            d = len(adj)
            if pos == len(buf):
                rng._refill()
                buf = rng._buf
                pos = 0
                if rng.draws - start_draws > cap:
                    raise RuntimeError(f"random walk failed to terminate within {cap} steps")
            k = int(buf[pos] * (d + 1))
            pos += 1
            if k >= d:
                nxt[u] = -1  # absorbed: u becomes a root
                break
            v = adj[k]
            nxt[u] = v
            u = v
        u = start
        while not in_tree[u]:
            in_tree[u] = 1
            w = nxt[u]
            if w < 0:
                break
            u = w

    rng._buf = buf
    rng._pos = pos
    if n <= _EAGER_ROOT_LIMIT:
        return Forest(
            np.array(nxt, dtype=np.int32),
            root=np.array(_all_roots(nxt), dtype=np.int32),
            dirty=False,
        )
    return Forest(np.array(nxt, dtype=np.int32))


def _all_roots(nxt: list[int]) -> list[int]:
    n = len(nxt)
    root = [-1] * n
    for i in range(n):
        u = i
        path = []
        while root[u] < 0:
            w = nxt[u]
            if w < 0:
                root[u] = u
                break
            path.append(u)
            u = w
        r = root[u]
        for p in path:
            root[p] = r
    return root


def sample_forest_list(
    g: Digraph, count: int, rng: ForestRng, workers: int = 1
) -> ForestList:
    """Draw ``count`` independent uniform forests as a multiplicity-1 list.

    With ``workers > 1`` the batch is split into contiguous chunks, one
    child stream each; results are identical for a given (seed, workers)
    pair regardless of thread scheduling.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    workers = min(workers, max(count, 1))
    streams = rng.spawn(workers)
    sizes = [count // workers + (1 if k < count % workers else 0) for k in range(workers)]

    def run_chunk(args: tuple[int, ForestRng]) -> list[Forest]:
        size, stream = args
        return [sample_forest(g, stream) for _ in range(size)]

    if workers == 1:
        chunks = [run_chunk((count, streams[0]))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_chunk, zip(sizes, streams)))
    out = ForestList()
    for chunk in chunks:
        for f in chunk:
            out.append(f)
    return out
