"""Sizes of induced subgraphs and their minimisation over small graphs.

Graphs up to isomorphism are generated by canonical augmentation: a graph
on ``n`` vertices is built from one on ``n - 1`` by adding a vertex, and is
kept only when that vertex lies in the orbit the canonical labelling picks
for deletion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import BoundError, InvalidArgumentError

MAX_INDUCED_V = 24
MAX_MINSIZE_N = 8


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``1..v``; edges are pairs ``(i, j)``, ``i < j``."""

    v: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for i, j in self.edges:
            if i == j:
                raise InvalidArgumentError(f"loop at vertex {i}")
            if not (1 <= i <= self.v and 1 <= j <= self.v):
                raise InvalidArgumentError(f"edge ({i}, {j}) outside [{self.v}]")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset(combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    def masks(self) -> list[int]:
        """0-based neighbourhood bitmasks."""
        out = [0] * self.v
        for i, j in self.edges:
            out[i - 1] |= 1 << (j - 1)
            out[j - 1] |= 1 << (i - 1)
        return out

    def relabel(self, perm) -> "SimpleGraph":
        """Image under ``i -> perm[i-1]``."""
        return SimpleGraph(self.v, frozenset((perm[i - 1], perm[j - 1]) for i, j in self.edges))

    def without_isolated(self) -> "SimpleGraph":
        keep = sorted({x for e in self.edges for x in e})
        new = {old: idx for idx, old in enumerate(keep, start=1)}
        return SimpleGraph(len(keep), frozenset((new[i], new[j]) for i, j in self.edges))

    def to_dict(self) -> dict:
        return {"v": self.v, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimpleGraph":
        return cls(int(data["v"]), frozenset((int(i), int(j)) for i, j in data["edges"]))

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), separators=(",", ":")) + "\n")
        return path

    @classmethod
    def load(cls, path) -> "SimpleGraph":
        return cls.from_dict(json.loads(Path(path).read_text()))


def induced_size_set(G: SimpleGraph, *, force: bool = False) -> frozenset:
    """``{e(G[S]) : S ⊆ V(G)}``, the empty set included."""
    if G.v > MAX_INDUCED_V and not force:
        raise BoundError(f"{G.v} vertices exceeds the guard {MAX_INDUCED_V}")
    masks = G.masks()
    counts = np.zeros(1, dtype=np.int32)
    for i in range(G.v):
        lower = masks[i] & ((1 << i) - 1)
        gained = np.bitwise_count(np.arange(1 << i, dtype=np.int64) & lower).astype(np.int32)
        counts = np.concatenate([counts, counts + gained])
    return frozenset(int(x) for x in np.unique(counts))


# ---------------------------------------------------------------------------
# canonical labelling


def _refine(masks: list[int], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbour counts into every cell."""
    while True:
        cell_masks = [sum(1 << v for v in c) for c in cells]
        out = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {v: tuple(bin(masks[v] & cm).count("1") for cm in cell_masks) for v in c}
            groups: dict[tuple, list[int]] = {}
            for v in c:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            out.extend(groups[s] for s in sorted(groups))
        cells = out
        if not changed:
            return cells


def _key(masks: list[int], order: list[int]) -> tuple:
    n = len(order)
    return tuple((masks[order[p]] >> order[q]) & 1 for p in range(n) for q in range(p + 1, n))


def canonical_labelling(G: SimpleGraph) -> tuple[tuple, list[int], frozenset]:
    """``(key, order, last_orbit)`` for the greatest adjacency string over search-tree leaves.

    ``order`` lists 0-based vertices by canonical position; ``last_orbit``
    holds every vertex that some optimal leaf puts last, which is exactly
    the automorphism orbit of the canonical last vertex.
    """
    masks = G.masks()
    best_key = None
    best_order: list[int] = []
    last: set[int] = set()

    def search(cells):
        nonlocal best_key, best_order, last
        cells = _refine(masks, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            key = _key(masks, order)
            if best_key is None or key > best_key:
                best_key, best_order, last = key, order, {order[-1]}
            elif key == best_key:
                last.add(order[-1])
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(G.v))])
    return best_key, best_order, frozenset(last)


def canonical_graph(G: SimpleGraph) -> SimpleGraph:
    _, order, _ = canonical_labelling(G)
    pos = {v: p for p, v in enumerate(order)}
    perm = [pos[i] + 1 for i in range(G.v)]
    return G.relabel(perm)


def graphs_up_to_iso(n: int, max_edges: int | None = None) -> Iterator[SimpleGraph]:
    """One graph per isomorphism class on exactly ``n`` vertices (optionally ``<= max_edges`` edges)."""
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    if n == 0:
        yield SimpleGraph(0, frozenset())
        return
    level = [SimpleGraph(1, frozenset())]
    for size in range(2, n + 1):
        new = size  # 1-based label of the added vertex
        nxt = []
        for parent in level:
            seen = set()
            for nbhd in range(1 << (size - 1)):
                deg = bin(nbhd).count("1")
                if max_edges is not None and parent.m + deg > max_edges:
                    continue
                extra = {(u + 1, new) for u in range(size - 1) if nbhd >> u & 1}
                G = SimpleGraph(size, parent.edges | extra)
                key, _, last = canonical_labelling(G)
                if new - 1 not in last or key in seen:
                    continue
                seen.add(key)
                nxt.append(G)
        level = nxt
    yield from level


def min_size_set(m: int, n_max: int, *, force: bool = False) -> tuple[int, SimpleGraph]:
    """Least ``|S(G)|`` over graphs with ``m`` edges on at most ``n_max`` vertices.

    Isolated vertices do not change ``S(G)``, so graphs on exactly ``n_max``
    vertices cover the range. The witness has isolated vertices removed and
    is the least ``(vertex count, sorted canonical edges)`` among minimisers.
    """
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    if n_max > MAX_MINSIZE_N and not force:
        raise BoundError(f"n_max={n_max} exceeds the guard {MAX_MINSIZE_N}")
    if m > comb(n_max, 2):
        raise BoundError(f"{m} edges do not fit on {n_max} vertices")
    best = None
    for G in graphs_up_to_iso(n_max, max_edges=m):
        if G.m != m:
            continue
        size = len(induced_size_set(G))
        W = canonical_graph(G.without_isolated())
        key = (size, W.v, sorted(W.edges))
        if best is None or key < best[0]:
            best = (key, W)
    return best[0][0], best[1]
