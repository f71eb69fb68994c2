"""Finite encodings of edge-colourings of the complete graph on the naturals.

A :class:`TemplateColouring` colours the pairs inside ``[t]`` arbitrarily and
every pair with an endpoint outside ``[t]`` with a single background colour.
A :class:`LazyColouring` wraps a pure pair -> colour function and is used for
colourings with infinitely many colours.

Spectra are returned as ``frozenset`` objects; the hot paths inside the
package work on integer bitmasks over ``[k]`` instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .errors import InvalidArgumentError, InvalidVertexError, ValidationError

MAX_COLOURS = 128


@dataclass(frozen=True, order=True)
class Vertex:
    """A vertex of the naturals as seen by a template colouring.

    Template vertices are ``1..t``. Background vertices stand for elements of
    the naturals outside ``[t]``; their ``id`` is only a representative label,
    so any two background vertices are interchangeable.
    """

    background: bool
    id: int

    @classmethod
    def template(cls, index: int) -> "Vertex":
        return cls(False, index)

    @classmethod
    def bg(cls, rep: int) -> "Vertex":
        return cls(True, rep)

    @classmethod
    def parse(cls, text: str) -> "Vertex":
        tag, num = text[:1].upper(), text[1:]
        if tag not in ("T", "B") or not num.isdigit():
            raise InvalidVertexError(f"cannot parse vertex {text!r}")
        return cls(tag == "B", int(num))

    def __str__(self) -> str:
        return f"{'B' if self.background else 'T'}{self.id}"


def T(index: int) -> Vertex:
    return Vertex.template(index)


def B(rep: int) -> Vertex:
    return Vertex.bg(rep)


def template_pairs(t: int) -> list[tuple[int, int]]:
    """Pairs ``(i, j)`` with ``1 <= i < j <= t`` in lexicographic order."""
    return list(combinations(range(1, t + 1), 2))


def pair_index(i: int, j: int, t: int) -> int:
    """Position of the pair ``{i, j}`` in :func:`template_pairs` order."""
    if i > j:
        i, j = j, i
    # pairs starting with 1..i-1 come first
    return (i - 1) * t - (i - 1) * i // 2 + (j - i - 1)


@dataclass(frozen=True)
class TemplateColouring:
    """Surjective ``k``-colouring: template part on ``[t]``, background elsewhere.

    ``colours`` lists the colour of every template pair in
    :func:`template_pairs` order; ``None`` marks an unassigned pair (only
    meaningful as validation input).
    """

    t: int
    k: int
    background: int
    colours: tuple

    @classmethod
    def from_edges(cls, t: int, k: int, background: int,
                   edges: Mapping[tuple[int, int], int]) -> "TemplateColouring":
        colours: list = [None] * comb(t, 2)
        for (i, j), c in edges.items():
            if not (1 <= i <= t and 1 <= j <= t and i != j):
                raise InvalidVertexError(f"pair ({i}, {j}) is not inside [{t}]")
            colours[pair_index(i, j, t)] = c
        return cls(t, k, background, tuple(colours))

    @classmethod
    def monochromatic(cls) -> "TemplateColouring":
        return cls(0, 1, 1, ())

    def pair_colour(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidArgumentError("a pair needs two distinct vertices")
        return self.colours[pair_index(i, j, self.t)]

    def colour(self, u: Vertex, v: Vertex) -> int:
        if u == v:
            raise InvalidArgumentError(f"{u} is not a pair")
        if u.background or v.background:
            return self.background
        return self.pair_colour(u.id, v.id)

    @cached_property
    def matrix(self) -> list[list[int]]:
        """0-based symmetric colour matrix of the template part."""
        m = [[0] * self.t for _ in range(self.t)]
        for (i, j), c in zip(template_pairs(self.t), self.colours):
            m[i - 1][j - 1] = m[j - 1][i - 1] = c
        return m

    def edges(self) -> Iterable[tuple[int, int, int]]:
        for (i, j), c in zip(template_pairs(self.t), self.colours):
            yield i, j, c

    def vertices(self) -> list[Vertex]:
        return [T(i) for i in range(1, self.t + 1)]

    def relabel(self, perm: tuple[int, ...] | None = None,
                colour_map: Mapping[int, int] | None = None) -> "TemplateColouring":
        """Colouring ``(i, j) -> colour_map[c(perm[i], perm[j])]`` (both 1-based).

        Colours missing from ``colour_map`` keep their id.
        """
        perm = perm or tuple(range(1, self.t + 1))
        cmap = {c: c for c in range(1, self.k + 1)}
        cmap.update(colour_map or {})
        if sorted(cmap.values()) != list(range(1, self.k + 1)):
            raise InvalidArgumentError("colour_map must permute [k]")
        if sorted(perm) != list(range(1, self.t + 1)):
            raise InvalidArgumentError(f"{perm} is not a permutation of [{self.t}]")
        new = tuple(cmap[self.pair_colour(perm[i - 1], perm[j - 1])]
                    for i, j in template_pairs(self.t))
        return TemplateColouring(self.t, self.k, cmap[self.background], new)

    def canonical(self) -> "TemplateColouring":
        """Rename colours so background is ``k`` and the rest follow first use."""
        cmap = {self.background: self.k}
        nxt = 1
        for c in self.colours:
            if c not in cmap:
                cmap[c] = nxt
                nxt += 1
        for c in range(1, self.k + 1):
            if c not in cmap:
                cmap[c] = nxt
                nxt += 1
        return TemplateColouring(self.t, self.k, self.k,
                                 tuple(cmap[c] for c in self.colours))

    def to_dict(self) -> dict:
        c = self.canonical()
        return {"t": c.t, "k": c.k, "background": c.background,
                "edges": [[i, j, col] for i, j, col in c.edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "TemplateColouring":
        try:
            t, k, bg = int(data["t"]), int(data["k"]), int(data["background"])
            edges = {}
            for i, j, c in data["edges"]:
                if (i, j) in edges or (j, i) in edges:
                    raise ValidationError([f"pair ({i}, {j}) listed twice"])
                edges[(int(i), int(j))] = int(c)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError([f"malformed witness: {exc}"]) from exc
        delta = cls.from_edges(t, k, bg, edges)
        problems = validate(delta)
        if problems:
            raise ValidationError(problems)
        return delta

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")
        return path

    @classmethod
    def load(cls, path: str | Path) -> "TemplateColouring":
        return cls.from_dict(json.loads(Path(path).read_text()))


def validate(delta: TemplateColouring) -> list[str]:
    """Every invariant violation of ``delta``; an empty list means valid."""
    problems = []
    t, k = delta.t, delta.k
    if t < 0:
        problems.append(f"negative template size {t}")
    if k < 1:
        problems.append(f"colour count {k} < 1")
    if k > MAX_COLOURS:
        problems.append(f"colour count {k} exceeds {MAX_COLOURS}")
    if not 1 <= delta.background <= k:
        problems.append(f"background {delta.background} outside [{k}]")
    pairs = template_pairs(max(t, 0))
    if len(delta.colours) > len(pairs):
        problems.append(f"{len(delta.colours) - len(pairs)} colours beyond the {len(pairs)} template pairs")
    colours = list(delta.colours[:len(pairs)]) + [None] * (len(pairs) - len(delta.colours))
    used = {delta.background}
    for (i, j), c in zip(pairs, colours):
        if c is None:
            problems.append(f"pair ({i}, {j}) unassigned")
        elif not isinstance(c, int) or not 1 <= c <= k:
            problems.append(f"pair ({i}, {j}) has colour {c} outside [{k}]")
        else:
            used.add(c)
    for c in range(1, k + 1):
        if c not in used:
            problems.append(f"colour {c} unused")
    return problems


def _check_vertices(delta: TemplateColouring, vertices: Iterable[Vertex]) -> None:
    for v in vertices:
        if not v.background and not 1 <= v.id <= delta.t:
            raise InvalidVertexError(f"{v} is outside the template [{delta.t}]")


def spectrum_by(colour: Callable, vertices: Iterable) -> frozenset:
    """Colours on the pairs inside ``vertices`` under an arbitrary colour function."""
    vs = sorted(set(vertices))
    return frozenset(colour(u, v) for u, v in combinations(vs, 2))


def new_colours_by(colour: Callable, v, X: Iterable) -> frozenset:
    X = set(X)
    if v in X:
        raise InvalidArgumentError(f"{v} belongs to the target set")
    return frozenset(colour(v, u) for u in X) - spectrum_by(colour, X)


def spectrum(delta: TemplateColouring, S: Iterable[Vertex]) -> frozenset:
    """``Δ(S^(2))``: the colours attained on pairs inside ``S``."""
    S = set(S)
    _check_vertices(delta, S)
    return spectrum_by(delta.colour, S)


def new_colours(delta: TemplateColouring, v: Vertex, X: Iterable[Vertex]) -> frozenset:
    """Colours on edges from ``v`` into ``X`` that do not occur inside ``X``."""
    X = set(X)
    _check_vertices(delta, X | {v})
    return new_colours_by(delta.colour, v, X)


def spectrum_mask(delta: TemplateColouring, template_subset: int) -> int:
    """Bitmask spectrum of a 0-based bitmask subset of template vertices."""
    m = delta.matrix
    members = [i for i in range(delta.t) if template_subset >> i & 1]
    mask = 0
    for a, i in enumerate(members):
        row = m[i]
        for j in members[a + 1:]:
            mask |= 1 << row[j]
    return mask


def small_rainbow(n: int) -> TemplateColouring:
    """Rainbow ``K_n`` on ``[n]`` plus one background colour."""
    if n < 2:
        raise InvalidArgumentError(f"small_rainbow needs n >= 2, got {n}")
    m = comb(n, 2)
    return TemplateColouring(n, m + 1, m + 1, tuple(range(1, m + 1)))


def bipartite_rainbow(a: int, b: int) -> TemplateColouring:
    """Rainbow ``K_{a,b}`` between ``[a]`` and ``[a+b] \\ [a]``, background elsewhere."""
    if a < 1 or b < 1:
        raise InvalidArgumentError(f"bipartite_rainbow needs a, b >= 1, got {a}, {b}")
    bg = a * b + 1
    nxt = iter(range(1, bg))
    colours = tuple(next(nxt) if i <= a < j else bg
                    for i, j in template_pairs(a + b))
    return TemplateColouring(a + b, bg, bg, colours)


def embed_graph_rainbow(graph) -> TemplateColouring:
    """Distinct colours on the edges of ``graph``, background on everything else."""
    edges = sorted(graph.edges)
    if not edges:
        raise InvalidArgumentError("graph has no edges")
    m = len(edges)
    cmap = {e: c for c, e in enumerate(edges, start=1)}
    colours = tuple(cmap.get(p, m + 1) for p in template_pairs(graph.v))
    return TemplateColouring(graph.v, m + 1, m + 1, colours)


@dataclass(frozen=True)
class LazyColouring:
    """Colouring of pairs of naturals given by a pure function of ``(min, max)``."""

    name: str
    fn: Callable[[int, int], int]

    def colour(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidArgumentError(f"({i}, {j}) is not a pair")
        return self.fn(i, j) if i < j else self.fn(j, i)


def _injective(i: int, j: int) -> int:
    return (j - 1) * (j - 2) // 2 + i


INJECTIVE = LazyColouring("injective", _injective)
CONSTANT = LazyColouring("constant", lambda i, j: 1)
MINIMUM = LazyColouring("min", lambda i, j: i)
MAXIMUM = LazyColouring("max", lambda i, j: j)
SUM = LazyColouring("sum", lambda i, j: i + j)

LAZY_COLOURINGS = {c.name: c for c in (INJECTIVE, CONSTANT, MINIMUM, MAXIMUM, SUM)}
