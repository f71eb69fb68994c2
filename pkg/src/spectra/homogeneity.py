"""Homogeneous tuples: condition checker, rank order and inductive builders.

An ``n``-tuple ``(X_1, ..., X_n)`` of disjoint vertex sets is homogeneous
when its prefix unions ``X̄_i`` have strictly growing spectra, every vertex
of ``X_i`` brings exactly the colours that are new at level ``i``, and the
last spectrum has at most ``C(n,2) + 1`` colours. In strong mode ``X_1`` is
infinite and monochromatic; in weak mode it is a single vertex and the
bound drops to ``C(n,2)``.

Strong-mode tuples live on a :class:`TemplateColouring`: ``X_1`` holds the
infinite background class (flag ``includes_background``) plus finitely many
template vertices. Two fresh background representatives stand in for the
infinite part whenever a spectrum is computed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Iterable

from .colouring import (
    LazyColouring,
    TemplateColouring,
    Vertex,
    new_colours_by,
    spectrum_by,
    validate,
)
from .errors import (
    InvalidArgumentError,
    InvalidVertexError,
    PreconditionError,
    SpectraError,
    ValidationError,
)
from .search import MAX_GSET_N, g_set_prefix

log = logging.getLogger(__name__)

STRONG = "strong"
WEAK = "weak"
INFINITE_BACKGROUND = "B*"


def _vstr(v) -> str:
    return str(v)


@dataclass(frozen=True)
class HomogTuple:
    sets: tuple
    mode: str = STRONG
    includes_background: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if self.mode not in (STRONG, WEAK):
            raise InvalidArgumentError(f"unknown mode {self.mode!r}")

    @property
    def n(self) -> int:
        return len(self.sets)

    def prefix(self, i: int) -> frozenset:
        """Explicit vertices of ``X̄_i`` (1-based ``i``)."""
        return frozenset().union(*self.sets[:i])

    def describe(self) -> list[list[str]]:
        out = []
        for idx, s in enumerate(self.sets):
            items = [_vstr(v) for v in sorted(s)]
            if idx == 0 and self.includes_background:
                items.insert(0, INFINITE_BACKGROUND)
            out.append(items)
        return out

    def __str__(self) -> str:
        return "(" + ", ".join("{" + ",".join(s) + "}" for s in self.describe()) + ")"

    def to_dict(self) -> dict:
        sets = []
        for idx, s in enumerate(self.sets):
            items = [v if isinstance(v, int) else str(v) for v in sorted(s)]
            if idx == 0 and self.includes_background:
                items.insert(0, INFINITE_BACKGROUND)
            sets.append(items)
        return {"mode": self.mode, "sets": sets}

    @classmethod
    def from_dict(cls, data: dict) -> "HomogTuple":
        mode = data.get("mode", STRONG)
        sets = []
        bg = False
        for idx, items in enumerate(data["sets"]):
            s = set()
            for item in items:
                if item == INFINITE_BACKGROUND:
                    if idx != 0:
                        raise InvalidVertexError("the infinite background class belongs to X_1")
                    bg = True
                elif isinstance(item, int):
                    s.add(item)
                else:
                    s.add(Vertex.parse(item))
            sets.append(s)
        return cls(tuple(sets), mode, bg)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    condition: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class _Closure:
    """Prefix unions of a tuple, with the infinite background made concrete."""

    def __init__(self, sets, includes_background: bool, extra: Iterable = ()):
        self.sets = [set(s) for s in sets]
        self.fresh: tuple = ()
        if includes_background:
            ids = [v.id for s in self.sets for v in s if isinstance(v, Vertex) and v.background]
            ids += [v.id for v in extra if isinstance(v, Vertex) and v.background]
            top = max(ids, default=0)
            self.fresh = (Vertex.bg(top + 1), Vertex.bg(top + 2))

    def __call__(self, i: int) -> set:
        out = set(self.fresh)
        for s in self.sets[:i]:
            out |= s
        return out


def _colour_of(delta):
    return delta.colour


def is_homogeneous(delta, T: HomogTuple) -> CheckResult:
    """Check the homogeneity conditions in order, stopping at the first failure."""
    if T.mode == STRONG and not isinstance(delta, TemplateColouring):
        raise PreconditionError("strong mode needs a template colouring")
    colour = _colour_of(delta)
    n = T.n
    if isinstance(delta, TemplateColouring):
        for s in T.sets:
            for v in s:
                if not isinstance(v, Vertex) or (not v.background and not 1 <= v.id <= delta.t):
                    raise InvalidVertexError(f"{v} is not a vertex of this template")

    if n < 1:
        return CheckResult(False, 1, "empty tuple")
    for i, s in enumerate(T.sets, start=1):
        if not s and not (i == 1 and T.includes_background):
            return CheckResult(False, 1, f"X_{i} is empty")
    seen: set = set()
    for i, s in enumerate(T.sets, start=1):
        if seen & s:
            return CheckResult(False, 1, f"X_{i} meets an earlier set")
        seen |= s

    close = _Closure(T.sets, T.includes_background)
    if T.mode == STRONG:
        if not T.includes_background:
            return CheckResult(False, 2, "X_1 is finite")
        if len(spectrum_by(colour, close(1))) != 1:
            return CheckResult(False, 2, "X_1 is not 1-coloured")
    else:
        if T.includes_background or len(T.sets[0]) != 1:
            return CheckResult(False, 2, "|X_1| != 1")

    spectra = [spectrum_by(colour, close(i)) for i in range(1, n + 1)]
    for i in range(1, n):
        lo, hi = spectra[i - 1], spectra[i]
        if not (lo < hi):
            return CheckResult(False, 3, f"spectrum of level {i} not strictly inside level {i + 1}")

    for i in range(2, n + 1):
        want = spectra[i - 1] - spectra[i - 2]
        below = close(i - 1)
        for v in sorted(T.sets[i - 1]):
            got = new_colours_by(colour, v, below)
            if got != want:
                return CheckResult(False, 4, f"{v} in X_{i} brings {sorted(got)}, level adds {sorted(want)}")

    bound = comb(n, 2) + (1 if T.mode == STRONG else 0)
    if len(spectra[-1]) > bound:
        return CheckResult(False, 5, f"|spectrum| = {len(spectra[-1])} > {bound}")
    return CheckResult(True)


def level_spectra(delta, T: HomogTuple) -> list[frozenset]:
    """Spectra of ``X̄_1, ..., X̄_n``."""
    close = _Closure(T.sets, T.includes_background)
    return [spectrum_by(delta.colour, close(i)) for i in range(1, T.n + 1)]


def rank(delta, T: HomogTuple) -> tuple[int, ...]:
    """``(x_1, ..., x_{n-1})``: new-colour counts from ``X_{i+1}`` into ``X̄_i``."""
    close = _Closure(T.sets, T.includes_background)
    out = []
    for i in range(1, T.n):
        v = min(T.sets[i])
        out.append(len(new_colours_by(delta.colour, v, close(i))))
    return tuple(out)


def rank_less(r1, r2) -> bool:
    """Strict lexicographic order on equal-length rank vectors."""
    if len(r1) != len(r2):
        raise InvalidArgumentError(f"rank lengths differ: {len(r1)} vs {len(r2)}")
    for a, b in zip(r1, r2):
        if a != b:
            return a < b
    return False


class _Stuck(SpectraError):
    pass


def _fmt(colours) -> str:
    return "[" + ",".join(str(c) for c in sorted(colours)) + "]"


class _Builder:
    def __init__(self, delta, universe, mode: str, trace: list | None):
        self.delta = delta
        self.colour = delta.colour
        self.universe = list(universe)
        self.mode = mode
        self.bg = mode == STRONG
        self.trace = trace
        self.sets: list[set] = []
        self.descents: list[tuple] = []

    def tuple(self) -> HomogTuple:
        return HomogTuple(tuple(self.sets), self.mode, self.bg)

    def log(self, line: str) -> None:
        if self.trace is not None:
            self.trace.append(line)
        log.debug(line)

    def close(self, i: int, extra=()) -> set:
        return _Closure(self.sets, self.bg, extra)(i)

    def new(self, v, i: int) -> frozenset:
        return new_colours_by(self.colour, v, self.close(i, (v,)))

    def check(self, what: str) -> None:
        res = is_homogeneous(self.delta, self.tuple())
        assert res, f"{what} produced a non-homogeneous tuple: {res}"

    def extend(self) -> None:
        while True:
            n = len(self.sets)
            used = set().union(*self.sets)
            outside = [v for v in self.universe if v not in used]
            for v in outside:
                N = self.new(v, n)
                if N:
                    self._case1(v, N)
                    return
            top = spectrum_by(self.colour, self.close(n))
            pair = next(((a, b) for x, a in enumerate(outside) for b in outside[x + 1:]
                         if self.colour(a, b) not in top), None)
            if pair is None:
                raise _Stuck(f"no colour outside the spectrum of X̄_{n} among the vertices searched")
            v1, v2 = pair
            if self._absorb(v1):
                continue
            colour = self.colour(v1, v2)
            self.sets.append({v2})
            self.log(f"case2 v1={v1} v2={v2} colour={colour} append -> {self.tuple()}")
            self.check("case 2")
            return

    def _case1(self, v, N) -> None:
        n = len(self.sets)
        if len(N) <= n:
            self.sets.append({v})
            self.log(f"case1 v={v} new={_fmt(N)} append -> {self.tuple()}")
            self.check("case 1 append")
            return
        j = next(i for i in range(1, n + 1) if self.new(v, i))
        c = min(self.new(v, j))
        spec_j = spectrum_by(self.colour, self.close(j))
        X_j = self.sets[j - 1]
        Y_j = {u for u in X_j if self.colour(v, u) == c or self.colour(v, u) in spec_j}
        pool = sorted(set().union(*self.sets[j:]) | (X_j - Y_j))
        taken = {c}
        chosen = []
        for u in pool:
            if len(chosen) == n - j:
                break
            col = self.colour(v, u)
            if col in N and col not in taken:
                taken.add(col)
                chosen.append(u)
        assert len(chosen) == n - j, "not enough distinct new colours to split on"
        self.sets = self.sets[:j - 1] + [Y_j, {v}] + [{u} for u in chosen]
        self.log(f"case1-split v={v} new={_fmt(N)} j={j} c={c} "
                 f"singles=[{','.join(map(str, chosen))}] -> {self.tuple()}")
        self.check("case 1 split")

    def _absorb(self, v) -> bool:
        """Absorb ``v`` (no new colours into X̄_n); True if the tuple was replaced instead."""
        n = len(self.sets)
        levels = [i for i in range(1, n + 1) if self.new(v, i)]
        if not levels:
            self.sets[0].add(v)
            self.log(f"absorb v={v} into X1 -> {self.tuple()}")
            self.check("absorption")
            return False
        j = max(levels)
        assert j < n
        mine = self.new(v, j)
        theirs = self.new(min(self.sets[j]), j)
        assert mine <= theirs, "absorption inclusion failed"
        if mine == theirs:
            self.sets[j].add(v)
            self.log(f"absorb v={v} into X{j + 1} -> {self.tuple()}")
            self.check("absorption")
            return False
        old = rank(self.delta, self.tuple())
        self.sets = self.sets[:j] + [{v}] + self.sets[j:n - 1]
        new = rank(self.delta, self.tuple())
        assert rank_less(new, old), f"rank did not descend: {old} -> {new}"
        self.descents.append((old, new))
        self.log(f"descent v={v} rank {old}->{new} -> {self.tuple()}")
        self.check("rank descent")
        return True


def build_homogeneous(delta: TemplateColouring, n: int, trace: list | None = None,
                      start: HomogTuple | None = None) -> HomogTuple:
    """Build a strong ``n``-homogeneous tuple by the inductive construction.

    Free choices (which vertex, which colour, which singletons) go to the
    smallest candidate. ``trace``, if given, receives one line per step.
    ``start`` replaces the Ramsey base case ``({background})`` with any
    strong homogeneous tuple to extend from.
    """
    problems = validate(delta)
    if problems:
        raise ValidationError(problems)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if delta.k < comb(n, 2) + 1:
        raise PreconditionError(f"k={delta.k} < C({n},2)+1 = {comb(n, 2) + 1}")
    b = _Builder(delta, delta.vertices(), STRONG, trace)
    b.sets = [set()]
    if start is not None:
        if start.mode != STRONG or start.n > n:
            raise InvalidArgumentError("start must be a strong tuple of length <= n")
        if any(v.background for s in start.sets for v in s):
            raise InvalidArgumentError("start may only hold template vertices explicitly")
        res = is_homogeneous(delta, start)
        if not res:
            raise PreconditionError(f"start tuple is not homogeneous: {res.detail}")
        b.sets = [set(s) for s in start.sets]
    b.log(f"start -> {b.tuple()}")
    while len(b.sets) < n:
        try:
            b.extend()
        except _Stuck as exc:
            raise SpectraError(f"cannot realise the colours of a surjective colouring: {exc}") from exc
    result = b.tuple()
    assert is_homogeneous(delta, result)
    return result


def build_weakly_homogeneous(delta: LazyColouring, n: int, vertex_bound: int,
                             trace: list | None = None) -> HomogTuple | None:
    """Weakly homogeneous ``n``-tuple inside ``[vertex_bound]``, or None if none was found.

    None is inconclusive: the search only looks at the first
    ``vertex_bound`` naturals. When stuck, the build restarts on a frontier
    one vertex larger.
    """
    if n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    if vertex_bound < n:
        raise PreconditionError(f"vertex_bound {vertex_bound} < n = {n}")
    for frontier in range(n, vertex_bound + 1):
        local: list[str] = []
        b = _Builder(delta, range(1, frontier + 1), WEAK, local)
        b.sets = [{1}]
        b.log(f"start frontier={frontier} -> {b.tuple()}")
        try:
            while len(b.sets) < n:
                b.extend()
        except _Stuck as exc:
            b.log(f"stuck frontier={frontier}: {exc}")
            if trace is not None:
                trace.extend(local)
            continue
        if trace is not None:
            trace.extend(local)
        result = b.tuple()
        assert is_homogeneous(delta, result)
        return result
    return None


@dataclass(frozen=True)
class CanonicalCheck:
    status: str  # "pass", "fail" or "inconclusive"
    sizes: tuple = ()
    witness: HomogTuple | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def canonical_check(delta: LazyColouring, n: int, vertex_bound: int) -> CanonicalCheck:
    """Certify ``|G_Δ ∩ [C(n,2)]| >= n - 1`` for ``delta`` via a weakly homogeneous tuple."""
    T = build_weakly_homogeneous(delta, n, vertex_bound)
    if T is None:
        return CanonicalCheck("inconclusive", detail=f"no tuple within [{vertex_bound}]")
    sizes = tuple(len(s) for s in level_spectra(delta, T)[1:])
    top = comb(n, 2)
    if len(set(sizes)) != n - 1 or not all(1 <= m <= top for m in sizes):
        return CanonicalCheck("fail", sizes, T, f"sizes {sizes} are not n-1 distinct values in [1, {top}]")
    N = max(max(s) for s in T.sets)
    if 2 <= N <= MAX_GSET_N:
        G = g_set_prefix(delta, max(N, 2))
        missing = [m for m in sizes if m not in G]
        if missing:
            return CanonicalCheck("fail", sizes, T, f"sizes {missing} missing from G-set prefix")
    return CanonicalCheck("pass", sizes, T)
