"""Exact F-sets, G-set prefixes and exhaustive search over template colourings.

Template colourings are enumerated as colour strings over the pairs of
``[t]`` in lexicographic order, background pinned to ``k`` and the other
colours numbered by first use. A string is kept only if it is the least
such string over all vertex relabellings, which gives one representative
per class under vertex and non-background colour permutations.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Iterator

from .colouring import (
    LazyColouring,
    TemplateColouring,
    pair_index,
    template_pairs,
    validate,
)
from .errors import BoundError, ValidationError

log = logging.getLogger(__name__)

MAX_ENUM_T = 6
MAX_ENUM_K = 10
MAX_LAW_T = 5
MAX_LAW_K = 8
MAX_GSET_N = 24


@dataclass(frozen=True)
class FSet:
    """Sizes ``m`` for which some infinite vertex set is exactly ``m``-coloured."""

    values: frozenset
    k: int

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, m) -> bool:
        return m in self.values

    def __iter__(self):
        return iter(sorted(self.values))

    def sorted(self) -> list[int]:
        return sorted(self.values)


@dataclass(frozen=True)
class GSet:
    """Colour counts of finite vertex sets inside ``[N]`` (a subset of the true G-set)."""

    values: frozenset
    N: int

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, m) -> bool:
        return m in self.values

    def sorted(self) -> list[int]:
        return sorted(self.values)


def _fset_values(t: int, k: int, colours) -> frozenset:
    # colour 0 stands for background: present in every infinite set, counted once
    m = [[0] * t for _ in range(t)]
    for (i, j), c in zip(template_pairs(t), colours):
        c = 0 if c == k else c
        m[i - 1][j - 1] = m[j - 1][i - 1] = c
    counts = [0] * (k + 1)
    counts[0] = 1
    return frozenset(_gray_core(t, m, counts, 1))


def _gray_core(n: int, m, counts: list[int], distinct: int) -> set[int]:
    """Distinct-colour counts over all subsets of ``range(n)`` in Gray-code order.

    ``m[i][j]`` is a colour index into ``counts``; ``distinct`` is the count for
    the empty set. Each step toggles one vertex and touches only its pairs.
    """
    inside = []
    member = [False] * n
    sizes = {distinct}
    for g in range(1, 1 << n):
        v = (g & -g).bit_length() - 1
        row = m[v]
        if member[v]:
            member[v] = False
            inside.remove(v)
            for u in inside:
                c = row[u]
                counts[c] -= 1
                if counts[c] == 0:
                    distinct -= 1
        else:
            for u in inside:
                c = row[u]
                if counts[c] == 0:
                    distinct += 1
                counts[c] += 1
            member[v] = True
            inside.append(v)
        sizes.add(distinct)
    return sizes


def check_fset_invariants(F: FSet) -> None:
    vals = F.values
    assert vals, "empty F-set"
    assert 1 in vals, f"1 missing from F-set {sorted(vals)}"
    assert max(vals) == F.k, f"max of F-set {sorted(vals)} is not k={F.k}"
    assert F.k < 2 or 2 in vals, f"2 missing from F-set {sorted(vals)}"


def f_set(delta: TemplateColouring) -> FSet:
    """Exact F-set of a template colouring.

    An infinite vertex set is a template part ``S`` plus infinitely many
    background vertices, so its colour set is ``Δ(S^(2)) ∪ {background}``.
    """
    problems = validate(delta)
    if problems:
        raise ValidationError(problems)
    canon = delta.canonical()
    F = FSet(_fset_values(canon.t, canon.k, canon.colours), delta.k)
    check_fset_invariants(F)
    return F


def g_set_prefix(delta: LazyColouring, N: int, *, force: bool = False) -> GSet:
    """``{|Δ(S^(2))| : S ⊆ [N], |S| >= 2}`` for a lazy colouring."""
    if N < 2 or (N > MAX_GSET_N and not force):
        raise BoundError(f"N must lie in [2, {MAX_GSET_N}], got {N}")
    index: dict[int, int] = {}
    m = [[0] * N for _ in range(N)]
    for i, j in combinations(range(N), 2):
        c = index.setdefault(delta.colour(i + 1, j + 1), len(index))
        m[i][j] = m[j][i] = c
    sizes = _gray_core(N, m, [0] * len(index), 0)
    # a subset with fewer than two vertices has no pairs and is excluded
    sizes.discard(0)
    return GSet(frozenset(sizes), N)


# ---------------------------------------------------------------------------
# enumeration up to symmetry


@lru_cache(maxsize=None)
def _perm_sources(t: int) -> tuple[tuple[int, ...], ...]:
    """For each vertex permutation, where each pair of the relabelled string reads from.

    The identity comes first.
    """
    pairs = template_pairs(t)
    out = []
    for perm in permutations(range(1, t + 1)):
        out.append(tuple(pair_index(perm[i - 1], perm[j - 1], t) for i, j in pairs))
    return tuple(out)


def _prefix_check(s: list, p: int, k: int, sources) -> int:
    """Return -1 if some relabelling beats the prefix ``s[:p]``, else the stabiliser count.

    The count only means something when ``p`` is the full string length.
    """
    stab = 0
    for src in sources:
        rename: dict[int, int] = {}
        nxt = 1
        for q in range(p):
            idx = src[q]
            if idx >= p:
                break
            c = s[idx]
            if c != k:
                r = rename.get(c)
                if r is None:
                    r = rename[c] = nxt
                    nxt += 1
                c = r
            sq = s[q]
            if c < sq:
                return -1
            if c > sq:
                break
        else:
            stab += 1
    return stab


def _check_enum_bounds(t: int, k: int, force: bool) -> None:
    if t < 0 or k < 1:
        raise BoundError(f"invalid template parameters t={t}, k={k}")
    if not force and (t > MAX_ENUM_T or k > MAX_ENUM_K):
        raise BoundError(f"enumeration guard: t <= {MAX_ENUM_T}, k <= {MAX_ENUM_K}")


def feasible(t: int, k: int) -> bool:
    """Whether some surjective ``k``-colouring has template size exactly ``t``."""
    return comb(t, 2) + 1 >= k


def _canonical_strings(t: int, k: int, prefix: tuple = (), stop: int | None = None
                       ) -> Iterator[tuple[tuple, int]]:
    """Yield ``(string, stabiliser size)`` for every canonical string extending ``prefix``.

    With ``stop`` set, yields the surviving partial strings of that length
    instead (stabiliser reported as 0).
    """
    L = comb(t, 2)
    end = L if stop is None else stop
    sources = _perm_sources(t)
    need = k - 1
    s = list(prefix) + [0] * (L - len(prefix))

    def rec(p: int, used: int):
        if p == end:
            if stop is None:
                yield tuple(s), _prefix_check(s, L, k, sources)
            else:
                yield tuple(s[:p]), 0
            return
        top = min(used + 1, need)
        for c in list(range(1, top + 1)) + [k]:
            nu = used + 1 if c == used + 1 and c != k else used
            if need - nu > L - p - 1:
                continue
            s[p] = c
            if _prefix_check(s, p + 1, k, sources[1:]) >= 0:
                yield from rec(p + 1, nu)
        s[p] = 0

    if k == 1:
        if not prefix or all(c == 1 for c in prefix):
            if stop is None:
                yield (1,) * L, factorial(t)
            else:
                yield (1,) * stop, 0
        return
    used = max([c for c in prefix if c != k], default=0)
    if prefix and _prefix_check(s, len(prefix), k, sources[1:]) < 0:
        return
    yield from rec(len(prefix), used)


def enumerate_templates(t: int, k: int, up_to_symmetry: bool = True, *,
                        force: bool = False) -> Iterator[TemplateColouring]:
    """Every valid template colouring with background ``k``.

    With ``up_to_symmetry`` exactly one representative (the canonical form)
    per class under vertex and non-background colour permutations.
    """
    _check_enum_bounds(t, k, force)
    if not feasible(t, k):
        log.info("no surjective template with t=%d, k=%d", t, k)
        return
    if up_to_symmetry:
        for s, _ in _canonical_strings(t, k):
            yield TemplateColouring(t, k, k, s)
        return
    L = comb(t, 2)
    for s in product(range(1, k + 1), repeat=L):
        if len(set(s) - {k}) == k - 1:
            yield TemplateColouring(t, k, k, s)


def canonical_form(delta: TemplateColouring) -> TemplateColouring:
    """Least colour string over all vertex relabellings, colours renamed by first use."""
    problems = validate(delta)
    if problems:
        raise ValidationError(problems)
    base = delta.canonical()
    t, k = base.t, base.k
    best = None
    for src in _perm_sources(t):
        rename = {k: k}
        out = []
        for idx in src:
            c = base.colours[idx]
            if c not in rename:
                rename[c] = len(rename)
            out.append(rename[c])
        out = tuple(out)
        if best is None or out < best:
            best = out
    return TemplateColouring(t, k, k, best)


# ---------------------------------------------------------------------------
# parallel scans


@dataclass(frozen=True)
class ClassRecord:
    colours: tuple
    stabiliser: int
    fset: tuple

    def colouring(self, t: int, k: int) -> TemplateColouring:
        return TemplateColouring(t, k, k, self.colours)

    def witness_key(self, t: int, k: int) -> tuple:
        """Tie-break among minimisers: smaller template, sparser non-background part, then string."""
        return (t, sum(c != k for c in self.colours), self.colours)


def _scan_prefix(args) -> list[ClassRecord]:
    t, k, prefix = args
    out = []
    for s, stab in _canonical_strings(t, k, prefix):
        out.append(ClassRecord(s, stab, tuple(sorted(_fset_values(t, k, s)))))
    return out


def scan_classes(t: int, k: int, workers: int = 1) -> list[ClassRecord]:
    """All classes for ``(t, k)`` with their F-sets, in canonical-string order.

    Work is split by the colours of the first ``ceil(C(t,2)/4)`` pairs; the
    merged output does not depend on ``workers``.
    """
    if not feasible(t, k):
        return []
    L = comb(t, 2)
    depth = -(-L // 4)
    if workers <= 1 or depth == 0 or k == 1:
        return _scan_prefix((t, k, ()))
    prefixes = [p for p, _ in _canonical_strings(t, k, stop=depth)]
    jobs = [(t, k, p) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(_scan_prefix, jobs))
    return [r for chunk in chunks for r in chunk]


def orbit_size(t: int, k: int, stabiliser: int) -> int:
    total = factorial(t) * factorial(k - 1)
    assert total % stabiliser == 0
    return total // stabiliser


# ---------------------------------------------------------------------------
# psi and laws


def psi_bounded(k: int, t_max: int, *, workers: int = 1,
                force: bool = False) -> tuple[int, TemplateColouring]:
    """Least ``|F_Δ|`` over templates with ``t <= t_max`` and exactly ``k`` colours.

    This is the template-class value, an upper bound for the true minimum.
    Ties are broken by :meth:`ClassRecord.witness_key`.
    """
    _check_enum_bounds(t_max, k, force)
    ts = [t for t in range(t_max + 1) if feasible(t, k)]
    if not ts:
        raise BoundError(f"no template with t <= {t_max} realises k={k} colours")
    best = None
    for t in ts:
        for rec in scan_classes(t, k, workers):
            key = (len(rec.fset), rec.witness_key(t, k))
            if best is None or key < best[0]:
                best = (key, rec.colouring(t, k))
    return best[0][0], best[1]


def n_of_k(k: int) -> int:
    """Largest ``n >= 1`` with ``k >= C(n,2) + 1``."""
    n = 1
    while comb(n + 1, 2) + 1 <= k:
        n += 1
    return n


def check_laws(F: FSet) -> list[tuple[str, str]]:
    """Violations of the F-set laws, the interval statement included."""
    vals, k = F.values, F.k
    out = []
    for m in (1, k) + ((2,) if k >= 2 else ()):
        if m not in vals:
            out.append(("membership", f"{m} not in F"))
    for l in sorted(vals):
        if l < k and not any(l + 1 <= m <= 2 * l for m in vals):
            out.append(("doubling", f"no element of F in [{l + 1}, {2 * l}]"))
    n = 1
    while k >= 2 ** n + 1:
        lo, hi = 2 ** n + 1, 2 ** (n + 1)
        if not any(lo <= m <= hi for m in vals):
            out.append(("powers-of-two", f"no element of F in [{lo}, {hi}]"))
        n += 1
    if len(vals) < n_of_k(k):
        out.append(("lower-bound", f"|F| = {len(vals)} < {n_of_k(k)}"))
    n = 2
    while k >= comb(n, 2) + 2:
        lo, hi = comb(n, 2) + 2, comb(n + 1, 2) + 1
        if not any(lo <= m <= hi for m in vals):
            out.append(("interval", f"no element of F in [{lo}, {hi}]"))
        n += 1
    return out


@dataclass
class SearchReport:
    t_max: int
    k_max: int
    rows: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def classes(self) -> int:
        return sum(r["classes"] for r in self.rows)

    @property
    def raw(self) -> int:
        return sum(r["raw"] for r in self.rows)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "t_max": self.t_max,
            "k_max": self.k_max,
            "classes": self.classes,
            "raw": self.raw,
            "passed": self.passed,
            "rows": self.rows,
            "violations": self.violations,
            "psi_label": "template-class psi",
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d


def law_report(t_max: int, k_max: int, *, workers: int = 1,
               force: bool = False) -> SearchReport:
    """Check every F-set law on every template class with ``t <= t_max, k <= k_max``."""
    if t_max < 0 or k_max < 1:
        raise BoundError(f"invalid bounds t_max={t_max}, k_max={k_max}")
    if not force and (t_max > MAX_LAW_T or k_max > MAX_LAW_K):
        raise BoundError(f"law guard: t_max <= {MAX_LAW_T}, k_max <= {MAX_LAW_K}")
    start = time.perf_counter()
    report = SearchReport(t_max, k_max)
    for t in range(t_max + 1):
        for k in range(1, k_max + 1):
            if not feasible(t, k):
                continue
            records = scan_classes(t, k, workers)
            best = None
            raw = 0
            for rec in records:
                raw += orbit_size(t, k, rec.stabiliser)
                F = FSet(frozenset(rec.fset), k)
                for law, detail in check_laws(F):
                    report.violations.append({
                        "law": law, "detail": detail, "t": t, "k": k,
                        "fset": list(rec.fset),
                        "witness": rec.colouring(t, k).to_dict(),
                    })
                if best is None or ((len(rec.fset), rec.witness_key(t, k))
                                    < (len(best.fset), best.witness_key(t, k))):
                    best = rec
            report.rows.append({
                "t": t, "k": k, "classes": len(records), "raw": raw,
                "min_F": len(best.fset), "witness": best.colouring(t, k).to_dict(),
            })
            log.info("t=%d k=%d classes=%d", t, k, len(records))
    report.wall_time = time.perf_counter() - start
    return report
