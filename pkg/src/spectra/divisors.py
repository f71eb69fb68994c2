"""Exact divisor statistics behind the bipartite-rainbow upper bound.

All counting is integer-exact: interval endpoints are :class:`Fraction`
values and sieves are numpy boolean arrays, one per call.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import BoundError, DomainError, InvalidArgumentError

MAX_H_X = 10 ** 8
MAX_TABLE_N = 10 ** 5
MAX_DENSITY_X = 10 ** 7
MAX_BIPARTITE = 10 ** 8
MAX_SUM_AB = 10 ** 6
SEGMENT = 1 << 26

LOG_BASE = "natural"


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _floor(v: Fraction) -> int:
    return v.numerator // v.denominator


def H(x, y, z, *, force: bool = False) -> int:
    """Number of ``n <= x`` with a divisor ``d`` in ``(y, z]``.

    ``x``, ``y``, ``z`` may be rationals; only integers ``n`` and ``d`` count.
    """
    x, y, z = _frac(x), _frac(y), _frac(z)
    if y < 0 or z <= y:
        raise InvalidArgumentError(f"need 0 <= y < z, got y={y}, z={z}")
    X = _floor(x)
    if X > MAX_H_X and not force:
        raise BoundError(f"x={X} exceeds the sieve guard {MAX_H_X}")
    if X < 1:
        return 0
    lo = _floor(y) + 1
    hi = min(_floor(z), X)
    if lo > hi:
        return 0
    marks = np.zeros(X + 1, dtype=bool)
    for d in range(lo, hi + 1):
        marks[d::d] = True
    return int(np.count_nonzero(marks))


def mult_table_size(n: int, *, force: bool = False) -> int:
    """``|{ab : 1 <= a, b <= n}|``, by marking products in segments of the range."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if n > MAX_TABLE_N and not force:
        raise BoundError(f"n={n} exceeds the guard {MAX_TABLE_N}")
    top = n * n
    total = 0
    for lo in range(1, top + 1, SEGMENT):
        hi = min(lo + SEGMENT, top + 1)
        marks = np.zeros(hi - lo, dtype=bool)
        for a in range(1, min(n, isqrt(hi - 1)) + 1):
            b_lo = max(a, -(-lo // a))
            b_hi = min(n, (hi - 1) // a)
            if b_lo <= b_hi:
                marks[a * b_lo - lo:a * b_hi - lo + 1:a] = True
        total += int(np.count_nonzero(marks))
    return total


def in_A(k: int) -> bool:
    """Whether ``k - 1 = ab`` for some ``ln k <= a <= b``."""
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    return bool(factorisations(k))


def factorisations(k: int) -> list[tuple[int, int]]:
    """All ``(a, b)`` with ``ab = k - 1`` and ``ln k <= a <= b``."""
    m = k - 1
    first = max(1, math.ceil(math.log(k)))
    return [(a, m // a) for a in range(first, isqrt(m) + 1) if m % a == 0]


def _largest_k(a: int) -> int:
    """Largest integer ``k`` with ``ln k <= a`` under the same float predicate as :func:`in_A`."""
    k = int(math.exp(a))
    while math.log(k + 1) <= a:
        k += 1
    while k > 1 and math.log(k) > a:
        k -= 1
    return k


def a_indicator(x: int, *, force: bool = False) -> np.ndarray:
    """Boolean array ``ind`` with ``ind[k]`` true iff ``k`` is in A, for ``k <= x``."""
    if x > MAX_DENSITY_X and not force:
        raise BoundError(f"x={x} exceeds the guard {MAX_DENSITY_X}")
    ind = np.zeros(x + 1, dtype=bool)
    a = 1
    while a * a + 1 <= x:
        cap = x if math.log(x) <= a else min(x, _largest_k(a))
        b_hi = (cap - 1) // a
        if b_hi >= a:
            ind[a * a + 1:a * b_hi + 2:a] = True
        a += 1
    return ind


def count_A(x: int, *, force: bool = False) -> int:
    if x < 2:
        return 0
    return int(np.count_nonzero(a_indicator(x, force=force)))


def density_A(x: int, *, force: bool = False) -> Fraction:
    """``|A ∩ [2, x]| / (x - 1)``."""
    if x < 2:
        raise InvalidArgumentError(f"x must be >= 2, got {x}")
    return Fraction(count_A(x, force=force), x - 1)


def bipartite_f_size(a: int, b: int, *, force: bool = False) -> int:
    """``|{a'b' + 1 : 0 <= a' <= a, 0 <= b' <= b}|``."""
    if a < 1 or b < 1:
        raise InvalidArgumentError(f"need a, b >= 1, got {a}, {b}")
    if a > b:
        a, b = b, a
    if a * b > MAX_BIPARTITE and not force:
        raise BoundError(f"ab={a * b} exceeds the guard {MAX_BIPARTITE}")
    marks = np.zeros(a * b + 1, dtype=bool)
    marks[0] = True
    for i in range(1, a + 1):
        marks[i:i * b + 1:i] = True
    return int(np.count_nonzero(marks))


def proof_sum_bound(a: int, b: int, *, force: bool = False) -> tuple[int, bool]:
    """Dyadic sum ``Σ_i H(ab/2^i, a/2^(i+1), a/2^i)`` and whether it bounds the product set.

    Terms run while ``a/2^i >= 1``; the product set is
    ``{a'b' : 1 <= a' <= a, 1 <= b' <= b}``.
    """
    if a > b:
        a, b = b, a
    if a < 1:
        raise InvalidArgumentError(f"need a, b >= 1, got {a}, {b}")
    if a * b > MAX_SUM_AB and not force:
        raise BoundError(f"ab={a * b} exceeds the guard {MAX_SUM_AB}")
    total = 0
    i = 0
    while Fraction(a, 2 ** i) >= 1:
        scale = 2 ** i
        total += H(Fraction(a * b, scale), Fraction(a, 2 * scale), Fraction(a, scale))
        i += 1
    products = bipartite_f_size(a, b) - 1
    return total, products <= total


def delta() -> float:
    """The exponent ``1 - (1 + ln ln 2) / ln 2``."""
    return 1 - (1 + math.log(math.log(2))) / math.log(2)


def upper_bound_fn(k: int) -> float:
    """``k / ((ln ln k)^δ (ln ln ln k)^{3/2})``, defined for ``k >= 16``."""
    if k < 16:
        raise DomainError(f"k={k} < 16: ln ln ln k is not positive")
    ll = math.log(math.log(k))
    return k / (ll ** delta() * math.log(ll) ** 1.5)


def best_split(k: int) -> tuple[int, int, int] | None:
    """Factorisation ``k - 1 = ab`` with ``a >= ln k`` minimising the bipartite F-size."""
    best = None
    for a, b in factorisations(k):
        size = bipartite_f_size(a, b)
        if best is None or size < best[2]:
            best = (a, b, size)
    return best


# evidence tables: finite-scale echoes of asymptotic statements, never asserted


def mult_table_rows(ns=(10, 100, 1000, 10 ** 4)) -> list[dict]:
    rows = []
    for n in ns:
        size = mult_table_size(n)
        rows.append({"n": n, "size": size, "ratio": size / (n * n)})
    return rows


def density_rows(xs=(10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)) -> list[dict]:
    rows = []
    top = max(xs)
    ind = a_indicator(top)
    cum = np.cumsum(ind)
    for x in xs:
        count = int(cum[x])
        rows.append({"x": x, "count": count, "density": count / (x - 1)})
    return rows


def evidence_sample(lo: int = 16, hi: int = 10 ** 6, points: int = 13) -> list[int]:
    """Geometrically spaced elements of A in ``[lo, hi]``: the least element above each grid point."""
    ind = a_indicator(hi)
    out = []
    for i in range(points):
        target = round(lo * (hi / lo) ** (i / (points - 1)))
        hits = np.flatnonzero(ind[target:]) + target
        if hits.size and hits[0] not in out:
            out.append(int(hits[0]))
    return out


def evidence_rows(ks) -> list[dict]:
    rows = []
    for k in ks:
        split = best_split(k)
        ub = upper_bound_fn(k)
        if split is None:
            rows.append({"k": k, "in_A": False, "a": "", "b": "", "F": "",
                         "upper_bound": ub, "ratio": ""})
            continue
        a, b, size = split
        rows.append({"k": k, "in_A": True, "a": a, "b": b, "F": size,
                     "upper_bound": ub, "ratio": size / ub})
    return rows
