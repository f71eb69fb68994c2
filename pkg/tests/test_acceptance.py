"""Acceptance criteria, one check per criterion with its runtime limit.

Run under pytest (one PASS/FAIL line per criterion is written to the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from math import isqrt

import pytest

from spectra.colouring import INJECTIVE, bipartite_rainbow, embed_graph_rainbow, small_rainbow
from spectra.divisors import (
    H,
    delta,
    density_rows,
    evidence_rows,
    evidence_sample,
    in_A,
    mult_table_rows,
    mult_table_size,
    proof_sum_bound,
)
from spectra.homogeneity import build_homogeneous, canonical_check, is_homogeneous, level_spectra
from spectra.induced import graphs_up_to_iso, induced_size_set
from spectra.search import canonical_form, enumerate_templates, f_set, feasible, law_report, n_of_k, psi_bounded

RESULTS: dict[int, tuple[bool, str]] = {}


def _timed(limit: float, fn) -> tuple[bool, str]:
    start = time.perf_counter()
    ok, detail = fn()
    took = time.perf_counter() - start
    if took >= limit:
        return False, f"{detail}; took {took:.1f}s, limit {limit:.0f}s"
    return ok, f"{detail}; {took:.2f}s"


def check_rainbow_tightness():
    got = []
    for k, t_max, n in ((2, 2, 2), (4, 3, 3), (7, 4, 4)):
        value, witness = psi_bounded(k, t_max)
        got.append((k, value))
        if value != n or witness != canonical_form(small_rainbow(n)):
            return False, f"psi({k}) via t<={t_max} gave {value}, witness {witness.to_json()}"
    return True, "psi " + ", ".join(f"k={k}: {v}" for k, v in got)


def check_bipartite_remark():
    value, witness = psi_bounded(5, 4)
    ok = value == 4 and witness == canonical_form(bipartite_rainbow(2, 2))
    return ok, f"psi(5) via t<=4 = {value}, witness {witness.to_json()}"


def check_law_report():
    rep = law_report(4, 7)
    return rep.passed, f"{rep.classes} classes, {rep.raw} raw colourings, {len(rep.violations)} violations"


def check_structural_builder():
    count = 0
    for t in range(0, 5):
        for k in range(1, 8):
            if not feasible(t, k):
                continue
            for d in enumerate_templates(t, k):
                n = n_of_k(k)
                T = build_homogeneous(d, n)
                values = [len(s) for s in level_spectra(d, T)]
                F = f_set(d)
                if not is_homogeneous(d, T) or len(set(values)) != n or not set(values) <= F.values:
                    return False, f"template {d.to_json()} gave {T} with sizes {values}, F = {F.sorted()}"
                count += 1
    return True, f"{count} templates"


def check_weak_structural():
    for n in range(2, 6):
        res = canonical_check(INJECTIVE, n, 12)
        want = {math.comb(s, 2) for s in range(2, n + 1)}
        if not res.passed or set(res.sizes) != want:
            return False, f"n={n}: {res.status} sizes {res.sizes}"
    return True, "n=2..5 certified with triangular sizes"


def check_divisors():
    rnd = random.Random(1)
    divs = [[]] + [[d for d in range(1, n + 1) if n % d == 0] for n in range(1, 2001)]
    for _ in range(200):
        x = rnd.randint(1, 2000)
        y = Fraction(rnd.randint(0, 300), rnd.randint(1, 3))
        z = y + Fraction(rnd.randint(1, 600), rnd.randint(1, 3))
        want = sum(1 for n in range(1, x + 1) if any(y < d <= z for d in divs[n]))
        if H(x, y, z) != want:
            return False, f"H({x}, {y}, {z})"
    seen: set = set()
    for n in range(1, 301):
        seen |= {a * n for a in range(1, n + 1)}
        if mult_table_size(n) != len(seen):
            return False, f"mult_table_size({n})"
    for k in range(2, 10 ** 4 + 1):
        m = k - 1
        want = any(m % a == 0 and math.log(k) <= a for a in range(1, isqrt(m) + 1))
        if in_A(k) != want:
            return False, f"in_A({k})"
    for a in range(1, 65):
        for b in range(a, 4096 // a + 1):
            if not proof_sum_bound(a, b)[1]:
                return False, f"proof_sum_bound({a}, {b})"
    d = delta()
    return abs(d - 0.086) <= 0.001, f"delta = {d:.7f}"


def check_rainbow_embedding():
    count = 0
    for n in range(1, 6):
        for G in graphs_up_to_iso(n):
            if G.m == 0:
                continue
            if set(f_set(embed_graph_rainbow(G)).values) != {s + 1 for s in induced_size_set(G)}:
                return False, f"graph {G.to_dict()}"
            count += 1
    return True, f"{count} graphs with edges on <= 5 vertices"


MULT_TABLE = {10: 42, 100: 2906, 1000: 248083, 10 ** 4: 22504348}
DENSITY = {10 ** 2: 48, 10 ** 3: 570, 10 ** 4: 6386, 10 ** 5: 69232, 10 ** 6: 733025}
EVIDENCE_F = {16: 12, 41: 25, 101: 43, 253: 114, 637: 315, 1594: 671, 4000: 1566, 10041: 4196,
              25198: 8852, 63246: 22902, 158740: 71747, 398425: 137662, 1000000: 248508}


def check_evidence_tables():
    mt = {r["n"]: r["size"] for r in mult_table_rows()}
    dens = {r["x"]: r["count"] for r in density_rows()}
    ev = {r["k"]: r["F"] for r in evidence_rows(evidence_sample())}
    for k, F in ev.items():
        row = evidence_rows([k])[0]
        a, b = row["a"], row["b"]
        if a * b != k - 1 or len({x * y for x in range(a + 1) for y in range(b + 1)}) != F:
            return False, f"evidence row for k={k}"
    ok = mt == MULT_TABLE and dens == DENSITY and ev == EVIDENCE_F
    ratios = ", ".join(f"{n}: {s / n ** 2:.4f}" for n, s in mt.items())
    return ok, f"table ratios {ratios}; density at 1e6 {dens[10 ** 6] / (10 ** 6 - 1):.4f}"


CRITERIA = [
    (1, "lower bound tight at rainbow thresholds", 10, check_rainbow_tightness),
    (2, "psi(5) = 4 with a bipartite witness", 60, check_bipartite_remark),
    (3, "law report t<=4, k<=7", 600, check_law_report),
    (4, "strong builder on every t<=4, k<=7 template", 600, check_structural_builder),
    (5, "weak builder on the injective colouring", 5, check_weak_structural),
    (6, "divisor machinery against naive oracles", 120, check_divisors),
    (7, "rainbow embedding matches induced sizes", 120, check_rainbow_embedding),
    (8, "regression-locked evidence tables", 600, check_evidence_tables),
]


def _line(num: int, name: str) -> str:
    ok, detail = RESULTS[num]
    return f"{'PASS' if ok else 'FAIL'} criterion {num} ({name}): {detail}"


@pytest.mark.parametrize("num,name,limit,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, limit, fn):
    RESULTS[num] = _timed(limit, fn)
    print(_line(num, name))
    assert RESULTS[num][0], RESULTS[num][1]


def summary_lines() -> list[str]:
    return [_line(num, name) for num, name, _, _ in CRITERIA if num in RESULTS]


if __name__ == "__main__":
    for num, name, limit, fn in CRITERIA:
        RESULTS[num] = _timed(limit, fn)
        print(_line(num, name), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
