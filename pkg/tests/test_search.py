import random
from itertools import combinations, permutations, product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra.colouring import (
    CONSTANT,
    INJECTIVE,
    MINIMUM,
    SUM,
    TemplateColouring,
    bipartite_rainbow,
    embed_graph_rainbow,
    small_rainbow,
    template_pairs,
)
from spectra.divisors import bipartite_f_size
from spectra.errors import BoundError, ValidationError
from spectra.induced import graphs_up_to_iso, induced_size_set
from spectra.search import (
    canonical_form,
    check_laws,
    enumerate_templates,
    f_set,
    g_set_prefix,
    law_report,
    n_of_k,
    psi_bounded,
    scan_classes,
)


def naive_fset(d: TemplateColouring) -> set:
    out = set()
    for r in range(d.t + 1):
        for S in combinations(range(1, d.t + 1), r):
            cols = {d.pair_colour(i, j) for i, j in combinations(S, 2)}
            out.add(len(cols | {d.background}))
    return out


def naive_classes(t: int, k: int) -> tuple[int, int]:
    """(classes, raw) by orbit marking over all surjective assignments."""
    pairs = template_pairs(t)
    raw = [c for c in product(range(1, k + 1), repeat=len(pairs))
           if set(range(1, k)) <= set(c)]
    index = {p: n for n, p in enumerate(pairs)}
    seen = set()
    classes = 0
    for c in raw:
        if c in seen:
            continue
        classes += 1
        for perm in permutations(range(1, t + 1)):
            moved = [0] * len(pairs)
            for (i, j), col in zip(pairs, c):
                a, b = sorted((perm[i - 1], perm[j - 1]))
                moved[index[(a, b)]] = col
            for cperm in permutations(range(1, k)):
                seen.add(tuple(cperm[x - 1] if x < k else k for x in moved))
    return classes, len(raw)


def test_fset_examples():
    assert f_set(small_rainbow(3)).sorted() == [1, 2, 4]
    assert len(f_set(small_rainbow(3))) == 3
    assert f_set(TemplateColouring.monochromatic()).sorted() == [1]
    assert f_set(bipartite_rainbow(2, 2)).sorted() == [1, 2, 3, 5]


def test_fset_rejects_invalid():
    with pytest.raises(ValidationError):
        f_set(TemplateColouring(3, 5, 5, (1, 2, 3)))


@pytest.mark.parametrize("n", range(2, 9))
def test_small_rainbow_fset(n):
    F = f_set(small_rainbow(n))
    assert F.sorted() == [comb(s, 2) + 1 for s in range(n + 1) if s != 1]
    assert len(F) == n


def test_bipartite_fset_formula():
    for a in range(1, 7):
        for b in range(1, 7):
            want = {x * y + 1 for x in range(a + 1) for y in range(b + 1)}
            F = f_set(bipartite_rainbow(a, b))
            assert set(F.values) == want, (a, b)
            assert len(F) == bipartite_f_size(a, b)


def test_fset_matches_naive_on_all_small_classes():
    for t in range(0, 5):
        for k in range(1, 8):
            for d in enumerate_templates(t, k):
                assert set(f_set(d).values) == naive_fset(d)


def test_rainbow_embedding_law():
    for n in range(2, 6):
        for G in graphs_up_to_iso(n):
            if G.m == 0:
                continue
            F = f_set(embed_graph_rainbow(G))
            assert set(F.values) == {s + 1 for s in induced_size_set(G)}


def test_enumerate_examples():
    only = list(enumerate_templates(2, 2))
    assert only == [TemplateColouring(2, 2, 2, (1,))]
    K4 = list(enumerate_templates(4, 7))
    assert len(K4) == 1 and K4[0] == canonical_form(small_rainbow(4))
    assert list(enumerate_templates(3, 5)) == []


@pytest.mark.parametrize("t,k", [(3, 3), (3, 4), (4, 2), (4, 3), (4, 4), (4, 5)])
def test_enumerate_matches_orbit_oracle(t, k):
    classes, raw = naive_classes(t, k)
    reps = list(enumerate_templates(t, k))
    assert len(reps) == classes
    assert len(set(reps)) == classes
    assert len(scan_classes(t, k)) == classes
    assert len(list(enumerate_templates(t, k, up_to_symmetry=False))) == raw
    assert all(d.background == k for d in reps)


def test_raw_counts_from_orbits():
    for r in law_report(4, 5).rows:
        if r["t"] >= 2:
            assert r["raw"] == naive_classes(r["t"], r["k"])[1], r


def test_enumerate_guards():
    with pytest.raises(BoundError):
        list(enumerate_templates(7, 3))


def test_psi_examples():
    assert psi_bounded(2, 2)[0] == 2
    value, witness = psi_bounded(4, 3)
    assert value == 3 and witness == canonical_form(small_rainbow(3))
    value, witness = psi_bounded(5, 4)
    assert value == 4 and witness == canonical_form(bipartite_rainbow(2, 2))
    with pytest.raises(BoundError):
        psi_bounded(5, 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_psi_at_rainbow_thresholds(n):
    value, witness = psi_bounded(comb(n, 2) + 1, n)
    assert value == n
    assert witness == canonical_form(small_rainbow(n))


def test_law_report_examples():
    rep = law_report(3, 4)
    assert rep.passed and rep.violations == []
    tiny = law_report(2, 2)
    assert tiny.passed
    # t=0 and t=1 carry only the monochromatic class at k=1, t=2 adds one at k=2
    assert sum(r["classes"] for r in tiny.rows if r["k"] == 2) == 1
    mid = law_report(4, 5)
    assert mid.passed
    for r in mid.rows:
        if r["t"] >= 3 and r["k"] >= 2:
            assert r["classes"] == naive_classes(r["t"], r["k"])[0]


def test_check_laws_catches_bad_sets():
    from spectra.search import FSet

    problems = {law for law, _ in check_laws(FSet(frozenset({1, 2, 5}), 5))}
    assert "doubling" in problems
    assert "membership" in {law for law, _ in check_laws(FSet(frozenset({1, 4}), 4))}


def test_n_of_k():
    assert [n_of_k(k) for k in (1, 2, 3, 4, 7, 8, 11)] == [1, 2, 2, 3, 4, 4, 5]


def test_gset_examples():
    assert g_set_prefix(INJECTIVE, 4).sorted() == [1, 3, 6]
    assert g_set_prefix(INJECTIVE, 2).sorted() == [1]
    assert g_set_prefix(CONSTANT, 5).sorted() == [1]
    with pytest.raises(BoundError):
        g_set_prefix(INJECTIVE, 1)
    with pytest.raises(BoundError):
        g_set_prefix(INJECTIVE, 25)


def test_gset_injective_hits_only_triangular():
    G = g_set_prefix(INJECTIVE, 9)
    assert G.sorted() == [comb(s, 2) for s in range(2, 10)]


@pytest.mark.parametrize("colouring", [INJECTIVE, MINIMUM, SUM, CONSTANT])
def test_gset_monotone(colouring):
    prev = set()
    for N in range(2, 12):
        cur = set(g_set_prefix(colouring, N).values)
        assert prev <= cur
        prev = cur


def test_three_in_gset_for_builtins():
    # evidence only: the claim is not proven for arbitrary colourings
    for colouring in (INJECTIVE, MINIMUM, SUM):
        assert 3 in g_set_prefix(colouring, 8)


CLASSES = [d for t in range(2, 6) for k in range(2, 8) for d in enumerate_templates(t, k)]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CLASSES), st.randoms(use_true_random=False))
def test_fset_symmetry_invariant(d, rnd):
    F = f_set(d)
    for _ in range(100):
        perm = list(range(1, d.t + 1))
        rnd.shuffle(perm)
        cols = [c for c in range(1, d.k + 1) if c != d.background]
        shuffled = cols[:]
        rnd.shuffle(shuffled)
        image = d.relabel(tuple(perm), dict(zip(cols, shuffled)))
        assert f_set(image) == F
        assert canonical_form(image) == canonical_form(d)


def test_workers_do_not_change_results():
    one = law_report(4, 6, workers=1).to_dict()
    two = law_report(4, 6, workers=2).to_dict()
    assert one == two
    assert psi_bounded(6, 4, workers=2) == psi_bounded(6, 4, workers=1)


def test_random_templates_satisfy_laws():
    rnd = random.Random(7)
    for _ in range(300):
        t = rnd.randint(2, 7)
        L = comb(t, 2)
        k = rnd.randint(2, min(L + 1, 12))
        # force every non-background colour onto some pair
        cols = list(range(1, k)) + [rnd.randint(1, k) for _ in range(L - (k - 1))]
        rnd.shuffle(cols)
        d = TemplateColouring(t, k, k, tuple(cols))
        assert check_laws(f_set(d)) == []
