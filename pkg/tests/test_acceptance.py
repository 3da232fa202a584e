"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (``pytest tests/test_acceptance.py -v``) or directly
(``python -m tests.test_acceptance``). Each criterion is a function returning
``(ok, detail)``; the pytest wrappers print the line and assert ``ok``.
"""

from __future__ import annotations

import itertools
import os
import random
import sys
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings

from abelcover import kernels
from abelcover.charp import (
    block_exponents,
    choose_prime,
    coefficient_oracle,
    divisibility_exponents,
    four_point_pairs,
    hasse_witt_block,
    obstruction_check,
    ordinary_fraction,
)
from abelcover.cover import CoverFamily, genus, ramification_order
from abelcover.hodge import character, characters, dim_SG, eigen_table, eigenspace_dim, eigenspace_type
from abelcover.monodromy import large_s_check, sf_lower_bound
from abelcover.scan import NOT_SHIMURA, ScanBounds, classify, scan

from .conftest import TABLE1_EXPECTED, load_family
from .oracles import elliptic_trace, ordinary_by_point_count
from .strategies import families

JOBS = max(1, min(8, os.cpu_count() or 1))
ELLIPTIC = CoverFamily.from_rows(2, [(1, 1, 1, 1)])


def table1():
    return {i: load_family(f"table1/row{i}.json") for i in range(1, 8)}


def report(n: int, ok: bool, detail: str) -> str:
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(line, flush=True)
    return line


# -- 1 ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    rows = table1()
    bad = []
    for i, f in rows.items():
        g, factors = TABLE1_EXPECTED[i]
        got = (genus(f), f.group.invariant_factors, dim_SG(f), f.s - 3)
        if got[:2] != (g, factors) or got[2] != got[3]:
            bad.append((i, got))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    return ok, f"7 rows checked in {elapsed:.3f}s; mismatches {bad or 'none'}"


# -- 2 ---------------------------------------------------------------------------

def criterion_2():
    t0 = time.perf_counter()
    rows = table1()
    keys = {i: f.key for i, f in rows.items()}
    got4 = {r.key: r for r in scan(ScanBounds((2, 3, 4, 6), 2, (4,)), jobs=JOBS)}
    want4 = {keys[i] for i in (1, 3, 4, 7)}
    got5 = {r.key for r in scan(ScanBounds((2,), 2, (5,)), jobs=JOBS)}
    elapsed = time.perf_counter() - t0
    extra = sorted(set(got4) - want4)
    missing = sorted(want4 - set(got4))
    extra_rows = [i for i, k in keys.items() if k in extra]
    ok = not extra and not missing and got5 == {keys[2]} and elapsed < 300
    detail = (f"s=4 box N in {{2,3,4,6}}: {len(got4)} classes, expected 4; "
              f"extra {extra} (table rows {extra_rows}), missing {missing}; "
              f"s=5 box N=2: {'row 2 only' if got5 == {keys[2]} else sorted(got5)}; "
              f"{elapsed:.1f}s")
    return ok, detail


# -- 3 ---------------------------------------------------------------------------

def criterion_3():
    t0 = time.perf_counter()
    rows = table1()
    records = list(scan(ScanBounds(tuple(range(2, 13)), 2, (4,)), jobs=JOBS))
    elapsed = time.perf_counter() - t0
    got = {r.key for r in records}
    want = {rows[i].key for i in (1, 3, 4, 6, 7)}
    ok = got == want and all(r.dim_SG == 1 for r in records) and elapsed < 1800
    return ok, (f"N=2..12, m=2, s=4: {len(got)} classes, equal to rows 1,3,4,6,7: {got == want}; "
                f"{elapsed:.1f}s with {JOBS} jobs on the {kernels.BACKEND} backend")


# -- 4 ---------------------------------------------------------------------------

def _check_invariants(f):
    N = f.N
    table = eigen_table(f)
    total = 0
    for e in table:
        c = e.character
        by_alpha = Fraction(-1) + sum(Fraction((-x) % N, N) for x in c.alpha)
        neg = [(-x) % N for x in c.representative]
        by_functional = Fraction(-1) + sum(
            Fraction(sum(a * r for a, r in zip(neg, col)) % N, N) for col in f.matrix.columns)
        assert by_alpha == by_functional == e.d_plus
        assert e.d_plus + e.d_minus == -2 + sum(1 for x in c.alpha if x)
        total += e.d_plus
    g = 1 + f.degree * (Fraction(f.s - 2, 2)
                        - sum(Fraction(1, 2 * ramification_order(f, j)) for j in range(1, f.s + 1)))
    assert g.denominator == 1 and g == genus(f) == total
    assert dim_SG(f) >= f.s - 3


def criterion_4():
    count = [0]

    @settings(max_examples=1000, deadline=None, database=None)
    @given(families(max_N=12, max_m=3, max_s=8))
    def run(f):
        count[0] += 1
        _check_invariants(f)

    try:
        run()
    except AssertionError as exc:
        return False, f"invariant broken after {count[0]} families: {exc!r}"
    return True, f"{count[0]} random valid families (N<=12, m<=3, s<=8): all invariants exact"


# -- 5 ---------------------------------------------------------------------------

def _random_triple(rng):
    while True:
        p = rng.choice([3, 5, 7, 13])
        N = rng.choice([d for d in range(2, p) if (p - 1) % d == 0])
        m = rng.randint(1, 2)
        s = rng.randint(4, 5)
        cols = [[rng.randrange(N) for _ in range(m)] for _ in range(s - 1)]
        cols.append([(-sum(c[i] for c in cols)) % N for i in range(m)])
        if not all(any(c) for c in cols):
            continue
        f = CoverFamily.from_rows(N, [[c[i] for c in cols] for i in range(m)])
        cands = [c for c in characters(f) if not c.is_trivial and eigenspace_dim(f, c) > 0]
        if cands:
            return f, rng.choice(cands), p


def criterion_5():
    rng = random.Random(20240601)
    mismatched = []
    entries = 0
    for _ in range(100):
        f, c, p = _random_triple(rng)
        block = hasse_witt_block(f, c, p)
        exps = block_exponents(f, c, p)
        for nu in range(1, block.size + 1):
            for iota in range(1, block.size + 1):
                entries += 1
                if block.entry(nu, iota) != coefficient_oracle(exps, iota * p - nu, p):
                    mismatched.append((f, c.alpha, p, nu, iota))
    e = character(ELLIPTIC, (1,))
    e2 = str(hasse_witt_block(ELLIPTIC, e, 3).entry(1, 1))
    e2_ok = e2 == "z1*z2 + z1*z3 + z1*z4 + z2*z3 + z2*z4 + z3*z4"

    # F_3 has only three points, so there is no tuple of four distinct branch
    # points; the Hasse invariant is still compared to the trace on all 81 tuples.
    entry3 = hasse_witt_block(ELLIPTIC, e, 3).entry(1, 1)
    distinct3 = sum(1 for pt in itertools.product(range(3), repeat=4) if len(set(pt)) == 4)
    trace3_ok = all(entry3.evaluate(pt) == elliptic_trace(pt, 3) % 3
                    for pt in itertools.product(range(3), repeat=4))
    good, total = ordinary_by_point_count(5)
    frac5 = ordinary_fraction(ELLIPTIC, 5, trials=10_000, seed=0)
    f5_ok = frac5 == Fraction(good, total)
    ok = not mismatched and e2_ok and trace3_ok and f5_ok
    return ok, (f"100 triples / {entries} entries, {len(mismatched)} mismatches; e2 string {e2_ok}; "
                f"F_3: {distinct3} distinct tuples (vacuous), Hasse = trace on 81 tuples {trace3_ok}; "
                f"F_5: ordinary fraction {frac5} vs point count {Fraction(good, total)}")


# -- 6 ---------------------------------------------------------------------------

def obstruction_families(count=20):
    """The named N=3 example followed by generated families, in a fixed order.

    Generated families: m = 2, s = 4, trivial presentation kernel, noncyclic
    group, dim S(G) >= 2 and at least two pairs {n, -n} with d_n = d_-n = 1.
    N = 7 is skipped since its smallest admissible prime (29) makes the
    polynomial products slow.
    """
    named = CoverFamily.from_rows(3, [(1, 1, 2, 2), (1, 2, 1, 2)])
    out = [named]
    seen = {named.key}
    for N in (3, 4, 5, 6, 8):
        for first in range(1, N * N):
            for codes in kernels.scan_shard(N, 2, 4, first, False):
                cols = [kernels.decode(c, N, 2) for c in codes]
                rows = [[col[i] for col in cols] for i in range(2)]
                if kernels.dim_sg_raw(N, rows) < 2:
                    continue
                f = CoverFamily.from_rows(N, rows)
                if not f.is_reduced or f.group.is_cyclic or f.key in seen:
                    continue
                seen.add(f.key)
                if len(four_point_pairs(f)) >= 2:
                    out.append(f)
                    if len(out) == count:
                        return out
    return out


def criterion_6():
    fams = obstruction_families()
    problems = []
    fails_total = pairs_total = 0
    named = fams[0]
    named_res = obstruction_check(named, character(named, (1, 0)), character(named, (0, 1)), 7)
    if named_res.holds:
        problems.append("named example at p=7 holds")
    for f in fams:
        p = 7 if f is named else choose_prime(f.N, s=4)
        pairs = four_point_pairs(f)
        results = [obstruction_check(f, c, c2, p).holds for c, c2 in itertools.combinations(pairs, 2)]
        fails_total += results.count(False)
        pairs_total += len(results)
        if all(results):
            problems.append(f"{f!r} at p={p}: identity holds for every pair")
        for c in pairs:
            for h in (2, 3, 4):
                try:
                    divisibility_exponents(f, c, p, h)
                except ArithmeticError as exc:
                    problems.append(f"{f!r} h={h}: {exc}")
    ok = len(fams) == 20 and not problems
    return ok, (f"{len(fams)} families; each has a pair with IdentityFails: {not problems}; "
                f"{fails_total}/{pairs_total} pairs fail; named example witness {named_res.witness}; "
                f"divisibility closed forms agree: {not problems}; issues {problems or 'none'}")


# -- 7 ---------------------------------------------------------------------------

def criterion_7():
    f = load_family("large_s20.json")
    v = classify(f)
    ev = large_s_check(f)
    bound = sf_lower_bound(f)
    ok = (v.kind == NOT_SHIMURA and ev is not None and bound >= 102 and bound > f.s - 3 == 17
          and ev["d_mixed_at_least_l_minus_2"])
    return ok, (f"verdict {v}; sf_lower_bound {bound} (>= 102 > 17); types {ev and ev['types']}; "
                f"d_(-1,1) >= l-2 with l={ev and ev['l']}: {ev and ev['d_mixed_at_least_l_minus_2']}")


# -- 8 ---------------------------------------------------------------------------

def criterion_8():
    f = load_family("counterexample_n4.json")
    types = [(c.representative, eigenspace_type(f, c).type_ordered)
             for c in characters(f) if not c.is_trivial]
    off = [(rep, t) for rep, t in types if sum(t) != f.s - 2]
    e10 = eigenspace_type(f, character(f, (1, 0))).type_ordered
    ok = bool(off) and sum(e10) == 2 and f.s - 2 == 3
    listing = ", ".join(f"{rep}:{t}" for rep, t in types)
    return ok, (f"characters with d+ + d- != s-2 = 3: {len(off)} (e.g. (1,0) sums to {sum(e10)}); "
                f"full type list {listing}")


# -- pytest wrappers -------------------------------------------------------------

CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, 9))
def test_acceptance(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print()
        report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        ok, detail = crit()
        report(i, ok, detail)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
