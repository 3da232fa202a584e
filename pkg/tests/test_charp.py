import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcover.charp import (
    FpPolynomial,
    PrimeError,
    block_exponents,
    check_prime,
    choose_prime,
    coefficient_oracle,
    det_mod_p,
    divisibility_exponents,
    four_point_pairs,
    hasse_witt_block,
    is_prime,
    obstruction_check,
    ordinary_fraction,
    restricted_block,
    upsilon,
)
from abelcover.cover import CoverFamily
from abelcover.hodge import character, characters, eigenspace_dim

from .oracles import det_leibniz, elliptic_trace, ordinary_by_point_count

ELLIPTIC = CoverFamily.from_rows(2, [(1, 1, 1, 1)])


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("N,lower,s,p", [(4, 0, None, 5), (3, 0, None, 7), (6, 8, None, 13),
                                         (4, 0, 4, 13), (2, 0, None, 3)])
def test_choose_prime(N, lower, s, p):
    assert choose_prime(N, lower, s) == p


@pytest.mark.parametrize("N,p,msg", [(2, 4, "not prime"), (4, 7, "1 (mod N)")])
def test_check_prime_messages(N, p, msg):
    with pytest.raises(PrimeError, match=msg.replace("(", r"\(").replace(")", r"\)")):
        check_prime(N, p)


# -- polynomial arithmetic ------------------------------------------------

def polys(p=7, nvars=3):
    mono = st.tuples(*[st.integers(0, 3)] * nvars)
    return st.dictionaries(mono, st.integers(0, p - 1), max_size=6).map(
        lambda d: FpPolynomial(p, nvars, d))


@settings(max_examples=200, deadline=None)
@given(polys(), polys(), polys(), st.tuples(*[st.integers(0, 6)] * 3))
def test_polynomial_ring_laws(a, b, c, point):
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a) == FpPolynomial(7, 3)
    assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point) % 7
    assert (a + b).evaluate(point) == (a.evaluate(point) + b.evaluate(point)) % 7


def test_polynomial_text_and_helpers():
    p = FpPolynomial(5, 2, {(2, 1): 3, (0, 1): 1, (0, 0): 4})
    assert str(p) == "3*z1^2*z2 + z2 + 4"
    assert str(FpPolynomial(5, 2)) == "0"
    assert p.restrict(1, 0) == FpPolynomial.constant(5, 2, 4)
    assert p.restrict(0, 0) == FpPolynomial(5, 2, {(0, 1): 1, (0, 0): 4})
    assert FpPolynomial(5, 2, {(2, 1): 1, (1, 3): 1}).valuation(0) == 1
    with pytest.raises(ValueError):
        FpPolynomial(5, 2).valuation(0)
    assert p.permute((1, 0)) == FpPolynomial(5, 2, {(1, 2): 3, (1, 0): 1, (0, 0): 4})
    assert p.degrees() == {3, 1, 0}


# -- Hasse-Witt blocks ------------------------------------------------------

def test_elliptic_block_is_e2():
    c = character(ELLIPTIC, (1,))
    block = hasse_witt_block(ELLIPTIC, c, 3)
    assert block.size == 1
    e2 = FpPolynomial(3, 4, {tuple(int(k in pair) for k in range(4)): 1
                             for pair in itertools.combinations(range(4), 2)})
    assert block.entry(1, 1) == e2
    assert str(block.entry(1, 1)) == "z1*z2 + z1*z3 + z1*z4 + z2*z3 + z2*z4 + z3*z4"


def test_elliptic_block_at_5_matches_expansion():
    c = character(ELLIPTIC, (1,))
    entry = hasse_witt_block(ELLIPTIC, c, 5).entry(1, 1)
    assert entry == coefficient_oracle((2, 2, 2, 2), 4, 5)
    assert entry.degrees() == {4}


def test_obstruction_family_block_formula(obstruction_family):
    f = obstruction_family
    c = character(f, (1, 0))
    assert block_exponents(f, c, 7) == (4, 4, 2, 2)
    expected = {}
    for l in itertools.product(range(5), range(5), range(3), range(3)):
        if sum(l) == 6:
            expected[l] = (math.comb(4, l[0]) * math.comb(4, l[1])
                           * math.comb(2, l[2]) * math.comb(2, l[3]))
    assert hasse_witt_block(f, c, 7).entry(1, 1) == FpPolynomial(7, 4, expected)


def test_block_requires_nonempty_eigenspace(obstruction_family):
    f = obstruction_family
    zero = next(c for c in characters(f) if not c.is_trivial and eigenspace_dim(f, c) == 0)
    with pytest.raises(ValueError):
        hasse_witt_block(f, zero, 7)


def _random_case(rng):
    """A random (family, character, prime) with a nonempty eigenspace."""
    while True:
        p = rng.choice([3, 5, 7, 13])
        N = rng.choice([d for d in range(2, p) if (p - 1) % d == 0])
        m = rng.randint(1, 2)
        s = rng.randint(4, 5)
        cols = [[rng.randrange(N) for _ in range(m)] for _ in range(s - 1)]
        last = [(-sum(c[i] for c in cols)) % N for i in range(m)]
        cols.append(last)
        if not all(any(c) for c in cols):
            continue
        f = CoverFamily.from_rows(N, [[c[i] for c in cols] for i in range(m)])
        cands = [c for c in characters(f) if not c.is_trivial and eigenspace_dim(f, c) > 0]
        if cands:
            return f, rng.choice(cands), p


def test_closed_form_matches_oracle_sample():
    rng = random.Random(11)
    for _ in range(25):
        f, c, p = _random_case(rng)
        block = hasse_witt_block(f, c, p)
        exps = block_exponents(f, c, p)
        d = block.size
        for nu in range(1, d + 1):
            for iota in range(1, d + 1):
                assert block.entry(nu, iota) == coefficient_oracle(exps, iota * p - nu, p)
                ups = upsilon(d, p, nu, iota)
                assert block.entry(nu, iota).degrees() <= {ups}


def test_block_symmetric_under_relabelling(obstruction_family):
    f = obstruction_family
    perm = [2, 0, 3, 1]
    g = CoverFamily.from_rows(3, f.matrix.permute_columns(perm).rows)
    c = character(f, (1, 0))
    cg = character(g, (1, 0))
    assert hasse_witt_block(g, cg, 7).entry(1, 1) == hasse_witt_block(f, c, 7).entry(1, 1).permute(perm)


# -- four-point machinery ---------------------------------------------------

def test_divisibility_examples(obstruction_family):
    f = obstruction_family
    c = character(f, (1, 0))
    assert divisibility_exponents(f, c, 7, 4).r_a == 0
    assert divisibility_exponents(f, c, 7, 3).r_a == 0
    # read straight from the restricted expansion
    B = coefficient_oracle(block_exponents(f, c, 7), 6, 7).restrict(0, 0)
    assert divisibility_exponents(f, c, 7, 2).r_a == B.valuation(1) == 2
    e = character(ELLIPTIC, (1,))
    assert divisibility_exponents(ELLIPTIC, e, 3, 3).r_a == 0


def test_divisibility_rejects_bad_h(obstruction_family):
    c = character(obstruction_family, (1, 0))
    with pytest.raises(ValueError):
        divisibility_exponents(obstruction_family, c, 7, 1)


def test_obstruction_example_fails(obstruction_family):
    f = obstruction_family
    res = obstruction_check(f, character(f, (1, 0)), character(f, (0, 1)), 7)
    assert not res.holds and res.witness is not None
    assert restricted_block(f, character(f, (1, 0)), 7)


def test_obstruction_preconditions(obstruction_family):
    f = obstruction_family
    c = character(f, (1, 0))
    with pytest.raises(ValueError):
        obstruction_check(f, c, c.inverse(), 7)
    zero = next(x for x in characters(f) if not x.is_trivial and eigenspace_dim(f, x) == 0)
    with pytest.raises(ValueError):
        obstruction_check(f, c, zero, 7)


def test_obstruction_can_hold_for_a_symmetric_pair():
    f = CoverFamily.from_rows(4, [(0, 0, 1, 3), (1, 3, 0, 0)])
    pairs = four_point_pairs(f)
    held = []
    for c, c2 in itertools.combinations(pairs, 2):
        res = obstruction_check(f, c, c2, 13)
        if res.holds:
            held.append((c, c2, res.scalar))
    assert held
    c, c2, lam = held[0]
    lhs = hasse_witt_block(f, c, 13).entry(1, 1) * hasse_witt_block(f, c.inverse(), 13).entry(1, 1)
    rhs = hasse_witt_block(f, c2, 13).entry(1, 1) * hasse_witt_block(f, c2.inverse(), 13).entry(1, 1)
    assert lhs == rhs * lam and lam % 13


def test_four_point_pairs(obstruction_family, table1):
    assert [c.alpha for c in four_point_pairs(obstruction_family)] == [(1, 1, 2, 2), (1, 2, 1, 2)]
    assert four_point_pairs(table1[2]) == []


# -- ordinariness ---------------------------------------------------------------

def test_det_mod_p_against_leibniz():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 4)
        p = rng.choice([3, 5, 7, 13])
        mat = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        assert det_mod_p(mat, p) == det_leibniz(mat, p)


def test_ordinary_fraction_matches_point_count_at_5():
    good, total = ordinary_by_point_count(5)
    assert ordinary_fraction(ELLIPTIC, 5, trials=10_000, seed=0) == Fraction(good, total)


def test_hasse_invariant_is_trace_mod_p():
    c = character(ELLIPTIC, (1,))
    for p in (3, 5, 7):
        entry = hasse_witt_block(ELLIPTIC, c, p).entry(1, 1)
        for pt in itertools.product(range(p), repeat=4):
            if len(set(pt)) == 4 or p == 3:
                assert entry.evaluate(pt) == elliptic_trace(pt, p) % p


def test_ordinary_fraction_sampling_is_seeded():
    a = ordinary_fraction(ELLIPTIC, 13, trials=50, seed=7)
    b = ordinary_fraction(ELLIPTIC, 13, trials=50, seed=7)
    assert a == b and 0 <= a <= 1


@pytest.mark.parametrize("p,trials", [(5, 0), (3, 10)])
def test_ordinary_fraction_rejects(p, trials):
    with pytest.raises(ValueError):
        ordinary_fraction(ELLIPTIC, p, trials=trials, seed=0)


@pytest.mark.parametrize("N,rows,p", [
    (2, [(1, 1, 1, 1, 1, 1)], 3),
    (2, [(1, 1, 1, 1, 1, 1)], 7),
    (3, [(1, 1, 1, 1, 1, 1)], 7),
    (3, [(1, 2, 1, 2, 1, 2), (1, 1, 2, 2, 0, 0)], 7),
    (6, [(1, 5, 2, 4, 3, 3)], 7),
])
def test_six_point_blocks_match_oracle(N, rows, p):
    f = CoverFamily.from_rows(N, rows)
    for c in characters(f):
        if c.is_trivial or eigenspace_dim(f, c) == 0:
            continue
        block = hasse_witt_block(f, c, p)
        exps = block_exponents(f, c, p)
        for nu in range(1, block.size + 1):
            for iota in range(1, block.size + 1):
                assert block.entry(nu, iota) == coefficient_oracle(exps, iota * p - nu, p)
