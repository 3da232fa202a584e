"""Characteristic-p tools: Hasse-Witt blocks of a family and tests built on them.

Block entries are polynomials in the branch points z_1..z_s over F_p. Entry
(nu, iota) of the block of a character c is the coefficient of
z^(iota*p - nu) in prod_j (z - z_j)^(q * [-alpha_j]), q = (p - 1) / N.
The closed form enumerates compositions of the total degree; the oracle
expands the product one linear factor at a time.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernels
from .cover import CoverFamily, InvariantError
from .hodge import Character, characters, eigenspace_dim

P_MAX = 2 ** 31 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def choose_prime(N: int, lower: int = 0, s: int | None = None) -> int:
    """Smallest prime p = 1 (mod N) with p >= max(lower, N + 1, s + 2).

    Passing ``s=None`` drops the s + 2 floor.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    floor = max(lower, N + 1, (s + 2) if s is not None else 0)
    p = floor + ((1 - floor) % N)
    while not is_prime(p):
        p += N
    return p


class PrimeError(ValueError):
    pass


def check_prime(N: int, p: int) -> None:
    if not is_prime(p):
        raise PrimeError(f"{p} is not prime")
    if p % N != 1:
        raise PrimeError(f"p must satisfy p = 1 (mod N); {p} = {p % N} (mod {N})")
    if p > P_MAX:
        raise PrimeError(f"p must be below 2^31, got {p}")


# --------------------------------------------------------------------------
# Sparse polynomials over F_p

Monomial = tuple[int, ...]


class FpPolynomial:
    """Sparse polynomial in z_1..z_nvars over F_p; zero coefficients are never stored."""

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p: int, nvars: int, terms: Mapping[Monomial, int] | Iterable = ()):
        self.p = p
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            if len(mono) != nvars or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent vector {mono}")
            acc[mono] = (acc.get(mono, 0) + c) % p
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def variable(cls, p: int, nvars: int, i: int) -> "FpPolynomial":
        mono = tuple(int(k == i) for k in range(nvars))
        return cls(p, nvars, {mono: 1})

    @classmethod
    def constant(cls, p: int, nvars: int, c: int) -> "FpPolynomial":
        return cls(p, nvars, {(0,) * nvars: c})

    def _same_ring(self, other):
        if (self.p, self.nvars) != (other.p, other.nvars):
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        self._same_ring(other)
        return FpPolynomial(self.p, self.nvars, itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self):
        return FpPolynomial(self.p, self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FpPolynomial(self.p, self.nvars, {k: v * other for k, v in self.terms.items()})
        self._same_ring(other)
        p = self.p
        acc: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                acc[mono] = (acc.get(mono, 0) + c1 * c2) % p
        return FpPolynomial(p, self.nvars, acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, FpPolynomial) and self.p == other.p
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.p, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def restrict(self, var: int, value: int = 0) -> "FpPolynomial":
        """Substitute z_var = value (var is 0-based)."""
        p = self.p
        out = []
        for mono, c in self.terms.items():
            e = mono[var]
            if e and value % p == 0:
                continue
            new = mono[:var] + (0,) + mono[var + 1:]
            out.append((new, c * pow(value, e, p)))
        return FpPolynomial(p, self.nvars, out)

    def valuation(self, var: int) -> int:
        """Largest r such that z_var^r divides the polynomial (0-based var)."""
        if not self.terms:
            raise ValueError("the zero polynomial is divisible by every power")
        return min(m[var] for m in self.terms)

    def permute(self, perm) -> "FpPolynomial":
        """Rename variables: new z_j is old z_{perm[j]}."""
        out = []
        for mono, c in self.terms.items():
            new = [0] * self.nvars
            for j, k in enumerate(perm):
                new[j] = mono[k]
            out.append((tuple(new), c))
        return FpPolynomial(self.p, self.nvars, out)

    def evaluate(self, point) -> int:
        p = self.p
        total = 0
        for mono, c in self.terms.items():
            v = c
            for x, e in zip(point, mono):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}" for i, e in enumerate(mono) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"FpPolynomial(p={self.p}, {self})"


# --------------------------------------------------------------------------
# Hasse-Witt blocks


def block_exponents(f: CoverFamily, c: Character, p: int) -> tuple[int, ...]:
    q = (p - 1) // f.N
    return tuple(q * ((-x) % f.N) for x in c.alpha)


def upsilon(d: int, p: int, nu: int, iota: int) -> int:
    """Total degree of block entry (nu, iota), indices starting at 1."""
    return (d + 1 - iota) * (p - 1) + (nu - iota)


def hasse_witt_entry(f: CoverFamily, c: Character, p: int, nu: int, iota: int) -> FpPolynomial:
    d = eigenspace_dim(f, c)
    ups = upsilon(d, p, nu, iota)
    exps = block_exponents(f, c, p)
    sign = -1 if ups % 2 else 1
    return FpPolynomial(p, f.s, kernels.hw_terms(list(exps), ups, p, sign))


def coefficient_oracle(exps, k: int, p: int) -> FpPolynomial:
    """Coefficient of z^k in prod_j (z - z_j)^exps[j], by repeated multiplication.

    Keeps the product as a list indexed by the power of z, each slot a
    polynomial in z_1..z_s; multiplying by (z - z_j) shifts and subtracts.
    Powers of z above k never feed back into lower ones, so they are dropped.
    """
    s = len(exps)
    zero = FpPolynomial(p, s)
    if k < 0 or k > sum(exps):
        return zero
    coeffs = [FpPolynomial.constant(p, s, 1)]
    for j, e in enumerate(exps):
        zj = FpPolynomial.variable(p, s, j)
        for _ in range(e):
            shifted = [zero] + coeffs
            for i, poly in enumerate(coeffs):
                shifted[i] = shifted[i] - zj * poly
            coeffs = shifted[:k + 1]
    return coeffs[k] if k < len(coeffs) else zero


@dataclass
class HasseWittBlock:
    family: CoverFamily
    character: Character
    p: int
    entries: list[list[FpPolynomial]]

    @property
    def q(self) -> int:
        return (self.p - 1) // self.family.N

    @property
    def size(self) -> int:
        return len(self.entries)

    def upsilon(self, nu: int, iota: int) -> int:
        return upsilon(self.size, self.p, nu, iota)

    def entry(self, nu: int, iota: int) -> FpPolynomial:
        return self.entries[nu - 1][iota - 1]

    def evaluate(self, point) -> list[list[int]]:
        return [[e.evaluate(point) for e in row] for row in self.entries]


def hasse_witt_block(f: CoverFamily, c: Character, p: int) -> HasseWittBlock:
    check_prime(f.N, p)
    d = eigenspace_dim(f, c)
    if d == 0:
        raise ValueError("character has an empty eigenspace; no Hasse-Witt block")
    entries = [[hasse_witt_entry(f, c, p, nu, iota) for iota in range(1, d + 1)]
               for nu in range(1, d + 1)]
    return HasseWittBlock(f, c, p, entries)


def det_mod_p(mat: list[list[int]], p: int) -> int:
    a = [[x % p for x in row] for row in mat]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], p - 2, p)
        for r in range(col + 1, n):
            if a[r][col]:
                fac = a[r][col] * inv % p
                a[r] = [(x - fac * y) % p for x, y in zip(a[r], a[col])]
    return det % p


# --------------------------------------------------------------------------
# Four-point machinery


def _require_four_point_pair(f: CoverFamily, c: Character) -> None:
    if f.s != 4:
        raise ValueError(f"needs s = 4, family has s = {f.s}")
    if c.is_trivial or eigenspace_dim(f, c) != 1 or eigenspace_dim(f, c.inverse()) != 1:
        raise ValueError("character must have d_n = d_-n = 1")


def restricted_block(f: CoverFamily, c: Character, p: int) -> FpPolynomial:
    """The 1x1 block of c with z_1 set to zero."""
    return hasse_witt_block(f, c, p).entry(1, 1).restrict(0, 0)


@dataclass(frozen=True)
class DivisibilityExponents:
    h: int
    r_a: int
    r_minus_a: int
    r_pm: int


def divisibility_exponents(f: CoverFamily, c: Character, p: int, h: int) -> DivisibilityExponents:
    """Powers of z_h dividing the restricted blocks of c and -c, and their product.

    Each value is read off the polynomials and checked against its closed
    form in the lifted alpha entries.
    """
    _require_four_point_pair(f, c)
    if h not in (2, 3, 4):
        raise ValueError("h must be one of 2, 3, 4")
    check_prime(f.N, p)
    B_a = restricted_block(f, c, p)
    B_ma = restricted_block(f, c.inverse(), p)
    r_a = B_a.valuation(h - 1)
    r_ma = B_ma.valuation(h - 1)
    r_pm = (B_a * B_ma).valuation(h - 1)

    q = (p - 1) // f.N
    k, t = [j for j in (2, 3, 4) if j != h]

    def closed(al):
        return max(0, q * (al[k - 1] + al[t - 1]) - (p - 1))

    al = c.alpha
    expected_pm = q * max(al[0] + al[h - 1], al[k - 1] + al[t - 1]) - (p - 1)
    expected = (closed(al), closed(c.inverse().alpha), expected_pm)
    if (r_a, r_ma, r_pm) != expected:
        raise InvariantError(
            f"divisibility exponents {(r_a, r_ma, r_pm)} differ from closed form {expected}"
        )
    return DivisibilityExponents(h, r_a, r_ma, r_pm)


@dataclass(frozen=True)
class ObstructionResult:
    holds: bool
    scalar: int | None = None
    witness: Monomial | None = None
    lhs_terms: int = 0
    rhs_terms: int = 0


def obstruction_check(f: CoverFamily, c: Character, c2: Character, p: int) -> ObstructionResult:
    """Test A_c * A_-c = lambda * A_c2 * A_-c2 for a nonzero scalar lambda."""
    _require_four_point_pair(f, c)
    _require_four_point_pair(f, c2)
    if c2.alpha in (c.alpha, c.inverse().alpha):
        raise ValueError("second character must differ from both c and -c")
    check_prime(f.N, p)

    def pair_product(x):
        return (hasse_witt_block(f, x, p).entry(1, 1)
                * hasse_witt_block(f, x.inverse(), p).entry(1, 1))

    lhs, rhs = pair_product(c), pair_product(c2)
    if not lhs or not rhs:
        # a zero product is proportional only to zero
        if not lhs and not rhs:
            return ObstructionResult(True, 1)
        witness = next(iter(sorted((lhs if lhs else rhs).terms)))
        return ObstructionResult(False, None, witness, len(lhs), len(rhs))
    only = sorted(set(lhs.terms) ^ set(rhs.terms))
    if only:
        return ObstructionResult(False, None, only[0], len(lhs), len(rhs))
    first = max(lhs.terms)
    lam = lhs.terms[first] * pow(rhs.terms[first], p - 2, p) % p
    for mono in sorted(lhs.terms, reverse=True):
        if lhs.terms[mono] != lam * rhs.terms[mono] % p:
            return ObstructionResult(False, None, mono, len(lhs), len(rhs))
    return ObstructionResult(True, lam, None, len(lhs), len(rhs))


def four_point_pairs(f: CoverFamily) -> list[Character]:
    """One representative per pair {n, -n} with d_n = d_-n = 1."""
    if f.s != 4:
        return []
    seen = set()
    out = []
    for c in characters(f):
        if c.is_trivial or c.alpha in seen:
            continue
        seen.update({c.alpha, c.inverse().alpha})
        if c.is_two_torsion:
            continue
        if eigenspace_dim(f, c) == 1 and eigenspace_dim(f, c.inverse()) == 1:
            out.append(c)
    return out


# --------------------------------------------------------------------------
# Ordinariness sampling


def ordinary_fraction(f: CoverFamily, p: int, trials: int, seed: int) -> Fraction:
    """Fraction of sampled distinct branch tuples in F_p where all blocks are invertible.

    Enumerates every ordered tuple of distinct points when there are no more
    than ``trials`` of them.
    """
    check_prime(f.N, p)
    if trials < 1:
        raise ValueError("trials must be positive")
    if p < f.s:
        raise ValueError(f"F_{p} has fewer than s = {f.s} distinct points")
    blocks = [hasse_witt_block(f, c, p) for c in characters(f)
              if not c.is_trivial and eigenspace_dim(f, c) > 0]
    total = math.perm(p, f.s)
    if total <= trials:
        points = itertools.permutations(range(p), f.s)
    else:
        rng = random.Random(seed)
        points = (tuple(rng.sample(range(p), f.s)) for _ in range(trials))
    good = n = 0
    for pt in points:
        n += 1
        if all(det_mod_p(b.evaluate(pt), p) for b in blocks):
            good += 1
    return Fraction(good, n)
