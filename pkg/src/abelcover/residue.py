"""Exact linear algebra over the residue ring Z/N.

Everything here works on small dense matrices with plain Python integers.
Groups are described by generators inside (Z/N)^n; their structure is read
off an integer Smith form, their elements by breadth-first closure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Vector = tuple[int, ...]


def lift(r: int, N: int) -> int:
    """Return the representative of ``r mod N`` in ``[0, N)``."""
    if N < 2:
        raise ValueError(f"modulus must be >= 2, got {N}")
    return r % N


@dataclass(frozen=True)
class ZModMatrix:
    """An m x s matrix of residues mod N, stored reduced into [0, N)."""

    modulus: int
    entries: tuple[Vector, ...]
    _columns: tuple[Vector, ...] = field(default=(), repr=False, compare=False)

    def __init__(self, modulus: int, rows: Iterable[Iterable[int]]):
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        grid = tuple(tuple(int(x) % modulus for x in row) for row in rows)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(row) != len(grid[0]) for row in grid):
            raise ValueError("ragged matrix: rows have different lengths")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "_columns", tuple(zip(*grid)))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def s(self) -> int:
        return len(self.entries[0])

    @property
    def rows(self) -> tuple[Vector, ...]:
        return self.entries

    def column(self, j: int) -> Vector:
        return self._columns[j]

    @property
    def columns(self) -> tuple[Vector, ...]:
        return self._columns

    def permute_columns(self, perm: Sequence[int]) -> "ZModMatrix":
        """New matrix whose column j is old column ``perm[j]``."""
        return ZModMatrix(self.modulus, [[row[k] for k in perm] for row in self.entries])

    def apply(self, functional: Sequence[int]) -> Vector:
        """The row vector ``a . M`` reduced mod N."""
        N = self.modulus
        return tuple(
            sum(a * row[j] for a, row in zip(functional, self.entries)) % N
            for j in range(self.s)
        )

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


# --------------------------------------------------------------------------
# Smith form over Z


def smith_form(mat: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Integer Smith form of ``mat``.

    Returns ``(diag, U)`` with ``U`` unimodular (k x k, k = number of rows)
    such that ``U @ mat @ V`` is diagonal with nonzero entries ``diag``
    forming a divisor chain, for some unimodular ``V``. Only ``U`` is
    tracked since callers need the left action.
    """
    A = [list(map(int, row)) for row in mat]
    k = len(A)
    n = len(A[0]) if k else 0
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    diag: list[int] = []

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, c):
        if c:
            for row in A:
                row[dst] += c * row[src]

    for t in range(min(k, n)):
        nz = [(abs(A[i][j]), i, j) for i in range(t, k) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, k):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, k) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, pi, pj = min(cand)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(
                (i for i in range(t + 1, k) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
    return diag, U


def _factors_from_diag(diag: Sequence[int], N: int) -> tuple[int, ...]:
    orders = [N // math.gcd(N, d) for d in diag]
    return tuple(sorted(o for o in orders if o > 1))


# --------------------------------------------------------------------------
# Subgroups of (Z/N)^n


def closure(generators: Sequence[Vector], N: int, dim: int) -> set[Vector]:
    """All Z/N-combinations of ``generators`` inside (Z/N)^dim."""
    zero = (0,) * dim
    seen = {zero}
    frontier = [zero]
    gens = [g for g in generators if any(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % N for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class SpanGroup:
    """Subgroup of (Z/N)^dim generated by ``generators``."""

    modulus: int
    dim: int
    generators: tuple[Vector, ...]
    order: int
    invariant_factors: tuple[int, ...]
    _elements: frozenset = field(default=None, repr=False, compare=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], N: int, dim: int) -> "SpanGroup":
        gens = tuple(tuple(x % N for x in g) for g in gens)
        if gens:
            diag, _ = smith_form(gens)
            factors = _factors_from_diag(diag, N)
        else:
            factors = ()
        return cls(N, dim, gens, math.prod(factors), factors)

    def elements(self) -> frozenset:
        if self._elements is None:
            object.__setattr__(
                self, "_elements", frozenset(closure(self.generators, self.modulus, self.dim))
            )
        return self._elements

    def __contains__(self, v) -> bool:
        return tuple(x % self.modulus for x in v) in self.elements()

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1


def row_span(M: ZModMatrix) -> SpanGroup:
    """Subgroup of (Z/N)^s generated by the rows; order counted by enumeration."""
    group = SpanGroup.from_generators(M.rows, M.modulus, M.s)
    elements = group.elements()
    # Structure comes from the Smith form, the order from actual enumeration.
    return SpanGroup(M.modulus, M.s, group.generators, len(elements),
                     group.invariant_factors, frozenset(elements))


def column_span(M: ZModMatrix) -> SpanGroup:
    """Subgroup of (Z/N)^m generated by the columns: the Galois group."""
    return SpanGroup.from_generators(M.columns, M.modulus, M.m)


def presentation_kernel(M: ZModMatrix) -> SpanGroup:
    """Functionals ``a`` in (Z/N)^m with ``a . M == 0``."""
    N, m = M.modulus, M.m
    diag, U = smith_form(M.rows)
    gens = []
    for i in range(m):
        step = N // math.gcd(N, diag[i]) if i < len(diag) else 1
        gens.append(tuple((step * u) % N for u in U[i]))
    return SpanGroup.from_generators([g for g in gens if any(g)], N, m)


# --------------------------------------------------------------------------
# Canonical keys


def _unit_normalizer(a: int, N: int) -> int:
    """A unit u with u * a = gcd(a, N) (mod N)."""
    g = math.gcd(a, N)
    for u in range(1, N):
        if math.gcd(u, N) == 1 and (u * a) % N == g:
            return u
    raise ArithmeticError(f"no unit normalizes {a} mod {N}")


def howell_form(rows: Sequence[Sequence[int]], N: int) -> tuple[Vector, ...]:
    """Howell normal form of the Z/N-span of ``rows``.

    Two row sets span the same submodule of (Z/N)^s exactly when their
    Howell forms coincide. Each pivot divides N with the entries above it
    reduced. Annihilator multiples of every row are pushed down, so the
    echelon rows generate every element with a given leading column.
    """
    s = len(rows[0]) if rows else 0
    A = [[x % N for x in r] for r in rows] + [[0] * s for _ in range(s)]
    n = len(A)
    r = 0
    for j in range(s):
        for i in range(r + 1, n):
            b = A[i][j]
            if not b:
                continue
            a = A[r][j]
            if not a:
                A[r], A[i] = A[i], A[r]
                continue
            g, x, y = _xgcd(a, b)
            ra, ri = A[r], A[i]
            A[r] = [(x * u + y * v) % N for u, v in zip(ra, ri)]
            A[i] = [((-b // g) * u + (a // g) * v) % N for u, v in zip(ra, ri)]
        a = A[r][j] if r < n else 0
        if not a:
            continue
        u = _unit_normalizer(a, N)
        A[r] = [(u * v) % N for v in A[r]]
        piv = A[r][j]
        for k in range(r):
            c = A[k][j] // piv
            if c:
                A[k] = [(v - c * w) % N for v, w in zip(A[k], A[r])]
        extra = [((N // piv) * v) % N for v in A[r]]
        if any(extra):
            slot = next(i for i in range(r + 1, n) if not any(A[i]))
            A[slot] = extra
        r += 1
    return tuple(tuple(row) for row in A if any(row))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _column_invariants(rows: Sequence[Vector], N: int, s: int) -> list[tuple]:
    """Per-column data unchanged by row operations: orders of 1- and 2-column projections."""
    def proj_order(*js):
        gens = [tuple(r[j] for j in js) for r in rows]
        return SpanGroup.from_generators(gens, N, len(js)).order

    single = [proj_order(j) for j in range(s)]
    out = []
    for j in range(s):
        pairs = sorted((single[k], proj_order(j, k)) for k in range(s) if k != j)
        out.append((single[j], tuple(pairs)))
    return out


def _canonical_perms(rows: Sequence[Vector], N: int, s: int):
    invs = _column_invariants(rows, N, s)
    order = sorted(range(s), key=lambda j: invs[j])
    blocks = [list(g) for _, g in itertools.groupby(order, key=lambda j: invs[j])]
    cols = [tuple(r[j] for r in rows) for j in range(s)]
    seen = set()
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        perm = [j for block in choice for j in block]
        # permuting identical columns changes nothing
        shape = tuple(cols[j] for j in perm)
        if shape in seen:
            continue
        seen.add(shape)
        yield perm


def canonical_form(M: ZModMatrix) -> tuple[int, int, tuple[Vector, ...]]:
    """``(N', s, Howell form)`` minimized over column permutations.

    The modulus is first reduced to ``N / gcd(N, entries)`` so that the same
    cover written over a multiple modulus gets the same form.
    """
    g = math.gcd(M.modulus, *(x for row in M.rows for x in row))
    N = M.modulus // g
    s = M.s
    rows = [tuple(x // g for x in row) for row in M.rows]
    if N == 1:
        return 1, s, ()
    best = None
    for perm in _canonical_perms(rows, N, s):
        cand = howell_form([[row[k] for k in perm] for row in rows], N)
        if best is None or cand < best:
            best = cand
    return N, s, best


def canonical_key(M: ZModMatrix) -> str:
    """Deterministic string equal for matrices with the same row span up to column permutation."""
    N, s, form = canonical_form(M)
    body = ";".join(",".join(map(str, g)) for g in form) or "0"
    return f"{N}|{s}|{body}"
