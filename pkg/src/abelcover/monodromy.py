"""Lower bounds on the smallest Shimura subvariety containing a family.

Each eigenspace of type (a, b) with ab != 0 contributes a simple factor of
the connected monodromy group; factors of distinct unordered types are
non-isomorphic, so their symmetric-space dimensions add up to a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cover import CoverFamily, InvariantError
from .hodge import Character, character, dim_SG, eigenspace_type, eigen_table

SPECIAL_UNITARY = "SpecialUnitary"
SYMPLECTIC = "SymplecticImage"
COMPACT = "Compact"


@dataclass(frozen=True)
class FactorDescriptor:
    kind: str
    a: int
    b: int
    source_character: Character = field(compare=False)

    @property
    def type_unordered(self) -> tuple[int, int]:
        return tuple(sorted((self.a, self.b)))

    @property
    def delta(self) -> int:
        if self.kind == COMPACT:
            return 0
        if self.kind == SYMPLECTIC:
            n = self.a
            return n * (n + 1) // 2
        return self.a * self.b

    @property
    def key(self) -> tuple:
        # Sp_2 and SU(1,1) are the same real group
        if self.kind == SYMPLECTIC and self.a == 1:
            return (SPECIAL_UNITARY, (1, 1))
        return (self.kind, self.type_unordered)

    def __str__(self):
        if self.kind == SYMPLECTIC:
            return f"Sp({self.a})"
        if self.kind == COMPACT:
            return f"Compact({self.a},{self.b})"
        return f"SU({self.a},{self.b})"


def mon0_classify(f: CoverFamily, c: Character) -> FactorDescriptor:
    e = eigenspace_type(f, c)
    a, b = e.type_ordered
    if a * b == 0:
        return FactorDescriptor(COMPACT, a, b, c)
    if f.group.order % 2 == 0 and c.order == 2:
        # only a surjection onto Sp_2n is known here; delta is credited as for Sp_2n
        if a != b:
            raise InvariantError(f"order-2 character with unequal type {(a, b)}")
        return FactorDescriptor(SYMPLECTIC, a, b, c)
    return FactorDescriptor(SPECIAL_UNITARY, a, b, c)


def distinct_factors(f: CoverFamily) -> list[FactorDescriptor]:
    """One descriptor per (kind, unordered type), first in character order."""
    seen = {}
    for e in eigen_table(f):
        d = mon0_classify(f, e.character)
        seen.setdefault(d.key, d)
    return list(seen.values())


def sf_lower_bound(f: CoverFamily) -> int:
    return sum(d.delta for d in distinct_factors(f))


def monodromy_exclude(f: CoverFamily) -> bool:
    return sf_lower_bound(f) > f.s - 3


def row_reduction_rule(f: CoverFamily) -> dict | None:
    """Exclusion evidence from a row without zeros whose cyclic family is not Shimura.

    A cyclic family is Shimura exactly when its dim S(G) equals s - 3.
    """
    if f.m < 2:
        return None
    for i, row in enumerate(f.matrix.rows, start=1):
        if all(row):
            cyclic = CoverFamily.from_rows(f.N, [row])
            dim = dim_SG(cyclic)
            if dim != f.s - 3:
                return {"rule": "RowReduction", "row": i, "cyclic_dim_SG": dim, "s_minus_3": f.s - 3}
    return None


def block_pattern(f: CoverFamily) -> tuple[int, int, list[int]] | None:
    """Match two rows as [a | a b | b] blocks up to column order.

    Returns ``(l, r, perm)``: columns perm[:l] carry only row 1, perm[l:r]
    both rows, perm[r:] only row 2. None unless both rows vanish somewhere.
    """
    if f.m != 2:
        return None
    r1, r2 = f.matrix.rows
    only1 = [j for j in range(f.s) if r1[j] and not r2[j]]
    both = [j for j in range(f.s) if r1[j] and r2[j]]
    only2 = [j for j in range(f.s) if r2[j] and not r1[j]]
    if not only1 or not only2:
        return None
    l = len(only1)
    return l, l + len(both), only1 + both + only2


def large_s_check(f: CoverFamily) -> dict | None:
    """Exclusion for two-row block families with many branch points.

    Applies to block-pattern families with s > 19 whose rows, and their
    negatives, have lifted entry sums above 2N. The returned evidence carries
    the four eigenspace types used and the verified bound.
    """
    match = block_pattern(f)
    if match is None or f.s <= 19:
        return None
    l, r, _ = match
    N = f.N
    sums = {}
    for name, row in zip("ab", f.matrix.rows):
        sums[name] = sum(x for x in row if x)
        sums["-" + name] = sum((-x) % N for x in row if x)
    if not all(v > 2 * N for v in sums.values()):
        return None
    types = {}
    for func in ((1, 0), (0, 1), (-1, 1), (1, -1)):
        e = eigenspace_type(f, character(f, func))
        types[func] = e.type_ordered
    d_mixed = types[(-1, 1)][0]
    bound = sf_lower_bound(f)
    if bound <= f.s - 3:
        return None
    return {
        "rule": "LargeS",
        "l": l,
        "r": r,
        "types": {f"{a},{b}": list(t) for (a, b), t in types.items()},
        "sf_lower_bound": bound,
        "s_minus_3": f.s - 3,
        "d_mixed_at_least_l_minus_2": d_mixed >= l - 2,
    }
