"""Characters of the Galois group and the Hodge numbers of their eigenspaces.

A character is identified with its alpha vector ``a . A`` (mod N); the
functional ``a`` is kept only as one representative of its coset modulo the
presentation kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cover import CoverFamily, InvariantError
from .residue import Vector


@dataclass(frozen=True)
class Character:
    modulus: int
    representative: Vector
    alpha: Vector

    @property
    def is_trivial(self) -> bool:
        return not any(self.alpha)

    @property
    def order(self) -> int:
        k = 1
        while any((k * x) % self.modulus for x in self.alpha):
            k += 1
        return k

    @property
    def is_two_torsion(self) -> bool:
        return all((2 * x) % self.modulus == 0 for x in self.alpha)

    def inverse(self) -> "Character":
        N = self.modulus
        return Character(N, tuple((-x) % N for x in self.representative),
                         tuple((-x) % N for x in self.alpha))

    def __add__(self, other: "Character") -> "Character":
        N = self.modulus
        return Character(N, tuple((x + y) % N for x, y in zip(self.representative, other.representative)),
                         tuple((x + y) % N for x, y in zip(self.alpha, other.alpha)))


@dataclass(frozen=True)
class EigenData:
    character: Character
    d_plus: int
    d_minus: int

    @property
    def type_ordered(self) -> tuple[int, int]:
        return (self.d_plus, self.d_minus)

    @property
    def type_unordered(self) -> tuple[int, int]:
        return tuple(sorted((self.d_plus, self.d_minus)))

    @property
    def two_torsion(self) -> bool:
        return self.character.is_two_torsion


@lru_cache(maxsize=4096)
def _character_table(f: CoverFamily) -> tuple[Character, ...]:
    N, m = f.N, f.m
    M = f.matrix
    start = (0,) * f.s
    reps = {start: (0,) * m}
    frontier = [start]
    while frontier:
        nxt = []
        for al in frontier:
            a = reps[al]
            for i, row in enumerate(M.rows):
                b = tuple((x + y) % N for x, y in zip(al, row))
                if b not in reps:
                    rep = list(a)
                    rep[i] = (rep[i] + 1) % N
                    reps[b] = tuple(rep)
                    nxt.append(b)
        frontier = nxt
    return tuple(Character(N, reps[al], al) for al in sorted(reps))


def characters(f: CoverFamily) -> list[Character]:
    """All |G| characters, sorted by alpha vector (trivial one first)."""
    return list(_character_table(f))


def character(f: CoverFamily, functional) -> Character:
    """The character of the functional ``a`` (a tuple of residues)."""
    a = tuple(int(x) % f.N for x in functional)
    if len(a) != f.m:
        raise ValueError(f"functional needs {f.m} entries, got {len(a)}")
    return Character(f.N, a, f.matrix.apply(a))


def _lift_sum(values, N: int) -> int:
    return sum(x % N for x in values)


def eigenspace_dim(f: CoverFamily, c: Character) -> int:
    """Dimension of the c-eigenspace of holomorphic differentials.

    Computed from the alpha vector and, separately, from the representative
    functional against the lifted matrix; the two must agree. Sums of lifted
    residues are kept as integers and divided by N only when exact.
    """
    if c.is_trivial:
        return 0
    N = f.N
    via_alpha = _lift_sum((-x for x in c.alpha), N)
    neg = [(-x) % N for x in c.representative]
    via_functional = _lift_sum(
        (sum(n * r for n, r in zip(neg, col)) for col in f.matrix.columns), N
    )
    if via_alpha != via_functional:
        raise InvariantError(f"eigenspace formulas disagree: {via_alpha}/{N} vs {via_functional}/{N}")
    if via_alpha % N:
        raise InvariantError(f"non-integral eigenspace dimension -1 + {via_alpha}/{N}")
    return via_alpha // N - 1


def eigensheaf_degrees(f: CoverFamily, c: Character) -> tuple[int, int]:
    """``(deg L_c, deg pi_*(omega)_c)`` for a nontrivial character."""
    if c.is_trivial:
        raise ValueError("eigensheaf degrees are defined for nontrivial characters only")
    N = f.N
    up, down = _lift_sum(c.alpha, N), _lift_sum((-x for x in c.alpha), N)
    if up % N or down % N:
        raise InvariantError("non-integral eigensheaf degree")
    return up // N, down // N - 2


def eigenspace_type(f: CoverFamily, c: Character) -> EigenData:
    if c.is_trivial:
        raise ValueError("the trivial character has no eigenspace type")
    return EigenData(c, eigenspace_dim(f, c), eigenspace_dim(f, c.inverse()))


def eigen_table(f: CoverFamily) -> list[EigenData]:
    """EigenData for every nontrivial character, in character order."""
    return [eigenspace_type(f, c) for c in characters(f) if not c.is_trivial]


def dim_SG(f: CoverFamily) -> int:
    """Dimension of the PEL Shimura subvariety cut out by the group ring.

    One term d_n * d_{-n} per unordered pair {n, -n} with 2n != 0, plus
    d_n (d_n + 1) / 2 for each 2-torsion n.
    """
    total2 = 0
    for e in eigen_table(f):
        if e.two_torsion:
            total2 += e.d_plus * (e.d_plus + 1)
        else:
            total2 += e.d_plus * e.d_minus  # each pair visited twice
    if total2 % 2:
        raise InvariantError("dim S(G) came out half-integral")
    return total2 // 2
