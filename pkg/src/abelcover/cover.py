"""Families of abelian covers of P^1 given by a monodromy matrix over Z/N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .residue import (
    SpanGroup,
    ZModMatrix,
    canonical_key,
    column_span,
    presentation_kernel,
    row_span,
)


class InvariantError(ArithmeticError):
    """A derived quantity broke an invariant that validation should guarantee."""


@dataclass(frozen=True)
class Violation:
    tag: str            # column-sum-nonzero | zero-column | s-too-small | N-too-small | malformed
    index: int | None = None
    detail: str = ""

    def __str__(self):
        where = f" at column {self.index}" if self.index is not None else ""
        return f"{self.tag}{where}: {self.detail}" if self.detail else f"{self.tag}{where}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations))


@dataclass(frozen=True, eq=False)
class CoverFamily:
    """A family of abelian covers branched over s moving points.

    Construct through :func:`validate` or :meth:`from_rows`; the constructor
    itself does not check the defining conditions.
    """

    matrix: ZModMatrix
    label: str | None = None
    warnings: tuple[str, ...] = ()

    @classmethod
    def from_rows(cls, N: int, rows, label: str | None = None) -> "CoverFamily":
        result = validate(N, rows, label=label)
        if isinstance(result, ValidationReport):
            raise ValidationError(result)
        return result

    @property
    def N(self) -> int:
        return self.matrix.modulus

    @property
    def m(self) -> int:
        return self.matrix.m

    @property
    def s(self) -> int:
        return self.matrix.s

    @property
    def dim_Z(self) -> int:
        return self.s - 3

    @cached_property
    def group(self) -> SpanGroup:
        return column_span(self.matrix)

    @cached_property
    def degree(self) -> int:
        return row_span(self.matrix).order

    @cached_property
    def kernel(self) -> SpanGroup:
        return presentation_kernel(self.matrix)

    @cached_property
    def key(self) -> str:
        return canonical_key(self.matrix)

    @property
    def is_reduced(self) -> bool:
        """True when the rows are independent over Z/N (trivial presentation kernel)."""
        return self.kernel.order == 1

    def __eq__(self, other):
        return isinstance(other, CoverFamily) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        rows = " / ".join(",".join(map(str, r)) for r in self.matrix.rows)
        return f"CoverFamily(N={self.N}; {rows})"


def validate(N: int, rows, label: str | None = None) -> CoverFamily | ValidationReport:
    """Check the defining conditions and return a family, or every violation found."""
    report = ValidationReport()
    try:
        grid = [[int(x) for x in row] for row in rows]
    except (TypeError, ValueError) as exc:
        report.violations.append(Violation("malformed", None, str(exc)))
        return report
    if not grid or not grid[0] or any(len(r) != len(grid[0]) for r in grid):
        report.violations.append(Violation("malformed", None, "matrix must be a non-empty rectangle"))
        return report
    if N < 2:
        report.violations.append(Violation("N-too-small", None, f"N={N} < 2"))
        return report
    M = ZModMatrix(N, grid)
    if M.s < 4:
        report.violations.append(Violation("s-too-small", None, f"s={M.s} < 4"))
    sums = tuple(sum(row) % N for row in M.rows)
    if any(sums):
        report.violations.append(
            Violation("column-sum-nonzero", None, f"column sum {sums} is not zero mod {N}")
        )
    for j, col in enumerate(M.columns, start=1):
        if not any(col):
            report.violations.append(Violation("zero-column", j, "zero local monodromy"))
    if not report.ok:
        return report
    kernel = presentation_kernel(M)
    if kernel.order > 1:
        report.warnings.append(
            f"rows are dependent over Z/{N}: presentation kernel has order {kernel.order}"
        )
    return CoverFamily(M, label, tuple(report.warnings))


def ramification_order(f: CoverFamily, j: int) -> int:
    """Ramification index over the j-th branch point (1-based)."""
    if not 1 <= j <= f.s:
        raise IndexError(f"column index {j} outside 1..{f.s}")
    return f.N // math.gcd(f.N, *f.matrix.column(j - 1))


def genus(f: CoverFamily) -> int:
    """Riemann-Hurwitz genus of a fiber, in exact arithmetic."""
    gsum = sum(math.gcd(f.N, *col) for col in f.matrix.columns)
    g = 1 + f.degree * (Fraction(f.s - 2, 2) - Fraction(gsum, 2 * f.N))
    if g.denominator != 1 or g < 0:
        raise InvariantError(f"genus formula gave {g} for {f!r}")
    return int(g)
