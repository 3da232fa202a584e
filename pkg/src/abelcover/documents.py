"""Family documents: JSON ``{"N": 4, "matrix": [[...], ...], "label": "..."}``
or the compact one-liner ``N=4; 2,2,0,0 / 0,1,1,2``."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path


class DocumentError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyDocument:
    N: int
    matrix: tuple[tuple[int, ...], ...]
    label: str | None = None

    def to_json(self) -> dict:
        d = {"N": self.N, "matrix": [list(r) for r in self.matrix]}
        if self.label is not None:
            d["label"] = self.label
        return d

    def compact(self) -> str:
        return f"N={self.N}; " + " / ".join(",".join(map(str, r)) for r in self.matrix)


_COMPACT = re.compile(r"^\s*N\s*=\s*(\d+)\s*;(.*)$", re.S)


def parse_document(text: str, default_label: str | None = None) -> FamilyDocument:
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
            N = data["N"]
            matrix = data["matrix"]
            label = data.get("label", default_label)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DocumentError(f"bad family document: {exc}") from exc
        if not isinstance(N, int) or isinstance(N, bool):
            raise DocumentError("N must be an integer")
        if (not isinstance(matrix, list) or not matrix
                or not all(isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool)
                                                       for x in r) for r in matrix)):
            raise DocumentError("matrix must be a non-empty list of integer rows")
        return FamilyDocument(N, tuple(tuple(r) for r in matrix), label)
    match = _COMPACT.match(text)
    if not match:
        raise DocumentError(f"cannot parse family: {text[:60]!r}")
    try:
        rows = tuple(tuple(int(x) for x in row.split(","))
                     for row in match.group(2).split("/"))
    except ValueError as exc:
        raise DocumentError(f"bad matrix entry: {exc}") from exc
    return FamilyDocument(int(match.group(1)), rows, default_label)


def load_document(path: str | Path) -> FamilyDocument:
    path = Path(path)
    return parse_document(path.read_text(), default_label=path.stem)


def load_inputs(arg: str) -> list[tuple[str, FamilyDocument | Exception]]:
    """Resolve a path or inline text to (name, document-or-error) pairs.

    A directory expands to its *.json files in name order.
    """
    path = Path(arg)
    if path.is_dir():
        out = []
        for p in sorted(path.glob("*.json")):
            try:
                out.append((p.stem, load_document(p)))
            except (OSError, DocumentError) as exc:
                out.append((p.stem, exc))
        return out
    if path.is_file():
        try:
            return [(path.stem, load_document(path))]
        except (OSError, DocumentError) as exc:
            return [(path.stem, exc)]
    try:
        return [("inline", parse_document(arg))]
    except DocumentError as exc:
        return [("inline", exc)]
