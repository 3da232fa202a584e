"""Verdicts for single families and the exhaustive bounded search.

The search enumerates multisets of s nonzero columns in (Z/N)^m that sum to
zero. Shards are (N, smallest column code); they are processed in a fixed
order so that output does not depend on the worker count, and completed
shards are recorded in a checkpoint file that allows resuming.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from . import kernels
from .cover import CoverFamily, genus
from .hodge import dim_SG
from .monodromy import large_s_check, monodromy_exclude, row_reduction_rule, sf_lower_bound

log = logging.getLogger(__name__)

SHIMURA_PEL = "ShimuraPEL"
SHIMURA_FOUR_POINT = "ShimuraFourPoint"
NOT_SHIMURA = "NotShimura"
INCONCLUSIVE = "Inconclusive"

RULES = ("FourPoint", "MonodromyBound", "RowReduction", "LargeS")


@dataclass(frozen=True)
class Verdict:
    kind: str
    rule: str | None = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind == NOT_SHIMURA and self.rule not in RULES:
            raise ValueError(f"NotShimura needs one of {RULES}, got {self.rule}")

    @property
    def is_shimura(self) -> bool:
        return self.kind in (SHIMURA_PEL, SHIMURA_FOUR_POINT)

    def __str__(self):
        return f"{self.kind}({self.rule})" if self.rule else self.kind


def sg_check(f: CoverFamily) -> bool:
    return dim_SG(f) == f.s - 3


def four_point_decide(f: CoverFamily) -> Verdict:
    """Four branch points: Shimura exactly when dim S(G) = 1."""
    if f.s != 4:
        raise ValueError(f"four-point decision needs s = 4, family has s = {f.s}")
    dim = dim_SG(f)
    evidence = {"dim_SG": dim, "s_minus_3": 1, "reduced_presentation": f.is_reduced}
    if dim == 1:
        return Verdict(SHIMURA_FOUR_POINT, None, evidence)
    return Verdict(NOT_SHIMURA, "FourPoint", evidence)


def classify(f: CoverFamily) -> Verdict:
    dim = dim_SG(f)
    base = {"dim_SG": dim, "s_minus_3": f.s - 3}
    if dim == f.s - 3:
        return Verdict(SHIMURA_PEL, None, base)
    if f.s == 4:
        return four_point_decide(f)
    bound = sf_lower_bound(f)
    if bound > f.s - 3:
        evidence = dict(base, sf_lower_bound=bound)
        large = large_s_check(f)
        if large:
            evidence["large_s"] = large
        return Verdict(NOT_SHIMURA, "MonodromyBound", evidence)
    row = row_reduction_rule(f)
    if row:
        return Verdict(NOT_SHIMURA, "RowReduction", dict(base, sf_lower_bound=bound, **row))
    return Verdict(INCONCLUSIVE, None, dict(base, sf_lower_bound=bound))


# --------------------------------------------------------------------------
# Bounded search


@dataclass(frozen=True)
class ScanBounds:
    N_set: tuple[int, ...]
    m_max: int
    s_range: tuple[int, ...]
    require_noncyclic: bool = True
    require_reduced_presentation: bool = False
    all_verdicts: bool = False

    def __post_init__(self):
        if not self.N_set or min(self.N_set) < 2:
            raise ValueError("every N must be >= 2")
        if self.m_max < 1:
            raise ValueError("m must be >= 1")
        if not self.s_range or min(self.s_range) < 4:
            raise ValueError("every s must be >= 4")
        if self.m_max > 8:
            raise ValueError("m above 8 is not supported")

    def shards(self) -> list[tuple[int, int]]:
        """(s, N, first column code) in processing order."""
        return [(s, N, first) for s in self.s_range for N in self.N_set
                for first in range(1, N ** self.m_max)]

    def to_json(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


@dataclass(frozen=True)
class ScanRecord:
    key: str
    N: int
    matrix: tuple[tuple[int, ...], ...]
    group: tuple[int, ...]
    genus: int
    dim_SG: int
    verdict: str
    rule: str | None

    def to_json(self) -> dict:
        return {"key": self.key, "N": self.N, "matrix": [list(r) for r in self.matrix],
                "group": list(self.group), "genus": self.genus, "dim_SG": self.dim_SG,
                "s": len(self.matrix[0]), "verdict": self.verdict, "rule": self.rule}

    @classmethod
    def from_json(cls, d: dict) -> "ScanRecord":
        return cls(d["key"], d["N"], tuple(tuple(r) for r in d["matrix"]), tuple(d["group"]),
                   d["genus"], d["dim_SG"], d["verdict"], d["rule"])


def record_for(f: CoverFamily) -> ScanRecord:
    v = classify(f)
    return ScanRecord(f.key, f.N, f.matrix.rows, f.group.invariant_factors, genus(f),
                      v.evidence["dim_SG"], v.kind, v.rule)


def _process_shard(args) -> list[tuple[str, list[list[int]]]]:
    """Run one shard; returns (key, rows) of accepted families, deduplicated within the shard."""
    s, N, first, m, bounds_flags = args
    only_sg, noncyclic, reduced = bounds_flags
    out = {}
    for codes in kernels.scan_shard(N, m, s, first, only_sg):
        cols = [kernels.decode(c, N, m) for c in codes]
        rows = [[col[i] for col in cols] for i in range(m)]
        f = CoverFamily.from_rows(N, rows)
        if noncyclic and f.group.is_cyclic:
            continue
        if reduced and not f.is_reduced:
            continue
        out.setdefault(f.key, rows)
    return list(out.items())


class CheckpointError(RuntimeError):
    pass


CHECKPOINT_FORMAT = "abelcover-checkpoint"
CHECKPOINT_VERSION = 1


def _write_checkpoint(path: Path, bounds: ScanBounds, cursor: int, found: dict) -> None:
    lines = [json.dumps({"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION,
                         "bounds": bounds.to_json()}, sort_keys=True),
             json.dumps({"cursor": cursor}, sort_keys=True)]
    lines += [json.dumps({"key": k, "N": N, "matrix": rows}, sort_keys=True)
              for k, (N, rows) in found.items()]
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    lines.append(json.dumps({"sha256": digest}))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_checkpoint(path: Path, bounds: ScanBounds) -> tuple[int, dict]:
    """Return (cursor, found) from a checkpoint written for the same bounds."""
    try:
        lines = Path(path).read_text().splitlines()
        if len(lines) < 3:
            raise CheckpointError("checkpoint truncated")
        digest = json.loads(lines[-1]).get("sha256")
        if digest != hashlib.sha256("\n".join(lines[:-1]).encode()).hexdigest():
            raise CheckpointError("checkpoint checksum mismatch")
        header = json.loads(lines[0])
        if header.get("format") != CHECKPOINT_FORMAT or header.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError("not a version-1 abelcover checkpoint")
        if header.get("bounds") != bounds.to_json():
            raise CheckpointError("checkpoint was written for different bounds")
        cursor = int(json.loads(lines[1])["cursor"])
        found = {}
        for line in lines[2:-1]:
            rec = json.loads(line)
            found[rec["key"]] = (rec["N"], rec["matrix"])
    except CheckpointError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise CheckpointError(f"corrupt checkpoint: {exc}") from exc
    return cursor, found


def scan(bounds: ScanBounds, jobs: int = 1, checkpoint: str | Path | None = None,
         max_shards: int | None = None,
         progress: Callable[[int, int], None] | None = None) -> Iterator[ScanRecord]:
    """Yield one record per isomorphism class inside the box, sorted by key.

    ``max_shards`` stops after that many shards in this call (the checkpoint
    then holds the partial state); the generator yields nothing in that case.
    """
    shards = bounds.shards()
    found: dict[str, tuple[int, list[list[int]]]] = {}
    cursor = 0
    ckpt = Path(checkpoint) if checkpoint else None
    if ckpt and ckpt.exists():
        cursor, found = read_checkpoint(ckpt, bounds)
        log.info("resuming at shard %d/%d with %d classes", cursor, len(shards), len(found))
    flags = (not bounds.all_verdicts, bounds.require_noncyclic, bounds.require_reduced_presentation)
    todo = shards[cursor:]
    if max_shards is not None:
        todo = todo[:max_shards]
    tasks = [(s, N, first, bounds.m_max, flags) for s, N, first in todo]

    def absorb(i, result):
        nonlocal cursor
        for key, rows in result:
            found.setdefault(key, (todo[i][1], rows))
        cursor += 1
        if progress:
            progress(cursor, len(shards))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, result in enumerate(pool.map(_process_shard, tasks, chunksize=4)):
                absorb(i, result)
                if ckpt and i % 64 == 63:
                    _write_checkpoint(ckpt, bounds, cursor, found)
    else:
        for i, task in enumerate(tasks):
            absorb(i, _process_shard(task))
            if ckpt and i % 64 == 63:
                _write_checkpoint(ckpt, bounds, cursor, found)
    if ckpt:
        _write_checkpoint(ckpt, bounds, cursor, found)
    if cursor < len(shards):
        return
    for key in sorted(found):
        N, rows = found[key]
        yield record_for(CoverFamily.from_rows(N, rows))
