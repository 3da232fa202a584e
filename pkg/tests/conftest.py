import json
from pathlib import Path

import pytest

from abelcover.cover import CoverFamily

DATA = Path(__file__).resolve().parents[1] / "src" / "abelcover" / "data"

# genus and Galois group invariant factors as printed in the source table
TABLE1_EXPECTED = {
    1: (1, (2, 2)),
    2: (2, (2, 2)),
    3: (3, (2, 4)),
    4: (3, (2, 4)),
    5: (3, (2, 2)),
    6: (4, (2, 6)),
    7: (4, (3, 3)),
}


def load_family(name: str) -> CoverFamily:
    doc = json.loads((DATA / name).read_text())
    return CoverFamily.from_rows(doc["N"], doc["matrix"], label=doc.get("label"))


@pytest.fixture(scope="session")
def table1():
    return {i: load_family(f"table1/row{i}.json") for i in range(1, 8)}


@pytest.fixture(scope="session")
def obstruction_family():
    return CoverFamily.from_rows(3, [(1, 1, 2, 2), (1, 2, 1, 2)])


@pytest.fixture(scope="session")
def counterexample():
    return load_family("counterexample_n4.json")


@pytest.fixture(scope="session")
def large_s():
    return load_family("large_s20.json")
