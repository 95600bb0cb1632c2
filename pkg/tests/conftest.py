import os
import re
import time
from pathlib import Path

import pytest

from pgsearch.pipeline import SearchConfig, census_path, cmd_search
from pgsearch.textio import read_pairs

DATA = Path(__file__).parent / "data"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    key = str(criterion)
    prev = ACCEPTANCE.get(key)
    ok = bool(ok) and (prev is None or prev[0])
    details = [d for d in ((prev[1] if prev else ""), detail) if d]
    ACCEPTANCE[key] = (ok, "; ".join(details))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(k):
        return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", k)]

    for key in sorted(ACCEPTANCE, key=order):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


def extended_level():
    try:
        return int(os.environ.get("PGSEARCH_EXTENDED", "1"))
    except ValueError:
        return 0


class CensusCache:
    """Runs each census once per session; remembers wall time."""

    def __init__(self, root):
        self.root = Path(root)
        self.seconds = {}
        self.pairs = {}

    def __call__(self, v, workers=1):
        if v not in self.pairs:
            out = self.root / f"v{v}"
            t0 = time.perf_counter()
            cmd_search(SearchConfig(v=v, workers=workers, output_dir=out))
            self.seconds[v] = time.perf_counter() - t0
            self.pairs[v] = read_pairs(census_path(out, v))
        return self.pairs[v]


@pytest.fixture(scope="session")
def census(tmp_path_factory):
    return CensusCache(tmp_path_factory.mktemp("census"))


@pytest.fixture(scope="session")
def pg90_path():
    return DATA / "pg90.txt"


@pytest.fixture(scope="session")
def pg90_pairs(pg90_path):
    return read_pairs(pg90_path)


@pytest.fixture(scope="session")
def small_pg_pairs(census):
    out = []
    for v in (2, 4, 8, 10, 16, 20, 26):
        out.extend(census(v))
    return out
