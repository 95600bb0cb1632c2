"""End-to-end PG(v) search: generate, filter, match, uncompress, reduce.

For every rowsum decomposition ``(a, b)`` of ``2v`` the top level generates
rotation-minimal ``m0``-compressions with rowsum ``a`` (A side) and ``b``
(B side), keeps those passing the PSD filters and matches them. Members can
be rotated and negated independently and swapped, so this covers every PG(v)
up to equivalence. The schedule then uncompresses level by level and the
final pairs are reduced to one canonical representative per class.
"""

from __future__ import annotations

import configparser
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import textio
from .compress import (
    DEFAULT_PARTIAL_OPS,
    ScheduleReport,
    UncompressionSchedule,
    chunk_work,
    default_filter_mask,
    level_path,
    run_schedule,
)
from .equiv import PARTIAL_OPS, SymmetryGroup, filter_canonical_array, partial_filter_array
from .errors import ContractViolation
from .generate import STRATEGIES, GenerationSpec, iter_blocks
from .match import MatchStats, match_indices
from .seqcore import sum_of_two_squares

log = logging.getLogger(__name__)

WORKERS_ENV = "PGSEARCH_WORKERS"

__all__ = ["SearchConfig", "SearchReport", "cmd_search", "chunk_work", "default_schedule",
           "census_path", "default_workers", "generate_candidates", "load_config"]


def default_schedule(v):
    if v % 8 == 0:
        return UncompressionSchedule((8, 4, 2, 1))
    if v % 4 == 0:
        return UncompressionSchedule((4, 2, 1))
    if v % 2 == 0:
        return UncompressionSchedule((2, 1))
    return UncompressionSchedule((1,))


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ContractViolation(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise ContractViolation(f"{WORKERS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def census_path(out_dir, v):
    return Path(out_dir) / f"pg{v}_classes.txt"


@dataclass
class SearchConfig:
    v: int
    schedule: UncompressionSchedule | None = None
    strategy: str = "hybrid"
    workers: int = 1
    output_dir: Path = Path("out")
    resume: bool = False
    partial_filter_ops: frozenset = DEFAULT_PARTIAL_OPS
    stop_after: int | None = None  # end after writing this level (simulated interruption)

    def __post_init__(self):
        if self.v < 1:
            raise ContractViolation(f"length must be positive, got {self.v}")
        if self.schedule is None:
            self.schedule = default_schedule(self.v)
        elif not isinstance(self.schedule, UncompressionSchedule):
            self.schedule = UncompressionSchedule(tuple(self.schedule))
        if self.v % 2 == 0:
            self.schedule.check_length(self.v)
        if self.strategy not in STRATEGIES:
            raise ContractViolation(f"unknown strategy {self.strategy!r}")
        if self.workers < 1:
            raise ContractViolation(f"workers must be >= 1, got {self.workers}")
        self.output_dir = Path(self.output_dir)
        self.partial_filter_ops = frozenset(self.partial_filter_ops)
        bad = self.partial_filter_ops - PARTIAL_OPS
        if bad:
            raise ContractViolation(f"unsupported partial-filter ops {sorted(bad)}")


@dataclass
class SearchReport:
    v: int
    schedule: str = ""
    decompositions: list = field(default_factory=list)
    candidates: dict = field(default_factory=dict)      # "a" -> generated count
    psd_survivors: dict = field(default_factory=dict)
    matched: int = 0
    spurious_rejected: int = 0
    top_pairs: int = 0
    levels: list = field(default_factory=list)
    final_pairs: int = 0
    classes: int = 0
    times: dict = field(default_factory=dict)

    def lines(self):
        out = [f"# v={self.v} schedule={self.schedule}"]
        for k in sorted(self.candidates, key=int):
            out.append(f"# rowsum={k} candidates={self.candidates[k]} "
                       f"psd_survivors={self.psd_survivors.get(k, 0)}")
        out.append(f"# matched={self.matched} spurious_rejected={self.spurious_rejected}")
        out.append(f"# m={self.levels[0]['m'] if self.levels else 1} pairs={self.top_pairs}")
        for lv in self.levels[1:]:
            out.append(f"# m={lv['m']} pairs={lv['after_partial_filter']}")
        out.append(f"# classes={self.classes} input={self.final_pairs}")
        out.append("# times " + " ".join(f"{k}={v:.2f}s" for k, v in self.times.items()))
        return out

    def write(self, path):
        Path(path).write_text(json.dumps(asdict(self), indent=1, sort_keys=True) + "\n")


def load_config(path):
    """Read a ``key = value`` config file into a dict of strings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    text = Path(path).read_text(encoding="ascii")
    try:
        parser.read_string("[search]\n" + text)
    except configparser.Error as exc:
        raise ContractViolation(f"{path}: {exc}") from None
    return {k.replace("-", "_"): v for k, v in parser["search"].items()}


def generate_candidates(d, m, rowsum_, strategy, v):
    """Generated candidates with the given rowsum that pass the PSD filters."""
    spec = GenerationSpec(d, m, frozenset({rowsum_}), strategy=strategy)
    mask = default_filter_mask(v)
    total, keep = 0, []
    for block in iter_blocks(spec):
        total += len(block)
        keep.append(block[mask(block)])
    arr = np.concatenate(keep) if keep else np.zeros((0, d), dtype=np.int8)
    return arr, total


def _top_level(cfg, report):
    v = cfg.v
    m0 = cfg.schedule.factors[0]
    L = v // m0
    lists = {}
    t0 = time.perf_counter()
    for a, b in report.decompositions:
        for r in (a, b):
            if r not in lists:
                arr, n = generate_candidates(L, m0, r, cfg.strategy, v)
                lists[r] = arr
                report.candidates[str(r)] = n
                report.psd_survivors[str(r)] = len(arr)
    report.times["generate"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    stats = MatchStats()
    parts = []
    for a, b in report.decompositions:
        SA, SB = lists[a], lists[b]
        ia, ib = match_indices(v, SA, SB, stats=stats)
        if len(ia):
            parts.append(np.stack((SA[ia], SB[ib]), axis=1).astype(np.int64))
    P = np.concatenate(parts) if parts else np.zeros((0, 2, L), dtype=np.int64)
    P = partial_filter_array(P, cfg.partial_filter_ops)
    report.matched = stats.matched
    report.spurious_rejected = stats.spurious_rejected
    report.top_pairs = len(P)
    report.times["match"] = time.perf_counter() - t0
    return [(tuple(x[0]), tuple(x[1])) for x in P.tolist()]


def cmd_search(config):
    """Run the full search; writes ``pg<v>_classes.txt`` and a report."""
    cfg = config
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    report = SearchReport(v=cfg.v, schedule=str(cfg.schedule))
    t_start = time.perf_counter()
    decomps = sum_of_two_squares(cfg.v) if cfg.v % 2 == 0 and cfg.v >= 2 else []
    report.decompositions = [tuple(d) for d in decomps]
    if not decomps:
        # not a periodic Golay number: nothing to search
        textio.write_pairs(census_path(out, cfg.v), [], header=[f"# v={cfg.v} m=1"])
        report.times["total"] = time.perf_counter() - t_start
        report.write(out / "report.json")
        return report

    fs = cfg.schedule.factors
    m0 = fs[0]
    top_file = level_path(out, m0)
    if cfg.resume and top_file.exists():
        _check_header(top_file, cfg.v, m0)
        top = textio.read_pairs(top_file)
        report.top_pairs = len(top)
    else:
        top = _top_level(cfg, report)
        textio.write_pairs(top_file, top, header=[f"# v={cfg.v} m={m0}"])
    report.levels.append({"m": m0, "after_partial_filter": len(top)})
    if cfg.stop_after == m0:
        return report
    if cfg.resume:
        for m in fs[1:]:
            if level_path(out, m).exists():
                _check_header(level_path(out, m), cfg.v, m)

    t0 = time.perf_counter()
    sched = ScheduleReport()
    final = run_schedule(top, cfg.schedule, cfg.v, workers=cfg.workers,
                         partial_ops=cfg.partial_filter_ops, level_dir=out,
                         resume=cfg.resume, report=sched, stop_after=cfg.stop_after)
    report.levels.extend(asdict(lv) for lv in sched.levels)
    report.times["uncompress"] = time.perf_counter() - t0
    if cfg.stop_after is not None and cfg.stop_after != 1:
        return report

    t0 = time.perf_counter()
    report.final_pairs = len(final)
    if final:
        P = np.asarray(final, dtype=np.int64)
        C = filter_canonical_array(P, SymmetryGroup(cfg.v), workers=cfg.workers)
        classes = [(tuple(c[0]), tuple(c[1])) for c in C.tolist()]
    else:
        classes = []
    report.classes = len(classes)
    textio.write_pairs(census_path(out, cfg.v), classes, header=[f"# v={cfg.v} m=1"])
    report.times["filter"] = time.perf_counter() - t0
    report.times["total"] = time.perf_counter() - t_start
    report.write(out / "report.json")
    return report


def _check_header(path, v, m):
    h = textio.read_headers(path)
    if h.get("v") != str(v) or h.get("m") != str(m):
        raise ContractViolation(f"{path}: header does not match v={v} m={m}")
