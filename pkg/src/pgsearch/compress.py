"""Compression, uncompression and multi-level uncompression schedules.

The m-compression of a length-v sequence has length ``L = v/m`` and entries
``c_i = a_i + a_{i+L} + ... + a_{i+(m-1)L}``. Uncompression by a factor ``e``
inverts one step: every entry of ``omega`` (a ``d*e``-compression) is split
into ``e`` letters of ``alphabet(d)`` that sum to it, placed at positions
``i, i+L, ..., i+(e-1)L``.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import textio
from .equiv import partial_filter_array
from .errors import ContractViolation
from .generate import _table
from .match import MatchStats, match_indices
from .seqcore import (
    allowed_half_squares,
    half_square_mask,
    psd_filter_mask,
)

log = logging.getLogger(__name__)

# intermediate pair sets are reduced by these (compression-compatible) ops
DEFAULT_PARTIAL_OPS = frozenset({"shift", "swap", "negate"})


def compress_array(arr, m):
    x = np.asarray(arr)
    n, v = x.shape
    if m < 1 or v % m:
        raise ContractViolation(f"factor {m} does not divide length {v}")
    return x.reshape(n, m, v // m).sum(axis=1, dtype=np.int64)


def compress(seq, m):
    """The m-compression of ``seq`` (works on compressed inputs too)."""
    if m < 1 or len(seq) % m:
        raise ContractViolation(f"factor {m} does not divide length {len(seq)}")
    return tuple(compress_array(np.asarray(seq)[None, :], m)[0].tolist())


def compress_pair(pair, m):
    return compress(pair[0], m), compress(pair[1], m)


def compress_chain_equivalence_check(seq, d, e):
    """``compress(compress(seq, d), e) == compress(seq, d*e)``; always True."""
    if len(seq) % (d * e):
        raise ContractViolation(f"{d}*{e} does not divide length {len(seq)}")
    return compress(compress(seq, d), e) == compress(seq, d * e)


@lru_cache(maxsize=None)
def decompositions(value, e, d):
    """All length-e tuples over alphabet(d) summing to ``value``, lex order."""
    return _table(e, frozenset({value}), d)


def _check_omega(omega, e, d):
    if e < 1 or d < 1:
        raise ContractViolation(f"need e >= 1 and d >= 1, got e={e}, d={d}")
    omega = tuple(int(x) for x in omega)
    if not omega:
        raise ContractViolation("cannot uncompress an empty sequence")
    # entries outside the alphabet simply have no preimage
    return omega


def uncompress(omega, e, d):
    """Every alphabet(d) sequence whose e-compression is ``omega``, sorted.

    Direct recursive backtracking over positions of ``omega``.
    """
    omega = _check_omega(omega, e, d)
    L = len(omega)
    gamma = [0] * (L * e)
    out = []

    def rec(i):
        if i == L:
            out.append(tuple(gamma))
            return
        for delta in decompositions(omega[i], e, d).tolist():
            for j in range(e):
                gamma[i + j * L] = delta[j]
            rec(i + 1)

    rec(0)
    out.sort()
    return out


def _sort_rows(x):
    if len(x) <= 1:
        return x
    return x[np.lexsort(x.T[::-1])]


def uncompress_blocks(omega, e, d, limit=1 << 20):
    """Yield unsorted blocks of the preimage, each at most ~``limit`` rows."""
    omega = _check_omega(omega, e, d)
    L = len(omega)
    parts = [decompositions(x, e, d) for x in omega]
    if any(len(p) == 0 for p in parts):
        return

    def rec(fixed):
        # fixed: chosen decomposition indices for the first len(fixed) positions
        i0 = len(fixed)
        size = 1
        for p in parts[i0:]:
            size *= len(p)
        if size > limit and i0 < L:
            for c in range(len(parts[i0])):
                yield from rec(fixed + (c,))
            return
        idx = np.zeros((1, 0), dtype=np.int64)
        for p in parts[i0:]:
            n = len(p)
            idx = np.hstack((np.repeat(idx, n, axis=0),
                             np.tile(np.arange(n), len(idx))[:, None]))
        N = len(idx)
        gamma = np.empty((N, L * e), dtype=np.int8)
        for i in range(L):
            col = parts[i][fixed[i]][None, :] if i < i0 else parts[i][idx[:, i - i0]]
            gamma[:, i::L] = col
        yield gamma

    yield from rec(())


def uncompress_array(omega, e, d):
    blocks = list(uncompress_blocks(omega, e, d))
    if not blocks:
        return np.zeros((0, len(omega) * e), dtype=np.int8)
    return _sort_rows(np.concatenate(blocks))


def default_filter_mask(v_target):
    """Batch filter: PSD bound, plus the half-shift square test at even length."""
    squares = allowed_half_squares(v_target) if v_target % 2 == 0 else None

    def mask(block):
        ok = psd_filter_mask(block, v_target)
        if squares is not None and block.shape[1] % 2 == 0 and ok.any():
            ok &= half_square_mask(block, squares)
        return ok

    return mask


def uncompress_filtered_array(omega, e, d, v_target, mask=None):
    mask = mask or default_filter_mask(v_target)
    keep = []
    for block in uncompress_blocks(omega, e, d):
        keep.append(block[mask(block)])
    if not keep:
        return np.zeros((0, len(omega) * e), dtype=np.int8)
    return _sort_rows(np.concatenate(keep))


def uncompress_filtered(omega, e, d, v_target, filter=None):
    """Preimages of ``omega`` that satisfy ``filter`` (default: PSD filters)."""
    if filter is None:
        return [tuple(r) for r in uncompress_filtered_array(omega, e, d, v_target).tolist()]
    return [g for g in uncompress(omega, e, d) if filter(g)]


@dataclass(frozen=True)
class UncompressionSchedule:
    factors: tuple

    def __post_init__(self):
        fs = tuple(int(f) for f in self.factors)
        object.__setattr__(self, "factors", fs)
        if not fs or fs[-1] != 1:
            raise ContractViolation(f"schedule must end with 1, got {list(fs)}")
        for hi, lo in zip(fs, fs[1:]):
            if hi <= lo or hi % lo:
                raise ContractViolation(
                    f"schedule factors must strictly decrease by divisors, got {list(fs)}")

    @classmethod
    def parse(cls, text):
        return cls(tuple(int(t) for t in str(text).replace("↪", ",").split(",") if t.strip()))

    def check_length(self, v):
        if v % self.factors[0]:
            raise ContractViolation(f"schedule start {self.factors[0]} does not divide v={v}")

    def __str__(self):
        return ",".join(map(str, self.factors))


@dataclass
class LevelReport:
    m: int
    input_pairs: int = 0
    members: int = 0
    uncompressed: int = 0
    psd_survivors: int = 0
    matched: int = 0
    spurious_rejected: int = 0
    after_partial_filter: int = 0
    seconds: float = 0.0
    resumed: bool = False


@dataclass
class ScheduleReport:
    levels: list = field(default_factory=list)


def level_path(level_dir, m):
    return Path(level_dir) / f"level_m{m}.txt"


def _pairs_to_array(pairs, L):
    if not pairs:
        return np.zeros((0, 2, L), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64).reshape(len(pairs), 2, L)


def _array_to_pairs(arr):
    L = arr.shape[2]
    return [(tuple(r[:L]), tuple(r[L:])) for r in arr.reshape(len(arr), -1).tolist()]


def _uncompress_level(args):
    """Worker: uncompress and re-match one chunk of pairs."""
    pairs, e, d, v_target = args
    mask = default_filter_mask(v_target)
    cache = {}
    counts = dict(uncompressed=0, psd_survivors=0)

    def member(seq):
        if seq not in cache:
            total = 0
            keep = []
            for block in uncompress_blocks(seq, e, d):
                total += len(block)
                keep.append(block[mask(block)])
            arr = (_sort_rows(np.concatenate(keep)) if keep
                   else np.zeros((0, len(seq) * e), dtype=np.int8))
            counts["uncompressed"] += total
            counts["psd_survivors"] += len(arr)
            cache[seq] = arr
        return cache[seq]

    stats = MatchStats()
    out = []
    for a, b in pairs:
        SA, SB = member(a), member(b)
        ia, ib = match_indices(v_target, SA, SB, stats=stats)
        if len(ia):
            out.append(np.stack((SA[ia], SB[ib]), axis=1).astype(np.int64))
    L = len(pairs[0][0]) * e if pairs else 0
    res = np.concatenate(out) if out else np.zeros((0, 2, L), dtype=np.int64)
    return res, len(cache), counts, stats


def chunk_work(items, workers):
    """Split ``items`` into at most ``workers`` contiguous, order-preserving chunks."""
    if workers < 1:
        raise ContractViolation(f"workers must be >= 1, got {workers}")
    items = list(items)
    n = min(workers, len(items))
    if n == 0:
        return []
    q, r = divmod(len(items), n)
    out, lo = [], 0
    for i in range(n):
        hi = lo + q + (1 if i < r else 0)
        out.append(items[lo:hi])
        lo = hi
    return out


def uncompress_level(pairs, e, d, v_target, workers=1, partial_ops=DEFAULT_PARTIAL_OPS,
                     report=None):
    """One schedule step: ``d*e``-compressed pairs to ``d``-compressed pairs."""
    t0 = time.perf_counter()
    rep = report if report is not None else LevelReport(m=d)
    rep.input_pairs = len(pairs)
    pairs = [(tuple(a), tuple(b)) for a, b in pairs]
    L = (len(pairs[0][0]) * e) if pairs else 0
    if not pairs:
        res = np.zeros((0, 2, L), dtype=np.int64)
    else:
        # several chunks per worker so that uneven pairs balance out
        chunks = chunk_work(pairs, workers * 4 if workers > 1 else 1)
        jobs = [(c, e, d, v_target) for c in chunks]
        if workers > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_uncompress_level, jobs))
        else:
            results = [_uncompress_level(j) for j in jobs]
        parts = []
        for arr, nmem, counts, stats in results:
            parts.append(arr)
            rep.members += nmem
            rep.uncompressed += counts["uncompressed"]
            rep.psd_survivors += counts["psd_survivors"]
            rep.matched += stats.matched
            rep.spurious_rejected += stats.spurious_rejected
        res = np.concatenate(parts)
    res = partial_filter_array(res, partial_ops)
    rep.after_partial_filter = len(res)
    rep.seconds = time.perf_counter() - t0
    return _array_to_pairs(res) if len(res) else []


def run_schedule(pairs, schedule, v_target, filter=None, workers=1,
                 partial_ops=DEFAULT_PARTIAL_OPS, level_dir=None, resume=False,
                 report=None, stop_after=None):
    """Uncompress ``m0``-compressed pairs down to full-length pairs.

    Each step uncompresses both members, filters them individually, and
    re-matches them at the new level, then reduces the pair set by
    ``partial_ops``. With ``level_dir`` each level's pairs are written to
    ``level_m<m>.txt``; with ``resume`` existing level files are reused.
    ``filter`` is an optional extra per-sequence predicate applied to the
    final pairs. ``stop_after`` (an m value) ends the run early after that
    level has been written, which is how interrupted runs are simulated.
    """
    if not isinstance(schedule, UncompressionSchedule):
        schedule = UncompressionSchedule(tuple(schedule))
    schedule.check_length(v_target)
    report = report if report is not None else ScheduleReport()
    fs = schedule.factors
    cur = [(tuple(a), tuple(b)) for a, b in pairs]
    for a, b in cur:
        if len(a) * fs[0] != v_target or len(b) != len(a):
            raise ContractViolation(
                f"pair of length {len(a)} is not a {fs[0]}-compression of length {v_target}")
    start = 0
    if resume and level_dir is not None:
        for i in range(len(fs) - 1, 0, -1):
            path = level_path(level_dir, fs[i])
            if path.exists():
                cur = textio.read_pairs(path)
                start = i
                report.levels.append(LevelReport(m=fs[i], after_partial_filter=len(cur),
                                                 resumed=True))
                log.info("resumed at m=%d with %d pairs", fs[i], len(cur))
                break
    for i in range(start, len(fs) - 1):
        hi, lo = fs[i], fs[i + 1]
        rep = LevelReport(m=lo)
        cur = uncompress_level(cur, hi // lo, lo, v_target, workers, partial_ops, rep)
        report.levels.append(rep)
        log.info("m=%d: %d pairs (%.1fs)", lo, len(cur), rep.seconds)
        if level_dir is not None:
            textio.write_pairs(level_path(level_dir, lo), sorted(cur),
                               header=[f"# v={v_target} m={lo}"])
        if stop_after is not None and lo == stop_after:
            return cur
    if filter is not None:
        cur = [p for p in cur if filter(p[0]) and filter(p[1])]
    return cur
