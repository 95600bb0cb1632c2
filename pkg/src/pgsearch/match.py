"""Pairing of candidate lists by complementary PSD vectors.

Candidates A and B can form a pair only if PSD(A, s) = 2v - PSD(B, s) at every
shift. Both lists are keyed by rounded PSD values (A by PSD(A), B by
2v - PSD(B)), sorted, and merge-scanned; equal-key blocks are crossed and every
candidate pair is confirmed with exact integer PAF sums.

A PSD value within ``PSD_TOL`` of a half-integer could round differently on
the two sides, so such sequences are kept out of the keyed scan and compared
against the whole other list instead.
"""

from __future__ import annotations

import heapq
import os
import pickle
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .seqcore import PSD_TOL, paf_matrix, psd_matrix

# default cap on one equal-key cross product
MAX_BLOCK = 10_000_000


class BlockTooLarge(ContractViolation):
    pass


@dataclass
class MatchStats:
    candidates: int = 0
    matched: int = 0
    spurious_rejected: int = 0
    comparisons: int = 0
    ambiguous: int = 0

    def report_line(self):
        return f"# matched={self.matched} spurious_rejected={self.spurious_rejected}"


def psd_keys(arr, v_target, complement=False):
    """Rounded PSD keys and a mask of rows too close to a rounding boundary."""
    p = psd_matrix(arr)
    if complement:
        p = 2 * v_target - p
    frac = p - np.floor(p)
    ambiguous = (np.abs(frac - 0.5) <= PSD_TOL).any(axis=1)
    return np.rint(p).astype(np.int64), ambiguous


def _as_array(seqs):
    if isinstance(seqs, np.ndarray):
        return seqs
    seqs = list(seqs)
    if not seqs:
        return np.zeros((0, 0), dtype=np.int64)
    return np.asarray(seqs, dtype=np.int64)


def _check_lengths(A, B):
    if len(A) and len(B) and A.shape[1] != B.shape[1]:
        raise ContractViolation(
            f"candidate lists have different lengths ({A.shape[1]} != {B.shape[1]})")


def _verify(A, B, ia, ib, v_target):
    """Keep the index pairs whose PAF sums are exactly [2v, 0, ..., 0]."""
    if len(ia) == 0:
        return ia, ib
    L = A.shape[1]
    target = np.zeros(L // 2 + 1, dtype=np.int64)
    target[0] = 2 * v_target
    ok = np.ones(len(ia), dtype=bool)
    step = 1 << 16
    pa, pb = paf_matrix(A), paf_matrix(B)
    for lo in range(0, len(ia), step):
        sl = slice(lo, lo + step)
        ok[sl] = ((pa[ia[sl]] + pb[ib[sl]]) == target).all(axis=1)
    return ia[ok], ib[ok]


def _brute_pairs(A, B, rows_a, rows_b, v_target):
    """Exact all-pairs check between subsets of rows (ambiguous fallback)."""
    if len(rows_a) == 0 or len(rows_b) == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    ia = np.repeat(rows_a, len(rows_b))
    ib = np.tile(rows_b, len(rows_a))
    return _verify(A, B, ia, ib, v_target)


def _order_pairs(A, B, ia, ib):
    if len(ia) == 0:
        return ia, ib
    keys = np.hstack((A[ia], B[ib]))
    order = np.lexsort(keys.T[::-1])
    return ia[order], ib[order]


def _dedupe(ia, ib):
    if len(ia) == 0:
        return ia, ib
    both = np.unique(np.stack((ia, ib), axis=1), axis=0)
    return both[:, 0], both[:, 1]


def match_indices(v_target, A, B, max_block=MAX_BLOCK, stats=None):
    """Vectorised sort-merge join; returns verified ``(ia, ib)`` row indices.

    Same output as :func:`match` but works on arrays and never leaves numpy
    for the scan. Pairs are ordered lexicographically by ``A[ia] ++ B[ib]``.
    """
    A, B = _as_array(A), _as_array(B)
    stats = stats if stats is not None else MatchStats()
    empty = np.zeros(0, np.int64)
    if len(A) == 0 or len(B) == 0:
        return empty, empty
    _check_lengths(A, B)
    ka, amb_a = psd_keys(A, v_target)
    kb, amb_b = psd_keys(B, v_target, complement=True)
    stats.ambiguous += int(amb_a.sum() + amb_b.sum())
    ra, rb = np.flatnonzero(~amb_a), np.flatnonzero(~amb_b)

    ia_parts, ib_parts = [], []
    if len(ra) and len(rb):
        _, inv = np.unique(np.vstack((ka[ra], kb[rb])), axis=0, return_inverse=True)
        inv = inv.ravel()
        ida, idb = inv[: len(ra)], inv[len(ra):]
        nkeys = int(inv.max()) + 1
        ca = np.bincount(ida, minlength=nkeys)
        cb = np.bincount(idb, minlength=nkeys)
        oa = ra[np.argsort(ida, kind="stable")]
        ob = rb[np.argsort(idb, kind="stable")]
        sa = np.concatenate(([0], np.cumsum(ca)))
        sb = np.concatenate(([0], np.cumsum(cb)))
        for u in np.flatnonzero((ca > 0) & (cb > 0)):
            na, nb = int(ca[u]), int(cb[u])
            if na * nb > max_block:
                raise BlockTooLarge(f"equal-key block of {na} x {nb} exceeds max_block={max_block}")
            blk_a = oa[sa[u]: sa[u] + na]
            blk_b = ob[sb[u]: sb[u] + nb]
            ia_parts.append(np.repeat(blk_a, nb))
            ib_parts.append(np.tile(blk_b, na))
    n_keyed = sum(len(x) for x in ia_parts)

    amb_rows_a, amb_rows_b = np.flatnonzero(amb_a), np.flatnonzero(amb_b)
    xa, xb = _brute_pairs(A, B, amb_rows_a, np.arange(len(B)), v_target)
    ya, yb = _brute_pairs(A, B, ra, amb_rows_b, v_target)

    if ia_parts:
        ia, ib = np.concatenate(ia_parts), np.concatenate(ib_parts)
    else:
        ia, ib = empty, empty
    va, vb = _verify(A, B, ia, ib, v_target)
    stats.candidates += n_keyed
    stats.spurious_rejected += n_keyed - len(va)
    ia = np.concatenate((va, xa, ya))
    ib = np.concatenate((vb, xb, yb))
    ia, ib = _dedupe(ia, ib)
    stats.matched += len(ia)
    return _order_pairs(A, B, ia, ib)


def _scan(ita, itb, stats):
    """Merge-scan two key-sorted iterators of ``(key, seq)``; yield equal blocks."""
    a = next(ita, None)
    b = next(itb, None)
    while a is not None and b is not None:
        stats.comparisons += 1
        if a[0] == b[0]:
            key = a[0]
            ga, gb = [], []
            while a is not None and a[0] == key:
                ga.append(a[1])
                a = next(ita, None)
            while b is not None and b[0] == key:
                gb.append(b[1])
                b = next(itb, None)
            yield ga, gb
        elif a[0] < b[0]:
            a = next(ita, None)
        else:
            b = next(itb, None)


def _keyed(seqs, v_target, complement):
    """Split into (sorted keyed items, ambiguous sequences)."""
    arr = _as_array(seqs)
    if len(arr) == 0:
        return [], []
    keys, amb = psd_keys(arr, v_target, complement)
    rows = arr.tolist()
    items, loose = [], []
    for k, s, bad in zip(keys.tolist(), rows, amb.tolist()):
        if bad:
            loose.append(tuple(s))
        else:
            items.append((tuple(k), tuple(s)))
    items.sort()
    return items, loose


def _sorted_runs(items, chunk_size, tmpdir):
    """Sort ``items`` in chunks spilled to disk; return a merged iterator."""
    paths = []
    buf = []

    def spill():
        buf.sort()
        fd, path = tempfile.mkstemp(dir=tmpdir, suffix=".run")
        with os.fdopen(fd, "wb") as f:
            for it in buf:
                pickle.dump(it, f)
        paths.append(path)
        buf.clear()

    for it in items:
        buf.append(it)
        if len(buf) >= chunk_size:
            spill()
    if buf:
        spill()

    def read(path):
        with open(path, "rb") as f:
            while True:
                try:
                    yield pickle.load(f)
                except EOFError:
                    return

    return heapq.merge(*(read(p) for p in paths))


def _keyed_stream(seqs, v_target, complement, loose, batch=4096):
    buf = []
    for s in seqs:
        buf.append(tuple(s))
        if len(buf) >= batch:
            yield from _keyed_batch(buf, v_target, complement, loose)
            buf = []
    if buf:
        yield from _keyed_batch(buf, v_target, complement, loose)


def _keyed_batch(buf, v_target, complement, loose):
    keys, amb = psd_keys(np.asarray(buf, dtype=np.int64), v_target, complement)
    for k, s, bad in zip(keys.tolist(), buf, amb.tolist()):
        if bad:
            loose.append(s)
        else:
            yield tuple(k), s


def match_with_stats(v_target, omega_a, omega_b, max_block=MAX_BLOCK, chunk_size=None):
    """Sort-and-scan matching; returns ``(pairs, MatchStats)``.

    With ``chunk_size`` set, both keyed lists are sorted externally in runs of
    that many items and merged lazily, so the lists need not fit in memory.
    """
    stats = MatchStats()
    if chunk_size is None:
        items_a, loose_a = _keyed(omega_a, v_target, False)
        items_b, loose_b = _keyed(omega_b, v_target, True)
        ita, itb = iter(items_a), iter(items_b)
        all_a = [s for _, s in items_a] + loose_a
        all_b = [s for _, s in items_b] + loose_b
        tmp = None
    else:
        omega_a, omega_b = list(omega_a), list(omega_b)
        loose_a, loose_b = [], []
        tmp = tempfile.TemporaryDirectory(prefix="pgmatch-")
        ita = _sorted_runs(_keyed_stream(omega_a, v_target, False, loose_a), chunk_size, tmp.name)
        itb = _sorted_runs(_keyed_stream(omega_b, v_target, True, loose_b), chunk_size, tmp.name)
        all_a = [tuple(s) for s in omega_a]
        all_b = [tuple(s) for s in omega_b]
    try:
        found = []
        for ga, gb in _scan(ita, itb, stats):
            if len(ga) * len(gb) > max_block:
                raise BlockTooLarge(
                    f"equal-key block of {len(ga)} x {len(gb)} exceeds max_block={max_block}")
            for a in ga:
                for b in gb:
                    found.append((a, b))
    finally:
        if tmp is not None:
            tmp.cleanup()
    stats.candidates = len(found)
    stats.ambiguous = len(loose_a) + len(loose_b)
    loose_set = set(loose_a)
    extra = [(a, b) for a in loose_a for b in all_b]
    extra += [(a, b) for a in all_a if a not in loose_set for b in loose_b]

    out = []
    for group, count_spurious in ((found, True), (extra, False)):
        if not group:
            continue
        A = np.asarray([p[0] for p in group], dtype=np.int64)
        B = np.asarray([p[1] for p in group], dtype=np.int64)
        idx = np.arange(len(group))
        ok, _ = _verify(A, B, idx, idx, v_target)
        if count_spurious:
            stats.spurious_rejected += len(group) - len(ok)
        out.extend(group[i] for i in ok.tolist())
    out = sorted(set(out))
    stats.matched = len(out)
    return out, stats


def match(v_target, omega_a, omega_b, max_block=MAX_BLOCK, chunk_size=None):
    """All verified complementary pairs ``(A, B)`` from the two candidate lists."""
    return match_with_stats(v_target, omega_a, omega_b, max_block, chunk_size)[0]


def match_brute_force(v_target, omega_a, omega_b):
    """All-pairs exact check (test oracle); sorted list of pairs."""
    A, B = _as_array(omega_a), _as_array(omega_b)
    if len(A) == 0 or len(B) == 0:
        return []
    ia, ib = _brute_pairs(A, B, np.arange(len(A)), np.arange(len(B)), v_target)
    return sorted({(tuple(A[i].tolist()), tuple(B[j].tolist())) for i, j in zip(ia, ib)})
