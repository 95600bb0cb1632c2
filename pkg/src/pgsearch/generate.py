"""Candidate generation over a compression alphabet.

Three strategies produce sequences of length ``d`` over ``alphabet(m)``:

* ``partition`` - every permutation of every multiset of letters whose sum is a
  target rowsum, in lexicographic order;
* ``orderly`` - rotation-minimal sequences only; prefixes are pruned while
  they cannot extend to a rotation minimum (up to ``orderly_depth``), the
  remaining positions are enumerated freely and filtered at the end;
* ``hybrid`` - orderly pruning on the first ``orderly_depth`` positions, then
  only completions that can still reach a target rowsum.

Internally everything is produced as lexicographically ordered blocks of an
int8 array (one sequence per row); the ``generate_*`` functions stream tuples.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ContractViolation

STRATEGIES = ("partition", "orderly", "hybrid")

# largest completion table materialised at once
BLOCK_ROWS = 1 << 18


def alphabet(m):
    if m < 1:
        raise ContractViolation(f"compression factor must be positive, got {m}")
    return list(range(-m, m + 1, 2))


def rowsum_feasible(total, r, m):
    """Can ``r`` letters of ``alphabet(m)`` sum to ``total``?"""
    return abs(total) <= r * m and (total - r * m) % 2 == 0


@dataclass(frozen=True)
class GenerationSpec:
    d: int
    m: int
    target_rowsums: frozenset
    strategy: str = "hybrid"
    orderly_depth: int | None = field(default=None)

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ContractViolation(f"need d >= 1 and m >= 1, got d={self.d}, m={self.m}")
        object.__setattr__(self, "target_rowsums", frozenset(int(t) for t in self.target_rowsums))
        for t in self.target_rowsums:
            if not rowsum_feasible(t, self.d, self.m):
                raise ContractViolation(
                    f"rowsum {t} is infeasible for d={self.d}, m={self.m}")
        if self.strategy not in STRATEGIES:
            raise ContractViolation(f"unknown strategy {self.strategy!r}")
        if self.orderly_depth is None:
            object.__setattr__(self, "orderly_depth", self.d // 2)
        elif self.orderly_depth < 0:
            raise ContractViolation("orderly_depth must be non-negative")

    @classmethod
    def all_rowsums(cls, d, m, **kw):
        ts = frozenset(t for t in range(-d * m, d * m + 1) if rowsum_feasible(t, d, m))
        return cls(d, m, ts, **kw)


def partitions(rowsum, d, m):
    """All multisets of ``d`` letters from ``alphabet(m)`` summing to ``rowsum``.

    Returned as a list of ``Counter`` objects mapping letter to multiplicity.
    """
    letters = alphabet(m)
    out = []

    def rec(i, left, total, counts):
        if i == len(letters) - 1:
            x = letters[i]
            if left * x == total:
                c = dict(counts)
                if left:
                    c[x] = left
                out.append(Counter(c))
            return
        x = letters[i]
        for k in range(left + 1):
            rest = total - k * x
            # the remaining letters are all larger than x
            lo, hi = (left - k) * letters[i + 1], (left - k) * m
            if lo <= rest <= hi:
                if k:
                    counts[x] = k
                rec(i + 1, left - k, rest, counts)
                counts.pop(x, None)

    if rowsum_feasible(rowsum, d, m):
        rec(0, d, rowsum, {})
    return out


def is_lex_min_extension(prefix, d):
    """Sound test that ``prefix`` may extend to a rotation-minimal sequence.

    Returns False when some rotation start inside the prefix already compares
    strictly smaller than the prefix itself. At full length the test is exact.
    """
    p = tuple(prefix)
    k = len(p)
    if k > d:
        raise ContractViolation(f"prefix of length {k} exceeds d={d}")
    if k == d:
        return all(p[j:] + p[:j] >= p for j in range(1, d))
    for j in range(1, k):
        if p[j:] < p[: k - j]:
            return False
    return True


@lru_cache(maxsize=None)
def _count(r, totals, m):
    if r == 0:
        return 1 if 0 in totals else 0
    n = 0
    for x in alphabet(m):
        sub = frozenset(t - x for t in totals if rowsum_feasible(t - x, r - 1, m))
        if sub:
            n += _count(r - 1, sub, m)
    return n


@lru_cache(maxsize=4096)
def _table(r, totals, m):
    """All length-r sequences over alphabet(m) with sum in ``totals``, lex order."""
    if r == 0:
        return np.zeros((1 if 0 in totals else 0, 0), dtype=np.int8)
    parts = []
    for x in alphabet(m):
        sub = frozenset(t - x for t in totals if rowsum_feasible(t - x, r - 1, m))
        if not sub:
            continue
        tail = _table(r - 1, sub, m)
        if len(tail):
            head = np.full((len(tail), 1), x, dtype=np.int8)
            parts.append(np.hstack((head, tail)))
    out = np.concatenate(parts) if parts else np.zeros((0, r), dtype=np.int8)
    out.flags.writeable = False
    return out


def _all_totals(r, m):
    return frozenset(range(-r * m, r * m + 1, 2))


def _blocks(prefix, psum, r, m, totals):
    """Yield blocks of ``prefix`` + every completion with sum in ``totals``."""
    totals = frozenset(t for t in totals if rowsum_feasible(t, r, m))
    if not totals:
        return
    if _count(r, totals, m) <= BLOCK_ROWS or r == 0:
        comp = _table(r, totals, m)
        head = np.broadcast_to(np.asarray(prefix, dtype=np.int8), (len(comp), len(prefix)))
        yield np.hstack((head, comp))
        return
    for x in alphabet(m):
        sub = frozenset(t - x for t in totals)
        yield from _blocks(prefix + (x,), psum + x, r - 1, m, sub)


def _packable(d, m):
    return (m + 1) ** d < 2 ** 62


def _codes(block, m):
    """Base-(m+1) codes of the rows of ``block``; numeric order = lex order."""
    x = np.asarray(block)
    base = m + 1
    digits = (x.astype(np.int64) + m) // 2
    return digits @ (base ** np.arange(x.shape[1] - 1, -1, -1, dtype=np.int64))


def _rotation_min_codes(codes, base, d, first=1):
    """Mask of codes that are not larger than any of their rotations.

    Rotations starting at ``first`` onwards are tried first; with an orderly
    prefix of length ``first`` those reject most rows early.
    """
    keep = np.arange(len(codes))
    c = codes
    first = min(max(first, 1), d)
    for r in [*range(first, d), *range(1, first)]:
        hi = base ** (d - r)
        ok = c <= (c % hi) * base ** r + c // hi
        if not ok.all():
            keep, c = keep[ok], c[ok]
        if not len(c):
            break
    mask = np.zeros(len(codes), dtype=bool)
    mask[keep] = True
    return mask


def rotation_min_mask(block, m):
    """Rows that are the lexicographic minimum of their rotation class."""
    x = np.asarray(block)
    n, d = x.shape
    if n == 0 or d <= 1:
        return np.ones(n, dtype=bool)
    if _packable(d, m):
        return _rotation_min_codes(_codes(x, m), m + 1, d)
    mask = np.ones(n, dtype=bool)
    for r in range(1, d):
        diff = np.roll(x, -r, axis=1).astype(np.int16) - x
        nz = diff != 0
        first = nz.argmax(axis=1)
        smaller = nz.any(axis=1) & (diff[np.arange(n), first] < 0)
        mask &= ~smaller
    return mask


@lru_cache(maxsize=256)
def _table_codes(r, totals, m):
    t = _table(r, totals, m)
    codes = _codes(t, m) if r else np.zeros(len(t), dtype=np.int64)
    sums = t.sum(axis=1, dtype=np.int64)
    codes.flags.writeable = False
    sums.flags.writeable = False
    return codes, sums


def _prenecklace_prefixes(h, d, m, targets=None):
    """Lexicographically ordered prefixes of length ``h`` passing the orderly test.

    Uses the incremental form of ``is_lex_min_extension``: with ``q`` the
    length of the longest Lyndon prefix, the next letter may not be smaller
    than the letter ``q`` positions back. When ``targets`` is given, prefixes
    whose partial sum can no longer reach a target are pruned as well.
    """
    letters = alphabet(m)
    prefix = []

    def rec(t, q, psum):
        if targets is not None and not any(
                rowsum_feasible(tt - psum, d - t, m) for tt in targets):
            return
        if t == h:
            yield tuple(prefix), psum
            return
        lo = 0 if t == 0 else letters.index(prefix[t - q])
        for i in range(lo, len(letters)):
            x = letters[i]
            prefix.append(x)
            nq = 1 if t == 0 else (q if i == lo else t + 1)
            yield from rec(t + 1, nq, psum + x)
            prefix.pop()

    yield from rec(0, 1, 0)


def _orderly_packed(prefix, psum, r, m, totals, targets, hybrid):
    """Rotation-minimal completions of one prefix, working on packed codes."""
    d = len(prefix) + r
    base = m + 1
    comp = _table(r, totals, m)
    ccodes, csums = _table_codes(r, totals, m)
    if not hybrid:
        ok = np.isin(csums + psum, list(targets))
        comp, ccodes = comp[ok], ccodes[ok]
    pcode = 0
    for x in prefix:
        pcode = pcode * base + (x + m) // 2
    codes = pcode * base ** r + ccodes
    keep = _rotation_min_codes(codes, base, d, first=len(prefix))
    if not keep.any():
        return None
    comp = comp[keep]
    head = np.broadcast_to(np.asarray(prefix, dtype=np.int8), (len(comp), len(prefix)))
    return np.hstack((head, comp))


def iter_blocks(spec):
    """Yield lexicographically ordered int8 blocks for ``spec``."""
    d, m, targets = spec.d, spec.m, spec.target_rowsums
    if spec.strategy == "partition":
        yield from _blocks((), 0, d, m, targets)
        return
    h = min(spec.orderly_depth, d)
    r = d - h
    hybrid = spec.strategy == "hybrid"
    for prefix, psum in _prenecklace_prefixes(h, d, m, targets if hybrid else None):
        if hybrid:
            totals = frozenset(t - psum for t in targets if rowsum_feasible(t - psum, r, m))
        else:
            totals = _all_totals(r, m)
        if _packable(d, m) and _count(r, totals, m) <= BLOCK_ROWS:
            block = _orderly_packed(prefix, psum, r, m, totals, targets, hybrid)
            if block is not None:
                yield block
            continue
        for block in _blocks(prefix, psum, r, m, totals):
            if not hybrid:
                block = block[np.isin(block.sum(axis=1, dtype=np.int64), list(targets))]
            block = block[rotation_min_mask(block, m)]
            if len(block):
                yield block


def generate_array(spec):
    blocks = list(iter_blocks(spec))
    if not blocks:
        return np.zeros((0, spec.d), dtype=np.int8)
    return np.concatenate(blocks)


def _stream(spec):
    for block in iter_blocks(spec):
        for row in block.tolist():
            yield tuple(row)


def _with_strategy(spec, name):
    if spec.strategy != name:
        raise ContractViolation(f"spec strategy is {spec.strategy!r}, expected {name!r}")
    return _stream(spec)


def generate_partition(spec):
    return _with_strategy(spec, "partition")


def generate_orderly(spec):
    return _with_strategy(spec, "orderly")


def generate_hybrid(spec):
    return _with_strategy(spec, "hybrid")


def generate(spec):
    return _stream(spec)


def brute_force_sequences(d, m):
    """Every length-d sequence over alphabet(m) in lex order (test oracle)."""
    return list(itertools.product(alphabet(m), repeat=d))
