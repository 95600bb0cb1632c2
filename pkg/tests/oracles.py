"""Independent slow reference implementations used only by the tests."""

import cmath
import itertools
import math

import numpy as np


def paf_naive(seq, s):
    v = len(seq)
    return sum(seq[k] * seq[(k + s) % v] for k in range(v))


def psd_from_paf(seq):
    """PSD via the DFT of the PAF vector (Wiener-Khinchin)."""
    v = len(seq)
    pv = [paf_naive(seq, s) for s in range(v)]
    out = []
    for s in range(v // 2 + 1):
        w = cmath.exp(2j * math.pi * s / v)
        out.append(sum(pv[k] * w ** k for k in range(v)).real)
    return out


def compress_naive(seq, m):
    L = len(seq) // m
    return tuple(sum(seq[i + j * L] for j in range(m)) for i in range(L))


def alt_sum_square(seq):
    return sum(x if k % 2 == 0 else -x for k, x in enumerate(seq)) ** 2


def rotation_minima(seqs):
    out = []
    for s in seqs:
        s = tuple(s)
        if all(s[j:] + s[:j] >= s for j in range(len(s))):
            out.append(s)
    return out


def all_pm1(v):
    return list(itertools.product((-1, 1), repeat=v))


def brute_force_pg(v):
    """Every PG(v) by testing all 4^v pairs of +-1 sequences."""
    seqs = np.array(all_pm1(v), dtype=np.int64)
    pafs = np.stack([(seqs * np.roll(seqs, -s, axis=1)).sum(1) for s in range(1, v // 2 + 1)], 1)
    out = []
    for i in range(len(seqs)):
        ok = ~(pafs[i] + pafs).any(axis=1)
        for j in np.flatnonzero(ok):
            out.append((tuple(seqs[i].tolist()), tuple(seqs[j].tolist())))
    return out


def necklace_count(n, k):
    """Number of k-ary necklaces of length n."""
    return sum(_phi(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def _phi(n):
    return sum(1 for i in range(1, n + 1) if math.gcd(i, n) == 1)
