"""Sequence arithmetic: periodic autocorrelation, DFT/PSD and rowsum equations.

Sequences are plain tuples of ints (or 1-d integer arrays). A length-L sequence
that is the m-compression of a length-v sequence has entries in
{-m, -m+2, ..., m}; the full length is recovered as ``m * L``.
Batch helpers operate on 2-d integer arrays with one sequence per row.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .errors import ContractViolation

# absolute tolerance for PSD comparisons
PSD_TOL = 1e-6

Sequence = tuple  # tuple[int, ...]
SequencePair = tuple  # tuple[Sequence, Sequence]


class RowsumDecomposition(NamedTuple):
    a: int
    b: int


def check_sequence(entries, m=1):
    """Validate the alphabet invariant of an m-compression; return a tuple."""
    seq = tuple(int(x) for x in entries)
    if len(seq) < 1:
        raise ContractViolation("sequence must be non-empty")
    if m < 1:
        raise ContractViolation(f"compression factor must be positive, got {m}")
    for x in seq:
        if abs(x) > m or (x - m) % 2:
            raise ContractViolation(f"entry {x} is not in the alphabet of a {m}-compression")
    return seq


def check_pair(pair, m=1):
    a, b = pair
    a, b = check_sequence(a, m), check_sequence(b, m)
    if len(a) != len(b):
        raise ContractViolation(f"pair members differ in length ({len(a)} != {len(b)})")
    return a, b


def rowsum(seq):
    return int(sum(int(x) for x in seq))


def paf(seq, s):
    """Periodic autocorrelation of ``seq`` at shift ``s`` (exact)."""
    v = len(seq)
    if not 0 <= s < v:
        raise ContractViolation(f"shift {s} out of range for length {v}")
    return sum(int(seq[k]) * int(seq[(k + s) % v]) for k in range(v))


def paf_vector(seq):
    """All PAF values ``[paf(seq, 0), ..., paf(seq, v-1)]`` as Python ints."""
    a = np.asarray(seq, dtype=np.int64)
    return [int(a @ np.roll(a, -s)) for s in range(len(a))]


def paf_matrix(arr, shifts=None):
    """Exact PAF values for every row of a 2-d array.

    Returns an int64 array of shape ``(n, len(shifts))``; ``shifts`` defaults
    to ``0 ... L//2`` which determines the full PAF vector by symmetry.
    """
    x = np.asarray(arr, dtype=np.int64)
    if x.ndim != 2:
        raise ContractViolation("paf_matrix expects a 2-d array")
    L = x.shape[1]
    if shifts is None:
        shifts = range(L // 2 + 1)
    out = np.empty((x.shape[0], len(shifts)), dtype=np.int64)
    for j, s in enumerate(shifts):
        out[:, j] = (x * np.roll(x, -s, axis=1)).sum(axis=1)
    return out


def dft_naive(seq):
    """O(v^2) DFT using exact trigonometry; reference for the FFT path."""
    v = len(seq)
    return [
        sum(int(seq[k]) * cmath.exp(2j * math.pi * k * s / v) for k in range(v))
        for s in range(v)
    ]


def psd_naive(seq):
    return [abs(z) ** 2 for z in dft_naive(seq)]


def psd_matrix(arr):
    """PSD values at shifts ``0 ... L//2`` for every row of a 2-d array."""
    x = np.asarray(arr, dtype=np.float64)
    if x.ndim != 2:
        raise ContractViolation("psd_matrix expects a 2-d array")
    # conjugation only changes the sign of the imaginary part, so the
    # e^{+2 pi i k s / v} convention gives the same magnitudes as rfft
    f = np.fft.rfft(x, axis=1)
    return f.real ** 2 + f.imag ** 2


def psd_vector(seq):
    """PSD values ``[PSD(seq, 0), ..., PSD(seq, v//2)]`` as a float array."""
    return psd_matrix(np.asarray(seq)[None, :])[0]


def psd_filter_mask(arr, v_target, tol=PSD_TOL):
    """Boolean mask of rows whose PSD never exceeds ``2 * v_target``."""
    arr = np.asarray(arr)
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return (psd_matrix(arr) <= 2 * v_target + tol).all(axis=1)


def psd_filter(seq, v_target):
    """True iff every PSD value of ``seq`` is at most ``2 * v_target``."""
    if v_target % len(seq):
        raise ContractViolation(
            f"length {len(seq)} does not divide the target length {v_target}")
    return bool(psd_filter_mask(np.asarray(seq)[None, :], v_target)[0])


def allowed_half_squares(v):
    """Squares that PSD(A, v/2) can take for a member of a PG(v)."""
    out = set()
    for a, b in sum_of_two_squares(v):
        out.update((a * a, b * b))
    return out


def half_square_mask(arr, allowed_squares, tol=PSD_TOL):
    arr = np.asarray(arr)
    L = arr.shape[1]
    if L % 2:
        raise ContractViolation(f"half-shift PSD needs an even length, got {L}")
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    half = psd_matrix(arr)[:, L // 2]
    r = np.rint(half)
    ok = np.abs(half - r) <= tol
    allowed = np.fromiter(sorted(allowed_squares), dtype=np.float64)
    return ok & np.isin(r, allowed)


def psd_half_square_filter(seq, v_target, allowed_squares):
    """True iff PSD(seq, len/2) rounds to one of ``allowed_squares``.

    PSD at the half shift of an m-compression equals PSD(A, v/2) of the full
    sequence, so the same square set applies at every compression level.
    """
    return bool(half_square_mask(np.asarray(seq)[None, :], allowed_squares)[0])


def psd_quarter_is_integer(seq, tol=PSD_TOL):
    """Check that PSD(seq, len/4) is an integer (verification only)."""
    L = len(seq)
    if L % 4:
        raise ContractViolation(f"quarter-shift PSD needs length divisible by 4, got {L}")
    p = psd_vector(seq)[L // 4]
    return abs(p - round(p)) <= tol


def sum_of_two_squares(v):
    """All ``(a, b)`` with ``0 <= a <= b`` and ``a^2 + b^2 == 2v``."""
    if v < 2 or v % 2:
        raise ContractViolation(f"length must be even and at least 2, got {v}")
    n = 2 * v
    out = []
    for a in range(math.isqrt(n // 2) + 1):
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2 and a <= b:
            out.append(RowsumDecomposition(a, b))
    return out


def is_complementary(a, b, v_target):
    """Exact check that PAF(a) + PAF(b) equals ``[2v, 0, ..., 0]``.

    For m = 1 this is the defining PG(v) equation; for compressions it is the
    condition every compression of a PG(v) satisfies.
    """
    x = np.asarray(a, dtype=np.int64)
    y = np.asarray(b, dtype=np.int64)
    tot = paf_matrix(np.stack([x, y])).sum(axis=0)
    return tot[0] == 2 * v_target and not tot[1:].any()
