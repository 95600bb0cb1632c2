"""Analyses of PG(v) pairs and of their compressions.

* ``verify_pg``: exact check of the defining equation.
* half compressions: the (v/2)-compression of a PG(v) is a length-2 pair; it
  is compared against the templates ``([0,a],[0,b])`` ("zero form") and
  ``([(a+b)/2, (a-b)/2], [(a+b)/2, (b-a)/2])`` ("mixed form").
* zero-PAF compressions: d-compressions whose own PAF vanishes at every
  nontrivial shift.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from sympy import factorint

from .compress import compress
from .equiv import compressed_orbit
from .errors import ContractViolation
from .seqcore import is_complementary, paf_matrix, rowsum, sum_of_two_squares

ZERO_FORM = "ZERO_FORM"
MIXED_FORM = "MIXED_FORM"
OTHER = "OTHER"


def verify_pg(pair):
    """Exact check that ``pair`` is a periodic Golay pair."""
    A, B = tuple(pair[0]), tuple(pair[1])
    v = len(A)
    if v == 0 or len(B) != v:
        return False
    if any(x not in (-1, 1) for x in A + B):
        return False
    if not is_complementary(A, B, v):
        return False
    # redundant: rowsums of a PG(v) solve a^2 + b^2 = 2v
    assert rowsum(A) ** 2 + rowsum(B) ** 2 == 2 * v
    return True


def verify_pairs(pairs):
    pairs = list(pairs)
    return sum(verify_pg(p) for p in pairs), len(pairs)


def half_templates(a, b):
    """The zero-form and mixed-form templates for rowsums ``(a, b)``."""
    zero = ((0, a), (0, b))
    mixed = (((a + b) // 2, (a - b) // 2), ((a + b) // 2, (b - a) // 2))
    return zero, mixed


@dataclass(frozen=True)
class HalfCompressionForm:
    """Classification of a length-2 compressed pair.

    ``forms`` holds every template the pair is equivalent to; when
    ``|a| == |b|`` the two templates coincide and both are listed. ``tag`` is
    the mixed form if present, else the zero form, else ``OTHER``.
    """

    tag: str
    witness: tuple
    forms: frozenset = frozenset()
    diagnostic: str = ""


def classify_half_compression(pair, v=None):
    """Classify a (v/2)-compression up to the induced length-2 symmetries."""
    A, B = tuple(pair[0]), tuple(pair[1])
    if len(A) != 2 or len(B) != 2:
        raise ContractViolation(f"expected a length-2 compressed pair, got length {len(A)}")
    a, b = abs(sum(A)), abs(sum(B))
    witness = (A, B)
    if v is not None and a * a + b * b != 2 * v:
        return HalfCompressionForm(OTHER, witness, frozenset(),
                                   f"rowsums ({a}, {b}) do not solve a^2 + b^2 = {2 * v}")
    if (a + b) % 2:
        return HalfCompressionForm(OTHER, witness, frozenset(), "rowsums of mixed parity")
    orbit = compressed_orbit(witness)
    zero, mixed = half_templates(a, b)
    forms = frozenset(name for name, t in ((ZERO_FORM, zero), (MIXED_FORM, mixed)) if t in orbit)
    if MIXED_FORM in forms:
        tag = MIXED_FORM
    elif ZERO_FORM in forms:
        tag = ZERO_FORM
    else:
        tag = OTHER
    return HalfCompressionForm(tag, witness, forms)


def half_compression(pair):
    v = len(pair[0])
    if v % 2:
        raise ContractViolation(f"half compression needs even length, got {v}")
    return compress(pair[0], v // 2), compress(pair[1], v // 2)


def form_counts(pairs):
    """Per ``(a, b)`` rowsum decomposition, how many pairs have each form.

    Returns ``{(a, b): Counter}`` over the keys MIXED_FORM, ZERO_FORM, OTHER.
    """
    out = {}
    for p in pairs:
        v = len(p[0])
        h = half_compression(p)
        res = classify_half_compression(h, v)
        key = tuple(sorted((abs(rowsum(p[0])), abs(rowsum(p[1])))))
        c = out.setdefault(key, Counter())
        for f in res.forms or {OTHER}:
            c[f] += 1
    return out


def form_report(v, pairs):
    """Lines ``v (a,b) mixed zero other``, one per rowsum decomposition of v."""
    counts = form_counts(pairs)
    lines = ["# v (a,b) mixed zero other"]
    for a, b in sum_of_two_squares(v):
        c = counts.get((a, b), Counter())
        lines.append(f"{v} ({a},{b}) {c[MIXED_FORM]} {c[ZERO_FORM]} {c[OTHER]}")
    return lines


def check_lemma_odd_half(v):
    """True iff v/2 is odd, in which case the zero form cannot occur."""
    if v % 2:
        raise ContractViolation(f"v must be even, got {v}")
    return (v // 2) % 2 == 1


def check_theorem_extended(v):
    """True iff v/2 has no prime 4m+1 factor, or exactly one to the first power."""
    if v % 2:
        raise ContractViolation(f"v must be even, got {v}")
    f = factorint(v // 2)
    ones = [e for p, e in f.items() if p % 4 == 1]
    return not ones or ones == [1]


def zero_paf_mask(arr):
    """Rows whose PAF vanishes at every nontrivial shift up to L/2."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.shape[1] < 2:
        return np.ones(len(arr), dtype=bool)
    return ~paf_matrix(arr)[:, 1:].any(axis=1)


def zero_paf_scan(pairs, v, d):
    """d-compressions of the given PG(v) pairs with all-zero PAF (both members)."""
    if d < 1 or v % d:
        raise ContractViolation(f"{d} does not divide {v}")
    pairs = list(pairs)
    if not pairs:
        return set()
    P = np.asarray(pairs, dtype=np.int64)
    if P.shape[2] != v:
        raise ContractViolation(f"pairs have length {P.shape[2]}, expected {v}")
    L = v // d
    C = P.reshape(len(P), 2, d, L).sum(axis=2)
    ok = zero_paf_mask(C[:, 0]) & zero_paf_mask(C[:, 1])
    return {(tuple(a), tuple(b)) for a, b in C[ok].tolist()}


def same_compressed_class(p, q):
    """Equivalence of two compressed pairs under the induced symmetries."""
    q = (tuple(q[0]), tuple(q[1]))
    return q in compressed_orbit(p)


def heuristic_seed(v, d):
    """Templates ``([0,...,0,a],[0,...,0,b])`` of length v/d, both orders of (a, b).

    Templates whose entries are not in the d-compression alphabet are skipped.
    """
    if d < 1 or v % d:
        raise ContractViolation(f"{d} does not divide {v}")
    L = v // d
    out = []
    for a, b in sum_of_two_squares(v):
        for x, y in ((a, b), (b, a)):
            p = ((0,) * (L - 1) + (x,), (0,) * (L - 1) + (y,))
            if any(abs(e) > d or (e - d) % 2 for e in p[0] + p[1]):
                continue
            if p not in out:
                out.append(p)
    return out
