"""Equivalence of sequence pairs: symmetry group, orbits and canonical forms.

Generators acting on a pair ``(A, B)`` of length ``v``:

* ``swap``        ``(B, A)``
* ``shift_a``     ``A_i <- A_{i+1}``
* ``reverse_a``   ``A_i <- A_{v-1-i}``
* ``decimate``    ``A_i <- A_{ki}``, ``B_i <- B_{ki}`` for ``gcd(k, v) == 1``
* ``alt_negate``  ``A_i <- (-1)^i A_i``, ``B_i <- (-1)^i B_i``

A symmetry is stored as a signed index vector of length ``2v``: entry ``i``
equal to ``+-(k+1)`` means position ``i`` of the image (A positions first,
then B) takes ``+-`` entry ``k`` of the flattened input. Applying the
generators to the symbolic identity ``(1..v, v+1..2v)`` yields exactly these
vectors.

For even ``v`` the group factors as ``N . J`` where ``N`` acts on each member
independently (rotation, reversal, negation) and ``J`` = swap x decimation
(mod +-1) x alternating negation. ``N`` is normal, so the lexicographically
least orbit element is found by minimising each member over ``N`` separately
for every ``j`` in ``J`` - ``O(v^2 phi(v))`` work instead of
``O(v^3 phi(v))``.

Pairs compare by the concatenation ``A ++ B``, entries numerically.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from math import gcd

import numpy as np
from sympy import totient

from .errors import ContractViolation

GENERATORS = ("swap", "shift_a", "reverse_a", "decimate", "alt_negate")
PARTIAL_OPS = frozenset({"swap", "shift", "reverse", "negate"})

# rows per vectorised canonicalisation batch
_CHUNK = 2048


def units(v):
    return [k for k in range(1, v) if gcd(k, v) == 1] or [1]


def group_order(v):
    """The formula 32 v^2 phi(v)."""
    return 32 * v * v * int(totient(v))


def apply_op(pair, op, k=None):
    """Apply one generator (or a derived op) to a pair of equal-length sequences.

    Besides the generators this accepts ``shift_b``, ``reverse_b``,
    ``negate_a`` and ``negate_b``. Works on symbolic pairs too: entries only
    move and change sign.
    """
    A, B = tuple(pair[0]), tuple(pair[1])
    v = len(A)
    if len(B) != v:
        raise ContractViolation("pair members differ in length")
    if op == "swap":
        return B, A
    if op == "shift_a":
        return A[1:] + A[:1], B
    if op == "shift_b":
        return A, B[1:] + B[:1]
    if op == "reverse_a":
        return A[::-1], B
    if op == "reverse_b":
        return A, B[::-1]
    if op == "negate_a":
        return tuple(-x for x in A), B
    if op == "negate_b":
        return A, tuple(-x for x in B)
    if op == "alt_negate":
        return (tuple(x if i % 2 == 0 else -x for i, x in enumerate(A)),
                tuple(x if i % 2 == 0 else -x for i, x in enumerate(B)))
    if op == "decimate":
        if k is None or not 1 <= k < max(v, 2) or gcd(k, v) != 1:
            raise ContractViolation(f"decimation factor {k} is not a unit modulo {v}")
        return (tuple(A[(k * i) % v] for i in range(v)),
                tuple(B[(k * i) % v] for i in range(v)))
    raise ContractViolation(f"unknown operation {op!r}")


def generator_list(v):
    gens = [("swap", None), ("shift_a", None), ("reverse_a", None), ("alt_negate", None)]
    gens += [("decimate", k) for k in units(v) if k != 1]
    return gens


def identity_symmetry(v):
    return tuple(range(1, v + 1)), tuple(range(v + 1, 2 * v + 1))


def closure(start, gens, limit=None):
    """Fixed point of repeatedly applying ``gens`` (list of ``(op, k)``).

    With ``limit`` the iteration stops as soon as more than ``limit``
    elements are known; the returned set is then incomplete.
    """
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for op, k in gens:
                q = apply_op(p, op, k)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if limit is not None and len(seen) > limit:
                        return seen
        frontier = nxt
    return seen


def closure_size(v, limit=None):
    """Size of the generator closure on the symbolic identity (capped at limit+1)."""
    return len(closure(identity_symmetry(v), generator_list(v), limit))


def equivalence_class_closure(pair, gens=None):
    """Orbit of a concrete pair by generator iteration (Algorithm-4 style)."""
    a, b = tuple(pair[0]), tuple(pair[1])
    return closure((a, b), gens if gens is not None else generator_list(len(a)))


def _factorized_elements(v):
    """All group elements as signed index rows, enumerated as N x J (even v)."""
    ident = np.arange(1, 2 * v + 1, dtype=np.int32).reshape(1, 2, v)
    idx = np.arange(v)
    alt = np.where(idx % 2 == 0, 1, -1).astype(np.int32)
    joint = []
    for s in (0, 1):
        for k in units(v):
            for e in (0, 1):
                x = ident[:, ::-1] if s else ident
                x = x[:, :, (k * idx) % v]
                if e:
                    x = x * alt
                joint.append(x[0])
    J = np.stack(joint)  # (|J|, 2, v)
    # all rotation / reversal / negation variants of one member: (4v, v) gather+sign
    perms, signs = [], []
    for r in (0, 1):
        for t in range(v):
            base = idx[::-1] if r else idx
            perms.append(np.roll(base, -t))
    perms = np.array(perms)
    perms = np.concatenate((perms, perms))
    signs = np.concatenate((np.ones(2 * v, np.int32), -np.ones(2 * v, np.int32)))
    H = len(perms)
    out = []
    for jrow in J:
        a = jrow[0][perms] * signs[:, None]  # (H, v)
        b = jrow[1][perms] * signs[:, None]
        aa = np.repeat(a, H, axis=0)
        bb = np.tile(b, (H, 1))
        out.append(np.hstack((aa, bb)))
    return np.unique(np.concatenate(out), axis=0)


class SymmetryGroup:
    """The symmetry group for length ``v``, with elements built on demand.

    ``method`` is ``"closure"`` (generator iteration on the symbolic identity),
    ``"factorized"`` (N x J enumeration, even ``v`` only) or ``"auto"``.
    """

    def __init__(self, v, method="auto"):
        if v < 2:
            raise ContractViolation(f"group needs v >= 2, got {v}")
        if method == "auto":
            method = "factorized" if v % 2 == 0 else "closure"
        if method == "factorized" and v % 2:
            raise ContractViolation("factorized enumeration needs even v")
        if method not in ("closure", "factorized"):
            raise ContractViolation(f"unknown method {method!r}")
        self.v = v
        self.method = method
        self._elements = None

    @property
    def elements(self):
        if self._elements is None:
            if self.method == "closure":
                syms = closure(identity_symmetry(self.v), generator_list(self.v))
                arr = np.array(sorted(a + b for a, b in syms), dtype=np.int32)
            else:
                arr = _factorized_elements(self.v)
            arr.flags.writeable = False
            self._elements = arr
        return self._elements

    def __len__(self):
        return len(self.elements)

    def __contains__(self, sym):
        row = np.asarray(sym, dtype=np.int32).ravel()
        return bool((self.elements == row).all(axis=1).any())

    def apply(self, pair, sym):
        return apply_symmetry(sym, pair)


def build_symmetry_group(v, method="auto"):
    return SymmetryGroup(v, method)


def apply_symmetry(sym, pair):
    s = np.asarray(sym).ravel()
    flat = np.concatenate((np.asarray(pair[0]), np.asarray(pair[1])))
    out = np.sign(s) * flat[np.abs(s) - 1]
    v = len(s) // 2
    return tuple(out[:v].tolist()), tuple(out[v:].tolist())


def _pair_array(pairs):
    arr = np.asarray([(tuple(a), tuple(b)) for a, b in pairs], dtype=np.int64)
    if arr.ndim != 3 or arr.shape[1] != 2:
        raise ContractViolation("expected a list of equal-length pairs")
    return arr


def _as_pairs(arr):
    v = arr.shape[2]
    return [(tuple(r[:v]), tuple(r[v:])) for r in arr.reshape(len(arr), -1).tolist()]


def orbit_array(pair, group):
    """All images of ``pair`` under ``group`` as a ``(n, 2v)`` array of distinct rows."""
    flat = np.concatenate((np.asarray(pair[0]), np.asarray(pair[1]))).astype(np.int64)
    els = group.elements
    imgs = np.sign(els) * flat[np.abs(els) - 1]
    return np.unique(imgs, axis=0)


def equivalence_class(pair, group):
    if len(pair[0]) != group.v:
        raise ContractViolation(f"pair length {len(pair[0])} does not match group v={group.v}")
    return set(_as_pairs(orbit_array(pair, group).reshape(-1, 2, group.v)))


# -- lexicographic minimisation -------------------------------------------

def _lexmin_index(V):
    """Index along axis 1 of the lexicographically least row, for each of axis 0.

    ``V`` has shape ``(n, k, L)``. Rows are packed into int64 digits in
    segments so ties are resolved one segment at a time.
    """
    n, k, L = V.shape
    if k == 1:
        return np.zeros(n, dtype=np.int64)
    off = int(np.abs(V).max()) if V.size else 0
    base = 2 * off + 1
    seg = 1
    while base ** (seg + 1) < 2 ** 62 and seg < L:
        seg += 1
    alive = np.ones((n, k), dtype=bool)
    big = np.iinfo(np.int64).max
    for lo in range(0, L, seg):
        part = V[:, :, lo: lo + seg].astype(np.int64) + off
        w = base ** np.arange(part.shape[2] - 1, -1, -1, dtype=np.int64)
        codes = part @ w
        codes = np.where(alive, codes, big)
        alive &= codes == codes.min(axis=1, keepdims=True)
    return alive.argmax(axis=1)


def _lexmin(V):
    return V[np.arange(len(V)), _lexmin_index(V)]


def _variant_perms(L, shift=True, reverse=True):
    idx = np.arange(L)
    bases = [idx, idx[::-1]] if reverse else [idx]
    shifts = range(L) if shift else range(1)
    return np.array([np.roll(b, -t) for b in bases for t in shifts])


def _digit_code(X):
    """Order-preserving digit map for the rows of ``X``; None if codes overflow.

    Returns ``(digits, base, top, step)``: entry ``x`` becomes digit
    ``(x + top*step/2) / step`` and negation acts as ``top - digit``.
    """
    off = int(np.abs(X).max()) if X.size else 0
    if off and not ((X - off) % 2).any():
        step = 2  # all entries share the parity of off
    else:
        step = 1
    top = 2 * off // step
    base = top + 1
    if base < 2 or base ** X.shape[1] >= 2 ** 62:
        return None
    return ((X + off) // step).astype(np.int64), base, top, step


def _member_min_packed(X, shift, reverse, negate):
    n, L = X.shape
    dc = _digit_code(X)
    if dc is None:
        return None
    digits, base, top, step = dc
    w = base ** np.arange(L - 1, -1, -1, dtype=np.int64)
    rows = [digits]
    if reverse:
        rows.append(digits[:, ::-1])
    if negate:
        rows += [top - r for r in rows]
    codes = np.stack([r @ w for r in rows], axis=1)  # (n, variants)
    best = codes.min(axis=1)
    if shift:
        for t in range(1, L):
            hi = base ** (L - t)
            rot = (codes % hi) * base ** t + codes // hi
            best = np.minimum(best, rot.min(axis=1))
    out = np.empty((n, L), dtype=np.int64)
    c = best.copy()
    for i in range(L - 1, -1, -1):
        c, out[:, i] = np.divmod(c, base)
    return (step * out - top * step // 2).astype(X.dtype)


def member_min(X, shift=True, reverse=True, negate=True):
    """Least variant of each row of ``X`` under rotation/reversal/negation."""
    X = np.asarray(X)
    if X.size:
        packed = _member_min_packed(X, shift, reverse, negate)
        if packed is not None:
            return packed
    perms = _variant_perms(X.shape[1], shift, reverse)
    V = X[:, perms]
    if negate:
        V = np.concatenate((V, -V), axis=1)
    return _lexmin(V)


def _joint_images(P):
    """``(n, |J|, 2, v)`` images of pairs under the coset representatives J."""
    n, _, v = P.shape
    idx = np.arange(v)
    alt = np.where(idx % 2 == 0, 1, -1)
    ks = [k for k in units(v) if 2 * k <= v] or [1]
    out = []
    for s in (0, 1):
        Xs = P[:, ::-1] if s else P
        for k in ks:
            Xk = Xs[:, :, (k * idx) % v]
            out.append(Xk)
            out.append(Xk * alt)
    return np.stack(out, axis=1)


def _canonical_chunk(P):
    n, _, v = P.shape
    imgs = _joint_images(P)
    nj = imgs.shape[1]
    a = member_min(imgs[:, :, 0].reshape(n * nj, v))
    b = member_min(imgs[:, :, 1].reshape(n * nj, v))
    cand = np.concatenate((a, b), axis=1).reshape(n, nj, 2 * v)
    return _lexmin(cand).reshape(n, 2, v)


def _canonical_brute(P, group):
    out = np.empty_like(P)
    for i, p in enumerate(P):
        orb = orbit_array((p[0], p[1]), group)
        out[i] = orb[0].reshape(2, -1)  # np.unique sorts rows lexicographically
    return out


def canonical_forms_array(P, group=None):
    """Canonical form of every pair in a ``(n, 2, v)`` array."""
    P = np.asarray(P, dtype=np.int64)
    if len(P) == 0:
        return P
    v = P.shape[2]
    if group is not None and group.v != v:
        raise ContractViolation(f"pair length {v} does not match group v={group.v}")
    if v % 2:
        return _canonical_brute(P, group or SymmetryGroup(v))
    parts = [_canonical_chunk(P[lo: lo + _CHUNK]) for lo in range(0, len(P), _CHUNK)]
    return np.concatenate(parts)


def canonical_form(pair, group=None):
    """Lexicographically least member of the equivalence class of ``pair``."""
    P = _pair_array([pair])
    return _as_pairs(canonical_forms_array(P, group))[0]


def canonical_form_bruteforce(pair, group):
    """Orbit minimum via explicit application of every group element."""
    orb = orbit_array(pair, group)
    return _as_pairs(orb[:1].reshape(1, 2, group.v))[0]


def _unique_sorted_pairs(arr):
    if len(arr) == 0:
        return arr
    flat = np.unique(arr.reshape(len(arr), -1), axis=0)
    return flat.reshape(len(flat), 2, -1)


def filter_canonical_array(P, group=None, workers=1):
    P = np.asarray(P, dtype=np.int64)
    if len(P) == 0:
        return P
    if workers > 1 and len(P) > _CHUNK:
        chunks = [P[lo: lo + _CHUNK] for lo in range(0, len(P), _CHUNK)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(canonical_forms_array, chunks))
        C = np.concatenate(parts)
    else:
        C = canonical_forms_array(P, group)
    return _unique_sorted_pairs(C)


def filter_canonical(pairs, group=None, workers=1):
    """One canonical representative per class present in ``pairs`` (sorted)."""
    pairs = list(pairs)
    if not pairs:
        return []
    return _as_pairs(filter_canonical_array(_pair_array(pairs), group, workers))


def filter_subtractive(pairs, group):
    """Keep the first member of each class in input order, drop the rest."""
    out = []
    removed = set()
    for p in pairs:
        p = (tuple(p[0]), tuple(p[1]))
        if p in removed:
            continue
        out.append(p)
        removed |= equivalence_class(p, group)
    return out


def partial_canonical_array(P, ops):
    """Canonical forms under the subgroup generated by ``ops``.

    ``shift``, ``reverse`` and ``negate`` act on either member independently;
    ``swap`` exchanges the members. All four commute with compression.
    """
    ops = frozenset(ops)
    bad = ops - PARTIAL_OPS
    if bad:
        raise ContractViolation(f"unsupported partial-filter ops {sorted(bad)}")
    P = np.asarray(P, dtype=np.int64)
    if len(P) == 0 or not ops:
        return P
    kw = dict(shift="shift" in ops, reverse="reverse" in ops, negate="negate" in ops)
    parts = []
    for lo in range(0, len(P), _CHUNK):
        C = P[lo: lo + _CHUNK]
        n, _, L = C.shape
        a = member_min(C[:, 0], **kw) if (kw["shift"] or kw["reverse"] or kw["negate"]) else C[:, 0]
        b = member_min(C[:, 1], **kw) if (kw["shift"] or kw["reverse"] or kw["negate"]) else C[:, 1]
        if "swap" in ops:
            cand = np.stack((np.concatenate((a, b), 1), np.concatenate((b, a), 1)), axis=1)
            parts.append(_lexmin(cand).reshape(n, 2, L))
        else:
            parts.append(np.stack((a, b), axis=1))
    return np.concatenate(parts)


def partial_filter_array(P, ops):
    P = np.asarray(P, dtype=np.int64)
    if not frozenset(ops):
        return _unique_sorted_pairs(P) if len(P) else P
    return _unique_sorted_pairs(partial_canonical_array(P, ops))


def partial_filter(pairs, ops):
    """One representative per orbit of the subgroup generated by ``ops``."""
    pairs = list(pairs)
    if not pairs:
        return []
    return _as_pairs(partial_filter_array(_pair_array(pairs), ops))


def compressed_generators(L):
    """Generators of the symmetry group induced on length-L compressions.

    Shift, reversal, negation, swap and decimation always descend to a
    compression; alternating negation only when the compressed length is even.
    """
    gens = [("swap", None), ("shift_a", None), ("reverse_a", None), ("negate_a", None)]
    gens += [("decimate", k) for k in units(L) if k != 1]
    if L % 2 == 0:
        gens.append(("alt_negate", None))
    return gens


def compressed_orbit(pair):
    a, b = tuple(pair[0]), tuple(pair[1])
    return closure((a, b), compressed_generators(len(a)))
