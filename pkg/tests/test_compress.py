import itertools

import numpy as np
import pytest

from oracles import compress_naive
from pgsearch.analyze import verify_pg
from pgsearch.compress import (
    UncompressionSchedule,
    chunk_work,
    compress,
    compress_chain_equivalence_check,
    decompositions,
    run_schedule,
    uncompress,
    uncompress_array,
    uncompress_filtered,
)
from pgsearch.errors import ContractViolation
from pgsearch.generate import alphabet
from pgsearch.seqcore import is_complementary, psd_filter, psd_vector
from pgsearch.textio import read_pairs


def test_compress_examples():
    assert compress((1, 1, -1, 1), 2) == (0, 2)
    s = (1, -1, -1, 1, 1, 1)
    assert compress(s, 1) == s
    assert compress(s, 6) == (sum(s),)
    with pytest.raises(ContractViolation):
        compress(s, 4)


def test_compress_matches_naive():
    rng = np.random.default_rng(0)
    for _ in range(50):
        s = tuple(rng.choice([-1, 1], 12).tolist())
        for m in (1, 2, 3, 4, 6, 12):
            assert compress(s, m) == compress_naive(s, m)
            assert sum(compress(s, m)) == sum(s)


def test_chain_equivalence():
    for s in itertools.product((-1, 1), repeat=8):
        assert compress_chain_equivalence_check(s, 2, 2)
    rng = np.random.default_rng(1)
    for _ in range(1000):
        s = tuple(rng.choice([-1, 1], 12).tolist())
        assert compress_chain_equivalence_check(s, 2, 3)
    assert compress_chain_equivalence_check((1, -1, 1, 1), 1, 4)
    with pytest.raises(ContractViolation):
        compress_chain_equivalence_check((1, 1, 1), 2, 1)


def test_uncompress_examples():
    assert uncompress((0, 2), 2, 1) == [(-1, 1, 1, 1), (1, 1, -1, 1)]
    assert uncompress((2,), 2, 1) == [(1, 1)]
    assert uncompress((0,), 3, 1) == []


def test_decompositions_lex_order():
    assert decompositions(0, 2, 1).tolist() == [[-1, 1], [1, -1]]
    assert decompositions(2, 3, 2).tolist() == sorted(
        list(t) for t in itertools.product(alphabet(2), repeat=3) if sum(t) == 2)


@pytest.mark.parametrize("L,e,d", [(1, 2, 1), (2, 2, 1), (3, 2, 1), (4, 2, 1), (2, 3, 1),
                                   (2, 2, 2), (1, 4, 1), (2, 4, 1), (2, 2, 3), (1, 3, 2)])
def test_uncompress_complete(L, e, d):
    full = list(itertools.product(alphabet(d), repeat=L * e))
    for omega in itertools.product(range(-d * e, d * e + 1), repeat=L):
        brute = sorted(g for g in full if compress(g, e) == omega)
        got = uncompress(omega, e, d)
        assert got == brute
        assert [tuple(r) for r in uncompress_array(omega, e, d).tolist()] == brute
        for g in got:
            assert compress(g, e) == omega


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_multilevel_uncompression(L):
    # uncompressing by 4 equals uncompressing by 2 (to 2-compressions) then by 2
    for omega in itertools.product(alphabet(4), repeat=L):
        direct = set(uncompress(omega, 4, 1))
        staged = {g for mid in uncompress(omega, 2, 2) for g in uncompress(mid, 2, 1)}
        assert direct == staged


def test_uncompress_filtered():
    assert uncompress_filtered((0, 2), 2, 1, 4) == uncompress((0, 2), 2, 1)
    assert uncompress_filtered((0, 2), 2, 1, 4, filter=lambda g: True) == uncompress((0, 2), 2, 1)
    rng = np.random.default_rng(2)
    for _ in range(20):
        omega = tuple(rng.choice([-2, 0, 2], 8).tolist())
        ref = [g for g in uncompress(omega, 2, 1) if psd_filter(g, 16)]
        got = uncompress_filtered(omega, 2, 1, 16, filter=lambda g: psd_filter(g, 16))
        assert got == ref
        # the default adds the half-shift square test, so it is a subset
        assert set(uncompress_filtered(omega, 2, 1, 16)) <= set(ref)


def test_schedule_validation():
    assert UncompressionSchedule.parse("8,4,2,1").factors == (8, 4, 2, 1)
    for bad in [(4, 2), (4, 3, 1), (2, 4, 1), ()]:
        with pytest.raises(ContractViolation):
            UncompressionSchedule(bad)
    with pytest.raises(ContractViolation):
        run_schedule([((2,), (0,))], (4, 2, 1), 6)


def test_run_schedule_small():
    out = run_schedule([((2,), (0,))], (2, 1), 2, partial_ops=())
    assert ((1, 1), (1, -1)) in out
    assert all(verify_pg(p) for p in out)
    pair = ((1, 1, 1, -1), (1, 1, 1, -1))
    assert run_schedule([pair], (1,), 4) == [pair]


def test_chunk_work():
    items = list(range(10))
    assert chunk_work(items, 1) == [items]
    assert chunk_work(items[:3], 8) == [[0], [1], [2]]
    parts = chunk_work(items, 4)
    assert sum(parts, []) == items and len(parts) == 4
    with pytest.raises(ContractViolation):
        chunk_work(items, 0)


def test_compression_preserves_complementarity(pg90_pairs, small_pg_pairs):
    for a, b in pg90_pairs + small_pg_pairs:
        v = len(a)
        for m in range(1, v + 1):
            if v % m:
                continue
            ca, cb = compress(a, m), compress(b, m)
            assert is_complementary(ca, cb, v)
            tot = np.asarray(psd_vector(ca)) + np.asarray(psd_vector(cb))
            assert np.allclose(tot, 2 * v, atol=1e-6)


def test_pg90_file_roundtrip(pg90_path):
    pairs = read_pairs(pg90_path)
    assert len(pairs) == 2 and all(len(a) == 90 for a, _ in pairs)
