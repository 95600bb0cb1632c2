import pytest

from pgsearch.analyze import (
    MIXED_FORM,
    OTHER,
    ZERO_FORM,
    check_lemma_odd_half,
    check_theorem_extended,
    classify_half_compression,
    form_counts,
    form_report,
    half_compression,
    heuristic_seed,
    same_compressed_class,
    verify_pg,
    zero_paf_scan,
)
from pgsearch.errors import ContractViolation
from pgsearch.seqcore import rowsum


def test_verify_pg_examples(pg90_pairs):
    assert verify_pg(((1, 1), (1, -1)))
    assert not verify_pg(((1, 1), (1, 1)))
    assert not verify_pg(((1, 1), (1,)))
    assert not verify_pg(((2, 0), (0, 2)))
    assert all(verify_pg(p) for p in pg90_pairs)


def test_verify_implies_rowsum_equation(small_pg_pairs):
    for a, b in small_pg_pairs:
        assert verify_pg((a, b))
        assert rowsum(a) ** 2 + rowsum(b) ** 2 == 2 * len(a)


def test_classify_templates():
    r = classify_half_compression(((0, 2), (0, 4)), 10)
    assert r.tag == ZERO_FORM and r.forms == {ZERO_FORM}
    r = classify_half_compression(((3, -1), (3, 1)), 10)
    assert r.tag == MIXED_FORM
    r = classify_half_compression(((3, 3), (9, -1)), 50)
    assert r.tag == OTHER
    r = classify_half_compression(((0, 2), (0, 2)), 10)
    assert r.tag == OTHER and r.diagnostic
    with pytest.raises(ContractViolation):
        classify_half_compression(((1, 1, 1), (1, 1, 1)))


def test_equal_rowsums_match_both_forms():
    r = classify_half_compression(((4, 0), (0, 4)), 16)
    assert r.forms == {ZERO_FORM, MIXED_FORM}


def test_census_forms(census):
    c = form_counts(census(26))
    assert c[(4, 6)][MIXED_FORM] == 53 and c[(4, 6)][ZERO_FORM] == 0
    assert OTHER not in c[(4, 6)]
    assert form_report(26, census(26))[1] == "26 (4,6) 53 0 0"


def test_lemma_odd_half():
    assert check_lemma_odd_half(26) and check_lemma_odd_half(50)
    assert not check_lemma_odd_half(16)
    with pytest.raises(ContractViolation):
        check_lemma_odd_half(7)


def test_lemma_consistent_with_census(small_pg_pairs):
    for p in small_pg_pairs:
        v = len(p[0])
        if v > 2 and check_lemma_odd_half(v):
            assert classify_half_compression(half_compression(p), v).tag != ZERO_FORM


def test_theorem_extended():
    assert not check_theorem_extended(50)
    assert check_theorem_extended(26)
    assert check_theorem_extended(72)
    assert not check_theorem_extended(130)  # 65 = 5 * 13


def test_zero_paf_scan_trivial():
    v = 8
    pair = ((1, -1, 1, -1, -1, 1, -1, 1), (1, 1, 1, 1, -1, -1, -1, -1))
    assert zero_paf_scan([pair], v, 4) == {((0, 0), (0, 0))}
    with pytest.raises(ContractViolation):
        zero_paf_scan([pair], v, 3)


def test_zero_paf_table5_rows(census):
    found = zero_paf_scan(census(20), 20, 5)
    target = ((1, 1, 1, -1), (3, 3, 3, -3))
    assert any(same_compressed_class(p, target) for p in found)
    found16 = zero_paf_scan(census(16), 16, 2)
    assert any(a == b for a, b in found16)


def test_heuristic_seed():
    assert heuristic_seed(90, 18)[0] == ((0, 0, 0, 0, 6), (0, 0, 0, 0, 12))
    assert ((0, 0, 6), (0, 0, 12)) in heuristic_seed(90, 30)
    assert heuristic_seed(72, 12)[0] == ((0,) * 6, (0,) * 5 + (12,))
    assert heuristic_seed(14, 2) == []
    # an odd factor leaves no zero entries in the alphabet
    assert heuristic_seed(90, 15) == []
