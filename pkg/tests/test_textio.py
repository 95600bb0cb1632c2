import pytest

from pgsearch.errors import MalformedInputError
from pgsearch.textio import (
    format_pair,
    parse_pair,
    parse_sequence,
    read_headers,
    read_pairs,
    write_pairs,
)


def test_roundtrip(tmp_path):
    pairs = [((1, -1), (1, 1)), ((-2, 0), (2, 2))]
    f = tmp_path / "p.txt"
    write_pairs(f, pairs, header=["# v=4 m=2"])
    assert read_pairs(f) == pairs
    assert read_headers(f) == {"v": "4", "m": "2"}
    assert f.read_bytes().endswith(b"2 2\n")
    assert format_pair(pairs[0]) == "1 -1 | 1 1"


@pytest.mark.parametrize("bad", ["1,1", "1  1", " 1", "1 x", "", "1 1 "])
def test_bad_sequences(bad):
    with pytest.raises(MalformedInputError) as exc:
        parse_sequence(bad, "f.txt", 7)
    assert str(exc.value).startswith("f.txt:7:")


@pytest.mark.parametrize("bad", ["1 1 1 -1", "1 1|1 -1", "1 | 1 | 1", "1 1 | 1"])
def test_bad_pairs(bad):
    with pytest.raises(MalformedInputError):
        parse_pair(bad)


def test_comments_skipped(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# hello\n\n1 | -1\n")
    assert read_pairs(f) == [((1,), (-1,))]
