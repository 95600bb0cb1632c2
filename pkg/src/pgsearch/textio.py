"""Plain-text sequence and pair files.

One sequence per line as space-separated integers; a pair is written as
``a_0 ... a_{v-1} | b_0 ... b_{v-1}``. Lines starting with ``#`` are comments
(headers and report lines). ASCII, LF line endings.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

from .errors import MalformedInputError

_INT_RUN = re.compile(r"-?\d+( -?\d+)*\Z")


def format_sequence(seq):
    return " ".join(str(int(x)) for x in seq)


def format_pair(pair):
    a, b = pair
    return f"{format_sequence(a)} | {format_sequence(b)}"


def parse_sequence(text, path="<string>", lineno=1):
    if not _INT_RUN.match(text):
        raise MalformedInputError(
            path, lineno, "expected base-10 integers separated by single spaces")
    return tuple(int(t) for t in text.split(" "))


def parse_pair(text, path="<string>", lineno=1):
    parts = text.split(" | ")
    if len(parts) != 2:
        raise MalformedInputError(
            path, lineno, "a pair line needs exactly one ' | ' separator")
    a = parse_sequence(parts[0], path, lineno)
    b = parse_sequence(parts[1], path, lineno)
    if len(a) != len(b):
        raise MalformedInputError(path, lineno, "pair members must have equal length")
    return a, b


def _data_lines(path):
    with open(path, "r", encoding="ascii", newline="\n") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_sequences(path):
    return [parse_sequence(line, path, n) for n, line in _data_lines(path)]


def read_pairs(path):
    return [parse_pair(line, path, n) for n, line in _data_lines(path)]


def read_headers(path):
    """Parse ``# key=value ...`` comment lines into a dict."""
    out = {}
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            if not line.startswith("#"):
                continue
            for tok in line[1:].split():
                if "=" in tok:
                    k, _, val = tok.partition("=")
                    out[k] = val
    return out


def _write_lines(path, lines):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="ascii", newline="\n") as f:
        for line in lines:
            f.write(line)
            f.write("\n")
    # atomic publish: a present file is always complete (resume relies on it)
    os.replace(tmp, path)


def write_sequences(path, seqs, header=()):
    _write_lines(path, [*header, *(format_sequence(s) for s in seqs)])


def write_pairs(path, pairs, header=()):
    _write_lines(path, [*header, *(format_pair(p) for p in pairs)])
