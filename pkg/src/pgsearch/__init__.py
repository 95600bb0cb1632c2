"""Exhaustive search for periodic Golay pairs.

The pipeline generates compressed candidate sequences, filters them by their
power spectral density, matches complementary candidates, uncompresses the
matched pairs level by level and finally reduces the result up to equivalence.
"""

from .errors import ContractViolation, MalformedInputError
from .seqcore import (
    RowsumDecomposition,
    paf,
    paf_vector,
    psd_vector,
    psd_filter,
    psd_half_square_filter,
    sum_of_two_squares,
)
from .compress import compress, uncompress, uncompress_filtered, run_schedule
from .match import match
from .equiv import build_symmetry_group, canonical_form, filter_canonical
from .analyze import verify_pg

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "MalformedInputError",
    "RowsumDecomposition",
    "paf",
    "paf_vector",
    "psd_vector",
    "psd_filter",
    "psd_half_square_filter",
    "sum_of_two_squares",
    "compress",
    "uncompress",
    "uncompress_filtered",
    "run_schedule",
    "match",
    "build_symmetry_group",
    "canonical_form",
    "filter_canonical",
    "verify_pg",
]
