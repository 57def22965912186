"""
Unit tests for the array stage: OA / CA verification and suitable Latin squares
"""
import pytest
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from designs.arrays import (
    LatinSquare,
    SymbolArray,
    append_zero_word,
    extract_msls,
    is_complete_system,
    is_shift_closed,
    latin_to_array,
    latin_violation,
    suitable,
    verify_ca,
    verify_latin,
    verify_msls,
    verify_oa,
)
from designs.cwcode import Code, ConstructionRequest, full_code
from designs.entries import ZERO
from designs.pipeline import ConstructionPipeline
from errors import ArrayError, ParameterError

Z = ZERO


def zero_word_array(q, m, g):
    return append_zero_word(full_code(ConstructionRequest(q=q, m=m, g=g)))


def cyclic_square(n):
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return LatinSquare((i + j) % n - 1)


class TestZeroWordArrays:
    """Test the code-plus-zero-word arrays"""

    def test_orthogonal_array(self):
        A = zero_word_array(5, 1, 4)
        assert (A.N, A.k, A.a) == (25, 6, 5)
        verdict = verify_oa(A)
        assert verdict
        assert verdict.cert.as_tuple() == (25, 6, 2, 1)
        assert verdict.cert.kind == "OA"

    def test_covering_array(self):
        A = zero_word_array(5, 1, 2)
        assert (A.N, A.k, A.a) == (13, 6, 3)
        verdict = verify_ca(A)
        assert verdict
        assert verdict.cert.as_tuple() == (13, 6, 2, 1)

    def test_covering_array_is_not_orthogonal(self):
        verdict = verify_oa(zero_word_array(5, 1, 2))
        assert not verdict
        assert verdict.condition == "tuple count differs from lambda"
        assert len(verdict.witness["columns"]) == 2
        assert verdict.witness["count"] != 1

    def test_shift_closed(self):
        assert is_shift_closed(zero_word_array(5, 1, 4), 1)
        assert is_shift_closed(zero_word_array(5, 1, 2), 1)

    def test_empty_code(self):
        with pytest.raises(ArrayError):
            append_zero_word(Code(np.empty((0, 6), dtype=np.int64), 4))

    def test_zero_word_already_present(self):
        with pytest.raises(ArrayError):
            append_zero_word(Code([[Z, Z], [0, 1]], 2))

    def test_thread_count_does_not_change_verdict(self):
        A = zero_word_array(5, 1, 2)
        assert verify_oa(A, threads=1) == verify_oa(A, threads=4)
        assert verify_ca(A, threads=1) == verify_ca(A, threads=4)

    def test_strength_range(self):
        with pytest.raises(ParameterError):
            verify_oa(zero_word_array(3, 1, 2), t=5)

    def test_tuple_table_limit(self):
        wide = SymbolArray(np.zeros((1, 30), dtype=np.int64), 3)
        with pytest.raises(ParameterError):
            verify_ca(wide, t=16)

    def test_strength_one(self):
        # every column of the OA holds each symbol q^m times
        assert verify_oa(zero_word_array(5, 1, 4), t=1, lam=5)


class TestLatinSquares:
    """Test Latin square checks and suitability"""

    def test_cyclic_square(self):
        assert verify_latin(cyclic_square(3))

    def test_repeated_symbol(self):
        L = LatinSquare([[Z, Z, 1], [0, 1, Z], [1, 0, 0]])
        assert not verify_latin(L)
        assert latin_violation(L) == {"row": 0}

    def test_not_square(self):
        with pytest.raises(ParameterError):
            LatinSquare([[0, 1, 2]])

    def test_square_as_array(self):
        A = latin_to_array(cyclic_square(4))
        assert (A.N, A.k) == (16, 3)
        assert verify_oa(A)

    def test_self_pair_not_suitable(self):
        L = cyclic_square(3)
        assert not suitable(L, L)


class TestSuitableSystems:
    """Test extraction of complete systems of mutually suitable Latin squares"""

    def test_five_symbol_system(self):
        squares = extract_msls(zero_word_array(5, 1, 4))
        assert len(squares) == 4
        assert all(L.n == 5 for L in squares)
        assert all(verify_latin(L) for L in squares)
        assert verify_msls(squares)
        assert is_complete_system(squares)

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_pipeline_systems(self, q):
        report = ConstructionPipeline().msls(q)
        assert report.array_verdict
        assert len(report.squares) == q - 1
        assert all(report.latin)
        assert report.complete
        assert report.passed

    def test_duplicate_square(self):
        squares = extract_msls(zero_word_array(5, 1, 4))
        assert not verify_msls(squares + [squares[0]])

    def test_single_square(self):
        with pytest.raises(ParameterError):
            verify_msls([cyclic_square(3)])

    def test_requires_orthogonal_array(self):
        with pytest.raises(ArrayError):
            extract_msls(zero_word_array(5, 1, 2))

    @pytest.mark.parametrize("q", [3, 5, 7])
    def test_column_zero_groups_are_not_latin(self, q):
        """Rows grouped by their column-0 symbol repeat symbols, so squares come from the base square"""
        A = zero_word_array(q, 1, q - 1)
        for s in range(q - 1):
            block = A.grid[A.grid[:, 0] == s][:, 1:q + 1]
            assert not verify_latin(LatinSquare(block))

    def test_array_equality(self):
        A = zero_word_array(3, 1, 2)
        assert A == SymbolArray(A.grid.copy(), 3)
