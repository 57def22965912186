"""
Unit tests for the code stage: ω-shifts, full and derived codes, distance
profiles, Johnson bounds and optimality certificates
"""
import pytest
import numpy as np
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from designs.bgw import GMatrix, reduce_group
from designs.cwcode import (
    Code,
    CodeParams,
    ConstructionRequest,
    bound_report,
    derived_code,
    derived_denominator,
    distance_set,
    full_code,
    generate_from_seed,
    hamming_distance,
    infer_request,
    is_shift_closed,
    omega_shift,
    restricted_johnson,
    rows_as_code,
    scan_params,
    thm_main_params,
    unrestricted_johnson,
    verify_optimal,
    weight,
)
from designs.entries import ZERO
from designs.pipeline import ConstructionPipeline
from errors import ParameterError, ParameterMismatchError
from utils.edge_cases import bgw_order, odd_prime_powers, valid_divisors

Z = ZERO

FIRST_ROW = [3, 0, 3, Z, 0, 0]
NEGA_ROW = [1, 0, 1, Z, 0, 0]


def request(q, m, g):
    return ConstructionRequest(q=q, m=m, g=g)


def construction_grid(vmax=400):
    for q in odd_prime_powers(9):
        for m in range(1, 4):
            if bgw_order(q, m) > vmax:
                continue
            for g in valid_divisors(q):
                if g >= 2:
                    yield q, m, g


class TestConstructionRequest:
    """Test request validation"""

    def test_derived_values(self):
        req = request(5, 1, 4)
        assert (req.v, req.k, req.a) == (6, 5, 5)

    @pytest.mark.parametrize("q,m,g", [(6, 1, 1), (8, 1, 1), (5, 1, 3), (5, 0, 1)])
    def test_rejected(self, q, m, g):
        with pytest.raises(ValueError):
            request(q, m, g)


class TestWords:
    """Test word-level helpers"""

    def test_hamming_distance(self):
        assert hamming_distance(NEGA_ROW, [1, 1, 0, 1, Z, 0]) == 4
        assert hamming_distance(NEGA_ROW, NEGA_ROW) == 0

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            hamming_distance([0, 1], [0, 1, 0])

    def test_weight(self):
        assert weight(NEGA_ROW) == 5
        assert weight([Z, Z, Z]) == 0

    def test_omega_shift(self):
        x = [0, 1, 2, 3, Z, 2]
        assert omega_shift(x, 1, 4).tolist() == [3, 0, 1, 2, 3, Z]
        assert omega_shift([Z, Z, Z], 1, 4).tolist() == [Z, Z, Z]

    def test_shift_order(self):
        x = np.array([0, 1, 2, 3, 0, 1])
        y = x
        for step in range(1, 25):
            y = omega_shift(y, 1, 4)
            if step == 6:
                assert y.tolist() == [1, 2, 3, 0, 1, 2]
        assert np.array_equal(y, x)

    def test_orbit_sizes(self):
        assert generate_from_seed(FIRST_ROW, 1, 4).M == 24
        assert generate_from_seed(NEGA_ROW, 1, 2).M == 12
        assert generate_from_seed([Z] * 6, 1, 4).M == 1

    def test_rows_as_code(self):
        code = rows_as_code(GMatrix([[0, 1, Z], [0, 1, Z], [1, Z, 0]], 2))
        assert code.M == 2


class TestFullAndDerivedCodes:
    """Test the codes obtained from reduced trace matrices"""

    def test_equidistant_five_ary(self):
        code = full_code(request(5, 1, 4))
        assert scan_params(code) == CodeParams(n=6, M=24, d=5, w=5, a=5)
        assert code.distance_profile().counts == {5: 276}

    def test_negashift_code(self):
        code = full_code(request(5, 1, 2))
        assert scan_params(code).as_tuple() == (6, 12, 4, 5)
        assert code.a == 3
        profile = code.distance_profile()
        assert profile.minimum == 4
        assert profile.is_bidistant
        assert is_shift_closed(code, 1)
        assert generate_from_seed(code.words[0], 1, 2) == code

    def test_ternary_equidistant(self):
        code = full_code(request(3, 2, 2))
        assert scan_params(code).as_tuple() == (13, 26, 9, 9)
        assert code.distance_profile().is_equidistant

    def test_transitive_profile_matches_scan(self):
        code = full_code(request(5, 2, 2))
        assert distance_set(code, transitive=True) == distance_set(code)

    def test_transitive_needs_single_orbit(self):
        code = Code([[0, 0, Z], [0, Z, Z]], 1)
        with pytest.raises(ParameterError):
            distance_set(code, transitive=True)

    def test_transitive_rejects_orbit_of_equal_size(self):
        """The first word's orbit has three words like the code, but is not the code"""
        code = Code([[Z, Z, 0], [0, 0, Z], [0, Z, 0]], 1)
        assert generate_from_seed(code.words[0], 0, 1).M == code.M
        with pytest.raises(ParameterError):
            distance_set(code, transitive=True)
        assert distance_set(code).counts == {1: 1, 2: 1, 3: 1}

    def test_pipeline_shortcut_skips_pairwise_scan(self):
        req = request(5, 2, 2)
        report = ConstructionPipeline().code(req, transitive=True)
        assert report.bounds.optimal
        assert list(report.code._profiles) == [True]

    def test_optimality_with_transitive_scan(self):
        req = request(5, 1, 4)
        derived_params, full_params = thm_main_params(req)
        code = full_code(req)
        assert verify_optimal(code, full_params, derived=derived_params, transitive=True).optimal
        assert list(code._profiles) == [True]

    def test_words_differing_everywhere(self):
        code = Code([[0, 0, 0], [Z, Z, Z]], 1)
        assert code.distance_profile().counts == {3: 1}

    @pytest.mark.parametrize("q,m,g,expected", [
        (5, 1, 4, (5, 5, 5, 4)),
        (3, 2, 2, (12, 9, 9, 8)),
        (5, 1, 2, (5, 5, 4, 4)),
    ])
    def test_derived_params(self, q, m, g, expected):
        assert scan_params(derived_code(request(q, m, g))).as_tuple() == expected

    def test_reduced_first_row(self):
        reduced = reduce_group(GMatrix(np.array([FIRST_ROW] * 1), 4), 2)
        assert reduced.entries[0].tolist() == NEGA_ROW

    def test_not_constant_weight(self):
        with pytest.raises(ParameterError):
            scan_params(Code([[0, 0, Z], [0, Z, Z]], 1))

    @pytest.mark.parametrize("q,m,g", list(construction_grid()))
    def test_construction_grid(self, q, m, g):
        """Scanned parameters equal the predicted ones and both codes are optimal"""
        req = request(q, m, g)
        derived_params, full_params = thm_main_params(req)
        derived = derived_code(req)
        full = full_code(req)
        assert scan_params(derived) == derived_params
        assert scan_params(full) == full_params
        assert verify_optimal(derived, derived_params, req=req).optimal
        assert verify_optimal(full, full_params, derived=derived_params, req=req).optimal

    @pytest.mark.parametrize("q,m,g", list(construction_grid()))
    def test_distance_dichotomy(self, q, m, g):
        """g = q - 1 gives the single distance q^m; a proper divisor gives two, the smaller being d"""
        req = request(q, m, g)
        profile = full_code(req).distance_profile()
        _, full_params = thm_main_params(req)
        if g == q - 1:
            assert profile.values == [q ** m]
        else:
            assert profile.is_bidistant
            assert profile.minimum == full_params.d


class TestJohnsonBounds:
    """Test the restricted and unrestricted Johnson bounds"""

    @pytest.mark.parametrize("args,bound", [
        ((6, 5, 5, 5), 24),
        ((5, 5, 4, 5), 5),
        ((5, 4, 4, 3), 5),
        ((13, 9, 9, 3), 26),
    ])
    def test_restricted(self, args, bound):
        assert restricted_johnson(*args) == bound

    def test_nonpositive_denominator(self):
        assert restricted_johnson(10, 2, 5, 2) is None

    def test_unrestricted(self):
        assert unrestricted_johnson(6, 5, 5, 5, inner=5) == 24
        assert unrestricted_johnson(6, 4, 5, 3, inner=5) == 12

    def test_inner_must_be_positive(self):
        with pytest.raises(ParameterError):
            unrestricted_johnson(6, 5, 5, 5, inner=0)

    @pytest.mark.parametrize("q,m,g,denominator", [(5, 1, 4, 20), (5, 1, 2, 8), (3, 2, 2, 24)])
    def test_derived_denominator(self, q, m, g, denominator):
        req = request(q, m, g)
        derived_params, _ = thm_main_params(req)
        assert derived_denominator(req) == denominator
        assert bound_report(derived_params).denominator == denominator


class TestOptimality:
    """Test optimality certificates"""

    def test_full_code_optimal(self):
        req = request(5, 1, 4)
        derived_params, full_params = thm_main_params(req)
        report = verify_optimal(full_code(req), full_params, derived=derived_params)
        assert report.optimal
        assert report.restricted == 24
        assert report.unrestricted == 24
        assert report.bound_used == 24
        assert report.denominator == 5

    def test_negashift_code_uses_unrestricted_bound(self):
        req = request(5, 1, 2)
        derived_params, full_params = thm_main_params(req)
        report = verify_optimal(full_code(req), full_params, derived=derived_params, req=req)
        assert report.restricted == 16
        assert report.unrestricted == 12
        assert report.bound_used == 12
        assert report.optimal
        assert report.notes

    def test_derived_code_optimal(self):
        req = request(5, 1, 4)
        derived_params, _ = thm_main_params(req)
        report = verify_optimal(derived_code(req), derived_params)
        assert report.optimal
        assert report.bound_used == 5

    def test_word_removed(self):
        req = request(5, 1, 4)
        _, full_params = thm_main_params(req)
        smaller = full_code(req).without(0)
        with pytest.raises(ParameterMismatchError) as info:
            verify_optimal(smaller, full_params)
        assert info.value.scanned.M == 23
        report = bound_report(scan_params(smaller))
        assert not report.optimal
        assert report.achieved_M == 23

    def test_empty_code(self):
        with pytest.raises(ParameterError):
            verify_optimal(Code(np.empty((0, 6), dtype=np.int64), 4), CodeParams(6, 0, 5, 5, 5))


class TestInferRequest:
    """Test recovery of (q, m, g) from a code"""

    def test_full_code(self):
        assert infer_request(full_code(request(5, 1, 4))) == (request(5, 1, 4), False)

    def test_derived_code(self):
        assert infer_request(derived_code(request(3, 2, 2))) == (request(3, 2, 2), True)

    def test_unrelated_code(self):
        assert infer_request(Code([[0, 0, Z, Z], [Z, 0, 0, Z]], 1)) is None
