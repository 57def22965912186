"""
Unit tests for parameter screening, symbol formatting, the partitioned
runner and the sweep table
"""
import pytest
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import MIN_FIELD_CAP, Settings
from designs.entries import ZERO, as_grid, format_entry, format_grid
from errors import ParameterError
from utils.edge_cases import ParameterScreen, odd_prime_powers, prime_power, valid_divisors
from utils.evaluation import SWEEP_COLUMNS, render_sweep, run_sweep, sweep_requests
from utils.helpers import chunk_ranges, first_hit, format_params, run_partitioned

Z = ZERO


class TestParameterScreen:
    """Test screening of (q, m, g) requests"""

    def test_valid(self):
        assert ParameterScreen().screen(5, 2, 4).is_valid

    @pytest.mark.parametrize("q,m,g,issue", [
        (6, 1, None, "not_prime_power"),
        (4, 1, None, "even_characteristic"),
        (5, 0, None, "bad_exponent"),
        (3, 20, None, "field_too_large"),
        (5, 1, 3, "bad_divisor"),
    ])
    def test_issues(self, q, m, g, issue):
        assert ParameterScreen().screen(q, m, g).issue == issue

    def test_divisor_suggestions(self):
        result = ParameterScreen().screen(7, 1, 4)
        assert result.suggestions == [1, 2, 3, 6]

    def test_require(self):
        with pytest.raises(ParameterError):
            ParameterScreen().require(9, 1, 3)

    def test_prime_powers(self):
        assert prime_power(27) == (3, 3)
        assert prime_power(12) is None
        assert odd_prime_powers(13) == [3, 5, 7, 9, 11, 13]
        assert valid_divisors(9) == [1, 2, 4, 8]


class TestSettings:
    """Test ambient settings"""

    def test_field_cap_floor(self):
        assert Settings(field_cap=10).field_cap == MIN_FIELD_CAP

    def test_log_level_upper(self):
        assert Settings(log_level="info").log_level == "INFO"

    def test_threads_positive(self):
        with pytest.raises(ValueError):
            Settings(default_threads=0)


class TestSymbolText:
    """Test symbol tokens and text grids"""

    def test_tokens(self):
        assert [format_entry(e) for e in (Z, 0, 1, 3)] == ["0", "1", "w", "w^3"]

    def test_text_grid(self):
        assert format_grid([[3, 0, Z], [0, 1, Z]]) == "w^3 1 0\n1 w 0\n"

    def test_pretty_grid(self):
        assert format_grid([[1, 0, 1, Z, 0, 0]], pretty=True) == "- + - 0 + +\n"

    def test_pretty_needs_order_two(self):
        with pytest.raises(ValueError):
            format_grid([[2]], pretty=True)

    def test_grid_range(self):
        with pytest.raises(ParameterError):
            as_grid([[0, 4]], 4)
        assert not as_grid([[0, 3]], 4).flags.writeable


class TestPartitionedRunner:
    """Test chunking and ordered parallel execution"""

    def test_chunk_ranges(self):
        assert chunk_ranges(10, 3) == [range(0, 4), range(4, 7), range(7, 10)]
        assert chunk_ranges(2, 8) == [range(0, 1), range(1, 2)]
        assert chunk_ranges(0, 4) == [range(0, 0)]

    def test_results_in_chunk_order(self):
        chunks = chunk_ranges(100, 7)
        serial = run_partitioned(sum, chunks, threads=1)
        parallel = run_partitioned(sum, chunks, threads=7)
        assert serial == parallel
        assert sum(serial) == sum(range(100))

    def test_first_hit(self):
        assert first_hit([None, 3, 1]) == 3
        assert first_hit([None, None]) is None

    def test_format_params(self):
        assert format_params((6, 24, 5, 5)) == "(6, 24, 5, 5)"


class TestSweep:
    """Test the parameter / optimality sweep"""

    def test_requests(self):
        requests = sweep_requests(5, 1, 1000)
        assert [(r.q, r.m, r.g) for r in requests] == [(3, 1, 1), (3, 1, 2), (5, 1, 1), (5, 1, 2), (5, 1, 4)]

    def test_vmax_skips(self):
        assert all(r.v <= 10 for r in sweep_requests(9, 3, 10))

    def test_screen_skips_large_fields(self, monkeypatch):
        monkeypatch.setattr("utils.edge_cases._screen", ParameterScreen(field_cap=100))
        requests = sweep_requests(5, 2, 1000)
        assert sorted({(r.q, r.m) for r in requests}) == [(3, 1), (3, 2), (5, 1)]

    def test_table(self):
        frame = run_sweep(5, 2)
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 10
        assert frame["matches"].all()
        assert frame["optimal"].all()
        assert frame["derived_optimal"].all()
        row = frame[(frame["q"] == 5) & (frame["m"] == 1) & (frame["g"] == 4)].iloc[0]
        assert [int(row[c]) for c in ("n", "M", "d", "w")] == [6, 24, 5, 5]
        assert row["distances"] == "equidistant"

    def test_deterministic_rendering(self):
        first = render_sweep(run_sweep(5, 2, threads=1), "json")
        second = render_sweep(run_sweep(5, 2, threads=4), "json")
        assert first == second
        assert render_sweep(run_sweep(5, 2), "text") == render_sweep(run_sweep(5, 2), "text")
