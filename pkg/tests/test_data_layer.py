"""
Unit tests for document export / import
"""
import pytest
import json
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from designs.arrays import append_zero_word, extract_msls
from designs.bgw import GMatrix, construct_bgw
from designs.cwcode import ConstructionRequest, derived_code, full_code
from designs.entries import ZERO
from errors import DataFormatError
from utils.data_layer import export_object, from_document, import_object, to_document

Z = ZERO

MATRIX_1 = [
    [3, 0, 3, Z, 0, 0],
    [1, 3, 0, 3, Z, 0],
    [1, 1, 3, 0, 3, Z],
    [Z, 1, 1, 3, 0, 3],
    [0, Z, 1, 1, 3, 0],
    [1, 0, Z, 1, 1, 3],
]


@pytest.fixture
def oa_25():
    return append_zero_word(full_code(ConstructionRequest(q=5, m=1, g=4)))


class TestExportImport:
    """Test file round trips for every document kind"""

    def test_matrix(self, tmp_path):
        W = GMatrix(MATRIX_1, 4, circulant_shift=1)
        path = export_object(W, str(tmp_path / "matrix.json"))
        assert import_object(path) == W

    def test_orthogonal_array(self, tmp_path, oa_25):
        path = export_object(oa_25, str(tmp_path / "oa.json"))
        loaded = import_object(path)
        assert loaded == oa_25
        assert loaded.N == 25

    def test_codes(self, tmp_path):
        req = ConstructionRequest(q=3, m=2, g=2)
        for name, code in (("full", full_code(req)), ("derived", derived_code(req))):
            path = export_object(code, str(tmp_path / f"{name}.json"))
            assert import_object(path) == code

    def test_squares(self, tmp_path, oa_25):
        squares = extract_msls(oa_25)
        loaded = import_object(export_object(squares, str(tmp_path / "msls.json")))
        assert loaded == squares
        single = import_object(export_object(squares[0], str(tmp_path / "latin.json")))
        assert single == squares[0]

    def test_canonical_bytes(self, tmp_path):
        W = construct_bgw(3, 2)
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        export_object(W, str(first))
        export_object(import_object(str(first)), str(second))
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes().endswith(b"\n")

    def test_zero_is_null(self):
        doc = to_document(GMatrix(MATRIX_1, 4))
        assert doc["kind"] == "gmatrix"
        assert doc["rows"][0] == [3, 0, 3, None, 0, 0]


class TestRejectedDocuments:
    """Test that malformed documents raise DataFormatError"""

    def test_exponent_out_of_range(self):
        with pytest.raises(DataFormatError):
            from_document({"kind": "gmatrix", "u": 4, "shift": None, "rows": [[4, 0], [0, 0]]})

    def test_unknown_kind(self):
        with pytest.raises(DataFormatError):
            from_document({"kind": "hypercube", "rows": []})

    def test_ragged_rows(self):
        with pytest.raises(DataFormatError):
            from_document({"kind": "array", "a": 3, "rows": [[0, 1], [0]]})

    def test_alphabet_mismatch(self):
        with pytest.raises(DataFormatError):
            from_document({"kind": "code", "a": 4, "g": 2, "n": 2, "words": [[0, 1]]})

    def test_declared_length(self):
        with pytest.raises(DataFormatError):
            from_document({"kind": "code", "a": 3, "g": 2, "n": 3, "words": [[0, 1]]})

    def test_not_an_object(self):
        with pytest.raises(DataFormatError):
            from_document([1, 2, 3])

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataFormatError):
            import_object(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            import_object(str(tmp_path / "absent.json"))

    def test_unexportable(self):
        with pytest.raises(DataFormatError):
            to_document({"rows": []})

    def test_document_written_by_hand(self, tmp_path):
        path = tmp_path / "hand.json"
        path.write_text(json.dumps({"kind": "latin", "n": 2, "rows": [[None, 0], [0, None]]}), encoding="utf-8")
        square = import_object(str(path))
        assert square.n == 2
