"""
Data layer for exported construction objects
JSON documents validated with pydantic; every load error surfaces as
DataFormatError
"""
import json
import logging
from typing import Annotated, Any, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from designs.arrays import LatinSquare, SymbolArray
from designs.bgw import GMatrix
from designs.cwcode import Code
from designs.entries import ENTRY_DTYPE, from_nested, to_nested
from errors import ConstructionError, DataFormatError
from utils.helpers import load_document, save_document

logger = logging.getLogger(__name__)

Row = List[Optional[int]]


def _check_rows(rows: List[Row], width: Optional[int], limit: int, what: str) -> None:
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise ValueError(f"{what} rows have different lengths: {sorted(widths)}")
    if width is not None and widths and widths != {width}:
        raise ValueError(f"{what} rows have length {widths.pop()}, declared {width}")
    for r in rows:
        for x in r:
            if x is not None and not 0 <= x < limit:
                raise ValueError(f"{what} exponent {x} outside [0, {limit - 1}]")


class GMatrixDoc(BaseModel):
    kind: Literal["gmatrix"] = "gmatrix"
    u: int = Field(..., ge=1)
    shift: Optional[int] = None
    rows: List[Row]

    @model_validator(mode="after")
    def _consistent(self) -> "GMatrixDoc":
        _check_rows(self.rows, None, self.u, "matrix")
        if self.shift is not None and not 0 <= self.shift < self.u:
            raise ValueError(f"shift {self.shift} outside [0, {self.u - 1}]")
        return self


class CodeDoc(BaseModel):
    kind: Literal["code"] = "code"
    a: int = Field(..., ge=2)
    g: int = Field(..., ge=1)
    n: int = Field(..., ge=0)
    words: List[Row]

    @model_validator(mode="after")
    def _consistent(self) -> "CodeDoc":
        if self.a != self.g + 1:
            raise ValueError(f"alphabet size {self.a} != g + 1 = {self.g + 1}")
        _check_rows(self.words, self.n, self.g, "code")
        return self


class ArrayDoc(BaseModel):
    kind: Literal["array"] = "array"
    a: int = Field(..., ge=2)
    rows: List[Row]

    @model_validator(mode="after")
    def _consistent(self) -> "ArrayDoc":
        _check_rows(self.rows, None, self.a - 1, "array")
        return self


class LatinDoc(BaseModel):
    kind: Literal["latin"] = "latin"
    n: int = Field(..., ge=1)
    rows: List[Row]

    @model_validator(mode="after")
    def _consistent(self) -> "LatinDoc":
        if len(self.rows) != self.n:
            raise ValueError(f"square has {len(self.rows)} rows, declared {self.n}")
        _check_rows(self.rows, self.n, max(self.n - 1, 1), "square")
        return self


class MslsDoc(BaseModel):
    kind: Literal["msls"] = "msls"
    n: int = Field(..., ge=1)
    squares: List[List[Row]]

    @model_validator(mode="after")
    def _consistent(self) -> "MslsDoc":
        for square in self.squares:
            if len(square) != self.n:
                raise ValueError(f"square has {len(square)} rows, declared {self.n}")
            _check_rows(square, self.n, max(self.n - 1, 1), "square")
        return self


Document = Annotated[
    Union[GMatrixDoc, CodeDoc, ArrayDoc, LatinDoc, MslsDoc],
    Field(discriminator="kind"),
]
_adapter = TypeAdapter(Document)

KINDS = ("gmatrix", "code", "array", "latin", "msls")


def to_document(obj: Any) -> dict:
    """JSON-ready dict for a matrix, code, array, square or list of squares"""
    if isinstance(obj, GMatrix):
        doc = GMatrixDoc(u=obj.u, shift=obj.circulant_shift, rows=to_nested(obj.entries))
    elif isinstance(obj, Code):
        doc = CodeDoc(a=obj.a, g=obj.g, n=obj.n, words=to_nested(obj.words))
    elif isinstance(obj, SymbolArray):
        doc = ArrayDoc(a=obj.a, rows=to_nested(obj.grid))
    elif isinstance(obj, LatinSquare):
        doc = LatinDoc(n=obj.n, rows=to_nested(obj.grid))
    elif isinstance(obj, (list, tuple)) and obj and all(isinstance(L, LatinSquare) for L in obj):
        doc = MslsDoc(n=obj[0].n, squares=[to_nested(L.grid) for L in obj])
    else:
        raise DataFormatError(f"cannot export object of type {type(obj).__name__}")
    return doc.model_dump()


def from_document(raw: Any) -> Any:
    """Rebuild the object described by a document dict"""
    if not isinstance(raw, dict):
        raise DataFormatError("document must be a JSON object")
    if raw.get("kind") not in KINDS:
        raise DataFormatError(f"unknown document kind {raw.get('kind')!r}")
    try:
        doc = _adapter.validate_python(raw)
    except ValidationError as e:
        raise DataFormatError(f"invalid {raw['kind']} document: {e.errors()[0]['msg']}") from e

    try:
        if isinstance(doc, GMatrixDoc):
            return GMatrix(_grid(doc.rows), doc.u, circulant_shift=doc.shift)
        if isinstance(doc, CodeDoc):
            return Code(_grid(doc.words, doc.n), doc.g)
        if isinstance(doc, ArrayDoc):
            return SymbolArray(_grid(doc.rows), doc.a)
        if isinstance(doc, LatinDoc):
            return LatinSquare(from_nested(doc.rows))
        return [LatinSquare(from_nested(square)) for square in doc.squares]
    except ConstructionError as e:
        raise DataFormatError(str(e)) from e


def _grid(rows: List[Row], width: int = 0) -> np.ndarray:
    nested = from_nested(rows)
    if not nested:
        return np.empty((0, width), dtype=ENTRY_DTYPE)
    return np.array(nested, dtype=ENTRY_DTYPE)


def export_object(obj: Any, filename: str) -> str:
    """Write obj as a canonical JSON document"""
    document = to_document(obj)
    save_document(document, filename)
    logger.info(f"📁 Exported {document['kind']} to {filename}")
    return filename


def import_object(filename: str) -> Any:
    """Load and validate a document written by export_object"""
    try:
        raw = load_document(filename)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"malformed JSON in {filename}: {e.msg}") from e
    except (OSError, UnicodeDecodeError) as e:
        raise DataFormatError(f"cannot read {filename}: {e}") from e
    obj = from_document(raw)
    logger.info(f"📂 Loaded {raw['kind']} from {filename}")
    return obj
