"""
Entry encoding shared by matrices, codes and arrays.

A symbol is stored as a signed integer: ZERO (-1) is the field zero and an
exponent e >= 0 stands for ω^e in a cyclic group of order u. Integer order
is therefore the canonical symbol order Zero < ω^0 < ω^1 < ...
"""
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from errors import ParameterError

ZERO = -1
ENTRY_DTYPE = np.int64


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification kernel"""
    passed: bool
    cert: Optional[Any] = None
    condition: Optional[str] = None
    witness: Optional[Any] = None

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, cert: Any) -> "Verdict":
        return cls(passed=True, cert=cert)

    @classmethod
    def fail(cls, condition: str, witness: Any = None) -> "Verdict":
        return cls(passed=False, condition=condition, witness=witness)

    def describe(self) -> str:
        if self.passed:
            return f"verified: {self.cert}"
        return f"failed: {self.condition} (witness: {self.witness})"


def as_grid(rows: Any, u: int, ndim: int = 2) -> np.ndarray:
    """
    Copy rows into a read-only Entry grid and validate every symbol

    Args:
        rows: nested sequence or ndarray of ints (ZERO or exponent)
        u: group order; exponents must lie in [0, u)
        ndim: required dimensionality

    Returns:
        int64 ndarray with the write flag cleared
    """
    if u < 1:
        raise ParameterError(f"group order must be >= 1, got {u}")
    grid = np.array(rows, dtype=ENTRY_DTYPE, copy=True)
    if grid.ndim != ndim:
        if grid.size == 0 and ndim == 2:
            grid = grid.reshape(0, 0)
        else:
            raise ParameterError(f"expected a {ndim}-d grid, got shape {grid.shape}")
    if grid.size and (grid.min() < ZERO or grid.max() >= u):
        raise ParameterError(f"symbols must lie in [-1, {u - 1}]")
    grid.setflags(write=False)
    return grid


def freeze(grid: np.ndarray) -> np.ndarray:
    grid = np.ascontiguousarray(grid, dtype=ENTRY_DTYPE)
    grid.setflags(write=False)
    return grid


def scale_exponents(grid: np.ndarray, c: int, u: int) -> np.ndarray:
    """Multiply every nonzero symbol by ω^c (Zero is fixed)"""
    grid = np.asarray(grid, dtype=ENTRY_DTYPE)
    return np.where(grid == ZERO, ZERO, (grid + c) % u)


def power_exponents(grid: np.ndarray, t: int, u: int) -> np.ndarray:
    """Apply the automorphism x -> x^t entrywise"""
    grid = np.asarray(grid, dtype=ENTRY_DTYPE)
    return np.where(grid == ZERO, ZERO, (grid * t) % u)


def support(grid: np.ndarray) -> np.ndarray:
    return np.asarray(grid) != ZERO


def row_weights(grid: np.ndarray) -> np.ndarray:
    return support(grid).sum(axis=-1)


def symbol_index(grid: np.ndarray) -> np.ndarray:
    """Map symbols to 0..u (Zero -> 0, ω^e -> e + 1) for histogramming"""
    return np.asarray(grid, dtype=ENTRY_DTYPE) + 1


def to_nested(grid: Sequence) -> list:
    """Plain nested lists with None for Zero (JSON form)"""
    return [[None if int(x) == ZERO else int(x) for x in row] for row in np.asarray(grid)]


def from_nested(rows: Sequence) -> list:
    return [[ZERO if x is None else int(x) for x in row] for row in rows]


# Text tokens: "0" Zero, "1" ω^0, "w" ω^1, "w^e" otherwise; +/-/0 for the order-2 group
PRETTY_SYMBOLS = {ZERO: "0", 0: "+", 1: "-"}


def format_entry(e: int) -> str:
    """Text token of a symbol: 0, 1, w, w^e"""
    e = int(e)
    if e == ZERO:
        return "0"
    if e == 0:
        return "1"
    if e == 1:
        return "w"
    return f"w^{e}"


def format_pretty(e: int) -> str:
    """+/-/0 notation for the order-2 group"""
    try:
        return PRETTY_SYMBOLS[int(e)]
    except KeyError:
        raise ValueError(f"symbol {e} has no +/- form") from None


def format_grid(grid: Iterable[Sequence[int]], pretty: bool = False) -> str:
    """Space separated rows, LF line endings"""
    fmt = format_pretty if pretty else format_entry
    return "".join(" ".join(fmt(e) for e in row) + "\n" for row in grid)
