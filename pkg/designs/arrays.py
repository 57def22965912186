"""
Array Stage - orthogonal and covering array verification, code-plus-zero
arrays and complete systems of mutually suitable Latin squares
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from designs.cwcode import Code, shift_rows
from designs.entries import ENTRY_DTYPE, ZERO, Verdict, as_grid, freeze, scale_exponents, symbol_index
from errors import ArrayError, ParameterError
from utils.helpers import chunk_ranges, first_hit, run_partitioned

logger = logging.getLogger(__name__)

# Largest a^t counter table a strength scan will allocate
MAX_TUPLE_BUCKETS = 1 << 24


@dataclass(frozen=True, eq=False)
class SymbolArray:
    """N x k array over {Zero} ∪ cyclic group of order a - 1"""
    grid: np.ndarray
    a: int

    def __post_init__(self):
        if self.a < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {self.a}")
        object.__setattr__(self, "grid", as_grid(self.grid, self.a - 1))

    @property
    def N(self) -> int:
        return self.grid.shape[0]

    @property
    def k(self) -> int:
        return self.grid.shape[1]

    @property
    def g(self) -> int:
        return self.a - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolArray):
            return NotImplemented
        return self.a == other.a and np.array_equal(self.grid, other.grid)

    __hash__ = None


@dataclass(frozen=True)
class ArrayCert:
    """OA or CA parameters (N, k, t, λ) over an alphabet of size a"""
    kind: str
    N: int
    k: int
    t: int
    lambda_: int
    a: int

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.N, self.k, self.t, self.lambda_


@dataclass(frozen=True, eq=False)
class LatinSquare:
    """n x n grid; Latin when every row and column is a permutation of the alphabet"""
    grid: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=ENTRY_DTYPE)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise ParameterError(f"a Latin square must be square, got shape {grid.shape}")
        object.__setattr__(self, "grid", freeze(grid))

    @property
    def n(self) -> int:
        return self.grid.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return np.array_equal(self.grid, other.grid)

    __hash__ = None


def append_zero_word(C: Code) -> SymbolArray:
    """Code words followed by the all-Zero row"""
    if C.M == 0:
        raise ArrayError("cannot build an array from an empty code")
    zero = np.full(C.n, ZERO, dtype=ENTRY_DTYPE)
    if zero in C:
        raise ArrayError("code already contains the zero word")
    return SymbolArray(np.vstack([C.words, zero]), C.a)


def _decode_tuple(index: int, a: int, t: int) -> List[Optional[int]]:
    digits = []
    for _ in range(t):
        index, digit = divmod(index, a)
        digits.append(digit - 1)
    return [None if d == ZERO else d for d in reversed(digits)]


def _scan_strength(A: SymbolArray, t: int, lam: int, exact: bool, threads: int) -> Verdict:
    if not 1 <= t <= A.k:
        raise ParameterError(f"strength t = {t} must lie in [1, {A.k}]")
    if lam < 1:
        raise ParameterError(f"lambda must be >= 1, got {lam}")
    a = A.a
    if a ** t > MAX_TUPLE_BUCKETS:
        raise ParameterError(f"{a}^{t} tuple counters exceed the limit {MAX_TUPLE_BUCKETS}")
    symbols = symbol_index(A.grid)
    combos = list(itertools.combinations(range(A.k), t))
    radix = a ** np.arange(t - 1, -1, -1, dtype=np.int64)

    def scan(indices: range):
        for ci in indices:
            cols = combos[ci]
            keys = symbols[:, cols] @ radix
            counts = np.bincount(keys, minlength=a ** t)
            bad = counts != lam if exact else counts < lam
            if bad.any():
                idx = int(np.argmax(bad))
                return {
                    "columns": list(cols),
                    "tuple": _decode_tuple(idx, a, t),
                    "count": int(counts[idx]),
                    "expected": lam,
                }
        return None

    witness = first_hit(run_partitioned(scan, chunk_ranges(len(combos), threads), threads))
    kind = "OA" if exact else "CA"
    if witness is not None:
        condition = "tuple count differs from lambda" if exact else "tuple covered fewer than lambda times"
        return Verdict.fail(condition, witness)
    cert = ArrayCert(kind=kind, N=A.N, k=A.k, t=t, lambda_=lam, a=a)
    logger.info(f"✅ {kind}_{a}{cert.as_tuple()}")
    return Verdict.ok(cert)


def verify_oa(A: SymbolArray, t: int = 2, lam: int = 1, threads: int = 1) -> Verdict:
    """Every t-tuple appears exactly λ times in every t-column projection"""
    return _scan_strength(A, t, lam, exact=True, threads=threads)


def verify_ca(A: SymbolArray, t: int = 2, lam: int = 1, threads: int = 1) -> Verdict:
    """Every t-tuple appears at least λ times in every t-column projection"""
    return _scan_strength(A, t, lam, exact=False, threads=threads)


def is_shift_closed(A: SymbolArray, c: int) -> bool:
    """Rows closed under ω^c-shifts"""
    if not 0 <= c < A.g:
        raise ParameterError(f"shift exponent {c} outside [0, {A.g - 1}]")
    rows = np.unique(A.grid, axis=0)
    return bool(np.array_equal(np.unique(shift_rows(rows, c, A.g), axis=0), rows))


def latin_violation(L: LatinSquare) -> Optional[Dict[str, int]]:
    """First row or column that is not a permutation, or None"""
    alphabet = np.unique(L.grid)
    if alphabet.size != L.n:
        return {"alphabet": int(alphabet.size), "expected": L.n}
    for i in range(L.n):
        if np.unique(L.grid[i]).size != L.n:
            return {"row": i}
    for j in range(L.n):
        if np.unique(L.grid[:, j]).size != L.n:
            return {"column": j}
    return None


def verify_latin(L: LatinSquare) -> bool:
    return latin_violation(L) is None


def suitable(L: LatinSquare, M: LatinSquare) -> bool:
    """Exactly one coinciding cell in every row"""
    if L.n != M.n:
        raise ParameterError(f"orders differ: {L.n} vs {M.n}")
    return bool(np.all((L.grid == M.grid).sum(axis=1) == 1))


def verify_msls(squares: Sequence[LatinSquare]) -> bool:
    """Every pair of distinct squares is suitable"""
    if len(squares) < 2:
        raise ParameterError("need at least two squares")
    return all(suitable(L, M) for L, M in itertools.combinations(squares, 2))


def is_complete_system(squares: Sequence[LatinSquare]) -> bool:
    """Mutually suitable and of size n - 1"""
    return len(squares) == squares[0].n - 1 and verify_msls(squares)


def extract_msls(A: SymbolArray, threads: int = 1) -> List[LatinSquare]:
    """
    Complete system of n - 1 mutually suitable Latin squares from an
    OA(n^2, n+1, 2, 1) over n symbols

    The base square B[x][y] is the column-0 symbol of the unique row whose
    columns 1 and 2 read (x, y), with x, y in canonical symbol order. The
    system is ω^s·B for s = 0..n-2: scaling permutes the nonzero symbols and
    fixes the single Zero of each row, so two members coincide exactly there.
    """
    n = A.a
    if A.N != n * n or A.k != n + 1:
        raise ArrayError(f"expected an {n * n} x {n + 1} array", {"shape": [A.N, A.k]})
    verdict = verify_oa(A, 2, 1, threads=threads)
    if not verdict:
        raise ArrayError("array is not an OA(n^2, n+1, 2, 1)", verdict.witness)

    idx = symbol_index(A.grid)
    base = np.empty((n, n), dtype=ENTRY_DTYPE)
    base[idx[:, 1], idx[:, 2]] = A.grid[:, 0]

    squares = []
    for s in range(n - 1):
        square = LatinSquare(scale_exponents(base, s, n - 1))
        violation = latin_violation(square)
        if violation is not None:
            raise ArrayError(f"square for symbol w^{s} is not Latin", violation)
        squares.append(square)
    logger.info(f"✅ Extracted {len(squares)} Latin squares of order {n}")
    return squares


def latin_to_array(L: LatinSquare) -> SymbolArray:
    """(row, column, symbol) triples as an n^2 x 3 array over n symbols"""
    n = L.n
    alphabet, coded = np.unique(L.grid, return_inverse=True)
    if alphabet.size != n:
        raise ArrayError(f"square uses {alphabet.size} symbols, expected {n}")
    coded = coded.reshape(n, n)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    grid = np.stack([i.ravel(), j.ravel(), coded.ravel()], axis=1) - 1
    return SymbolArray(grid, n)
