"""
BGW Stage - ω-circulant balanced generalized weighing matrices from traces,
balance verification, monomial equivalence, normal form and group reduction
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence, Tuple

import numpy as np

from designs.entries import (
    ENTRY_DTYPE,
    ZERO,
    Verdict,
    as_grid,
    power_exponents,
    row_weights,
    scale_exponents,
)
from designs.gf import build_field, trace_logs
from errors import ParameterError
from utils.edge_cases import bgw_order, check_odd_prime_power
from utils.helpers import chunk_ranges, first_hit, run_partitioned

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GMatrix:
    """Dense (0, G)-matrix over the cyclic group of order u"""
    entries: np.ndarray
    u: int
    circulant_shift: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", as_grid(self.entries, self.u))
        if self.circulant_shift is not None and not 0 <= self.circulant_shift < self.u:
            raise ParameterError(f"circulant shift {self.circulant_shift} outside [0, {self.u - 1}]")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GMatrix):
            return NotImplemented
        return (
            self.u == other.u
            and self.circulant_shift == other.circulant_shift
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None


@dataclass(frozen=True)
class BgwCert:
    """BGW(v, k, λ) over a cyclic group of order u"""
    v: int
    k: int
    lambda_: int
    u: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.v, self.k, self.lambda_


def classical_params(q: int, m: int) -> Tuple[int, int, int]:
    """(v, k, λ) = ((q^(m+1) - 1)/(q - 1), q^m, q^m - q^(m-1))"""
    check_odd_prime_power(q)
    if m < 1:
        raise ParameterError(f"m = {m} must be >= 1")
    return bgw_order(q, m), q ** m, q ** m - q ** (m - 1)


def trace_row(q: int, m: int) -> np.ndarray:
    """
    First row of the trace construction over GF(q)*

    Entry i is the ω-exponent of Tr(β^-i), F = GF(q^(m+1)), ω = β^v.
    Reading along β^-1 makes the row ω-circulant rather than
    ω^-1-circulant.
    """
    p, t = check_odd_prime_power(q)
    if m < 1:
        raise ParameterError(f"m = {m} must be >= 1")
    ctx = build_field(p, t * (m + 1))
    v = bgw_order(q, m)
    logs = trace_logs(ctx, q, -np.arange(v, dtype=ENTRY_DTYPE))
    row = np.where(logs == ZERO, ZERO, logs // ctx.omega_exponent(q))
    zeros = int((row == ZERO).sum())
    if zeros != v - q ** m:
        raise ParameterError(f"trace row for q={q}, m={m} has {zeros} zeros, expected {v - q ** m}")
    row.setflags(write=False)
    return row


def omega_circulant(first_row: Sequence[int], c: int, u: int) -> GMatrix:
    """A[i][j] = a[j-i] for i <= j, ω^c · a[j-i+v] for j < i"""
    row = np.asarray(first_row, dtype=ENTRY_DTYPE)
    v = row.shape[0]
    if row.ndim != 1 or v < 1:
        raise ParameterError("first row must be a non-empty sequence")
    if not 0 <= c < u:
        raise ParameterError(f"shift exponent {c} outside [0, {u - 1}]")
    i = np.arange(v)[:, None]
    j = np.arange(v)[None, :]
    grid = row[(j - i) % v]
    grid = np.where(j < i, scale_exponents(grid, c, u), grid)
    return GMatrix(grid, u, circulant_shift=c)


@lru_cache(maxsize=32)
def construct_bgw(q: int, m: int) -> GMatrix:
    """The ω-circulant BGW with classical parameters over GF(q)*"""
    matrix = omega_circulant(trace_row(q, m), 1 % (q - 1), q - 1)
    logger.info(f"🔧 Constructed {matrix.rows}x{matrix.cols} trace matrix for q={q}, m={m}")
    return matrix


def verify_circulant(W: GMatrix) -> bool:
    """Check the recorded ω^c-circulant certificate against the entries"""
    if W.circulant_shift is None or W.rows != W.cols:
        return False
    rebuilt = omega_circulant(W.entries[0], W.circulant_shift, W.u)
    return np.array_equal(rebuilt.entries, W.entries)


def _pair_counts(entries: np.ndarray, i: int, u: int) -> np.ndarray:
    """Element counts of W[i]·W[j]^-1 for every j > i, shape (v-i-1, u)"""
    head = entries[i]
    rest = entries[i + 1:]
    both = (head != ZERO) & (rest != ZERO)
    quotient = (head - rest) % u
    keys = (np.arange(rest.shape[0])[:, None] * u + quotient)[both]
    return np.bincount(keys, minlength=rest.shape[0] * u).reshape(rest.shape[0], u)


def verify_bgw(W: GMatrix, threads: int = 1) -> Verdict:
    """
    Check the BGW balance property

    Every row must have the same weight k > 0 and, for every pair of rows,
    the quotients over common support must hit each group element λ/u
    times. λ is read from the pair (0, 1). The witness is the
    lexicographically smallest failing row or pair.
    """
    entries, u = W.entries, W.u
    v = W.rows
    if v != W.cols:
        return Verdict.fail("matrix is not square", {"shape": W.shape})
    if v < 2:
        return Verdict.fail("fewer than two rows", {"rows": v})

    weights = row_weights(entries)
    k = int(weights[0])
    if k == 0:
        return Verdict.fail("row weight must be positive", {"row": 0, "weight": 0})
    uneven = np.flatnonzero(weights != k)
    if uneven.size:
        r = int(uneven[0])
        return Verdict.fail("row weights differ", {"row": r, "weight": int(weights[r]), "expected": k})

    lam = int(_pair_counts(entries, 0, u)[0].sum())
    if lam < 1:
        return Verdict.fail("lambda must be positive", {"pair": (0, 1), "lambda": lam})
    if lam % u:
        return Verdict.fail("group order does not divide lambda", {"pair": (0, 1), "lambda": lam, "u": u})
    per = lam // u

    def scan(rows: range):
        for i in rows:
            counts = _pair_counts(entries, i, u)
            bad = np.flatnonzero((counts != per).any(axis=1))
            if bad.size:
                j = int(bad[0])
                return {
                    "pair": (i, i + 1 + j),
                    "counts": [int(c) for c in counts[j]],
                    "expected": per,
                }
        return None

    witness = first_hit(run_partitioned(scan, chunk_ranges(v - 1, threads), threads))
    if witness is not None:
        return Verdict.fail("pair quotients not balanced", witness)

    cert = BgwCert(v=v, k=k, lambda_=lam, u=u)
    logger.info(f"✅ BGW{cert.as_tuple()} over a group of order {u}")
    return Verdict.ok(cert)


@dataclass(frozen=True, eq=False)
class MonomialTransform:
    """
    Pair of monomial matrices plus a group automorphism x -> x^t

    row_perm[old] = new and col_perm[old] = new; scalars are indexed by the
    new position.
    """
    row_perm: np.ndarray
    col_perm: np.ndarray
    row_scalars: np.ndarray
    col_scalars: np.ndarray
    aut_exp: int
    u: int

    def __post_init__(self):
        if self.u < 1:
            raise ParameterError(f"group order must be >= 1, got {self.u}")
        for name in ("row_perm", "col_perm", "row_scalars", "col_scalars"):
            arr = np.array(getattr(self, name), dtype=ENTRY_DTYPE)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("row_perm", "col_perm"):
            perm = getattr(self, name)
            if not np.array_equal(np.sort(perm), np.arange(perm.shape[0])):
                raise ParameterError(f"{name} is not a permutation")
        if self.row_scalars.shape != self.row_perm.shape or self.col_scalars.shape != self.col_perm.shape:
            raise ParameterError("scalar vectors must match permutation lengths")
        for name in ("row_scalars", "col_scalars"):
            arr = getattr(self, name)
            if arr.size and (arr.min() < 0 or arr.max() >= self.u):
                raise ParameterError(f"{name} must lie in [0, {self.u - 1}]")
        t = int(self.aut_exp) % self.u
        if gcd(t, self.u) != 1:
            raise ParameterError(f"automorphism exponent {self.aut_exp} is not coprime to {self.u}")
        object.__setattr__(self, "aut_exp", t)

    @classmethod
    def identity(cls, v: int, u: int, cols: Optional[int] = None) -> "MonomialTransform":
        cols = v if cols is None else cols
        return cls(
            row_perm=np.arange(v),
            col_perm=np.arange(cols),
            row_scalars=np.zeros(v, dtype=ENTRY_DTYPE),
            col_scalars=np.zeros(cols, dtype=ENTRY_DTYPE),
            aut_exp=1,
            u=u,
        )

    @classmethod
    def random(cls, v: int, u: int, rng: np.random.Generator) -> "MonomialTransform":
        units = [t for t in range(u) if gcd(t, u) == 1]
        return cls(
            row_perm=rng.permutation(v),
            col_perm=rng.permutation(v),
            row_scalars=rng.integers(0, u, v),
            col_scalars=rng.integers(0, u, v),
            aut_exp=int(rng.choice(units)),
            u=u,
        )

    def then(self, other: "MonomialTransform") -> "MonomialTransform":
        """Composite equal to applying self, then other"""
        if other.u != self.u or other.row_perm.shape != self.row_perm.shape or other.col_perm.shape != self.col_perm.shape:
            raise ParameterError("transforms act on different shapes or groups")
        u, t2 = self.u, other.aut_exp
        return MonomialTransform(
            row_perm=other.row_perm[self.row_perm],
            col_perm=other.col_perm[self.col_perm],
            row_scalars=(other.row_scalars + t2 * self.row_scalars[np.argsort(other.row_perm)]) % u,
            col_scalars=(other.col_scalars + t2 * self.col_scalars[np.argsort(other.col_perm)]) % u,
            aut_exp=(self.aut_exp * t2) % u,
            u=u,
        )

    def inverse(self) -> "MonomialTransform":
        u = self.u
        t_inv = pow(self.aut_exp, -1, u) if u > 1 else 0
        return MonomialTransform(
            row_perm=np.argsort(self.row_perm),
            col_perm=np.argsort(self.col_perm),
            row_scalars=(-t_inv * self.row_scalars[self.row_perm]) % u,
            col_scalars=(-t_inv * self.col_scalars[self.col_perm]) % u,
            aut_exp=t_inv,
            u=u,
        )

    def apply(self, W: GMatrix) -> GMatrix:
        return apply_monomial_equivalence(W, self)


def apply_monomial_equivalence(W: GMatrix, T: MonomialTransform) -> GMatrix:
    """out[i][j] = r[i] · W[p^-1(i)][s^-1(j)]^t · c[j], Zero fixed"""
    if T.u != W.u:
        raise ParameterError(f"transform group order {T.u} != matrix group order {W.u}")
    if T.row_perm.shape[0] != W.rows or T.col_perm.shape[0] != W.cols:
        raise ParameterError(f"transform dimensions do not match matrix shape {W.shape}")
    moved = W.entries[np.argsort(T.row_perm)][:, np.argsort(T.col_perm)]
    moved = power_exponents(moved, T.aut_exp, W.u)
    shifted = (moved + T.row_scalars[:, None] + T.col_scalars[None, :]) % W.u
    return GMatrix(np.where(moved == ZERO, ZERO, shifted), W.u)


@dataclass(frozen=True, eq=False)
class NormalForm:
    """[[0-column, R], [1-column, D]] blocks of a normalized BGW"""
    R: GMatrix
    D: GMatrix
    transform: MonomialTransform

    def reassemble(self) -> GMatrix:
        u = self.D.u
        top = np.hstack([np.full((self.R.rows, 1), ZERO), self.R.entries]) if self.R.rows else np.empty((0, self.D.cols + 1), dtype=ENTRY_DTYPE)
        bottom = np.hstack([np.zeros((self.D.rows, 1), dtype=ENTRY_DTYPE), self.D.entries])
        return GMatrix(np.vstack([top, bottom]), u)


def normalize(W: GMatrix, threads: int = 1) -> NormalForm:
    """
    Move rows with Zero in column 0 to the top (stable) and scale the rest
    so that column 0 reads (0, ..., 0, 1, ..., 1)
    """
    verdict = verify_bgw(W, threads=threads)
    if not verdict:
        raise ParameterError(f"not a BGW: {verdict.describe()}")
    cert = verdict.cert
    u = W.u
    col0 = W.entries[:, 0]
    zero_rows = np.flatnonzero(col0 == ZERO)
    live_rows = np.flatnonzero(col0 != ZERO)
    order = np.concatenate([zero_rows, live_rows])

    row_scalars = np.zeros(W.rows, dtype=ENTRY_DTYPE)
    row_scalars[len(zero_rows):] = (-col0[live_rows]) % u
    transform = MonomialTransform(
        row_perm=np.argsort(order),
        col_perm=np.arange(W.cols),
        row_scalars=row_scalars,
        col_scalars=np.zeros(W.cols, dtype=ENTRY_DTYPE),
        aut_exp=1,
        u=u,
    )
    block = apply_monomial_equivalence(W, transform).entries
    n0 = len(zero_rows)
    form = NormalForm(R=GMatrix(block[:n0, 1:], u), D=GMatrix(block[n0:, 1:], u), transform=transform)

    if form.D.rows != cert.k or np.any(row_weights(form.D.entries) != cert.k - 1):
        raise ParameterError("derived part does not have k rows of weight k - 1")
    if np.any(row_weights(form.R.entries) != cert.k):
        raise ParameterError("residual part rows do not have weight k")
    logger.info(f"🔧 Normal form: R {form.R.shape}, D {form.D.shape}")
    return form


def reduce_group(W: GMatrix, g: int) -> GMatrix:
    """Entrywise x -> x^(u/g): exponent e becomes e mod g over the order-g group"""
    if g < 1 or W.u % g:
        raise ParameterError(f"g = {g} does not divide group order {W.u}")
    grid = np.where(W.entries == ZERO, ZERO, W.entries % g)
    shift = None if W.circulant_shift is None else W.circulant_shift % g
    return GMatrix(grid, g, circulant_shift=shift)


def scale(W: GMatrix, c: int) -> GMatrix:
    """Multiply every nonzero entry by ω^c"""
    return GMatrix(scale_exponents(W.entries, c, W.u), W.u, circulant_shift=W.circulant_shift)


def is_weighing_matrix(W: GMatrix) -> bool:
    """For u <= 2: reading ω^e as (-1)^e, W·W^T = k·I"""
    if W.u > 2:
        raise ParameterError(f"weighing matrices need u <= 2, got {W.u}")
    if W.rows != W.cols:
        return False
    signed = np.where(W.entries == ZERO, 0, np.where(W.entries % 2 == 0, 1, -1))
    gram = signed @ signed.T
    k = int(gram[0, 0]) if W.rows else 0
    return bool(np.array_equal(gram, k * np.eye(W.rows, dtype=gram.dtype)))


def support_design(W: GMatrix) -> Optional[Tuple[int, int, int]]:
    """(v, k, λ) when the support S satisfies S·S^T = (k - λ)I + λJ"""
    if W.rows != W.cols or W.rows < 2:
        return None
    incidence = (W.entries != ZERO).astype(np.int64)
    gram = incidence @ incidence.T
    v = W.rows
    k, lam = int(gram[0, 0]), int(gram[0, 1])
    expected = (k - lam) * np.eye(v, dtype=np.int64) + lam
    if not np.array_equal(gram, expected):
        return None
    return v, k, lam
