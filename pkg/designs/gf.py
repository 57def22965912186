"""
Finite field engine: GF(p^s) with log / antilog / Zech tables.

Elements are identified by an integer code sum(c_i * p^i) built from their
coefficient vector modulo the defining polynomial. Nonzero elements are
stored by discrete log base the primitive element β, so multiplication,
inversion and powers are index arithmetic and addition goes through the
Zech table.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Tuple

import numpy as np
from sympy import isprime, primefactors

from config import settings
from designs.entries import ZERO
from errors import FieldError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Poly:
    """Polynomial over GF(p), little-endian coefficients"""
    coeffs: Tuple[int, ...]
    p: int

    def __post_init__(self):
        reduced = [int(c) % self.p for c in self.coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        object.__setattr__(self, "coeffs", tuple(reduced))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


def _poly_rem(num: Tuple[int, ...], den: Tuple[int, ...], p: int) -> list:
    """Remainder of num by a monic den over GF(p)"""
    rem = list(num)
    d = len(den) - 1
    for shift in range(len(rem) - 1 - d, -1, -1):
        lead = rem[shift + d]
        if lead:
            for i, c in enumerate(den):
                rem[shift + i] = (rem[shift + i] - lead * c) % p
    rem = rem[:d]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _monic_polys(p: int, degree: int) -> Iterable[Tuple[int, ...]]:
    """Monic polynomials of a degree, ordered by (c0, c1, ...)"""
    for low in itertools.product(range(p), repeat=degree):
        yield low + (1,)


def is_irreducible(poly: Poly) -> bool:
    """Brute-force irreducibility test over GF(p)"""
    n = poly.degree
    if n < 1:
        return False
    if n == 1:
        return True
    p = poly.p
    if any(poly(x) == 0 for x in range(p)):
        return False
    for d in range(2, n // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _poly_rem(poly.coeffs, cand, p):
                return False
    return True


def _check_size(p: int, n: int) -> None:
    if not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if n < 1:
        raise FieldError(f"extension degree must be >= 1, got {n}")
    if p ** n > settings.field_cap:
        raise FieldError(f"field order {p}^{n} exceeds cap {settings.field_cap}")


def find_irreducible(p: int, n: int) -> Poly:
    """
    Smallest monic irreducible polynomial of degree n over GF(p)

    Candidates are compared by their coefficient sequence read from the
    constant term upward, so (5, 1) gives x and (5, 2) gives x^2 + x + 1.
    """
    _check_size(p, n)
    for coeffs in _monic_polys(p, n):
        poly = Poly(coeffs, p)
        if is_irreducible(poly):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


def _times_x(vec: np.ndarray, low: np.ndarray, p: int) -> np.ndarray:
    top = vec[-1]
    shifted = np.concatenate(([0], vec[:-1]))
    return (shifted - top * low) % p


def _mul_matrix(vec: np.ndarray, low: np.ndarray, p: int) -> np.ndarray:
    """Matrix of y -> vec * y acting on coefficient vectors"""
    cols = []
    col = vec % p
    for _ in range(len(low)):
        cols.append(col)
        col = _times_x(col, low, p)
    return np.stack(cols, axis=1)


def _mat_pow(mat: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = mat.copy()
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(p^s) with its tables; immutable once built"""
    p: int
    s: int
    order: int
    modulus: Poly
    beta_index: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    zech_table: np.ndarray = field(repr=False)

    @property
    def group_order(self) -> int:
        return self.order - 1

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(ZERO, self)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(0, self)

    @property
    def beta(self) -> "FieldElem":
        return FieldElem(1 % self.group_order, self)

    def element(self, code: int) -> "FieldElem":
        if not 0 <= code < self.order:
            raise FieldError(f"element code {code} outside GF({self.order})")
        return FieldElem(int(self.log_table[code]), self)

    def code(self, x: "FieldElem") -> int:
        self._own(x)
        return 0 if x.is_zero else int(self.exp_table[x.exp])

    def beta_power(self, i: int) -> "FieldElem":
        return FieldElem(i % self.group_order, self)

    def digits(self, codes) -> np.ndarray:
        """Coefficient vectors (last axis) of integer element codes"""
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self.p ** np.arange(self.s, dtype=np.int64)) % self.p

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self.p ** np.arange(self.s, dtype=np.int64)).sum(axis=-1)

    def subfield_degree(self, q: int) -> int:
        """t with q = p^t and t | s, or FieldError"""
        t = 1
        while self.p ** t < q:
            t += 1
        if self.p ** t != q or self.s % t:
            raise FieldError(f"{q} is not the order of a subfield of GF({self.order})")
        return t

    def omega_exponent(self, q: int) -> int:
        """v = (order - 1)/(q - 1), so ω = β^v generates the subfield's group"""
        self.subfield_degree(q)
        return self.group_order // (q - 1)

    def _own(self, x: "FieldElem") -> None:
        if x.ctx is not self and (x.ctx.p, x.ctx.s) != (self.p, self.s):
            raise FieldError("operands belong to different fields")

    def __str__(self) -> str:
        return f"GF({self.p}^{self.s}) mod {self.modulus}, beta code {self.beta_index}"


class FieldElem:
    """Field element stored as a discrete log base β (ZERO for 0)"""

    __slots__ = ("exp", "ctx")

    def __init__(self, exp: int, ctx: FieldCtx):
        exp = int(exp)
        if exp != ZERO and not 0 <= exp < ctx.group_order:
            raise FieldError(f"exponent {exp} outside [0, {ctx.group_order - 1}]")
        self.exp = exp
        self.ctx = ctx

    @property
    def is_zero(self) -> bool:
        return self.exp == ZERO

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.exp == other.exp and (self.ctx.p, self.ctx.s) == (other.ctx.p, other.ctx.s)

    def __hash__(self) -> int:
        return hash((self.ctx.p, self.ctx.s, self.exp))

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return add(self, other)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return add(self, neg(other))

    def __neg__(self) -> "FieldElem":
        return neg(self)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return mul(self, other)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return mul(self, inv(other))

    def __pow__(self, e: int) -> "FieldElem":
        return power(self, e)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return f"b^{self.exp}"


@lru_cache(maxsize=64)
def build_field(p: int, s: int) -> FieldCtx:
    """
    Build GF(p^s) tables

    β is the smallest element code (zero excluded) of multiplicative order
    p^s - 1; it equals x whenever the chosen modulus is primitive.
    """
    modulus = find_irreducible(p, s)
    order = p ** s
    n = order - 1
    low = np.array(modulus.coeffs[:s], dtype=np.int64)
    place = p ** np.arange(s, dtype=np.int64)
    one = np.zeros(s, dtype=np.int64)
    one[0] = 1

    def vector(code: int) -> np.ndarray:
        return (code // place) % p

    beta_index = 1
    step = np.eye(s, dtype=np.int64)
    if n > 1:
        factors = primefactors(n)
        for code in range(2, order):
            mat = _mul_matrix(vector(code), low, p)
            if all(not np.array_equal(_mat_pow(mat, n // r, p) @ one % p, one) for r in factors):
                beta_index = code
                step = mat
                break
        else:
            raise FieldError(f"no primitive element found in GF({order})")

    # Doubling: powers [0, L) times β^L give powers [L, 2L)
    powers = one[None, :]
    while powers.shape[0] < n:
        powers = np.concatenate([powers, (powers @ step.T) % p])
        step = (step @ step) % p
    powers = powers[:n]

    exp_table = (powers * place).sum(axis=1)
    log_table = np.full(order, ZERO, dtype=np.int64)
    log_table[exp_table] = np.arange(n, dtype=np.int64)
    if np.any(log_table[1:] == ZERO):
        raise FieldError(f"element {beta_index} does not generate GF({order})*")

    plus_one = powers.copy()
    plus_one[:, 0] = (plus_one[:, 0] + 1) % p
    zech_table = log_table[(plus_one * place).sum(axis=1)]

    for table in (exp_table, log_table, zech_table):
        table.setflags(write=False)

    logger.info(f"🔧 Built GF({p}^{s}) modulus {modulus}, beta code {beta_index}")
    return FieldCtx(
        p=p,
        s=s,
        order=order,
        modulus=modulus,
        beta_index=beta_index,
        exp_table=exp_table,
        log_table=log_table,
        zech_table=zech_table,
    )


def _same(a: FieldElem, b: FieldElem) -> FieldCtx:
    a.ctx._own(b)
    return a.ctx


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    ctx = _same(a, b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    z = int(ctx.zech_table[(b.exp - a.exp) % ctx.group_order])
    if z == ZERO:
        return ctx.zero
    return FieldElem((a.exp + z) % ctx.group_order, ctx)


def neg(a: FieldElem) -> FieldElem:
    ctx = a.ctx
    if a.is_zero or ctx.p == 2:
        return a
    return FieldElem((a.exp + ctx.group_order // 2) % ctx.group_order, ctx)


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    ctx = _same(a, b)
    if a.is_zero or b.is_zero:
        return ctx.zero
    return FieldElem((a.exp + b.exp) % ctx.group_order, ctx)


def inv(a: FieldElem) -> FieldElem:
    if a.is_zero:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    return FieldElem((-a.exp) % a.ctx.group_order, a.ctx)


def power(a: FieldElem, e: int) -> FieldElem:
    if a.is_zero:
        if e > 0:
            return a
        if e == 0:
            return a.ctx.one
        raise ZeroDivisionError("negative power of zero")
    return FieldElem((a.exp * e) % a.ctx.group_order, a.ctx)


def element_order(ctx: FieldCtx, x: FieldElem) -> int:
    """Multiplicative order of a nonzero element"""
    ctx._own(x)
    if x.is_zero:
        raise FieldError("zero has no multiplicative order")
    return ctx.group_order // gcd(x.exp, ctx.group_order)


def trace_logs(ctx: FieldCtx, q: int, exps) -> np.ndarray:
    """
    Vectorized relative trace of β^e for each e in exps

    Returns the discrete logs (base β) of the traces, ZERO where the trace
    vanishes.
    """
    t = ctx.subfield_degree(q)
    terms = ctx.s // t
    exps = np.asarray(exps, dtype=np.int64) % ctx.group_order
    frob = np.array([pow(q, i, ctx.group_order) for i in range(terms)], dtype=np.int64)
    codes = ctx.exp_table[(exps[..., None] * frob) % ctx.group_order]
    total = ctx.digits(codes).sum(axis=-2) % ctx.p
    return ctx.log_table[ctx.encode(total)]


def rel_trace(ctx: FieldCtx, q: int, x: FieldElem) -> FieldElem:
    """Tr_{F/K}(x) = x + x^q + ... + x^(q^m) into the subfield of order q"""
    ctx._own(x)
    t = ctx.subfield_degree(q)
    total = ctx.zero
    for i in range(ctx.s // t):
        total = total + power(x, q ** i)
    if power(total, q) != total:
        raise FieldError(f"trace {total!r} escaped the subfield of order {q}")
    return total


def dlog_in_subfield(ctx: FieldCtx, q: int, x: FieldElem) -> int:
    """Exponent e with x = ω^e, ω = β^v; ZERO for the zero element"""
    ctx._own(x)
    v = ctx.omega_exponent(q)
    if x.is_zero:
        return ZERO
    if x.exp % v:
        raise FieldError(f"{x!r} does not lie in the subfield of order {q}")
    return x.exp // v
