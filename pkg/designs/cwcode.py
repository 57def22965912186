"""
Code Stage - constant-weight codes from reduced BGWs, distances, Johnson
bounds and optimality certificates
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from designs.bgw import GMatrix, NormalForm, construct_bgw, normalize, reduce_group
from designs.entries import ENTRY_DTYPE, ZERO, as_grid, row_weights, scale_exponents
from errors import ParameterError, ParameterMismatchError
from utils.edge_cases import bgw_order, check_divisor, check_odd_prime_power, prime_power
from utils.helpers import chunk_ranges, run_partitioned

logger = logging.getLogger(__name__)

M1_NOTE = "m = 1 lies outside the m > 1 construction range; checked directly"
TERNARY_NOTE = "bidistant ternary case: the bound is A_3 over the symbol alphabet, not the field order"


class ConstructionRequest(BaseModel):
    """(q, m, g) with q an odd prime power and g | q - 1"""
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=3)
    m: int = Field(..., ge=1)
    g: int = Field(..., ge=1)

    @field_validator("q")
    @classmethod
    def _odd_prime_power(cls, q: int) -> int:
        check_odd_prime_power(q)
        return q

    @model_validator(mode="after")
    def _divides(self) -> "ConstructionRequest":
        check_divisor(self.q, self.g)
        return self

    @property
    def v(self) -> int:
        return bgw_order(self.q, self.m)

    @property
    def k(self) -> int:
        return self.q ** self.m

    @property
    def a(self) -> int:
        return self.g + 1


@dataclass(frozen=True)
class CodeParams:
    """(n, M, d, w) over an alphabet of size a"""
    n: int
    M: int
    d: int
    w: int
    a: int

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.n, self.M, self.d, self.w


@dataclass(frozen=True)
class DistanceProfile:
    """Multiplicities of pairwise distances over unordered word pairs"""
    counts: Dict[int, int]

    @property
    def values(self) -> List[int]:
        return sorted(self.counts)

    @property
    def minimum(self) -> int:
        return self.values[0]

    @property
    def second(self) -> Optional[int]:
        return self.values[1] if len(self.counts) > 1 else None

    @property
    def pairs(self) -> int:
        return sum(self.counts.values())

    @property
    def is_equidistant(self) -> bool:
        return len(self.counts) == 1

    @property
    def is_bidistant(self) -> bool:
        return len(self.counts) == 2


@dataclass(frozen=True)
class BoundReport:
    """Johnson bound evaluations and the optimality verdict"""
    restricted: Optional[int]
    unrestricted: Optional[int]
    achieved_M: int
    optimal: bool
    denominator: int
    bound_used: Optional[int] = None
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Code:
    """Set of words over {Zero} ∪ order-g group, stored sorted and unique"""
    words: np.ndarray
    g: int
    _profiles: Dict[bool, DistanceProfile] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        grid = as_grid(self.words, self.g)
        if grid.shape[0] > 1:
            grid = np.unique(grid, axis=0)
            grid.setflags(write=False)
        object.__setattr__(self, "words", grid)

    @property
    def n(self) -> int:
        return self.words.shape[1]

    @property
    def M(self) -> int:
        return self.words.shape[0]

    @property
    def a(self) -> int:
        return self.g + 1

    def __len__(self) -> int:
        return self.M

    def __contains__(self, word) -> bool:
        word = np.asarray(word, dtype=ENTRY_DTYPE)
        return bool(self.M) and bool(np.any(np.all(self.words == word, axis=1)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Code):
            return NotImplemented
        return self.g == other.g and np.array_equal(self.words, other.words)

    __hash__ = None

    def without(self, index: int) -> "Code":
        return Code(np.delete(self.words, index, axis=0), self.g)

    def distance_profile(self, threads: int = 1, transitive: bool = False) -> DistanceProfile:
        if transitive not in self._profiles:
            self._profiles[transitive] = distance_set(self, threads=threads, transitive=transitive)
        return self._profiles[transitive]


def _check_lengths(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ParameterError(f"word lengths differ: {x.shape} vs {y.shape}")


def hamming_distance(x: Sequence[int], y: Sequence[int]) -> int:
    x = np.asarray(x, dtype=ENTRY_DTYPE)
    y = np.asarray(y, dtype=ENTRY_DTYPE)
    _check_lengths(x, y)
    return int((x != y).sum())


def weight(x: Sequence[int]) -> int:
    return int((np.asarray(x) != ZERO).sum())


def omega_shift(x: Sequence[int], c: int, g: int) -> np.ndarray:
    """(ω^c·x[n-1], x[0], ..., x[n-2])"""
    if not 0 <= c < g:
        raise ParameterError(f"shift exponent {c} outside [0, {g - 1}]")
    x = np.asarray(x, dtype=ENTRY_DTYPE)
    out = np.roll(x, 1)
    out[0] = scale_exponents(x[-1:], c, g)[0]
    return out


def shift_rows(words: np.ndarray, c: int, g: int) -> np.ndarray:
    out = np.roll(words, 1, axis=1)
    out[:, 0] = scale_exponents(words[:, -1], c, g)
    return out


def generate_from_seed(x: Sequence[int], c: int, g: int) -> Code:
    """Orbit of x under repeated ω^c-shifts"""
    start = np.asarray(x, dtype=ENTRY_DTYPE)
    orbit = [start]
    current = omega_shift(start, c, g)
    while not np.array_equal(current, start):
        orbit.append(current)
        current = omega_shift(current, c, g)
    return Code(np.vstack(orbit), g)


def rows_as_code(W: GMatrix) -> Code:
    return Code(W.entries, W.u)


def full_code(req: ConstructionRequest) -> Code:
    """Rows of W', ω'W', ..., ω'^(g-1)W' with W' the order-g reduction"""
    reduced = reduce_group(construct_bgw(req.q, req.m), req.g)
    words = np.vstack([scale_exponents(reduced.entries, j, req.g) for j in range(req.g)])
    code = Code(words, req.g)
    if code.M != req.g * req.v:
        logger.warning(f"⚠️ Full code for {req} has {code.M} distinct words, expected {req.g * req.v}")
    return code


@lru_cache(maxsize=32)
def normal_form(q: int, m: int) -> NormalForm:
    return normalize(construct_bgw(q, m))


def derived_code(req: ConstructionRequest) -> Code:
    """Rows of the derived part D of the normal form, reduced to order g"""
    derived = reduce_group(normal_form(req.q, req.m).D, req.g)
    return rows_as_code(derived)


def _histogram_rows(words: np.ndarray, rows: range) -> np.ndarray:
    n = words.shape[1]
    hist = np.zeros(n + 1, dtype=np.int64)
    for i in rows:
        dists = (words[i + 1:] != words[i]).sum(axis=1)
        hist += np.bincount(dists, minlength=n + 1)
    return hist


def distance_set(C: Code, threads: int = 1, transitive: bool = False) -> DistanceProfile:
    """
    Pairwise distance multiplicities

    transitive=True takes distances from the first word only; it is allowed
    only when the code is a single ω-shift orbit, where the shift is an
    isometry acting transitively.
    """
    if C.M < 2:
        raise ParameterError(f"distance needs at least two words, got {C.M}")
    words = C.words
    if transitive:
        if generate_from_seed(words[0], 1 % C.g, C.g) != C:
            raise ParameterError("code is not a single shift orbit")
        from_first = np.bincount((words[1:] != words[0]).sum(axis=1), minlength=C.n + 1)
        hist = from_first * C.M // 2
    else:
        parts = run_partitioned(
            lambda rows: _histogram_rows(words, rows),
            chunk_ranges(C.M - 1, threads),
            threads,
        )
        hist = np.sum(parts, axis=0)
    return DistanceProfile({int(d): int(c) for d, c in enumerate(hist) if c})


def is_equidistant(C: Code, threads: int = 1) -> bool:
    return C.distance_profile(threads).is_equidistant


def is_bidistant(C: Code, threads: int = 1) -> bool:
    return C.distance_profile(threads).is_bidistant


def is_shift_closed(C: Code, c: int) -> bool:
    if not 0 <= c < C.g:
        raise ParameterError(f"shift exponent {c} outside [0, {C.g - 1}]")
    if C.M == 0:
        return True
    return bool(np.array_equal(np.unique(shift_rows(C.words, c, C.g), axis=0), C.words))


def scan_params(C: Code, threads: int = 1, transitive: bool = False) -> CodeParams:
    """Recompute (n, M, d, w) by exhaustive scan"""
    weights = np.unique(row_weights(C.words))
    if weights.size != 1:
        raise ParameterError(f"code is not constant weight: {weights.tolist()}")
    profile = C.distance_profile(threads, transitive)
    return CodeParams(n=C.n, M=C.M, d=profile.minimum, w=int(weights[0]), a=C.a)


def _check_bound_args(n: int, d: int, w: int, a: int) -> None:
    if min(n, d, w) < 1 or a < 2:
        raise ParameterError(f"bound arguments must be positive with a >= 2: {(n, d, w, a)}")


def johnson_denominator(n: int, d: int, w: int, a: int) -> int:
    """a·w^2 - 2(a-1)·n·w + n·d·(a-1)"""
    return a * w * w - 2 * (a - 1) * n * w + n * d * (a - 1)


def restricted_johnson(n: int, d: int, w: int, a: int) -> Optional[int]:
    """floor(n·d·(a-1) / D) when D > 0, else None"""
    _check_bound_args(n, d, w, a)
    denominator = johnson_denominator(n, d, w, a)
    if denominator <= 0:
        return None
    return (n * d * (a - 1)) // denominator


def unrestricted_johnson(n: int, d: int, w: int, a: int, inner: int) -> int:
    """floor((a-1)·n·inner / w), inner bounding A_a(n-1, d, w-1)"""
    _check_bound_args(n, d, w, a)
    if inner < 1:
        raise ParameterError(f"inner bound must be >= 1, got {inner}")
    return ((a - 1) * n * inner) // w


def predicted_distance(req: ConstructionRequest) -> int:
    """d = 2q^m - (g+1)(q^m - q^(m-1))/g"""
    q, m, g = req.q, req.m, req.g
    numerator = (g + 1) * (q ** m - q ** (m - 1))
    if numerator % g:
        raise ParameterError(f"distance formula does not divide out for {req}")
    return 2 * q ** m - numerator // g


def thm_main_params(req: ConstructionRequest) -> Tuple[CodeParams, CodeParams]:
    """(derived, full) parameters predicted for the request"""
    q, m, g = req.q, req.m, req.g
    d = predicted_distance(req)
    if g == q - 1 and d != q ** m:
        raise ParameterError(f"equidistant case expects d = {q ** m}, got {d}")
    if g == 2 and 2 * d != q ** (m - 1) * (q + 3):
        raise ParameterError(f"ternary case expects d = {q ** (m - 1) * (q + 3) // 2}, got {d}")
    v, k = req.v, req.k
    derived = CodeParams(n=v - 1, M=k, d=d, w=k - 1, a=g + 1)
    full = CodeParams(n=v, M=g * v, d=d, w=k, a=g + 1)
    return derived, full


def derived_denominator(req: ConstructionRequest) -> int:
    """Restricted-bound denominator of the derived parameters: (qg - q + g + 1)(q^m - 1)/(q - 1)"""
    q, m, g = req.q, req.m, req.g
    return (q * g - q + g + 1) * (q ** m - 1) // (q - 1)


def request_notes(req: ConstructionRequest) -> Tuple[str, ...]:
    notes = []
    if req.m == 1:
        notes.append(M1_NOTE)
    if req.g == 2:
        notes.append(TERNARY_NOTE)
    return tuple(notes)


def bound_report(params: CodeParams, derived: Optional[CodeParams] = None, notes: Tuple[str, ...] = ()) -> BoundReport:
    """
    Evaluate both Johnson bounds for params

    The unrestricted bound needs an inner bound on A_a(n-1, d, w-1); it is
    taken as the restricted bound of the derived parameters when given.
    """
    n, d, w, a = params.n, params.d, params.w, params.a
    restricted = restricted_johnson(n, d, w, a)
    unrestricted = None
    if derived is not None:
        inner = restricted_johnson(derived.n, derived.d, derived.w, derived.a)
        if inner is not None:
            unrestricted = unrestricted_johnson(n, d, w, a, inner)
    applicable = [b for b in (restricted, unrestricted) if b is not None]
    bound_used = min(applicable) if applicable else None
    return BoundReport(
        restricted=restricted,
        unrestricted=unrestricted,
        achieved_M=params.M,
        optimal=bound_used is not None and params.M == bound_used,
        denominator=johnson_denominator(n, d, w, a),
        bound_used=bound_used,
        notes=tuple(notes),
    )


def verify_optimal(
    C: Code,
    params: CodeParams,
    derived: Optional[CodeParams] = None,
    req: Optional[ConstructionRequest] = None,
    threads: int = 1,
    transitive: bool = False,
) -> BoundReport:
    """
    Scan C, confirm it matches params and certify it against the bounds

    transitive is passed through to the distance scan.

    Raises:
        ParameterMismatchError: scanned parameters differ from params
    """
    if C.M == 0:
        raise ParameterError("cannot certify an empty code")
    scanned = scan_params(C, threads=threads, transitive=transitive)
    if scanned != params:
        raise ParameterMismatchError("scanned parameters differ", claimed=params, scanned=scanned)
    report = bound_report(scanned, derived, request_notes(req) if req is not None else ())
    status = "✅ optimal" if report.optimal else "❌ not optimal"
    logger.info(f"{status}: M={report.achieved_M}, bound={report.bound_used}")
    return report


def infer_request(C: Code) -> Optional[Tuple[ConstructionRequest, bool]]:
    """
    Recover (q, m, g) and the full/derived flag from a code's shape

    A full code has n = v and weight q^m; a derived code has n = v - 1 and
    weight q^m - 1. Returns None when no admissible request fits.
    """
    weights = np.unique(row_weights(C.words))
    if weights.size != 1:
        return None
    w = int(weights[0])
    for derived, power, order in ((False, w, C.n), (True, w + 1, C.n + 1)):
        decomposed = prime_power(power)
        if decomposed is None or decomposed[0] == 2:
            continue
        p, e = decomposed
        for t in range(1, e + 1):
            if e % t:
                continue
            q, m = p ** t, e // t
            if bgw_order(q, m) == order and (q - 1) % C.g == 0:
                return ConstructionRequest(q=q, m=m, g=C.g), derived
    return None
