"""
Construction Pipeline
Coordinates the field, BGW, code and array stages for the CLI with
per-request caching and stage logging
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from config import settings
from designs.arrays import (
    SymbolArray,
    LatinSquare,
    append_zero_word,
    extract_msls,
    is_complete_system,
    is_shift_closed as array_shift_closed,
    verify_ca,
    verify_latin,
    verify_msls,
    verify_oa,
)
from designs.bgw import GMatrix, construct_bgw, verify_bgw
from designs.cwcode import (
    BoundReport,
    Code,
    CodeParams,
    ConstructionRequest,
    DistanceProfile,
    bound_report,
    derived_code,
    derived_denominator,
    full_code,
    is_shift_closed,
    request_notes,
    scan_params,
    thm_main_params,
    verify_optimal,
)
from designs.entries import Verdict
from errors import ParameterError

logger = logging.getLogger(__name__)

MISMATCH_NOTE = "scanned parameters differ from the predicted ones"
DENOMINATOR_NOTE = "restricted-bound denominator differs from the derived-code prediction"


@dataclass
class CodeReport:
    """Code together with its scanned and claimed parameters and bounds"""
    request: ConstructionRequest
    derived: bool
    code: Code
    scanned: CodeParams
    claimed: CodeParams
    profile: DistanceProfile
    bounds: BoundReport
    shift_closed: bool

    @property
    def matches(self) -> bool:
        return self.scanned == self.claimed

    @property
    def passed(self) -> bool:
        return self.matches and self.bounds.optimal


@dataclass
class ArrayReport:
    """Code-plus-zero-word array and its strength-t verdict"""
    request: ConstructionRequest
    check: str
    array: SymbolArray
    verdict: Verdict
    code_size: int
    shift_closed: bool

    @property
    def rows(self) -> int:
        return self.array.N


@dataclass
class MslsReport:
    """Extracted Latin squares and their suitability verdicts"""
    q: int
    array_verdict: Verdict
    squares: List[LatinSquare]
    latin: List[bool] = field(default_factory=list)
    mutually_suitable: bool = False
    complete: bool = False

    @property
    def passed(self) -> bool:
        return self.array_verdict.passed and all(self.latin) and self.complete


class ConstructionPipeline:
    """
    Stage runner shared by the CLI and the sweep:
    - caches matrices and codes per request
    - threads every verification kernel through one worker count
    """

    def __init__(self, threads: Optional[int] = None):
        self.threads = threads or settings.default_threads
        self._codes: Dict[Tuple[ConstructionRequest, bool], Code] = {}

    def bgw(self, q: int, m: int) -> Tuple[GMatrix, Verdict]:
        """Build the trace matrix and certify it"""
        matrix = construct_bgw(q, m)
        verdict = verify_bgw(matrix, threads=self.threads)
        if not verdict:
            logger.error(f"❌ Trace matrix for q={q}, m={m}: {verdict.describe()}")
        return matrix, verdict

    def build_code(self, req: ConstructionRequest, derived: bool = False) -> Code:
        key = (req, derived)
        if key not in self._codes:
            logger.info(f"🔧 Building {'derived' if derived else 'full'} code for {req}")
            self._codes[key] = derived_code(req) if derived else full_code(req)
        return self._codes[key]

    def code(self, req: ConstructionRequest, derived: bool = False, transitive: bool = False) -> CodeReport:
        """
        Build a code, scan it and certify it against the Johnson bounds

        transitive=True is only honoured for full codes (single shift orbits).
        """
        code = self.build_code(req, derived)
        derived_params, full_params = thm_main_params(req)
        claimed = derived_params if derived else full_params
        transitive = transitive and not derived
        scanned = scan_params(code, threads=self.threads, transitive=transitive)
        inner = None if derived else derived_params
        notes = request_notes(req)

        if scanned == claimed:
            bounds = verify_optimal(code, claimed, derived=inner, req=req, threads=self.threads, transitive=transitive)
        else:
            logger.warning(f"⚠️ {req}: scanned {scanned.as_tuple()} vs claimed {claimed.as_tuple()}")
            bounds = bound_report(scanned, inner, notes + (MISMATCH_NOTE,))

        if derived and scanned == claimed and bounds.denominator != derived_denominator(req):
            bounds = replace(bounds, notes=bounds.notes + (DENOMINATOR_NOTE,))

        return CodeReport(
            request=req,
            derived=derived,
            code=code,
            scanned=scanned,
            claimed=claimed,
            profile=code.distance_profile(self.threads, transitive),
            bounds=bounds,
            shift_closed=False if derived else is_shift_closed(code, 1 % req.g),
        )

    def array(self, req: ConstructionRequest, check: str = "ca", t: int = 2, lam: int = 1) -> ArrayReport:
        """Append the zero word to the full code and verify strength t"""
        if check not in ("oa", "ca"):
            raise ParameterError(f"unknown array check {check!r}")
        code = self.build_code(req)
        array = append_zero_word(code)
        verify = verify_oa if check == "oa" else verify_ca
        verdict = verify(array, t, lam, threads=self.threads)
        return ArrayReport(
            request=req,
            check=check,
            array=array,
            verdict=verdict,
            code_size=code.M,
            shift_closed=array_shift_closed(array, 1 % req.g),
        )

    def msls(self, q: int) -> MslsReport:
        """Complete system of suitable Latin squares of order q"""
        req = ConstructionRequest(q=q, m=1, g=q - 1)
        array = append_zero_word(self.build_code(req))
        verdict = verify_oa(array, 2, 1, threads=self.threads)
        if not verdict:
            return MslsReport(q=q, array_verdict=verdict, squares=[])
        squares = extract_msls(array, threads=self.threads)
        return MslsReport(
            q=q,
            array_verdict=verdict,
            squares=squares,
            latin=[verify_latin(L) for L in squares],
            mutually_suitable=verify_msls(squares) if len(squares) > 1 else False,
            complete=len(squares) > 1 and is_complete_system(squares),
        )


_pipeline: Optional[ConstructionPipeline] = None


def get_pipeline(threads: Optional[int] = None) -> ConstructionPipeline:
    """Get singleton pipeline instance (rebuilt when the thread count changes)"""
    global _pipeline
    wanted = threads or settings.default_threads
    if _pipeline is None or _pipeline.threads != wanted:
        _pipeline = ConstructionPipeline(threads=wanted)
    return _pipeline


def reset_pipeline() -> None:
    global _pipeline
    _pipeline = None
