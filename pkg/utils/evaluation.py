"""
Sweep evaluation over the (q, m, g) grid
Tabulates scanned against predicted parameters, Johnson bounds and
optimality for every admissible request
"""
import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

import pandas as pd

from designs.cwcode import ConstructionRequest, predicted_distance
from designs.pipeline import ConstructionPipeline, CodeReport
from utils.edge_cases import bgw_order, get_parameter_screen, odd_prime_powers, valid_divisors

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "q", "m", "g", "a", "v",
    "n", "M", "d", "w",
    "derived_n", "derived_M", "derived_d", "derived_w",
    "predicted_d", "distances", "second_d",
    "restricted", "unrestricted", "optimal",
    "derived_bound", "derived_optimal", "matches",
]


@dataclass
class SweepRow:
    """One (q, m, g) line of the sweep table"""
    q: int
    m: int
    g: int
    a: int
    v: int
    n: int
    M: int
    d: int
    w: int
    derived_n: int
    derived_M: int
    derived_d: int
    derived_w: int
    predicted_d: int
    distances: str
    second_d: Optional[int]
    restricted: Optional[int]
    unrestricted: Optional[int]
    optimal: bool
    derived_bound: Optional[int]
    derived_optimal: bool
    matches: bool


def _distance_label(report: CodeReport) -> str:
    count = len(report.profile.counts)
    if count == 1:
        return "equidistant"
    if count == 2:
        return "bidistant"
    return f"{count}-distant"


def sweep_requests(qmax: int, mmax: int, vmax: int) -> List[ConstructionRequest]:
    """Admissible requests sorted by (q, m, g); v > vmax and oversized fields skipped"""
    screen = get_parameter_screen()
    requests = []
    for q in odd_prime_powers(qmax):
        for m in range(1, mmax + 1):
            if bgw_order(q, m) > vmax:
                logger.info(f"⚠️ Skipping q={q}, m={m}: v={bgw_order(q, m)} > {vmax}")
                continue
            result = screen.screen(q, m)
            if not result.is_valid:
                logger.info(f"⚠️ Skipping q={q}, m={m}: {result.message}")
                continue
            requests.extend(ConstructionRequest(q=q, m=m, g=g) for g in valid_divisors(q))
    return requests


def evaluate_request(pipeline: ConstructionPipeline, req: ConstructionRequest) -> SweepRow:
    full = pipeline.code(req, derived=False, transitive=True)
    derived = pipeline.code(req, derived=True)
    return SweepRow(
        q=req.q,
        m=req.m,
        g=req.g,
        a=req.a,
        v=req.v,
        n=full.scanned.n,
        M=full.scanned.M,
        d=full.scanned.d,
        w=full.scanned.w,
        derived_n=derived.scanned.n,
        derived_M=derived.scanned.M,
        derived_d=derived.scanned.d,
        derived_w=derived.scanned.w,
        predicted_d=predicted_distance(req),
        distances=_distance_label(full),
        second_d=full.profile.second,
        restricted=full.bounds.restricted,
        unrestricted=full.bounds.unrestricted,
        optimal=full.bounds.optimal,
        derived_bound=derived.bounds.restricted,
        derived_optimal=derived.bounds.optimal,
        matches=full.matches and derived.matches,
    )


def run_sweep(qmax: int, mmax: int, vmax: int = 1000, threads: int = 1) -> pd.DataFrame:
    """
    Evaluate every admissible (q, m, g)

    Full codes use the single-orbit distance shortcut (the orbit is checked
    first); derived codes are scanned exhaustively. Output depends only on
    the arguments, not on the thread count.
    """
    pipeline = ConstructionPipeline(threads=threads)
    rows: List[Dict] = []
    for req in sweep_requests(qmax, mmax, vmax):
        rows.append(asdict(evaluate_request(pipeline, req)))
        logger.info(f"📊 q={req.q} m={req.m} g={req.g} done")
    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    # Optional integer columns keep an integer dtype when values are missing
    for column in ("second_d", "restricted", "unrestricted", "derived_bound"):
        frame[column] = frame[column].astype("Int64")
    return frame.sort_values(["q", "m", "g"], kind="stable").reset_index(drop=True)


def render_sweep(frame: pd.DataFrame, fmt: str = "text") -> str:
    """Deterministic text or JSON rendering of the sweep table"""
    if fmt == "json":
        return frame.to_json(orient="records") + "\n"
    return frame.to_string(index=False) + "\n"
