"""
Utility functions for the BGW code toolkit: report formatting, document
files and the partitioned thread runner
"""
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def format_params(values: Sequence[Any]) -> str:
    """Tuple formatting used in reports: (6, 24, 5, 5)"""
    return "(" + ", ".join(str(v) for v in values) + ")"


def save_document(document: dict, filename: str) -> str:
    """Write a JSON document with canonical key order"""
    path = Path(filename)
    path.write_text(dump_document(document), encoding="utf-8")
    return str(path)


def load_document(filename: str) -> dict:
    """Load a JSON document from file"""
    with open(filename, "r", encoding="utf-8") as f:
        return json.load(f)


def dump_document(document: Any) -> str:
    return json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n"


def chunk_ranges(n: int, parts: int) -> List[range]:
    """Split range(n) into at most `parts` contiguous ascending ranges"""
    parts = max(1, min(parts, n)) if n else 1
    base, extra = divmod(n, parts)
    ranges, start = [], 0
    for i in range(parts):
        stop = start + base + (1 if i < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges


def run_partitioned(fn: Callable[[T], R], chunks: Sequence[T], threads: int = 1) -> List[R]:
    """
    Apply fn to each chunk, in parallel when threads > 1

    Results come back in chunk order whatever the schedule, so callers can
    take the first failing chunk as the lexicographically smallest witness.
    """
    if threads <= 1 or len(chunks) <= 1:
        return [fn(chunk) for chunk in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def first_hit(results: Iterable[Any]) -> Any:
    """First non-None result (chunk order)"""
    for result in results:
        if result is not None:
            return result
    return None
