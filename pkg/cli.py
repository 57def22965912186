"""
BGW Codes - command-line front end
Construct, certify and export ω-circulant BGWs, their constant-weight codes,
covering/orthogonal arrays and suitable Latin squares
"""
import argparse
import logging
import sys
from dataclasses import asdict
from typing import Any, List, Literal, Optional, TextIO, Tuple

from pydantic import BaseModel, Field, model_validator

from config import settings
from designs.arrays import (
    LatinSquare,
    SymbolArray,
    is_complete_system,
    latin_violation,
    verify_ca,
    verify_msls,
    verify_oa,
)
from designs.bgw import GMatrix, classical_params, verify_bgw, verify_circulant
from designs.cwcode import (
    Code,
    ConstructionRequest,
    bound_report,
    infer_request,
    restricted_johnson,
    scan_params,
    unrestricted_johnson,
)
from designs.entries import Verdict, format_grid, to_nested
from designs.gf import build_field
from designs.pipeline import CodeReport, get_pipeline
from errors import ConstructionError, DataFormatError, ParameterError
from utils.data_layer import export_object, import_object, to_document
from utils.edge_cases import get_parameter_screen
from utils.evaluation import render_sweep, run_sweep
from utils.helpers import dump_document, format_params

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

Command = Literal["field", "bgw", "code", "bounds", "array", "msls", "verify", "sweep"]

REQUIRED = {
    "field": ("p", "s"),
    "bgw": ("q", "m"),
    "code": ("q", "m", "g"),
    "bounds": ("n", "d", "w", "a"),
    "array": ("q", "m", "g"),
    "msls": ("q",),
    "verify": ("input",),
    "sweep": (),
}
EXPORTABLE = ("bgw", "code", "array", "msls")
VERIFY_KINDS = {
    "gmatrix": "bgw",
    "code": "code",
    "array": "ca",
    "latin": "latin",
    "msls": "msls",
}


class RunConfig(BaseModel):
    """Validated command-line request"""
    command: Command
    p: Optional[int] = None
    s: Optional[int] = None
    q: Optional[int] = None
    m: Optional[int] = None
    g: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    w: Optional[int] = None
    a: Optional[int] = None
    inner: Optional[int] = None
    derived: bool = False
    tables: bool = False
    check: Literal["oa", "ca"] = "ca"
    t: int = Field(2, ge=1)
    lam: int = Field(1, ge=1)
    kind: Optional[Literal["bgw", "code", "oa", "ca", "latin", "msls"]] = None
    input: Optional[str] = None
    output: Optional[str] = None
    format: Literal["json", "text", "pretty"] = "text"
    threads: int = Field(default_factory=lambda: settings.default_threads, ge=1)
    qmax: int = Field(9, ge=3)
    mmax: int = Field(3, ge=1)
    vmax: int = Field(1000, ge=1)

    @model_validator(mode="after")
    def _required(self) -> "RunConfig":
        missing = [name for name in REQUIRED[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command} requires --{', --'.join(missing)}")
        if self.q is not None:
            get_parameter_screen().require(self.q, 1 if self.m is None else self.m, self.g)
        if self.output is not None and self.command not in EXPORTABLE:
            raise ValueError(f"--out is not available for {self.command}")
        return self

    def request(self) -> ConstructionRequest:
        return ConstructionRequest(q=self.q, m=self.m, g=self.g)


class Report:
    """Collects a command's JSON payload and text lines"""

    def __init__(self, command: str):
        self.payload: Optional[dict] = {"kind": "report", "command": command}
        self.lines: List[str] = []
        self.grids: List[str] = []

    def add(self, key: str, value: Any, label: Optional[str] = None, text: Optional[str] = None) -> None:
        self.payload[key] = value
        self.lines.append(f"{label or key}: {value if text is None else text}")

    def note(self, line: str) -> None:
        self.lines.append(line)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return dump_document(self.payload)
        return "\n".join(self.lines) + "\n" + "".join(self.grids)


def _verdict(report: Report, verdict: Verdict) -> int:
    cert = asdict(verdict.cert) if verdict.passed else None
    report.payload["verdict"] = {
        "passed": verdict.passed,
        "cert": cert,
        "condition": verdict.condition,
        "witness": verdict.witness,
    }
    report.note(verdict.describe())
    return EXIT_OK if verdict.passed else EXIT_FAILED


def _grid_text(grid, fmt: str, g: int) -> str:
    if fmt == "pretty" and g != 2:
        raise ParameterError("pretty format needs a group of order 2")
    return format_grid(grid, pretty=fmt == "pretty")


def run_field(config: RunConfig, report: Report) -> Tuple[int, Any]:
    ctx = build_field(config.p, config.s)
    report.add("field", f"GF({ctx.p}^{ctx.s})")
    report.add("order", ctx.order)
    report.add("modulus", list(ctx.modulus.coeffs), text=str(ctx.modulus))
    report.add("beta", ctx.beta_index, label="beta code")
    if config.tables:
        report.add("exp_table", ctx.exp_table.tolist(), text=" ".join(map(str, ctx.exp_table.tolist())))
        report.add("log_table", ctx.log_table.tolist(), text=" ".join(map(str, ctx.log_table.tolist())))
    return EXIT_OK, None


def _matrix_section(report: Report, W: GMatrix, verdict: Verdict, fmt: str) -> int:
    report.add("circulant", verify_circulant(W))
    report.payload["matrix"] = to_document(W)
    report.grids.append(_grid_text(W.entries, fmt, W.u))
    return _verdict(report, verdict)


def run_bgw(config: RunConfig, report: Report) -> Tuple[int, Any]:
    W, verdict = get_pipeline(config.threads).bgw(config.q, config.m)
    report.add("classical", list(classical_params(config.q, config.m)), text=format_params(classical_params(config.q, config.m)))
    report.add("u", W.u, label="group order")
    return _matrix_section(report, W, verdict, config.format), W


def _code_section(report: Report, result: CodeReport, fmt: str) -> int:
    code, bounds = result.code, result.bounds
    report.add("params", list(result.scanned.as_tuple()), text=f"{format_params(result.scanned.as_tuple())} alphabet {code.a}")
    report.add("claimed", list(result.claimed.as_tuple()), text=format_params(result.claimed.as_tuple()))
    report.add("distances", {str(k): v for k, v in sorted(result.profile.counts.items())},
               text=" ".join(f"{k}x{v}" for k, v in sorted(result.profile.counts.items())))
    report.add("equidistant", result.profile.is_equidistant)
    report.add("shift_closed", result.shift_closed, label="shift closed")
    report.add("restricted", bounds.restricted, label="restricted bound",
               text=f"{bounds.restricted} (denominator {bounds.denominator})")
    report.add("unrestricted", bounds.unrestricted, label="unrestricted bound")
    report.add("optimal", bounds.optimal,
               text=f"yes via bound {bounds.bound_used}" if bounds.optimal else f"no, bound {bounds.bound_used}")
    report.payload["denominator"] = bounds.denominator
    report.payload["notes"] = list(bounds.notes)
    for note in bounds.notes:
        report.note(f"note: {note}")
    report.payload["code"] = to_document(code)
    report.grids.append(_grid_text(code.words, fmt, code.g))
    return EXIT_OK if result.passed else EXIT_FAILED


def run_code(config: RunConfig, report: Report) -> Tuple[int, Any]:
    result = get_pipeline(config.threads).code(config.request(), derived=config.derived)
    report.add("derived", config.derived)
    return _code_section(report, result, config.format), result.code


def run_bounds(config: RunConfig, report: Report) -> Tuple[int, Any]:
    n, d, w, a = config.n, config.d, config.w, config.a
    restricted = restricted_johnson(n, d, w, a)
    inner = config.inner
    if inner is None and n > 1 and w > 1:
        inner = restricted_johnson(n - 1, d, w - 1, a)
    unrestricted = unrestricted_johnson(n, d, w, a, inner) if inner is not None else None
    report.add("args", [n, d, w, a], text=format_params((n, d, w, a)))
    report.add("restricted", restricted, label="restricted bound")
    report.add("inner", inner, label="inner bound")
    report.add("unrestricted", unrestricted, label="unrestricted bound")
    return EXIT_OK, None


def run_array(config: RunConfig, report: Report) -> Tuple[int, Any]:
    result = get_pipeline(config.threads).array(config.request(), config.check, config.t, config.lam)
    report.add("rows", result.rows, text=f"{result.rows} ({result.code_size} code words + zero word)")
    report.add("labelled_rows", result.code_size, label="rows excluding zero word")
    report.add("columns", result.array.k)
    report.add("alphabet", result.array.a)
    report.add("shift_closed", result.shift_closed, label="shift closed")
    report.payload["array"] = to_document(result.array)
    report.grids.append(_grid_text(result.array.grid, config.format, result.array.g))
    return _verdict(report, result.verdict), result.array


def _squares_section(report: Report, squares: List[LatinSquare], fmt: str) -> bool:
    latin = [latin_violation(L) is None for L in squares]
    suitable_all = len(squares) > 1 and verify_msls(squares)
    complete = suitable_all and is_complete_system(squares)
    report.add("count", len(squares), label="squares")
    report.add("latin", latin)
    report.add("mutually_suitable", suitable_all, label="mutually suitable")
    report.add("complete", complete)
    report.payload["squares"] = [to_nested(L.grid) for L in squares]
    for L in squares:
        report.grids.append(_grid_text(L.grid, fmt, L.n - 1) + "\n")
    return all(latin) and complete


def run_msls(config: RunConfig, report: Report) -> Tuple[int, Any]:
    result = get_pipeline(config.threads).msls(config.q)
    status = _verdict(report, result.array_verdict)
    if status != EXIT_OK:
        return status, None
    passed = _squares_section(report, result.squares, config.format)
    return (EXIT_OK if passed else EXIT_FAILED), result.squares


def run_verify(config: RunConfig, report: Report) -> Tuple[int, Any]:
    obj = import_object(config.input)
    doc_kind = to_document(obj)["kind"]
    kind = config.kind or VERIFY_KINDS[doc_kind]
    report.add("kind", kind)
    expected = {"bgw": GMatrix, "code": Code, "oa": SymbolArray, "ca": SymbolArray, "latin": LatinSquare, "msls": list}
    if not isinstance(obj, expected[kind]):
        raise DataFormatError(f"document of kind {doc_kind!r} cannot be verified as {kind}")

    if kind == "bgw":
        return _matrix_section(report, obj, verify_bgw(obj, threads=config.threads), config.format), None
    if kind in ("oa", "ca"):
        verify = verify_oa if kind == "oa" else verify_ca
        return _verdict(report, verify(obj, config.t, config.lam, threads=config.threads)), None
    if kind == "latin":
        violation = latin_violation(obj)
        report.add("latin", violation is None, text="yes" if violation is None else f"no {violation}")
        return (EXIT_OK if violation is None else EXIT_FAILED), None
    if kind == "msls":
        return (EXIT_OK if _squares_section(report, obj, config.format) else EXIT_FAILED), None

    inferred = infer_request(obj)
    if inferred is None:
        scanned = scan_params(obj, threads=config.threads)
        bounds = bound_report(scanned)
        report.add("params", list(scanned.as_tuple()), text=format_params(scanned.as_tuple()))
        report.add("restricted", bounds.restricted, label="restricted bound")
        report.add("optimal", bounds.optimal)
        return (EXIT_OK if bounds.optimal else EXIT_FAILED), None
    req, derived = inferred
    report.add("request", [req.q, req.m, req.g], text=f"q={req.q} m={req.m} g={req.g} {'derived' if derived else 'full'}")
    result = get_pipeline(config.threads).code(req, derived=derived)
    if result.code != obj:
        report.note("code differs from the construction for this request")
        result = _rescan(obj, result, config.threads)
    return _code_section(report, result, config.format), None


def _rescan(code: Code, built: CodeReport, threads: int) -> CodeReport:
    scanned = scan_params(code, threads=threads)
    derived_params = None if built.derived else get_pipeline(threads).code(built.request, derived=True).scanned
    return CodeReport(
        request=built.request,
        derived=built.derived,
        code=code,
        scanned=scanned,
        claimed=built.claimed,
        profile=code.distance_profile(threads),
        bounds=bound_report(scanned, derived_params, built.bounds.notes),
        shift_closed=built.shift_closed and code == built.code,
    )


def run_sweep_command(config: RunConfig, report: Report) -> Tuple[int, Any]:
    frame = run_sweep(config.qmax, config.mmax, config.vmax, config.threads)
    report.payload = None
    report.lines = [render_sweep(frame, "json" if config.format == "json" else "text").rstrip("\n")]
    return EXIT_OK, None


HANDLERS = {
    "field": run_field,
    "bgw": run_bgw,
    "code": run_code,
    "bounds": run_bounds,
    "array": run_array,
    "msls": run_msls,
    "verify": run_verify,
    "sweep": run_sweep_command,
}


def run(config: RunConfig, stream: TextIO = sys.stdout) -> int:
    """
    Execute one command and stream its report

    Returns:
        0 verified, 1 verification failed, 2 invalid input
    """
    report = Report(config.command)
    try:
        status, obj = HANDLERS[config.command](config, report)
    except (ConstructionError, ValueError, OSError) as e:
        logger.error(f"❌ {config.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    if report.payload is None:
        stream.write("\n".join(report.lines) + "\n")
    else:
        stream.write(report.render(config.format))
    if config.output and obj is not None:
        export_object(obj, config.output)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text", "pretty"], default="text")
    common.add_argument("--threads", type=int, default=settings.default_threads)
    common.add_argument("--out", dest="output")

    parser = argparse.ArgumentParser(prog="bgwcodes", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    field = sub.add_parser("field", parents=[common], help="finite field summary")
    field.add_argument("--p", type=int, required=True)
    field.add_argument("--s", type=int, required=True)
    field.add_argument("--tables", action="store_true")

    bgw = sub.add_parser("bgw", parents=[common], help="trace BGW with classical parameters")
    bgw.add_argument("--q", type=int, required=True)
    bgw.add_argument("--m", type=int, required=True)

    code = sub.add_parser("code", parents=[common], help="constant-weight code and bounds")
    code.add_argument("--q", type=int, required=True)
    code.add_argument("--m", type=int, required=True)
    code.add_argument("--g", type=int, required=True)
    code.add_argument("--derived", action="store_true")

    bounds = sub.add_parser("bounds", parents=[common], help="Johnson bounds")
    for name in ("n", "d", "w", "a"):
        bounds.add_argument(f"--{name}", type=int, required=True)
    bounds.add_argument("--inner", type=int)

    array = sub.add_parser("array", parents=[common], help="code plus zero word as OA/CA")
    array.add_argument("--q", type=int, required=True)
    array.add_argument("--m", type=int, required=True)
    array.add_argument("--g", type=int, required=True)
    array.add_argument("--check", choices=["oa", "ca"], default="ca")
    array.add_argument("--t", type=int, default=2)
    array.add_argument("--lam", type=int, default=1)

    msls = sub.add_parser("msls", parents=[common], help="complete system of suitable Latin squares")
    msls.add_argument("--q", type=int, required=True)

    verify = sub.add_parser("verify", parents=[common], help="re-verify an exported JSON object")
    verify.add_argument("--in", dest="input", required=True)
    verify.add_argument("--kind", choices=["bgw", "code", "oa", "ca", "latin", "msls"])
    verify.add_argument("--t", type=int, default=2)
    verify.add_argument("--lam", type=int, default=1)

    sweep = sub.add_parser("sweep", parents=[common], help="parameter and optimality table")
    sweep.add_argument("--qmax", type=int, default=9)
    sweep.add_argument("--mmax", type=int, default=3)
    sweep.add_argument("--vmax", type=int, default=1000)
    return parser


def configure_logging() -> None:
    if settings.enable_logging:
        logging.basicConfig(
            level=getattr(logging, settings.log_level, logging.WARNING),
            stream=sys.stderr,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )
    else:
        logging.disable(logging.CRITICAL)


def main(argv: Optional[List[str]] = None, stream: TextIO = sys.stdout) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    try:
        config = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return run(config, stream)


if __name__ == "__main__":
    sys.exit(main())
