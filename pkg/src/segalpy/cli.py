"""Command-line interface: ``segalpy {compute,homology,pushout,check,info}``.

Exit codes: 0 success, 2 invalid input, 3 failed invariant, 4 resource cap.
On failure a JSON error object goes to stdout and no report file is written.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import List, Optional

from . import io
from .arrange import CYLINDERS, ArrangeStep, Schedule, StageTrace, default_schedule
from .errors import ParseError, SegalError, ValidationError
from .homology import HomologyGroup, homology_all
from .pipeline import (LoopModelResult, PushoutRequest, check_run, hurewicz_checks,
                       loop_model, pushout_space, svk_pushout)
from .simplicial import SimplicialSet

DEFAULT_BUDGET = 5_000_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"usage: {message}")


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".segalpy-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(doc, path: Optional[str]) -> None:
    text = io.dumps(doc)
    if path:
        _write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _error_doc(exc: BaseException, code: int) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, ValidationError) and exc.violations:
        err["violations"] = [str(v) for v in exc.violations]
    return {"error": err}


def _read_schedule(path: str, n: int):
    doc = io.load(path)
    steps = doc.get("steps") if isinstance(doc, dict) else doc
    if not isinstance(steps, list):
        raise ParseError(f"{path}: expected a list of steps")
    parsed, depths = [], []
    for i, s in enumerate(steps):
        if not isinstance(s, dict):
            raise ParseError(f"{path}: step {i} is not an object")
        try:
            parsed.append(ArrangeStep.from_json(s))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"{path}: step {i}: {exc}") from exc
        depths.append(s.get("depth"))
    return Schedule(n, tuple(parsed)), (depths if any(d is not None for d in depths) else None)


def _stage_printer(enabled: bool):
    if not enabled:
        return None

    def show(tr: StageTrace):
        step = "input" if tr.step is None else str(tr.step)
        hs = " ".join(str(h) for h in tr.diag_homology)
        print(f"{step:>10}  cells={sum(tr.cell_counts.values()):>8}  "
              f"A_1={tr.column_counts.get(1)}  H(diag)={hs}  {tr.seconds:.2f}s",
              file=sys.stderr, flush=True)
    return show


def _groups(hs: List[HomologyGroup]) -> list:
    return [h.to_json() for h in hs]


def build_report(result: LoopModelResult, X: SimplicialSet, fingerprint: str,
                 assertions: List[str], cross_checks) -> dict:
    verdict = check_run(result.stages, X, result.n)
    ok = verdict.passed and all(c.agrees for c in cross_checks)
    sup = result.supported_degree
    return {
        "input": fingerprint,
        "n": result.n,
        "cap": result.cap,
        "assertions": assertions,
        "schedule": [dict(s.to_json(), **({} if result.depths is None
                                          else {"depth": result.depths[i]}))
                     for i, s in enumerate(result.schedule)],
        "stages": [st.to_json() for st in result.stages],
        "model_counts": result.model.counts(),
        "loop_homology": _groups(result.loop_homology),
        "unverified_degrees": [d for d in range(len(result.loop_homology)) if d > sup],
        "cross_checks": [c.to_json() for c in cross_checks],
        "verdict": "pass" if ok else "fail",
    }


def _run_options(args):
    schedule = depths = None
    if args.schedule:
        schedule, depths = _read_schedule(args.schedule, args.n)
    return dict(schedule=schedule, depths=depths, cylinder=args.cylinder, cap=args.cap,
                budget=args.budget or None, on_stage=_stage_printer(args.verbose))


def cmd_compute(args) -> int:
    doc = io.load(args.input)
    X = io.parse_simplicial(doc)
    fp = io.fingerprint(doc)
    result = loop_model(X, args.n, fingerprint=fp, **_run_options(args))
    assertions = []
    if args.assert_2_connected:
        assertions.append("2-connected")
    elif args.assert_simply_connected:
        assertions.append("simply connected")
    checks = hurewicz_checks(X, result, simply_connected=args.assert_simply_connected,
                             two_connected=args.assert_2_connected)
    report = build_report(result, result.space, fp, assertions, checks)
    _emit(report, args.report)
    return 0 if report["verdict"] == "pass" else 3


def _parse_pushout(doc, n: int) -> PushoutRequest:
    if not isinstance(doc, dict):
        raise ParseError("pushout document must be an object")
    for key in ("A", "B", "C", "f", "g"):
        if key not in doc:
            raise ParseError(f"field {key}: missing")
    A, B, C = (io.parse_simplicial(doc[k]) for k in ("A", "B", "C"))
    f = io.parse_map(doc["f"], B, A, "f")
    g = io.parse_map(doc["g"], B, C, "g")
    return PushoutRequest(A, B, C, f, g, n)


def cmd_pushout(args) -> int:
    doc = io.load(args.input)
    req = _parse_pushout(doc, args.n)
    fp = io.fingerprint(doc)
    result = svk_pushout(req, fingerprint=fp, **_run_options(args))
    report = build_report(result, result.space, fp, [], [])
    _emit(report, args.report)
    return 0 if report["verdict"] == "pass" else 3


def cmd_homology(args) -> int:
    X = io.parse_simplicial(io.load(args.input))
    upto = X.cap - 1 if args.upto is None else args.upto
    if upto > X.cap - 1:
        raise ValidationError(f"--upto {upto} needs cap above {upto}; input cap is {X.cap}")
    _emit({"homology": _groups(homology_all(X, upto)), "cap": X.cap}, args.report)
    return 0


def cmd_check(args) -> int:
    report = io.load(args.report_in)
    doc = io.load(args.input)
    problems = []
    if not isinstance(report, dict) or "verdict" not in report:
        raise ParseError(f"{args.report_in}: not a report")
    if report.get("input") != io.fingerprint(doc):
        problems.append("input fingerprint does not match")
    n = report.get("n")
    if not isinstance(n, int) or n < 0:
        raise ParseError(f"{args.report_in}: field n: expected a natural number")
    cap = report.get("cap", n + 2)
    is_pushout = isinstance(doc, dict) and "f" in doc
    if is_pushout:
        req = _parse_pushout(doc, n)
        X = pushout_space(req, cap)
    else:
        X = io.parse_simplicial(doc)
    try:
        stages = [StageTrace(None, {tuple(map(int, k.split(","))): v
                                    for k, v in st["cell_counts"].items()},
                             [HomologyGroup.from_json(h) for h in st["diag_homology"]],
                             st["globular"], st["objects"])
                  for st in report["stages"]]
        steps = [ArrangeStep.from_json(s) for s in report["schedule"]]
        depths = [s.get("depth") for s in report["schedule"]]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{args.report_in}: malformed report ({exc})") from exc
    verdict = check_run(stages, X.recap(cap), n)
    if not verdict.passed:
        problems.append(f"stage {verdict.failing_stage}: {'; '.join(verdict.reasons)}")
    if args.recompute:
        schedule = Schedule(n, tuple(steps))
        depths = depths if any(d is not None for d in depths) else None
        opts = dict(schedule=schedule, depths=depths, cap=cap, budget=args.budget or None)
        result = svk_pushout(req, **opts) if is_pushout else loop_model(X, n, **opts)
        if _groups(result.loop_homology) != report.get("loop_homology"):
            problems.append("recomputed loop homology differs")
    if report.get("verdict") != ("pass" if not problems else "fail"):
        problems.append(f"report verdict {report.get('verdict')!r} is not reproduced")
    _emit({"report": args.report_in, "consistent": not problems, "problems": problems}, None)
    return 0 if not problems else 3


def cmd_info(args) -> int:
    X = io.parse_simplicial(io.load(args.input))
    n = args.n
    cap = n + 2 if args.cap is None else args.cap
    warnings = []
    if cap < n + 2:
        warnings.append(f"cap {cap} below n + 2: loop homology in degrees >= {cap - 1} "
                        "is unverified")
    counts = X.counts()
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    # every nondegenerate simplex becomes one constant cell per column, and the
    # model's first stage stores roughly 200 bytes per cell
    estimate = sum(counts) * (cap + 1) * 200
    out = {
        "input": args.input,
        "cap": X.cap,
        "dims": counts,
        "vertices": len(X.vertices()),
        "n": n,
        "pipeline_cap": cap,
        "schedule_length": len(default_schedule(n)),
        "initial_memory_bytes": estimate,
        "warnings": warnings,
    }
    _emit(out, None)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="segalpy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def run_flags(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--report", help="write the report here instead of stdout")
        sp.add_argument("--cap", type=int, help="override both caps (default n + 2)")
        sp.add_argument("--schedule", help="JSON list of steps, each with optional depth")
        sp.add_argument("--cylinder", choices=CYLINDERS, default="relative")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of cells built (0 for no limit)")
        sp.add_argument("-v", "--verbose", action="store_true", help="trace stages on stderr")

    c = sub.add_parser("compute", help="loop homology of a one-vertex simplicial set")
    c.add_argument("--input", required=True)
    run_flags(c)
    c.add_argument("--assert-simply-connected", action="store_true")
    c.add_argument("--assert-2-connected", action="store_true")
    c.set_defaults(func=cmd_compute)

    h = sub.add_parser("homology", help="integral homology of a simplicial set")
    h.add_argument("--input", required=True)
    h.add_argument("--upto", type=int)
    h.add_argument("--report")
    h.set_defaults(func=cmd_homology)

    po = sub.add_parser("pushout", help="loop homology of a pushout A <- B -> C")
    po.add_argument("--input", required=True)
    run_flags(po)
    po.set_defaults(func=cmd_pushout)

    ch = sub.add_parser("check", help="re-verify a report against its input")
    ch.add_argument("--report", dest="report_in", required=True)
    ch.add_argument("--input", required=True)
    ch.add_argument("--no-recompute", dest="recompute", action="store_false")
    ch.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ch.set_defaults(func=cmd_check)

    i = sub.add_parser("info", help="sizes and schedule length")
    i.add_argument("--input", required=True)
    i.add_argument("--n", type=int, default=2)
    i.add_argument("--cap", type=int)
    i.set_defaults(func=cmd_info)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
        if getattr(args, "n", 0) < 0:
            raise ValidationError("--n must be nonnegative")
        return args.func(args)
    except SegalError as exc:
        failure, code = exc, exc.exit_code
    except ValueError as exc:
        failure, code = exc, 2
    except (MemoryError, RecursionError) as exc:
        failure, code = exc, 4
    sys.stdout.write(io.dumps(_error_doc(failure, code)))
    return code


if __name__ == "__main__":
    sys.exit(main())
