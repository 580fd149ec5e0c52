"""``kkwcalc`` command line: eval, verify, goldens.

Exit status is 0 exactly when every comparison matched; 1 on a mismatch;
2 on bad usage or a malformed expression.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from kkwcalc import kkw
from kkwcalc.cli.expr import EvalError, ParseError, evaluate, format_value, parse_expr
from kkwcalc.ring import parse_poly
from kkwcalc.symcalc import MissingJet

GOLDEN_ENV = "KKWCALC_GOLDEN_DIR"
SUITE_DIMS = {"kkw4": (4,), "kkw4sq": (4,), "kkw6": (6,), "kkw6cu": (6,),
              "interior": (4, 6), "lemmas": (4, 6), "spectral": (4,)}


class BadFlag(ValueError):
    pass


def golden_dir() -> Path:
    env = os.environ.get(GOLDEN_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[3] / "goldens"


# --------------------------------------------------------------------------
# golden files: one "id = polynomial" line per expected record


def write_expectations(path: Path, expected: dict) -> None:
    lines = [f"{k} = {v}" for k, v in expected.items()]
    path.write_text("".join(line + "\n" for line in lines))


def read_expectations(path: Path) -> dict:
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise BadFlag(f"{path}:{lineno}: expected 'id = value'")
        out[key.strip()] = parse_poly(value)
    return out


# --------------------------------------------------------------------------
# reports


def render_json(report: kkw.SuiteReport) -> str:
    return json.dumps(report.as_dict(), indent=2) + "\n"


def render_text(report: kkw.SuiteReport) -> str:
    lines = [f"suite {report.suite}"]
    width = max((len(r.id) for r in report.cases), default=0)
    for r in report.cases:
        flag = "ok  " if r.match else "FAIL"
        lines.append(f"  [{flag}] {r.id:<{width}}  computed {r.computed}")
        if not r.match:
            lines.append(f"         {'':<{width}}  expected {r.expected}")
            for source, value in r.terms:
                lines.append(f"         {'':<{width}}    {source}: {value}")
    lines.append(f"summary: passed {report.passed} failed {report.failed}")
    return "\n".join(lines) + "\n"


def _filter_dim(report: kkw.SuiteReport, dim: int | None) -> kkw.SuiteReport:
    if dim is None or report.suite not in ("interior", "lemmas"):
        return report
    keep = [r for r in report.cases if r.id.endswith(f"n{dim}") or f"n{dim}." in r.id]
    return kkw.SuiteReport(report.suite, keep)


def run_verify(suite: str, dim: int | None = None, report: str = "text", golden: str | None = None,
               parallel: int = 1) -> tuple[str, int]:
    if suite not in kkw.SUITES:
        raise BadFlag(f"unknown suite {suite!r}; choose from {', '.join(kkw.SUITES)}")
    if dim is not None and dim not in SUITE_DIMS[suite]:
        raise BadFlag(f"suite {suite} runs in dimension {SUITE_DIMS[suite]}, not {dim}")
    if parallel < 1:
        raise BadFlag("--parallel must be at least 1")
    expected = read_expectations(Path(golden)) if golden else None
    rep = _filter_dim(kkw.verify_suite(suite, parallel=parallel, expected=expected), dim)
    text = render_json(rep) if report == "json" else render_text(rep)
    return text, 0 if rep.ok else 1


def write_goldens(directory: Path, suites=kkw.SUITES) -> list[Path]:
    """Expectation files for every suite with polynomial expectations, plus report snapshots.

    The lemma suite compares Clifford-valued displays, so it only gets a snapshot.
    """
    written = []
    (directory / "reports").mkdir(parents=True, exist_ok=True)
    for suite in suites:
        expected = kkw.expectations(suite)
        if expected:
            path = directory / f"{suite}.txt"
            write_expectations(path, expected)
            written.append(path)
        path = directory / "reports" / f"{suite}.json"
        path.write_text(render_json(kkw.verify_suite(suite)))
        written.append(path)
    return written


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kkwcalc", description="Exact boundary-residue and heat-coefficient calculator.")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate an expression in the Clifford model")
    ev.add_argument("expr")
    ev.add_argument("--dim", type=int, default=4)

    ve = sub.add_parser("verify", help="run a verification suite")
    ve.add_argument("--suite", required=True, choices=kkw.SUITES)
    ve.add_argument("--dim", type=int)
    ve.add_argument("--report", choices=("json", "text"), default="text")
    ve.add_argument("--golden", help="expectation file overriding the built-in values")
    ve.add_argument("--parallel", type=int, default=1)
    ve.add_argument("--output", help="write the report here instead of stdout")

    go = sub.add_parser("goldens", help="manage golden files")
    go.add_argument("--write", action="store_true", help="regenerate expectation files and report snapshots")
    go.add_argument("--dir", help=f"target directory (default ${GOLDEN_ENV} or ./goldens)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            print(format_value(evaluate(parse_expr(args.expr), args.dim)))
            return 0
        if args.command == "verify":
            text, status = run_verify(args.suite, args.dim, args.report, args.golden, args.parallel)
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
            return status
        if not args.write:
            print("nothing to do; pass --write to regenerate golden files", file=sys.stderr)
            return 2
        for path in write_goldens(Path(args.dir) if args.dir else golden_dir()):
            print(path)
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (BadFlag, EvalError, MissingJet, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
