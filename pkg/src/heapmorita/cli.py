"""Command-line front end.

Usage:
    heapmorita validate {semigroup,heap,bimodule} PATH [--mode sampled --seed N]
    heapmorita generate inverse-monoid K -o i2.sg
    heapmorita generate {gh-of,eb-of,atlas-close} PATH -o OUT
    heapmorita construct HEAP [--left] [--right] [--bimodule] -o OUTDIR
    heapmorita roundtrip {heap,bimodule} PATH
    heapmorita iso A B

Exit codes:
    0: every check passed (or the inputs are isomorphic)
    1: an axiom failed (or the inputs are not isomorphic); the report is still printed
    2: parse error, structural error or size cap exceeded
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .finsemi import (
    CompositionError,
    NotInverseError,
    SizeLimitError,
    check_associative,
    check_inverse_laws,
    iso_search,
    recognize_inverse,
    symmetric_inverse_monoid,
)
from .formats import (
    ParseError,
    format_bimodule,
    format_heap,
    format_semigroup,
    parse_atlas,
    parse_bimodule,
    parse_heap,
    parse_semigroup,
)
from .groupoid import check_groupoid, check_pregroupoid
from .heap import DEFAULT_SAMPLES, MAX_ELEMENTS, ConfigurationError, atlas_closure, gh_of, validate_heap
from .morita import construct, eb_of, roundtrip_bimodule, roundtrip_heap, validate_bimodule
from .report import InternalInconsistencyError, MalformedTableError, ValidationReport

SCHEMA = "heapmorita-report/1"

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

# errors that mean "the input is unusable" rather than "an axiom failed"
_INPUT_ERRORS = (
    ParseError,
    MalformedTableError,
    SizeLimitError,
    NotInverseError,
    ConfigurationError,
    CompositionError,
    OSError,
)


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    command: str
    inputs: list[dict[str, str]] = field(default_factory=list)
    reports: list[ValidationReport] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)
    error: str | None = None
    exit_code: int | None = None
    body: str | None = None  # generated file content when no -o was given

    def read(self, path: str) -> str:
        data = Path(path).read_bytes()
        self.inputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})
        return data.decode("utf-8")

    def code(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        if self.error is not None:
            return EXIT_ERROR
        return EXIT_OK if all(r.passed for r in self.reports) else EXIT_FAIL

    def status(self) -> str:
        return {EXIT_OK: "pass", EXIT_FAIL: "fail"}.get(self.code(), "error")

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "tool": {"name": "heapmorita", "version": __version__},
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status(),
            "exit_code": self.code(),
            "error": self.error,
            "reports": [r.to_dict() for r in self.reports],
            "results": self.results,
        }

    def render(self) -> str:
        lines = [f"heapmorita {__version__}: {self.command}"]
        for inp in self.inputs:
            lines.append(f"input {inp['path']} sha256={inp['sha256']}")
        for r in self.reports:
            lines.append(r.render())
        for key in sorted(self.results):
            lines.append(f"{key}: {json.dumps(self.results[key], sort_keys=True)}")
        if self.error is not None:
            lines.append(f"error: {self.error}")
        lines.append(f"status: {self.status()}")
        return "\n".join(lines)


def _write(path: str | Path, text: str) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return str(path)


def _check_mode(args) -> None:
    if args.mode == "sampled" and args.seed is None:
        raise UsageError("--mode sampled requires --seed")


def _seed(args) -> int:
    return 0 if args.seed is None else args.seed


def _heap_report(args, X) -> ValidationReport:
    _check_mode(args)
    return validate_heap(X, mode=args.mode, samples=args.samples, seed=args.seed, threads=args.threads)


def _cap(args, n: int, what: str) -> None:
    if n > args.max_elements:
        raise SizeLimitError(f"{what} has {n} elements, above --max-elements {args.max_elements}")


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, out: Outcome) -> None:
    text = out.read(args.path)
    if args.kind == "semigroup":
        data = parse_semigroup(text)
        rep = check_associative(data.mul, threads=args.threads)
        out.reports.append(rep)
        if not rep.passed:
            return
        inv_rep = ValidationReport("inverse semigroup")
        n = data.mul.shape[0]
        try:
            S = recognize_inverse(data.semigroup())
        except NotInverseError as exc:
            inv_rep.add("unique-inverses", exc.witness, n, detail=str(exc))
            out.reports.append(inv_rep)
            return
        inv_rep.add("unique-inverses", None, n)
        if data.inv is not None:
            bad = [x for x in range(n) if data.inv[x] != S.inv[x]]
            inv_rep.add("inv-line", (bad[0], int(data.inv[bad[0]])) if bad else None, n, law="inv line lists x^-1")
        out.reports.append(inv_rep.extend(check_inverse_laws(S)))
        out.results["elements"] = n
    elif args.kind == "heap":
        X = parse_heap(text)
        out.reports.append(_heap_report(args, X))
        out.results["elements"] = X.n
    else:
        B = parse_bimodule(text)
        out.reports.append(validate_bimodule(B))
        out.results["sizes"] = {"S": B.S.n, "T": B.T.n, "X": B.m}


def cmd_generate(args, out: Outcome) -> None:
    comments: list[str] = []
    if args.kind == "inverse-monoid":
        try:
            k = int(args.source)
        except ValueError:
            raise UsageError(f"inverse-monoid takes an integer k, got {args.source!r}") from None
        S, maps = symmetric_inverse_monoid(k)
        _cap(args, S.n, f"I_{k}")
        comments = [f"symmetric inverse monoid on {k} points"]
        comments += [f"{i} = {f}" for i, f in enumerate(maps)]
        body, n = format_semigroup(S, comments), S.n
    elif args.kind == "gh-of":
        S = parse_semigroup(out.read(args.source)).inverse_semigroup()
        body, n = format_heap(gh_of(S), ["{xyz} = x y^-1 z"]), S.n
    elif args.kind == "eb-of":
        S = parse_semigroup(out.read(args.source)).inverse_semigroup()
        body, n = format_bimodule(eb_of(S), ["S acting on itself, <x,y> = x y^-1, [x,y] = x^-1 y"]), S.n
    else:
        _, _, maps = parse_atlas(out.read(args.source))
        X, elems = atlas_closure(maps, max_elements=args.max_elements)
        comments = ["closure of the atlas under x y^-1 z"] + [f"{i} = {f}" for i, f in enumerate(elems)]
        body, n = format_heap(X, comments), X.n
    out.results["elements"] = n
    if args.out is None:
        out.results["output"] = "-"
        out.exit_code = EXIT_OK
        out.body = body
    else:
        out.results["output"] = _write(args.out, body)


def cmd_construct(args, out: Outcome) -> None:
    X = parse_heap(out.read(args.path))
    _cap(args, X.n, "heap")
    emit = [name for name in ("left", "right", "bimodule") if getattr(args, name)]
    if emit and args.out is None:
        raise UsageError("--left/--right/--bimodule need -o OUTDIR")
    hr = _heap_report(args, X)
    out.reports.append(hr)
    if not hr.passed:
        return
    try:
        C = construct(X, seed=_seed(args))
    except InternalInconsistencyError as exc:
        if exc.report is not None:
            out.reports.append(exc.report)
        out.error = str(exc)
        out.exit_code = EXIT_FAIL
        return
    V = C.left.view
    out.reports.append(check_pregroupoid(V))
    out.reports.append(check_groupoid(C.left))
    out.reports.append(check_groupoid(C.right))
    out.reports.append(validate_bimodule(C.bimodule))
    out.results.update(
        {
            "E": V.p.size,
            "F": V.q.size,
            "left": {"pairs": len(C.left.pairs), "classes": C.left.size},
            "right": {"pairs": len(C.right.pairs), "classes": C.right.size},
            "bimodule": {"S": C.bimodule.S.n, "T": C.bimodule.T.n, "X": C.bimodule.m},
        }
    )
    written = []
    if args.left:
        written.append(_write(Path(args.out) / "left.sg", format_semigroup(C.left.semigroup, ["X X^-1"])))
    if args.right:
        written.append(_write(Path(args.out) / "right.sg", format_semigroup(C.right.semigroup, ["X^-1 X"])))
    if args.bimodule:
        written.append(_write(Path(args.out) / "bimodule.bim", format_bimodule(C.bimodule)))
    out.results["written"] = written


def cmd_roundtrip(args, out: Outcome) -> None:
    text = out.read(args.path)
    if args.kind == "heap":
        X = parse_heap(text)
        hr = _heap_report(args, X)
        out.reports.append(hr)
        if hr.passed:
            out.reports.append(roundtrip_heap(X, seed=_seed(args)))
        return
    B = parse_bimodule(text)
    br = validate_bimodule(B)
    out.reports.append(br)
    if not br.passed:
        return
    rt = roundtrip_bimodule(B, seed=_seed(args))
    out.reports.append(rt.report)
    out.results["alpha"] = rt.alpha.to_dict()
    out.results["beta"] = rt.beta.to_dict()


def cmd_iso(args, out: Outcome) -> None:
    A = parse_semigroup(out.read(args.a)).inverse_semigroup()
    B = parse_semigroup(out.read(args.b)).inverse_semigroup()
    w = iso_search(A, B)
    out.results["iso"] = w.to_dict()
    out.exit_code = EXIT_OK if w else EXIT_FAIL


COMMANDS = {
    "validate": cmd_validate,
    "generate": cmd_generate,
    "construct": cmd_construct,
    "roundtrip": cmd_roundtrip,
    "iso": cmd_iso,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the key-sorted JSON report")
    common.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=None, help="seed for sampling and representative checks")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-elements", type=int, default=MAX_ELEMENTS)
    common.add_argument("--timing", action="store_true", help="add wall-clock time to the report")

    parser = argparse.ArgumentParser(prog="heapmorita", description="Generalized heaps and equivalence bimodules.")
    parser.add_argument("--version", action="version", version=f"heapmorita {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms of a structure")
    p.add_argument("kind", choices=("semigroup", "heap", "bimodule"))
    p.add_argument("path")

    p = sub.add_parser("generate", parents=[common], help="write a derived structure")
    p.add_argument("kind", choices=("inverse-monoid", "gh-of", "eb-of", "atlas-close"))
    p.add_argument("source", help="k for inverse-monoid, otherwise an input file")
    p.add_argument("-o", "--out")

    p = sub.add_parser("construct", parents=[common], help="build X X^-1, X^-1 X and the bimodule of a heap")
    p.add_argument("path")
    p.add_argument("--left", action="store_true", help="write X X^-1 to OUTDIR/left.sg")
    p.add_argument("--right", action="store_true", help="write X^-1 X to OUTDIR/right.sg")
    p.add_argument("--bimodule", action="store_true", help="write the bimodule to OUTDIR/bimodule.bim")
    p.add_argument("-o", "--out", help="output directory")

    p = sub.add_parser("roundtrip", parents=[common], help="verify a round trip through the other side")
    p.add_argument("kind", choices=("heap", "bimodule"))
    p.add_argument("path")

    p = sub.add_parser("iso", parents=[common], help="decide whether two inverse semigroups are isomorphic")
    p.add_argument("a")
    p.add_argument("b")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    label = args.command + (f" {args.kind}" if hasattr(args, "kind") else "")
    out = Outcome(label)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        out.error = str(exc)
    except _INPUT_ERRORS as exc:
        out.error = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start

    if out.body is not None and out.error is None:
        return out.code(), out.body, ""
    if args.json:
        doc = out.to_dict()
        if args.timing:
            doc["timing"] = {"seconds": round(elapsed, 6)}
        text = json.dumps(doc, sort_keys=True, indent=2)
    else:
        text = out.render()
        if args.timing:
            text += f"\ntime: {elapsed:.3f}s"
    err = f"heapmorita: {out.error}\n" if out.error is not None else ""
    return out.code(), text + "\n", err


def main(argv: list[str] | None = None) -> int:
    code, stdout, stderr = run(argv)
    sys.stdout.write(stdout)
    sys.stdout.flush()
    if stderr:
        sys.stderr.write(stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
