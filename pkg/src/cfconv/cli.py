"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 no recurrence found by
``guess``, 3 internal-consistency failure (a proven bound was violated).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from .cfseq import (
    CFiniteSequence,
    from_gf,
    gf_from_json,
    gf_to_json,
    sequence_from_json,
    sequence_to_json,
    to_gf,
)
from .convolve import (
    DEFAULT_GUARD,
    IdentityResult,
    InternalConsistencyError,
    cross_convolution_identity,
    self_convolution_identity,
)
from .families import kbonacci, kbonacci_gf, named_sequence
from .guess import InsufficientDataError, guess_recurrence
from .ratcore import (
    RationalFunction,
    format_coeff,
    format_rational,
    format_rational_latex,
    parse_rational,
    series_expand,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_FOUND = 2
EXIT_INTERNAL = 3

FORMATS = ("text", "json", "latex")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# sequence specs


class _SpecAction(argparse.Action):
    """Collect ``--seq/--kbonacci/--gf/--json`` in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        specs = list(getattr(namespace, "specs", None) or [])
        specs.append((self.const, values))
        namespace.specs = specs


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("sequence (repeatable, in order)")
    g.add_argument("--seq", metavar="NAME", action=_SpecAction, const="seq", dest="specs")
    g.add_argument("--kbonacci", metavar="K", action=_SpecAction, const="kbonacci", dest="specs")
    g.add_argument("--gf", metavar="STRING", action=_SpecAction, const="gf", dest="specs")
    g.add_argument("--json", metavar="FILE", action=_SpecAction, const="json", dest="specs")


def _kbonacci_index(value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"--kbonacci expects an integer, got {value!r}") from None


def _read_json(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def resolve_gf(spec: tuple[str, str]) -> RationalFunction:
    kind, value = spec
    if kind == "seq":
        return to_gf(named_sequence(value))
    if kind == "kbonacci":
        return kbonacci_gf(_kbonacci_index(value))
    if kind == "gf":
        return parse_rational(value)
    obj = _read_json(value)
    if "gf" in obj:
        return gf_from_json(obj)
    return to_gf(sequence_from_json(obj))


def resolve_sequence(spec: tuple[str, str]) -> CFiniteSequence:
    kind, value = spec
    if kind == "seq":
        return named_sequence(value)
    if kind == "kbonacci":
        return kbonacci(_kbonacci_index(value))
    if kind == "gf":
        return from_gf(parse_rational(value))
    return sequence_from_json(_read_json(value))


def _specs(args, count: int) -> list[tuple[str, str]]:
    specs = getattr(args, "specs", None) or []
    if len(specs) != count:
        raise UsageError(
            f"expected {count} sequence spec(s) (--seq/--kbonacci/--gf/--json), got {len(specs)}"
        )
    return specs


# ---------------------------------------------------------------------------
# rendering


def format_recurrence(s: CFiniteSequence) -> str:
    parts = []
    for i, c in enumerate(s.recurrence.coeffs, start=1):
        if not c:
            continue
        term = f"a(n-{i})"
        mag = abs(c)
        body = term if mag == 1 else f"{format_coeff(mag)}*{term}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "a(n) = " + "".join(parts)


def result_to_json(result: IdentityResult, elapsed_ms: float | None) -> dict:
    out: dict[str, Any] = {
        "gf": gf_to_json(result.gf),
        "order_bound": result.order_bound,
        "order_found": result.order_found,
        "terms_generated": result.terms_generated,
        "guard_verified": result.guard_verified,
    }
    if elapsed_ms is not None:
        out["elapsed_ms"] = round(elapsed_ms, 3)
    return out


def _metadata(result: IdentityResult) -> str:
    return (
        f"order_bound={result.order_bound} order_found={result.order_found} "
        f"terms_generated={result.terms_generated} guard_verified={result.guard_verified}"
    )


def render_result(result: IdentityResult, fmt: str, elapsed_ms: float) -> str:
    if fmt == "json":
        return json.dumps(result_to_json(result, elapsed_ms))
    if fmt == "latex":
        return f"\\[ {format_rational_latex(result.gf)} \\]"
    return f"{format_rational(result.gf)}\n# {_metadata(result)} elapsed_ms={elapsed_ms:.3f}"


def render_gf(f: RationalFunction, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(gf_to_json(f))
    if fmt == "latex":
        return f"\\[ {format_rational_latex(f)} \\]"
    return format_rational(f)


# ---------------------------------------------------------------------------
# batch tables


@dataclass
class BatchReport:
    kind: str
    kmax: int
    entries: list[tuple[tuple[int, ...], IdentityResult, float]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.entries)

    @property
    def total_elapsed_ms(self) -> float:
        return sum(e[2] for e in self.entries)

    def render(self, fmt: str, timings: bool = False) -> str:
        if fmt == "json":
            entries = []
            for params, result, ms in self.entries:
                entry = dict(zip(("k",) if len(params) == 1 else ("k1", "k2"), params))
                entry["result"] = result_to_json(result, ms if timings else None)
                entries.append(entry)
            totals: dict[str, Any] = {"count": self.count}
            if timings:
                totals["elapsed_ms"] = round(self.total_elapsed_ms, 3)
            doc = {"kind": self.kind, "kmax": self.kmax, "entries": entries, "totals": totals}
            return json.dumps(doc, indent=1) + "\n"
        if fmt == "latex":
            return self._render_latex(timings)
        lines = [self._title()]
        for params, result, ms in self.entries:
            label = _label(params)
            meta = _metadata(result) + (f" elapsed_ms={ms:.3f}" if timings else "")
            lines.append(f"{label}: {format_rational(result.gf)}")
            lines.append(f"  # {meta}")
        lines.append(f"# {self.count} entries, all guard-verified")
        return "\n".join(lines) + "\n"

    def _title(self) -> str:
        if self.kind == "self":
            return f"# binomial self-convolutions of k-bonacci numbers, 2 <= k <= {self.kmax}"
        return f"# binomial convolutions of k1- and k2-bonacci numbers, 2 <= k1 <= k2 <= {self.kmax}"

    def _render_latex(self, timings: bool) -> str:
        lines = [
            r"\documentclass{article}",
            r"\usepackage{amsmath}",
            r"\begin{document}",
            "% " + self._title().lstrip("# "),
        ]
        for params, result, ms in self.entries:
            if len(params) == 1:
                (k,) = params
                lhs = rf"\sum_{{n\ge 0}} \sum_{{j=0}}^{{n}} \binom{{n}}{{j}} T^{{({k})}}_j T^{{({k})}}_{{n-j}}\, x^n"
            else:
                k1, k2 = params
                lhs = rf"\sum_{{n\ge 0}} \sum_{{j=0}}^{{n}} \binom{{n}}{{j}} T^{{({k1})}}_j T^{{({k2})}}_{{n-j}}\, x^n"
            comment = f"% {_label(params)}: {_metadata(result)}"
            if timings:
                comment += f" elapsed_ms={ms:.3f}"
            lines.append(comment)
            lines.append(rf"\[ {lhs} = {format_rational_latex(result.gf)} \]")
        lines.append(r"\end{document}")
        return "\n".join(lines) + "\n"


def _label(params: tuple[int, ...]) -> str:
    if len(params) == 1:
        return f"k={params[0]}"
    return f"k1={params[0]} k2={params[1]}"


def _timed(fn: Callable[..., IdentityResult], *args) -> tuple[IdentityResult, float]:
    t0 = time.perf_counter()
    result = fn(*args)
    return result, (time.perf_counter() - t0) * 1000.0


def _self_entry(k: int, guard: int) -> tuple[IdentityResult, float]:
    return _timed(self_convolution_identity, kbonacci(k), guard)


def _cross_entry(k1: int, k2: int, guard: int) -> tuple[IdentityResult, float]:
    return _timed(cross_convolution_identity, kbonacci(k1), kbonacci(k2), guard)


class BatchEntryError(Exception):
    def __init__(self, params: tuple[int, ...], cause: Exception):
        super().__init__(f"{_label(params)}: {cause}")
        self.params = params
        self.cause = cause


def _run_batch(worker, params_list: list[tuple[int, ...]], guard: int, jobs: int):
    if jobs <= 1:
        out = []
        for params in params_list:
            try:
                out.append(worker(*params, guard))
            except Exception as exc:
                raise BatchEntryError(params, exc) from exc
        return out
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, *params, guard) for params in params_list]
        out = []
        for params, fut in zip(params_list, futures):
            try:
                out.append(fut.result())
            except Exception as exc:
                for f in futures:
                    f.cancel()
                raise BatchEntryError(params, exc) from exc
        return out


def table_self(kmax: int, guard: int = DEFAULT_GUARD, jobs: int = 1) -> BatchReport:
    if kmax < 2:
        raise UsageError("--kmax must be >= 2")
    params = [(k,) for k in range(2, kmax + 1)]
    report = BatchReport("self", kmax)
    for p, (result, ms) in zip(params, _run_batch(_self_entry, params, guard, jobs)):
        report.entries.append((p, result, ms))
    return report


def table_cross(kmax: int, guard: int = DEFAULT_GUARD, jobs: int = 1) -> BatchReport:
    if kmax < 2:
        raise UsageError("--kmax must be >= 2")
    params = [(k1, k2) for k1 in range(2, kmax + 1) for k2 in range(k1, kmax + 1)]
    report = BatchReport("cross", kmax)
    for p, (result, ms) in zip(params, _run_batch(_cross_entry, params, guard, jobs)):
        report.entries.append((p, result, ms))
    return report


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_terms(args) -> int:
    (spec,) = _specs(args, 1)
    if args.n < 0:
        raise UsageError("-n must be >= 0")
    terms = series_expand(resolve_gf(spec), args.n)
    if args.format == "json":
        _emit(json.dumps([format_coeff(t) for t in terms]), args.out)
    else:
        _emit("\n".join(format_coeff(t) for t in terms), args.out)
    return EXIT_OK


def _read_terms(path: str) -> list[Fraction]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        raw = json.loads(text)
        if not isinstance(raw, list):
            raise UsageError(f"{path}: expected a JSON array of terms")
    except json.JSONDecodeError:
        raw = text.replace(",", " ").split()
    try:
        return [Fraction(str(v).strip()) for v in raw]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: not an exact rational term list ({exc})") from None


def cmd_guess(args) -> int:
    data = _read_terms(args.terms_file)
    max_order = args.max_order if args.max_order is not None else (len(data) - 1) // 2
    try:
        result = guess_recurrence(data, max_order)
    except InsufficientDataError as exc:
        raise UsageError(str(exc)) from None
    if result is None:
        if args.format == "json":
            _emit(json.dumps({"found": False, "max_order": max_order, "terms_used": len(data)}), args.out)
        else:
            _emit(f"NotFound: no recurrence of order <= {max_order} fits all {len(data)} terms", args.out)
        return EXIT_NOT_FOUND
    gf = result.gf
    if args.format == "json":
        seq = sequence_to_json(result.sequence) if result.sequence else {"recurrence": [], "initial": []}
        doc = {
            "found": True,
            "gf": gf_to_json(gf),
            **seq,
            "order_found": result.order_found,
            "terms_used": result.terms_used,
        }
        _emit(json.dumps(doc), args.out)
    elif args.format == "latex":
        _emit(render_gf(gf, "latex"), args.out)
    else:
        if result.sequence is None:
            rec = "a(n) = 0 (zero sequence)"
            init = "[]"
        else:
            rec = format_recurrence(result.sequence)
            init = "[" + ", ".join(format_coeff(c) for c in result.sequence.initial) + "]"
        _emit(
            f"{format_rational(gf)}\n# {rec}; order {result.order_found}; "
            f"initial {init}; terms used {result.terms_used}",
            args.out,
        )
    return EXIT_OK


def cmd_rec2gf(args) -> int:
    (spec,) = _specs(args, 1)
    _emit(render_gf(to_gf(resolve_sequence(spec)), args.format), args.out)
    return EXIT_OK


def cmd_gf2rec(args) -> int:
    (spec,) = _specs(args, 1)
    seq = from_gf(resolve_gf(spec))
    if args.format == "json":
        _emit(json.dumps(sequence_to_json(seq)), args.out)
    elif args.format == "latex":
        coeffs = " + ".join(
            f"{format_coeff(c)}\\,a(n-{i})" for i, c in enumerate(seq.recurrence.coeffs, 1)
        )
        _emit(f"\\[ a(n) = {coeffs} \\]", args.out)
    else:
        init = ", ".join(format_coeff(c) for c in seq.initial)
        _emit(f"{format_recurrence(seq)}\ninitial: [{init}]", args.out)
    return EXIT_OK


def cmd_selfconv(args) -> int:
    (spec,) = _specs(args, 1)
    result, ms = _timed(self_convolution_identity, resolve_sequence(spec), args.guard)
    _emit(render_result(result, args.format, ms), args.out)
    return EXIT_OK


def cmd_crossconv(args) -> int:
    s1, s2 = _specs(args, 2)
    result, ms = _timed(
        cross_convolution_identity, resolve_sequence(s1), resolve_sequence(s2), args.guard
    )
    _emit(render_result(result, args.format, ms), args.out)
    return EXIT_OK


def _table(args, build) -> int:
    report = build(args.kmax, args.guard, args.jobs)
    _emit(report.render(args.format, timings=args.timings), args.out)
    print(
        f"{report.count} entries guard-verified in {report.total_elapsed_ms:.1f} ms",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_table_self(args) -> int:
    return _table(args, table_self)


def cmd_table_cross(args) -> int:
    return _table(args, table_cross)


def _default_jobs() -> int:
    value = os.environ.get("CFCONV_JOBS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfconv",
        description="Certified binomial-convolution identities for C-finite sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_out=True):
        p.add_argument("--format", choices=FORMATS, default="text")
        if with_out:
            p.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("terms", help="print the first terms of a sequence")
    _add_spec_flags(p)
    p.add_argument("-n", type=int, default=10, metavar="COUNT")
    common(p)
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("guess", help="fit a minimal recurrence to a list of terms")
    p.add_argument("terms_file", help="JSON array of terms ('-' for stdin)")
    p.add_argument("--max-order", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("rec2gf", help="recurrence + initial terms to a generating function")
    _add_spec_flags(p)
    common(p)
    p.set_defaults(func=cmd_rec2gf)

    p = sub.add_parser("gf2rec", help="generating function to recurrence + initial terms")
    _add_spec_flags(p)
    common(p)
    p.set_defaults(func=cmd_gf2rec)

    for name, func, help_ in (
        ("selfconv", cmd_selfconv, "certified GF of the binomial self-convolution"),
        ("crossconv", cmd_crossconv, "certified GF of the binomial convolution of two sequences"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_spec_flags(p)
        p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
        common(p)
        p.set_defaults(func=func)

    for name, func, help_ in (
        ("table-self", cmd_table_self, "self-convolutions of k-bonacci numbers, k = 2..KMAX"),
        ("table-cross", cmd_table_cross, "convolutions of k1-/k2-bonacci, 2 <= k1 <= k2 <= KMAX"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--kmax", type=int, required=True)
        p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
        p.add_argument("--jobs", type=int, default=_default_jobs())
        p.add_argument("--timings", action="store_true", help="include per-entry timings in the output")
        common(p)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "guard", 0) < 0:
        print("error: --guard must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        _dump_internal(exc)
        return EXIT_INTERNAL
    except BatchEntryError as exc:
        if isinstance(exc.cause, InternalConsistencyError):
            print(f"error: entry {_label(exc.params)} failed", file=sys.stderr)
            _dump_internal(exc.cause)
            return EXIT_INTERNAL
        print(f"error: entry {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dump_internal(exc: InternalConsistencyError) -> None:
    print(f"internal consistency failure: {exc}", file=sys.stderr)
    print("terms: " + " ".join(format_coeff(t) for t in exc.terms), file=sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
