"""Command line: ``eigenbounds {bounds,verify,generate,sweep}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 numerical failure. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

from .errors import InputError, NumericalError
from .generators import SpectrumSource, generate, source_from_json
from .profiles import BoundProfile, parse_profile_spec, profile_from_json
from .solvers import bound_table, sigma_p, sigma_tilde_p
from .spectra import Spectrum, load_spectrum
from .verify import FAMILY_RTOL, run_suite

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _null_nonfinite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _null_nonfinite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_null_nonfinite(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_null_nonfinite(obj), indent=2, allow_nan=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def write_output(text: str, out: str | None):
    """Write to ``out`` atomically (temp file then rename), or to stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# argument helpers


def resolve_profile(spec: str) -> BoundProfile:
    """Inline spec (``classical:n=2``) or path to a profile JSON file."""
    if os.path.isfile(spec):
        with open(spec) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed profile JSON in {spec}: {exc}") from None
        return profile_from_json(obj)
    return parse_profile_spec(spec)


def parse_p_list(text: str) -> list[float]:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            p = float(tok)
        except ValueError:
            raise InputError(f"bad p value {tok!r}") from None
        if not (math.isfinite(p) and p >= 0):
            raise InputError(f"p values must be finite and >= 0, got {tok!r}")
        vals.append(p)
    return vals


def parse_p_grid(text: str) -> list[float]:
    """``LO:HI:STEP``, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"p grid must be LO:HI:STEP, got {text!r}")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError:
        raise InputError(f"bad p grid {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo >= 0 and hi >= lo):
        raise InputError(f"p grid needs 0 <= LO <= HI, got {text!r}")
    if not (step > 0 and math.isfinite(step)):
        raise InputError(f"p grid step must be positive, got {step!r}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + k * step for k in range(n + 1)]


def _p_values(args) -> list[float]:
    vals = []
    if args.p is not None:
        vals += parse_p_list(args.p)
    if args.p_grid is not None:
        vals += parse_p_grid(args.p_grid)
    return vals


def _check_m(m, spectrum: Spectrum, need_next=False):
    if m is None:
        return
    if m < 1:
        raise InputError(f"--m must be >= 1, got {m}")
    top = len(spectrum) - 1 if need_next else len(spectrum)
    if m > top:
        raise InputError(f"--m {m} too large for a spectrum of {len(spectrum)} values")


# ---------------------------------------------------------------------------
# commands


def cmd_bounds(args) -> int:
    spectrum = load_spectrum(args.spectrum)
    profile = resolve_profile(args.profile)
    _check_m(args.m, spectrum)
    rows = bound_table(profile, spectrum, args.m, _p_values(args))
    if args.format == "csv":
        text = _dump_csv(
            ["p", "method", "value", "residual", "iterations"],
            [(r.p, r.method.value, r.value, r.residual, r.iterations) for r in rows],
        )
    else:
        text = _dump_json(
            {"profile": profile.to_json(), "m": args.m, "rows": [r.to_json() for r in rows]}
        )
    write_output(text, args.out)
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"error: p={r.p:g}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_verify(args) -> int:
    spectrum = load_spectrum(args.spectrum)
    profile = resolve_profile(args.profile)
    _check_m(args.m, spectrum, need_next=True)
    rtol = FAMILY_RTOL if args.tol is None else args.tol
    if not rtol > 0:
        raise InputError(f"--tol must be positive, got {rtol!r}")
    reports = run_suite(profile, spectrum, args.m, seed=args.seed, family_rtol=rtol)
    if args.format == "csv":
        text = _dump_csv(
            ["check", "pass", "slack", "tolerance"],
            [(r.check, str(r.passed).lower(), r.slack, r.tolerance) for r in reports],
        )
    else:
        text = _dump_json([r.to_json() for r in reports])
    write_output(text, args.out)
    bad = [r for r in reports if not r.passed]
    for r in bad:
        print(f"FAIL {r.check}: slack {r.slack!r} {r.witness}", file=sys.stderr)
    return EXIT_CHECK if bad else EXIT_OK


def cmd_generate(args) -> int:
    if args.source is not None:
        with open(args.source) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed source JSON in {args.source}: {exc}") from None
        if args.count is not None:
            obj["count"] = args.count
        source = source_from_json(obj)
    else:
        if args.kind is None:
            raise InputError("generate needs --kind or --source")
        params = {
            key: getattr(args, attr)
            for key, attr in (
                ("sides", "sides"),
                ("length", "length"),
                ("lengths", "lengths"),
                ("grid", "grid"),
                ("grids", "grids"),
                ("p", "p"),
                ("q", "q"),
                ("interval", "interval"),
            )
            if getattr(args, attr) is not None
        }
        source = SpectrumSource(args.kind, params, 1 if args.count is None else args.count)
    spectrum = generate(source)
    write_output(_dump_json(spectrum.to_json()), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spectrum = load_spectrum(args.spectrum)
    profile = resolve_profile(args.profile)
    _check_m(args.m, spectrum)
    grid = sorted(set(_p_values(args)))
    if not grid:
        raise InputError("sweep needs --p-grid or --p")
    rows = []
    for p in grid:
        try:
            res = sigma_p(profile, spectrum, args.m, p) if p <= 2 else sigma_tilde_p(profile, spectrum, args.m, p)
            rows.append((p, res.value))
        except (InputError, NumericalError) as exc:
            print(f"error: p={p:g}: {exc}", file=sys.stderr)
            rows.append((p, None))
    if args.format == "json":
        text = _dump_json([{"p": p, "value": v} for p, v in rows])
    else:
        text = _dump_csv(["p", "value"], rows)
    write_output(text, args.out)
    return EXIT_OK if any(v is not None for _, v in rows) else EXIT_NUMERIC


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eigenbounds", description="Universal eigenvalue bounds and checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_m=True):
        sp.add_argument("--spectrum", required=True, help="spectrum JSON file")
        sp.add_argument("--profile", required=True, help="inline spec such as classical:n=2, or a JSON file")
        sp.add_argument("--m", type=int, required=need_m, help="prefix length")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="output file (written atomically); stdout by default")

    b = sub.add_parser("bounds", help="bound table for one prefix")
    common(b)
    b.add_argument("--p", help="comma-separated exponents")
    b.add_argument("--p-grid", dest="p_grid", help="LO:HI:STEP")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run the inequality checks")
    common(v, need_m=False)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, help="relative tolerance for the inequality checks")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a generated spectrum as JSON")
    g.add_argument("--kind", help="box, fd1d, fd2d, sturm or inhomogeneous")
    g.add_argument("--source", help="spectrum source JSON file instead of flags")
    g.add_argument("--count", type=int)
    g.add_argument("--sides", help="box side lengths, comma-separated")
    g.add_argument("--length", help="interval length (fd1d)")
    g.add_argument("--lengths", help="two side lengths (fd2d)")
    g.add_argument("--grid", help="interior grid points")
    g.add_argument("--grids", help="two grid sizes (fd2d)")
    g.add_argument("--p", help="coefficient p(x) (sturm)")
    g.add_argument("--q", help="coefficient q(x) (sturm) or density (inhomogeneous)")
    g.add_argument("--interval", help="lo,hi")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sweep", help="sigma_p over a grid of p, as plot data")
    common(s)
    s.set_defaults(format="csv")
    s.add_argument("--p-grid", dest="p_grid", help="LO:HI:STEP")
    s.add_argument("--p", help="comma-separated exponents")
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
