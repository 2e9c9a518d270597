"""Command line: ``dedekind-periods {forms, verify, compute} ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .cocycles import FreeGroup, classical_reciprocity_function, coprime_pairs, random_symbol, reconstruct_symbol
from .config import FORMATS, Config, ConfigError, parse_complex, parse_weight
from .exact import INF, Cusp
from .forms import BUILTIN_WEIGHTS, TailBoundError, eta_power
from .iterated import FormFamily, transport
from .modular import SIGMA, THETA
from .ncseries import word_str
from .quadrature import QuadratureError, default_cache, period_integral
from .reciprocity import THETA_SIGMA_THETA, f_scalar, f_value
from .report import REPORT_SCHEMA
from .suites import SUITES, run_suite

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _endpoint(text: str):
    s = text.strip().lower()
    if s in ("inf", "oo", "infinity", "i*inf"):
        return INF
    try:
        return Cusp.of(Fraction(s))
    except (ValueError, ZeroDivisionError):
        z = parse_complex(s)
        if z.imag <= 0:
            raise UsageError(f"endpoint {text!r} is neither a cusp nor a point of the upper half-plane")
        return z


def _common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="key = value configuration file")
    p.add_argument("--tol", type=float, default=S, help="quadrature tolerance")
    p.add_argument("--M", type=int, default=S, help="q-expansion length")
    p.add_argument("--depth", type=int, default=S, help="series depth (0..4)")
    p.add_argument("--family", default=S, help="comma-separated weights, e.g. '12,5.3'; '' for none")
    p.add_argument("--cache-dir", default=S, help="cache directory (overrides the environment)")
    p.add_argument("--no-cache", action="store_true", default=S, help="do not read or write the cache")
    p.add_argument("--format", choices=FORMATS, default=S, dest="output_format")
    p.add_argument("--output", "-o", default=S, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dedekind-periods", description=__doc__.splitlines()[0])
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    forms = sub.add_parser("forms", help="built-in eta-power forms")
    _common(forms)
    fsub = forms.add_subparsers(dest="action", required=True)
    _common(fsub.add_parser("list"))
    insp = fsub.add_parser("inspect")
    _common(insp)
    insp.add_argument("w", help="weight, e.g. 12 or 5.3")

    verify = sub.add_parser("verify", help="run a verification suite")
    _common(verify)
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--t", default=argparse.SUPPRESS, help="parameter t in the lower half-plane")

    compute = sub.add_parser("compute", help="compute values")
    _common(compute)
    csub = compute.add_subparsers(dest="what", required=True)
    per = csub.add_parser("period", help="I_a^b(omega_F; t)")
    _common(per)
    per.add_argument("--w", required=True)
    per.add_argument("--t", required=True)
    per.add_argument("--a", default="0")
    per.add_argument("--b", default="inf")
    it = csub.add_parser("iterate", help="generating series J_a^b(t)")
    _common(it)
    it.add_argument("--a", default="0")
    it.add_argument("--b", default="inf")
    it.add_argument("--t", required=True)
    rec = csub.add_parser("reciprocity", help="f(p, q) for the family")
    _common(rec)
    rec.add_argument("--p", type=int, required=True)
    rec.add_argument("--q", type=int, required=True)
    rec.add_argument("--convention", choices=("literal", "boundary"), default="literal")
    sym = csub.add_parser("symbol", help="Dedekind symbol table")
    _common(sym)
    sym.add_argument("--bound", type=int, default=10)
    sym.add_argument("--kind", choices=("classical", "free"), default="classical")
    sym.add_argument("--seed", type=int, default=0)
    schema = sub.add_parser("schema", help="print the JSON report schema")
    _common(schema)
    return parser


def _config(args) -> Config:
    overrides = {
        "tol": getattr(args, "tol", None),
        "M": getattr(args, "M", None),
        "depth": getattr(args, "depth", None),
        "family": getattr(args, "family", None),
        "cache_dir": getattr(args, "cache_dir", None),
        "output": getattr(args, "output_format", None),
        "t": getattr(args, "t", None) if getattr(args, "command", None) == "verify" else None,
    }
    return Config.load(getattr(args, "config", None), **overrides)


def _emit(text: str, args) -> None:
    path = getattr(args, "output", None)
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _table(rows: List[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if not rows:
        return ""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    keys = list(rows[0])
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    lines = ["  ".join(k.ljust(widths[k]) for k in keys)]
    lines += ["  ".join(str(r[k]).ljust(widths[k]) for k in keys) for r in rows]
    return "\n".join(lines)


def _cx(z: complex) -> str:
    return f"{z.real:.16g}{z.imag:+.16g}i"


def _inspect(w) -> dict:
    F = eta_power(w)
    return {
        "w": str(F.w),
        "weight": F.weight,
        "alpha": F.alpha,
        "leading_coefficients": [float(x) for x in F.coefficients[:8]],
        "v(sigma)": _cx(F.multiplier(SIGMA)),
        "v(theta)": _cx(F.multiplier(THETA)),
        "v(theta.sigma.theta)": _cx(F.multiplier(THETA_SIGMA_THETA)),
        "hash": F.content_hash(),
    }


def _cmd_forms(args, cfg: Config) -> int:
    if args.action == "list":
        rows = [{"w": str(w), "weight": float(w), "alpha": float(w) / 12, "form": f"eta^{2 * w}"} for w in BUILTIN_WEIGHTS]
        _emit(_table(rows, cfg.output), args)
        return EXIT_OK
    info = _inspect(parse_weight(args.w))
    if cfg.output == "json":
        _emit(json.dumps(info, indent=2), args)
    else:
        _emit(_table([{"field": k, "value": v} for k, v in info.items()], cfg.output), args)
    return EXIT_OK


def _cmd_verify(args, cfg: Config) -> int:
    forms = cfg.forms()
    report = run_suite(args.suite, forms, cfg.depth, cfg.t_value)
    report.config = cfg.snapshot()
    report.form_hashes = {str(F.w): F.content_hash() for F in forms}
    _emit(report.render(cfg.output), args)
    return EXIT_OK if report.passed else EXIT_FAIL


def _series_rows(series, family) -> List[dict]:
    rows = []
    for w in series.words():
        c = series[w]
        rows.append({"word": word_str(w), "re": c.real, "im": c.imag})
    return rows


def _cmd_compute(args, cfg: Config) -> int:
    cache = None if getattr(args, "no_cache", False) else default_cache(cfg.cache_dir)
    if args.what == "period":
        F = eta_power(parse_weight(args.w), cfg.M)
        t = parse_complex(args.t)
        res = period_integral(F, _endpoint(args.a), _endpoint(args.b), t, cfg.tol, cache)
        rows = [{"w": str(F.w), "a": args.a, "b": args.b, "t": _cx(t), "re": res.value.real, "im": res.value.imag, "error": res.error}]
        _emit(_table(rows, cfg.output), args)
        return EXIT_OK
    forms = cfg.forms()
    if not forms:
        raise UsageError("the family is empty")
    family = FormFamily(forms)
    if args.what == "iterate":
        J = transport(family, _endpoint(args.a), _endpoint(args.b), parse_complex(args.t), cfg.depth)
        rows = _series_rows(J.series, family)
        if cfg.output == "json":
            _emit(json.dumps({**J.to_dict(), "family": [str(F.w) for F in forms]}, indent=2), args)
        else:
            _emit(_table(rows, cfg.output) + f"\n# error estimate {J.error:.3e}" * (cfg.output == "pretty"), args)
        return EXIT_OK
    if args.what == "reciprocity":
        val = f_value(family, args.p, args.q, cfg.depth, convention=args.convention)
        rows = _series_rows(val.value, family)
        if args.p > 0 and args.q > 0:
            for j, F in enumerate(forms):
                s = f_scalar(family, j, args.p, args.q, cfg.tol)
                rows.append({"word": f"scalar[w={F.w}]", "re": s.value.real, "im": s.value.imag})
        if cfg.output == "json":
            _emit(json.dumps({**val.to_dict(), "rows": rows}, indent=2), args)
        else:
            note = "\n# q = 0: t = 0 is a path endpoint" if val.degenerate and cfg.output == "pretty" else ""
            _emit(_table(rows, cfg.output) + note, args)
        return EXIT_OK
    if args.what == "symbol":
        if args.kind == "classical":
            D = reconstruct_symbol(classical_reciprocity_function())
        else:
            D, _ = random_symbol(FreeGroup(), args.seed)
        pairs = coprime_pairs(args.bound)
        if cfg.output == "csv":
            _emit(D.to_csv(pairs), args)
        else:
            rows = [{"p": p, "q": q, "value": D.group.serialize(D(p, q))} for p, q in pairs]
            _emit(_table(rows, cfg.output), args)
        return EXIT_OK
    raise UsageError(f"unknown compute target {args.what}")


VALUE_OPTIONS = ("--t", "--a", "--b", "--w", "--p", "--q")


def _glue_negative_values(argv: List[str]) -> List[str]:
    """'--t -1i' -> '--t=-1i', so argparse does not read -1i as an option."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1 \
                and (argv[i + 1][1].isdigit() or argv[i + 1][1] in ".ij"):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _config(args)
        if args.command == "forms":
            return _cmd_forms(args, cfg)
        if args.command == "verify":
            return _cmd_verify(args, cfg)
        if args.command == "compute":
            return _cmd_compute(args, cfg)
        if args.command == "schema":
            _emit(json.dumps(REPORT_SCHEMA, indent=2), args)
            return EXIT_OK
    except (QuadratureError, TailBoundError) as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE
