"""Command-line interface: ``adelab {eval,expand,decompose,verify,scan,witness}``.

Exit codes: 0 success (including an inconclusive witness report), 1 a
verification row failed, 2 bad input or a domain guard tripped, 3 an
unsupported (ell, n) regime.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import fastzeta
from .asymptotics import AsymParams, F_eval, G_direct, G_series, H_eval, epsilon_eval
from .diffpoly import extract_cn, gamma_ratio_poly, render
from .formats import atomic_write, poly_to_json, read_poly, upoly_to_json, validate
from .indexcalc import a_table, b_from_a, check_regime, first_nonzero_b, homogeneous_parts, lambda_from_qr, reassemble
from .numkernel import AdeError, DomainError, PrecisionConfig, UnsupportedRegimeError, parse_complex
from .specfun import EvalPoint, digamma_jet, gamma, gamma_ratio_eval, log_gamma, zeta_eval, zeta_jet
from .suites import SUITES, run_suite
from .witness import (
    VERDICT_ZERO,
    WitnessConfig,
    format_decimal,
    independence_report,
    sample_curve,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_REGIME = 0, 1, 2, 3

FUNCTIONS = ["zeta", "zeta-jet", "gamma", "log-gamma", "digamma-jet", "gamma-ratio", "F", "G", "H", "epsilon"]


@dataclass
class RunConfig:
    bits: int = 128
    digits: int | None = None
    fmt: str = "text"
    out: str | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bits < 64:
            raise DomainError(f"precision must be >= 64 bits, got {self.bits}")
        if self.fmt not in ("json", "csv", "text"):
            raise DomainError(f"unknown format {self.fmt!r}")

    @property
    def prec(self) -> PrecisionConfig:
        return PrecisionConfig(self.bits)


def _default_bits() -> int:
    raw = os.environ.get("ADE_BITS")
    if not raw:
        return 128
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"ADE_BITS must be an integer, got {raw!r}") from None


def _real_str(v, digits) -> str:
    from mpmath import libmp

    dps = digits or max(1, int(v.context.prec * 0.30103))
    return libmp.to_str(v._mpf_, dps)


def _complex_str(v, digits) -> str:
    re, im = _real_str(v.real, digits), _real_str(v.imag, digits)
    if not v.imag:
        return re
    sign = "-" if im.startswith("-") else "+"
    return f"{re} {sign} {im.lstrip('-')}i"


def _parse_range(text: str, default_step: str | None = "0.05") -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) == 2 and default_step is not None:
        parts.append(default_step)
    if len(parts) != 3:
        raise DomainError(f"range must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"range bounds must be decimal numbers, got {text!r}") from None
    if step <= 0:
        raise DomainError("range step must be positive")
    return start, stop, step


def _emit(cfg: RunConfig, text: str, summary: str | None = None) -> None:
    if cfg.out:
        atomic_write(cfg.out, text)
        print(summary or f"wrote {cfg.out}")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        if summary:
            print(summary, file=sys.stderr)


def _csv_text(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(doc: dict, schema: str) -> str:
    validate(doc, schema)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- eval -------------------------------------------------------------------

def _eval_values(args, prec: PrecisionConfig) -> tuple[list, dict]:
    fn = args.function
    text = args.z if args.z is not None else args.s
    if text is None:
        raise DomainError(f"{fn} needs a point (--z or --s)")
    z = parse_complex(text, prec)
    pt = EvalPoint(z, EvalPoint.at(z, prec).in_sector_D)
    params: dict = {}
    if fn == "zeta":
        return [("zeta", zeta_eval(z, prec))], params
    if fn == "zeta-jet":
        params["m"] = args.m
        jet = zeta_jet(z, args.m, prec)
        return [(f"zeta^({j})", v) for j, v in enumerate(jet.values())], params
    if fn == "gamma":
        return [("Gamma", gamma(pt, prec))], params
    if fn == "log-gamma":
        return [("log Gamma", log_gamma(pt, prec))], params
    if fn == "digamma-jet":
        params["k"] = args.k
        jet = digamma_jet(pt, args.k, prec)
        return [(f"psi^({j})", v) for j, v in enumerate(jet.values())], params
    if fn == "gamma-ratio":
        orders = args.orders or [args.n]
        params["orders"] = orders
        vals = gamma_ratio_eval(pt, orders, prec)
        return [(f"Gamma^({j})/Gamma", v) for j, v in zip(orders, vals)], params
    if fn == "epsilon":
        params["n"] = args.n
        return [(f"eps_{args.n}", epsilon_eval(pt, args.n, prec))], params
    ap = AsymParams(args.ell, args.n, series_terms=args.terms)
    params.update(ell=args.ell, n=args.n)
    if fn == "F":
        return [("F", F_eval(pt, ap, prec))], params
    if fn == "H":
        return [("H", H_eval(pt, ap, prec))], params
    params["method"] = args.method
    if args.method == "series":
        params["terms"] = args.terms
        return [("G", G_series(pt, ap, prec))], params
    return [("G", G_direct(pt, ap, prec))], params


def cmd_eval(args, cfg: RunConfig) -> int:
    prec = cfg.prec
    values, params = _eval_values(args, prec)
    point = parse_complex(args.z if args.z is not None else args.s, prec)
    if cfg.fmt == "json":
        doc = {
            "function": args.function,
            "point": {"re": _real_str(point.real, cfg.digits), "im": _real_str(point.imag, cfg.digits)},
            "bits": cfg.bits,
            "params": params,
            "values": [{"label": k, "re": _real_str(v.real, cfg.digits), "im": _real_str(v.imag, cfg.digits)}
                       for k, v in values],
        }
        _emit(cfg, _json_text(doc, "eval"))
    elif cfg.fmt == "csv":
        rows = [[k, _real_str(v.real, cfg.digits), _real_str(v.imag, cfg.digits)] for k, v in values]
        _emit(cfg, _csv_text(["label", "re", "im"], rows))
    else:
        lines = [f"# {args.function} at {_complex_str(point, cfg.digits)} ({cfg.bits} bits)"]
        lines += [f"{k} = {_complex_str(v, cfg.digits)}" for k, v in values]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# --- expand -----------------------------------------------------------------

def cmd_expand(args, cfg: RunConfig) -> int:
    if args.n < 0:
        raise DomainError("n must be nonnegative")
    R = gamma_ratio_poly(args.n)
    text = render(R)
    cn = extract_cn(args.n) if args.check_cn and args.n >= 1 else None
    if cfg.fmt == "json":
        doc = {
            "n": args.n,
            "text": text,
            "terms": [{"exponents": {str(j): e for j, e in mono.exponents.items()}, "coefficient": str(mono.coefficient)}
                      for mono in R.monomials()],
        }
        if cn is not None:
            doc["c_n"] = str(cn)
        _emit(cfg, _json_text(doc, "expand"))
    elif cfg.fmt == "csv":
        rows = [[";".join(f"{j}:{e}" for j, e in mono.exponents.items()), str(mono.coefficient)]
                for mono in R.monomials()]
        _emit(cfg, _csv_text(["exponents", "coefficient"], rows))
    else:
        out = text + "\n"
        if cn is not None:
            out += f"c_{args.n} = {cn}\n"
        _emit(cfg, out)
    return EXIT_OK


# --- decompose --------------------------------------------------------------

def _table_json(t, ell: int) -> list:
    out = []
    for (q, r), a in t.entries.items():
        lam = lambda_from_qr(t.p, q, r, ell)
        out.append({"q": q, "r": r, "lambda": None if lam is None else list(lam.astuple()), "u_poly": upoly_to_json(a)})
    return out


def decompose_doc(P, ell: int) -> dict:
    check_regime(ell)
    parts, a_tabs = [], []
    leading = None
    for p, part in homogeneous_parts(P):
        at = a_table(part, ell, p)
        bt = b_from_a(at)
        first = first_nonzero_b(bt)
        a_tabs.append(at)
        if leading is None and first is not None:
            leading = {"p0": p, "q0": first[0], "r0": first[1]}
        parts.append({
            "p": p,
            "M": at.M,
            "N": at.N,
            "a_table": _table_json(at, ell),
            "b_table": _table_json(bt, ell),
            "first_nonzero_b": None if first is None else list(first),
        })
    return {
        "ell": ell,
        "m": P.m,
        "L": P.L,
        "verdict": VERDICT_ZERO if P.is_zero() else "nonzero",
        "leading": leading,
        "reassembles": reassemble(a_tabs, P.m) == P,
        "parts": parts,
        "input": poly_to_json(P),
    }


def cmd_decompose(args, cfg: RunConfig) -> int:
    check_regime(args.ell, args.n)
    P = read_poly(args.poly)
    doc = decompose_doc(P, args.ell)
    if cfg.fmt == "text":
        lines = [f"ell = {args.ell}, m = {P.m}, L = {P.L}: {doc['verdict']}"]
        for part in doc["parts"]:
            lines.append(f"p = {part['p']}: M = {part['M']}, N = {part['N']}, first nonzero b = {part['first_nonzero_b']}")
            for tag in ("a_table", "b_table"):
                for e in part[tag]:
                    lines.append(f"  {tag[0]}_{{{e['q']},{e['r']}}} = {_upoly_text(e['u_poly'])}")
        if doc["leading"]:
            ld = doc["leading"]
            lines.append(f"(p0, q0, r0) = ({ld['p0']}, {ld['q0']}, {ld['r0']})")
        _emit(cfg, "\n".join(lines) + "\n")
    elif cfg.fmt == "csv":
        rows = []
        for part in doc["parts"]:
            for tag in ("a_table", "b_table"):
                for e in part[tag]:
                    rows.append([part["p"], tag[0], e["q"], e["r"], _upoly_text(e["u_poly"])])
        _emit(cfg, _csv_text(["p", "kind", "q", "r", "u_poly"], rows))
    else:
        _emit(cfg, _json_text(doc, "decompose"))
    return EXIT_OK


def _upoly_text(terms: list) -> str:
    out = []
    for t in terms:
        c = t["re"] if t["im"] == "0" else f"({t['re']}{'' if t['im'].startswith('-') else '+'}{t['im']}i)"
        mono = "*".join(f"u{j}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(t["exps"]) if e)
        out.append(c if not mono else f"{c}*{mono}")
    return " + ".join(out) or "0"


# --- verify -----------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig) -> int:
    rows = run_suite(args.suite, cfg.prec, cfg.tolerances)
    bits = max(256, cfg.bits)
    ok = all(r.passed for r in rows)
    if cfg.fmt == "json":
        doc = {"suite": args.suite, "bits": bits, "passed": ok, "rows": [r.as_dict() for r in rows]}
        _emit(cfg, _json_text(doc, "verify"))
    elif cfg.fmt == "csv":
        _emit(cfg, _csv_text(["name", "measured", "target", "tolerance", "pass"],
                             [[r.name, repr(r.measured), repr(r.target), repr(r.tolerance), r.passed] for r in rows]))
    else:
        width = max(len(r.name) for r in rows)
        lines = [f"{'name':<{width}}  {'measured':>14}  {'target':>10}  {'tolerance':>10}  pass"]
        for r in rows:
            lines.append(f"{r.name:<{width}}  {r.measured:>14.6g}  {r.target:>10.6g}  {r.tolerance:>10.3g}  "
                         f"{'PASS' if r.passed else 'FAIL'}")
        lines.append(f"{sum(r.passed for r in rows)}/{len(rows)} passed ({bits} bits)")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


# --- scan / witness ---------------------------------------------------------

def cmd_scan(args, cfg: RunConfig) -> int:
    start, stop, step = _parse_range(args.y, None)
    x = Fraction(args.x)
    prec = cfg.prec if args.precise else None
    traj = sample_curve(x, (start, stop), step, args.m, prec, args.workers, inclusive=False)
    kernel = "mp" if prec else fastzeta.BACKEND
    summary = f"{len(traj)} samples, x = {format_decimal(x)}, m = {args.m}, kernel = {kernel}"
    if cfg.fmt == "json":
        doc = {
            "x": format_decimal(x),
            "m": args.m,
            "bits": traj.bits,
            "kernel": kernel,
            "samples": [{"y": row[0], "values": [{"re": row[1 + 2 * j], "im": row[2 + 2 * j]} for j in range(args.m + 1)]}
                        for row in traj.rows(cfg.digits)],
        }
        text = _json_text(doc, "scan")
    elif cfg.fmt == "text":
        text = "\n".join(" ".join(r) for r in [traj.header()] + traj.rows(cfg.digits)) + "\n"
    else:
        text = traj.to_csv(cfg.digits)
    _emit(cfg, text, summary + (f" -> {cfg.out}" if cfg.out else ""))
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    check_regime(args.ell, args.n)
    P = read_poly(args.poly)
    start, stop, step = _parse_range(args.y)
    wc = WitnessConfig(C0=args.C0, lower=args.lower, count=args.count, y_range=(start, stop), step=step,
                       x=Fraction(args.x), slack=args.slack, stop_inclusive=False)
    if P.is_zero():
        from .witness import IndependenceReport

        report = IndependenceReport(VERDICT_ZERO)
    else:
        report = independence_report(P, AsymParams(args.ell, args.n), wc, cfg.prec, args.workers,
                                     blowup=not args.no_blowup)
    summary = f"verdict: {report.verdict}; {report.text}"
    if cfg.fmt == "text":
        lines = [summary]
        if report.dominance:
            d = report.dominance
            lines.append(f"(p0, q0, r0) = ({d.p0}, {d.q0}, {d.r0}), scale = {d.scale:g}")
            for y, lhs, bound, ratio in d.points:
                lines.append(f"y = {format_decimal(y)}: lhs = {_real_str(lhs, 8)}, bound = {_real_str(bound, 8)}, "
                             f"ratio = {_real_str(ratio, 6)}")
        _emit(cfg, "\n".join(lines) + "\n", summary if cfg.out else None)
    elif cfg.fmt == "csv":
        rows = []
        if report.dominance:
            rows = [[format_decimal(y), _real_str(l, cfg.digits), _real_str(b, cfg.digits), _real_str(r, cfg.digits)]
                    for y, l, b, r in report.dominance.points]
        _emit(cfg, _csv_text(["y", "lhs", "bound", "ratio"], rows), summary)
    else:
        _emit(cfg, _json_text(report.to_dict(cfg.digits), "witness"), summary)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance for {name} is not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bits", type=int, default=None, help="working precision in bits (default: $ADE_BITS or 128)")
    common.add_argument("--digits", type=int, default=None, help="significant digits in output (default: full)")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default=None)
    common.add_argument("--out", default=None, help="write output to this file (atomically)")

    parser = argparse.ArgumentParser(prog="adelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a special function")
    p.add_argument("function", choices=FUNCTIONS)
    p.add_argument("--z", help="point, e.g. 5+3i")
    p.add_argument("--s", help="alias of --z")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--m", type=int, default=1, help="zeta jet order")
    p.add_argument("--k", type=int, default=1, help="digamma jet order")
    p.add_argument("--orders", type=int, nargs="+", help="Gamma ratio orders (default: --n)")
    p.add_argument("--method", choices=["direct", "series"], default="direct", help="G evaluation")
    p.add_argument("--terms", type=int, default=8, help="series terms J for G")
    p.set_defaults(func=cmd_eval, default_fmt="text")

    p = sub.add_parser("expand", parents=[common], help="print R_n with Gamma^(n)/Gamma = R_n(f, f', ...)")
    p.add_argument("n", type=int)
    p.add_argument("--check-cn", action="store_true", help="also print c_n")
    p.set_defaults(func=cmd_expand, default_fmt="text")

    p = sub.add_parser("decompose", parents=[common], help="homogeneous parts and (q, r) tables of a polynomial")
    p.add_argument("poly", help="ADEPoly JSON file")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_decompose, default_fmt="json")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="GROUP=VALUE")
    p.set_defaults(func=cmd_verify, default_fmt="text")

    p = sub.add_parser("scan", parents=[common], help="sample zeta jets along Re s = x")
    p.add_argument("--x", default="0.75")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--y", required=True, help="start:stop:step, stop excluded")
    p.add_argument("--precise", action="store_true", help="multiprecision values at --bits instead of the double scan")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan, default_fmt="csv")

    p = sub.add_parser("witness", parents=[common], help="search witness points and report nonvanishing")
    p.add_argument("--poly", required=True, help="ADEPoly JSON file")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--y", default="30:200", help="start:stop[:step], stop excluded (step 0.05 by default)")
    p.add_argument("--x", default="0.75")
    p.add_argument("--C0", type=float, default=WitnessConfig.C0)
    p.add_argument("--lower", type=float, default=WitnessConfig.lower)
    p.add_argument("--count", type=int, default=WitnessConfig.count)
    p.add_argument("--slack", type=float, default=WitnessConfig.slack)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-blowup", action="store_true", help="skip the Gamma^L growth series")
    p.set_defaults(func=cmd_witness, default_fmt="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            bits=args.bits if args.bits is not None else _default_bits(),
            digits=args.digits,
            fmt=args.fmt or args.default_fmt,
            out=args.out,
            tolerances=dict(getattr(args, "tol", [])),
        )
        return args.func(args, cfg)
    except UnsupportedRegimeError as exc:
        print(f"error [{exc.guard}]: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except AdeError as exc:
        print(f"error [{exc.guard}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
