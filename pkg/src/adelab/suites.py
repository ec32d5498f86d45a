"""Verification suites behind ``adelab verify``.

Each suite returns rows (name, measured, target, tolerance, passed).  A row
passes when |measured - target| <= tolerance, except for rows marked as upper
bounds where measured <= tolerance is required.  Tolerances are fixed here;
the ``tolerances`` mapping overrides them by check group (e.g. ``"eq2.5"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .asymptotics import (
    AsymParams,
    EPSILON_LAWS,
    G_direct,
    G_limit,
    G_series,
    H_eval,
    bundle,
    check_2_13,
    epsilon_eval,
    epsilon_scaled,
)
from .diffpoly import extract_cn, gamma_ratio_poly
from .numkernel import PrecisionConfig
from .specfun import EvalPoint, gamma, log_gamma

__all__ = ["CheckRow", "SUITES", "run_suite", "bell_numbers", "partition_counts", "measured_epsilon_law"]

SUITE_BITS = 256


@dataclass(frozen=True)
class CheckRow:
    name: str
    measured: float
    target: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": _num(self.measured),
            "target": _num(self.target),
            "tolerance": _num(self.tolerance),
            "pass": self.passed,
        }


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def _close(name, measured, target, tol) -> CheckRow:
    measured, target = float(measured), float(target)
    return CheckRow(name, measured, target, tol, abs(measured - target) <= tol)


def _below(name, measured, tol) -> CheckRow:
    measured = float(measured)
    return CheckRow(name, measured, 0.0, tol, measured <= tol)


def bell_numbers(upto: int) -> list[int]:
    """Bell numbers B_0..B_upto from the Bell triangle."""
    out, row = [1], [1]
    for _ in range(upto):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        out.append(row[0])
    return out


def partition_counts(upto: int) -> list[int]:
    """p(0)..p(upto) by the coin-change recurrence."""
    p = [1] + [0] * upto
    for part in range(1, upto + 1):
        for total in range(part, upto + 1):
            p[total] += p[total - part]
    return p


def _stirling(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    ctx = prec.ctx
    rows = []
    for y in (30, 50):
        g = gamma(ctx.mpc(0.75, y), prec)
        ref = ctx.exp(-ctx.pi * y / 2) * ctx.mpf(y) ** 0.25 * ctx.sqrt(2 * ctx.pi)
        rows.append(_close(f"stirling.modulus.y={y}", abs(g) / ref, 1.0, tol.get("stirling.modulus", 0.01)))
    rows.append(_below("stirling.loggamma(1)", abs(log_gamma(ctx.mpc(1), prec)), tol.get("stirling.exact", 1e-30)))
    half = log_gamma(ctx.mpc(0.5), prec) - ctx.log(ctx.sqrt(ctx.pi))
    rows.append(_below("stirling.loggamma(1/2)", abs(half), tol.get("stirling.exact", 1e-30)))
    for k in (5, 10, 20):
        rel = abs(gamma(ctx.mpc(k), prec) / math.factorial(k - 1) - 1)
        rows.append(_below(f"stirling.gamma({k})", rel, tol.get("stirling.exact", 1e-30)))
    return rows


_EQ25_CASES = [(2, 1), (2, 2), (3, 1), (2, 3)]
_EQ25_POINTS = ["20+10i", "50", "0.75+40i"]


def _eq25(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    rows = []
    for ell, n in _EQ25_CASES:
        for z in _EQ25_POINTS:
            b = bundle(EvalPoint.at(z, prec), AsymParams(ell, n), prec)
            rows.append(_below(f"eq2.5.residual.l={ell}.n={n}.z={z}", b.residual, tol.get("eq2.5", 1e-20)))
    return rows


def _eq27(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    rows = []
    ctx = prec.ctx
    pt = EvalPoint.at("1000+1000i", prec)
    direct = G_direct(pt, AsymParams(2, 1), prec)
    errs = []
    for J in range(9):
        s = G_series(pt, AsymParams(2, 1, series_terms=J), prec)
        errs.append(float(abs(s / direct - 1)))
    rows.append(_below("eq2.7.series_vs_direct.J=8", errs[-1], tol.get("eq2.7.series", 1e-6)))
    mono = all(b <= a or b < 1e-60 for a, b in zip(errs, errs[1:]))
    rows.append(CheckRow("eq2.7.series_monotone.J=0..8", float(mono), 1.0, 0.0, mono))
    big = EvalPoint.at(10 ** 8, prec)
    rows.append(_close("eq2.7.J=0.l=2.n=1.z=1e8", G_series(big, AsymParams(2, 1, series_terms=0), prec).real,
                       1.0, tol.get("eq2.7.J0", 1e-6)))
    z6 = EvalPoint.at(10 ** 6, prec)
    for ell, n in [(2, 1), (3, 2)]:
        params = AsymParams(ell, n)
        ratio = G_direct(z6, params, prec).real / float(G_limit(params))
        rows.append(_close(f"eq2.7.G_limit.l={ell}.n={n}.z=1e6", ratio, 1.0, tol.get("eq2.7.limit", 0.05)))
    # next-order law: G = limit (1 - (ell n + n - 3)/(3 z log z)), checked for (2, 3)
    params = AsymParams(2, 3)
    for zval in (10 ** 6, 10 ** 8):
        zp = EvalPoint.at(zval, prec)
        dev = G_direct(zp, params, prec) / prec.mpf(G_limit(params)) - 1
        pred = -ctx.mpf(2 * 3 + 3 - 3) / (3 * zval * ctx.log(zval))
        rows.append(_close(f"eq2.7.deviation.l=2.n=3.z={zval:.0e}", dev.real / pred, 1.0, tol.get("eq2.7.deviation", 0.2)))
    for ell, n in [(2, 1), (3, 2)]:
        params = AsymParams(ell, n)
        zval = 10 ** 8
        scaled = H_eval(EvalPoint.at(zval, prec), params, prec) * zval * ctx.log(zval) ** 2
        rows.append(_close(f"eq2.7.H_scaled.l={ell}.n={n}.z=1e8", scaled.real / float(G_limit(params)), 1.0,
                           tol.get("eq2.7.H", 0.1)))
    return rows


def _eq213(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    ctx = prec.ctx
    rows = []
    cases = [
        ("z=1e6", ctx.mpc(10 ** 6), tol.get("eq2.13.1e6", 0.15)),
        ("z=1e12", ctx.mpc(10 ** 12), tol.get("eq2.13.1e12", 0.04)),
        ("z=1e6*e^(5pi i/6)", 10 ** 6 * ctx.expjpi(ctx.mpf(5) / 6), tol.get("eq2.13.boundary", 0.25)),
    ]
    for label, z, t in cases:
        a, b = check_2_13(EvalPoint.at(z, prec), prec)
        rows.append(_below(f"eq2.13.f'/f^2.{label}", a, t))
        rows.append(_below(f"eq2.13.f''/(ff').{label}", b, t))
    return rows


def measured_epsilon_law(prec: PrecisionConfig, z=10 ** 8) -> tuple[dict, list[str]]:
    """eps_n z log z at z for n = 3, 4, 5 and the candidate laws (within 10%) it is consistent with."""
    pt = EvalPoint.at(z, prec)
    measured = {n: float(epsilon_scaled(pt, n, prec).real) for n in (3, 4, 5)}
    laws = [name for name, K in EPSILON_LAWS.items()
            if all(abs(measured[n] / -float(K(n)) - 1) < 0.1 for n in (3, 4, 5))]
    return measured, laws


def _epsilon(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    rows = []
    for n in (1, 2):
        for z in ("10", "5+5i", "0.75+40i"):
            val = abs(epsilon_eval(EvalPoint.at(z, prec), n, prec))
            rows.append(_below(f"epsilon.seed.n={n}.z={z}", val, tol.get("epsilon.seed", 1e-20)))
    for n in (3, 4, 5):
        a = epsilon_scaled(EvalPoint.at(10 ** 6, prec), n, prec).real
        b = epsilon_scaled(EvalPoint.at(10 ** 10, prec), n, prec).real
        rows.append(_close(f"epsilon.rate.n={n}.z=1e6/1e10", a / b, 1.0, tol.get("epsilon.rate", 0.15)))
    measured, laws = measured_epsilon_law(prec)
    rows.append(CheckRow("epsilon.law.unique", float(len(laws)), 1.0, 0.0, len(laws) == 1))
    if len(laws) == 1:
        K = EPSILON_LAWS[laws[0]]
        for n in (3, 4, 5):
            rows.append(_close(f"epsilon.constant.{laws[0]}.n={n}.z=1e8", measured[n] / -float(K(n)), 1.0,
                               tol.get("epsilon.constant", 0.1)))
    return rows


def _cn(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    rows = []
    for n in range(1, 31):
        got, want = extract_cn(n), Fraction(n * (n - 1), 2)
        rows.append(CheckRow(f"cn.n={n}", float(got), float(want), 0.0, got == want))
    return rows


def _bell(prec: PrecisionConfig, tol: dict) -> list[CheckRow]:
    bell = bell_numbers(10)
    parts = partition_counts(10)
    rows = []
    for n in range(0, 11):
        R = gamma_ratio_poly(n)
        total = sum(R.terms.values())
        rows.append(CheckRow(f"bell.sum.n={n}", float(total), float(bell[n]), 0.0, total == bell[n]))
        rows.append(CheckRow(f"bell.terms.n={n}", float(len(R)), float(parts[n]), 0.0, len(R) == parts[n]))
    return rows


SUITES: dict[str, Callable] = {
    "stirling": _stirling,
    "eq2.5": _eq25,
    "eq2.7": _eq27,
    "eq2.13": _eq213,
    "epsilon": _epsilon,
    "cn": _cn,
    "bell": _bell,
}


def run_suite(name: str, prec: PrecisionConfig | None = None, tolerances: dict | None = None) -> list[CheckRow]:
    """Run one suite; precision is raised to at least 256 bits, the level the tolerances assume."""
    if name not in SUITES:
        raise KeyError(name)
    bits = max(SUITE_BITS, prec.bits if prec else 0)
    return SUITES[name](PrecisionConfig(bits), dict(tolerances or {}))
