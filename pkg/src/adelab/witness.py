"""Sampling the zeta-jet curve on a vertical line and exhibiting nonvanishing.

For P(u; v0, v1, v2) put u = (zeta, zeta', ..., zeta^(m)) and
v = (Gamma, Gamma^(n), Gamma^(ell n)).  Writing F = Gamma^(n)/Gamma and
t = f'/f^2, every homogeneous part satisfies

    P_p(u; 1, F, F^ell (1 + tG)) = sum_{q,s} b_{q,s}(u) F^q (tG)^s,

so on points where the leading coefficient b_{q0,r0}(u) is bounded below and
the rest bounded above, the (q0, r0) term dominates.  Dividing the full
expression by Gamma^L exposes exponential growth whenever the smallest degree
p0 is below L.

The trajectory scan runs in double precision (the compiled kernel when it is
available); every reported number is recomputed with the multiprecision
evaluators.  Verdicts are numerical evidence, not proofs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import libmp

from . import fastzeta
from .asymptotics import AsymParams, cancellation_bits
from .indexcalc import ADEPoly, CoeffTable, a_table, b_from_a, first_nonzero_b, homogeneous_parts, upoly_eval
from .numkernel import DEFAULT_PRECISION, DomainError, PrecisionConfig, complex_log, to_fraction
from .specfun import gamma, gamma_ratio_eval, zeta_jet

__all__ = [
    "Trajectory",
    "BoxTarget",
    "WitnessConfig",
    "WitnessSelection",
    "DominanceReport",
    "BlowupSeries",
    "IndependenceReport",
    "y_grid",
    "sample_curve",
    "find_hits",
    "select_witnesses",
    "dominance_check",
    "blowup_check",
    "independence_report",
    "leading_indices",
    "VERDICT_ZERO",
    "VERDICT_WITNESSED",
    "VERDICT_INCONCLUSIVE",
]

VERDICT_ZERO = "P ≡ 0"
VERDICT_WITNESSED = "nonvanishing-witnessed"
VERDICT_INCONCLUSIVE = "inconclusive"

DEFAULT_X = Fraction(3, 4)


def _frac(x) -> Fraction:
    # floats go through their shortest repr so 0.05 means 1/20
    if isinstance(x, float):
        return Fraction(repr(x))
    return to_fraction(x)


def y_grid(start, stop, step, inclusive: bool = True) -> list[Fraction]:
    """start, start + step, ... up to stop (exact rational arithmetic)."""
    start, stop, step = _frac(start), _frac(stop), _frac(step)
    if step <= 0:
        raise DomainError("step must be positive")
    if stop < start:
        return []
    span = (stop - start) / step
    count = math.floor(span) + 1 if inclusive else math.ceil(span)
    return [start + i * step for i in range(count)]


def format_decimal(x: Fraction) -> str:
    """Exact decimal for terminating fractions, else the shortest round-trip float."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return repr(float(x))
    places = max(twos, fives)
    scaled = x * 10 ** places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    if not places:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _fmt_real(v, digits: int | None = None) -> str:
    if hasattr(v, "_mpf_"):
        dps = digits or max(1, int(v.context.prec * 0.30103))
        return libmp.to_str(v._mpf_, dps)
    return repr(float(v)) if digits is None else f"{float(v):.{digits}g}"


@dataclass(frozen=True)
class Trajectory:
    """Samples (y, (zeta(s), ..., zeta^(m)(s))) at s = x + iy, y strictly increasing.

    ``bits`` is None for a double-precision scan.
    """

    x: Fraction
    m: int
    samples: tuple
    bits: int | None = None

    def __post_init__(self):
        ys = [y for y, _ in self.samples]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise DomainError("trajectory ordinates must be strictly increasing")
        if any(len(v) != self.m + 1 for _, v in self.samples):
            raise DomainError("every sample needs m + 1 values")

    @property
    def ys(self) -> list[Fraction]:
        return [y for y, _ in self.samples]

    def __len__(self):
        return len(self.samples)

    def header(self) -> list[str]:
        cols = ["y"]
        for j in range(self.m + 1):
            cols += [f"re_{j}", f"im_{j}"]
        return cols

    def rows(self, digits: int | None = None) -> list[list[str]]:
        out = []
        for y, vals in self.samples:
            row = [format_decimal(y)]
            for v in vals:
                row += [_fmt_real(v.real, digits), _fmt_real(v.imag, digits)]
            out.append(row)
        return out

    def to_csv(self, digits: int | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        w.writerows(self.rows(digits))
        return buf.getvalue()


@dataclass(frozen=True)
class BoxTarget:
    center: tuple
    half_width: float

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("half_width must be positive")

    def contains(self, values: Sequence) -> bool:
        h = self.half_width
        for v, c in zip(values, self.center):
            d = complex(v) - complex(c)
            if abs(d.real) > h or abs(d.imag) > h:
                return False
        return True


@dataclass(frozen=True)
class WitnessConfig:
    C0: float = 16.0
    lower: float = 1.0
    count: int = 8
    y_range: tuple = (Fraction(30), Fraction(200))
    step: Fraction = Fraction(1, 20)
    x: Fraction = DEFAULT_X
    slack: float = 2.0
    stop_inclusive: bool = True

    def __post_init__(self):
        if not self.C0 > 1:
            raise DomainError("C0 must exceed 1")
        if not self.lower >= 1:
            raise DomainError("lower must be at least 1")
        if self.count < 1:
            raise DomainError("count must be positive")
        if _frac(self.step) <= 0:
            raise DomainError("step must be positive")
        if not self.slack >= 1:
            raise DomainError("slack must be at least 1")


def _check_abscissa(x: Fraction) -> None:
    if not Fraction(1, 2) < x < 1:
        raise DomainError(f"abscissa {float(x)} is outside (1/2, 1)")


def _mp_chunk(x: Fraction, ys: list, m: int, bits: int, guard: int) -> list:
    prec = PrecisionConfig(bits, guard)
    ctx = prec.ctx
    out = []
    for y in ys:
        s = ctx.mpc(prec.mpf(x), prec.mpf(y))
        out.append(tuple(v._mpc_ for v in zeta_jet(s, m, prec).values()))
    return out


def _fast_chunk(x: float, ys: list, m: int) -> list:
    return fastzeta.zeta_line_jets(x, ys, m)


def _split(items: list, parts: int) -> list[list]:
    size = max(1, math.ceil(len(items) / parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def sample_ys(x, ys: Sequence, m: int, prec: PrecisionConfig | None = None, workers: int = 1) -> Trajectory:
    """Zeta jets of order m at x + iy for the given ordinates."""
    x = _frac(x)
    _check_abscissa(x)
    if m < 0:
        raise DomainError("jet order must be nonnegative")
    ys = [_frac(y) for y in ys]
    if prec is None:
        job, args = _fast_chunk, (float(x),)
        fys = [float(y) for y in ys]
        chunks = _split(fys, workers) if workers > 1 else [fys]
    else:
        job, args = _mp_chunk, (x,)
        chunks = _split(ys, workers) if workers > 1 else [ys]
    tail = (m,) if prec is None else (m, prec.bits, prec.guard_bits)
    try:
        if workers > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(job, *zip(*[(*args, c, *tail) for c in chunks])))
        else:
            parts = [job(*args, c, *tail) for c in chunks]
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    vals = [v for part in parts for v in part]
    if prec is not None:
        vals = [tuple(prec.ctx.make_mpc(t) for t in row) for row in vals]
    return Trajectory(x, m, tuple(zip(ys, vals)), None if prec is None else prec.bits)


def sample_curve(x, y_range: tuple, step, m: int, prec: PrecisionConfig | None = None,
                 workers: int = 1, inclusive: bool = True) -> Trajectory:
    """Sample gamma(y) = (zeta, ..., zeta^(m))(x + iy) for y = y0, y0 + step, ...

    ``prec=None`` runs the double-precision scan kernel; otherwise values are
    computed at that precision.  ``inclusive`` controls whether the upper end
    of ``y_range`` is sampled when it falls on the grid.
    """
    start, stop = y_range
    return sample_ys(x, y_grid(start, stop, step, inclusive), m, prec, workers)


def find_hits(traj: Trajectory, box: BoxTarget) -> list[Fraction]:
    if len(box.center) != traj.m + 1:
        raise DomainError(f"box has {len(box.center)} coordinates, trajectory has {traj.m + 1}")
    return [y for y, vals in traj.samples if box.contains(vals)]


# --- witness selection ------------------------------------------------------

def _complex_coeffs(a) -> list:
    return [(exps, complex(float(c.re), float(c.im))) for exps, c in a.terms.items()]


def _abs_upoly_fast(coeffs: list, u: Sequence) -> float:
    acc = 0j
    for exps, c in coeffs:
        term = c
        for x, e in zip(u, exps):
            if e:
                term *= complex(x) ** e
        acc += term
    return abs(acc)


def leading_indices(P: ADEPoly, ell: int) -> tuple[int, ADEPoly, CoeffTable, tuple[int, int]]:
    """(p0, P_p0, B table of P_p0, (q0, r0)) for nonzero P."""
    if P.is_zero():
        raise DomainError("the zero polynomial has no leading part")
    p0, part = homogeneous_parts(P)[0]
    table = b_from_a(a_table(part, ell, p0))
    lead = first_nonzero_b(table)
    assert lead is not None  # a nonzero part has a nonzero b entry
    return p0, part, table, lead


@dataclass(frozen=True)
class WitnessSelection:
    ys: list
    q0: int
    r0: int
    scale: float
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.ys)

    def __iter__(self):
        return iter(self.ys)


def _thin(items: list, count: int) -> list:
    if len(items) <= count:
        return list(items)
    if count == 1:
        return [items[-1]]
    idx = sorted({round(i * (len(items) - 1) / (count - 1)) for i in range(count)})
    return [items[i] for i in idx]


def select_witnesses(traj: Trajectory, b_table: CoeffTable, cfg: WitnessConfig = WitnessConfig()) -> WitnessSelection:
    """Ordinates where |b_{q0,r0}| >= lower and every |b_{q,r}| <= C0.

    If no sample reaches ``lower`` the table is rescaled once by
    lower / max|b_{q0,r0}|.  An empty selection carries diagnostics.
    """
    if b_table.kind != "B":
        raise DomainError("select_witnesses expects a B table")
    if b_table.m != traj.m:
        raise DomainError(f"table has m = {b_table.m}, trajectory has m = {traj.m}")
    lead = first_nonzero_b(b_table)
    if lead is None:
        raise DomainError("the B table is structurally zero; there is nothing to witness")
    lo_y, hi_y = (_frac(v) for v in cfg.y_range)
    coeffs = {k: _complex_coeffs(a) for k, a in b_table.entries.items()}
    rows = []
    for y, vals in traj.samples:
        if not (lo_y <= y <= hi_y if cfg.stop_inclusive else lo_y <= y < hi_y):
            continue
        mags = {k: _abs_upoly_fast(c, vals) for k, c in coeffs.items()}
        rows.append((y, mags[lead], max(mags.values())))
    diag = {"samples": len(rows)}
    if not rows:
        return WitnessSelection([], *lead, 1.0, {**diag, "reason": "no samples in y_range"})
    top_lead = max(r[1] for r in rows)
    diag.update(
        max_lead=top_lead,
        min_lead=min(r[1] for r in rows),
        min_max_abs=min(r[2] for r in rows),
        max_max_abs=max(r[2] for r in rows),
    )
    # a hair of tolerance so the sample that defined the rescale still qualifies
    tol = 1 - 1e-12

    def qualifying(scale):
        return [y for y, lead_abs, top in rows
                if lead_abs * scale >= cfg.lower * tol and top * scale <= cfg.C0]

    scale = 1.0
    if top_lead < cfg.lower:
        if top_lead == 0:
            return WitnessSelection([], *lead, 1.0, {**diag, "reason": "leading coefficient vanishes on every sample"})
        scale = cfg.lower / top_lead
    good = qualifying(scale)
    if not good:
        # binomial factors can tie the other entries to the leading one; normalise
        # at the sample where the leading entry is relatively largest instead
        y_best, lead_abs, top = min((r for r in rows if r[1] > 0), key=lambda r: r[2] / r[1])
        diag["best_spread"] = top / lead_abs
        if top / lead_abs * cfg.lower <= cfg.C0:
            scale = cfg.lower / lead_abs
            good = qualifying(scale)
    diag.update(qualifying=len(good), scale=scale)
    if not good:
        diag["reason"] = "no sample meets both bounds"
    return WitnessSelection(_thin(good, cfg.count), *lead, scale, diag)


# --- dominance and blowup ---------------------------------------------------

def _zpoint(x: Fraction, y: Fraction, prec: PrecisionConfig):
    return prec.ctx.mpc(prec.mpf(x), prec.mpf(y))


class _ZetaCache:
    def __init__(self, x: Fraction, m: int, prec: PrecisionConfig):
        self.x, self.m, self.prec = x, m, prec
        self._jets: dict = {}

    def __call__(self, y: Fraction) -> list:
        if y not in self._jets:
            self._jets[y] = zeta_jet(_zpoint(self.x, y, self.prec), self.m, self.prec).values()
        return self._jets[y]


def _term_sizes(P: ADEPoly, u, v, prec: PrecisionConfig):
    """Sum of |a_lambda(u) v^lambda| (scale of the roundoff in P(u, v))."""
    total = prec.ctx.mpf(0)
    for lam, a in P.coeffs.items():
        mono = v[0] ** lam.l0 * v[1] ** lam.l1 * v[2] ** lam.l2
        total += abs(upoly_eval(a, u, prec)) * abs(mono)
    return total


@dataclass
class DominanceReport:
    p0: int
    q0: int
    r0: int
    ell: int
    n: int
    x: Fraction
    scale: float
    slack: float
    bits: int
    points: list = field(default_factory=list)          # (y, lhs, bound, ratio)
    noise: list = field(default_factory=list)           # noise floor of lhs per point
    blowup_series: list = field(default_factory=list)   # (y, |P / Gamma^L|)
    blowup_bounds: list = field(default_factory=list)   # leading lower bound per blowup point
    blowup_mode: str | None = None
    verdict: str = VERDICT_INCONCLUSIVE
    diagnostics: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        if self.verdict == VERDICT_WITNESSED:
            y, lhs, bound, ratio = self.points[-1]
            return (f"nonvanishing numerically witnessed (not a proof): at y = {format_decimal(y)} "
                    f"the leading part is {_fmt_real(lhs, 6)}, {_fmt_real(ratio, 4)} times the bound")
        return "inconclusive: no numerical witness of nonvanishing at the tested points"

    def to_dict(self, digits: int | None = None) -> dict:
        fmt = lambda v: _fmt_real(v, digits)  # noqa: E731
        return {
            "p0": self.p0,
            "q0": self.q0,
            "r0": self.r0,
            "ell": self.ell,
            "n": self.n,
            "x": format_decimal(self.x),
            "scale": repr(float(self.scale)),
            "slack": repr(float(self.slack)),
            "bits": self.bits,
            "points": [{"y": format_decimal(y), "lhs": fmt(l), "bound": fmt(b), "ratio": fmt(r), "noise": fmt(e)}
                       for (y, l, b, r), e in zip(self.points, self.noise)],
            "blowup_series": [{"y": format_decimal(y), "value": fmt(v), "bound": fmt(b)}
                              for (y, v), b in zip(self.blowup_series, self.blowup_bounds)],
            "blowup_mode": self.blowup_mode,
            "verdict": self.verdict,
            "text": self.text,
            "diagnostics": _jsonable(self.diagnostics),
        }


def _jsonable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, Fraction):
            v = format_decimal(v)
        elif isinstance(v, float) and not math.isfinite(v):
            v = repr(v)
        out[k] = v
    return out


def dominance_check(P: ADEPoly, params: AsymParams, witnesses: Iterable, prec: PrecisionConfig = DEFAULT_PRECISION,
                    x=DEFAULT_X, scale: float = 1.0, slack: float = 2.0, _zeta=None) -> DominanceReport:
    """|scale * P_p0(gamma(y); 1, F, Gamma^(ell n)/Gamma)| against (1/3)|log z|^(n q0 - 2 r0) / |z|^r0."""
    x = _frac(x)
    _check_abscissa(x)
    ys = sorted(_frac(y) for y in witnesses)
    if not ys:
        raise DomainError("dominance_check needs at least one witness")
    ell, n = params.ell, params.n
    p0, part, _, (q0, r0) = leading_indices(P, ell)
    zeta = _zeta or _ZetaCache(x, P.m, prec)
    rep = DominanceReport(p0, q0, r0, ell, n, x, scale, slack, prec.bits)
    for y in ys:
        z = _zpoint(x, y, prec)
        hp = prec.raised(cancellation_bits(z))
        zh = hp.mpc(z)
        F, Fl = gamma_ratio_eval(zh, [n, ell * n], hp)
        u = [hp.mpc(v) for v in zeta(y)]
        v = (hp.mpc(1), F, Fl)
        val = part.evaluate(u, v, hp)
        lhs = abs(val) * hp.mpf(scale)
        noise = _term_sizes(part, u, v, hp) * hp.mpf(scale) * hp.ctx.ldexp(len(part.coeffs) + 4, -hp.working_bits)
        logz = complex_log(zh, hp)
        bound = abs(logz) ** (n * q0 - 2 * r0) / abs(zh) ** r0 / 3
        lhs, bound = prec.mpf(lhs), prec.mpf(bound)
        rep.points.append((y, lhs, bound, lhs / bound))
        rep.noise.append(prec.mpf(noise))
    _, lhs, _, ratio = rep.points[-1]
    if ratio * slack >= 1 and lhs > 10 * rep.noise[-1]:
        rep.verdict = VERDICT_WITNESSED
    return rep


def gamma_power_bits(L: int, y) -> int:
    """Extra bits that keep Gamma(x + iy)^L, of size exp(-L pi y / 2), at full relative precision."""
    return math.ceil(L * math.pi * abs(float(y)) / 2 / math.log(2))


@dataclass
class BlowupSeries:
    mode: str            # "exponential" (p0 < L) or "homogeneous" (p0 = L)
    values: list         # (y, |P / Gamma^L|)
    extra_bits: list
    # leading lower bound (1/6) e^((L-p0) pi y/2) (y^(1/4) sqrt(2 pi))^(p0-L) |log z|^(n q0 - 2 r0) / |z|^r0
    bounds: list = field(default_factory=list)

    @property
    def increasing(self) -> bool:
        v = [val for _, val in self.values]
        return all(b > a for a, b in zip(v, v[1:]))


def blowup_check(P: ADEPoly, params: AsymParams, witnesses: Iterable, prec: PrecisionConfig = DEFAULT_PRECISION,
                 x=DEFAULT_X, scale: float = 1.0, _zeta=None) -> BlowupSeries:
    """|scale * P(zeta-jet; Gamma, Gamma^(n), Gamma^(ell n)) / Gamma^L| at x + i y_k."""
    if P.is_zero():
        raise DomainError("the zero polynomial is rejected before evaluation")
    x = _frac(x)
    _check_abscissa(x)
    ys = sorted(_frac(y) for y in witnesses)
    ell, n = params.ell, params.n
    p0, _, _, (q0, r0) = leading_indices(P, ell)
    L = P.L
    zeta = _zeta or _ZetaCache(x, P.m, prec)
    values, extra, bounds = [], [], []
    for y in ys:
        bits = gamma_power_bits(L, y)
        hp = prec.raised(bits)
        z = _zpoint(x, y, hp)
        g = gamma(z, hp)
        F, Fl = gamma_ratio_eval(z, [n, ell * n], hp)
        u = [hp.mpc(v) for v in zeta(y)]
        val = P.evaluate(u, (g, g * F, g * Fl), hp) / g ** L
        values.append((y, prec.mpf(abs(val) * hp.mpf(scale))))
        extra.append(bits)
        ctx = prec.ctx
        yy, zz = prec.mpf(y), prec.mpc(z)
        stirling = ctx.exp(-ctx.pi * yy / 2) * yy ** ctx.mpf(0.25) * ctx.sqrt(2 * ctx.pi)
        logz = complex_log(zz, prec)
        bounds.append(stirling ** (p0 - L) * abs(logz) ** (n * q0 - 2 * r0) / abs(zz) ** r0 / 6)
    return BlowupSeries("exponential" if p0 < L else "homogeneous", values, extra, bounds)


# --- the full pipeline ------------------------------------------------------

@dataclass
class IndependenceReport:
    verdict: str
    p0: int | None = None
    q0: int | None = None
    r0: int | None = None
    dominance: DominanceReport | None = None
    selection: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        if self.verdict == VERDICT_ZERO:
            return "P ≡ 0: every coefficient table is structurally zero"
        if self.dominance is None:
            return "inconclusive: no witness points satisfy the coefficient bounds"
        return self.dominance.text

    def to_dict(self, digits: int | None = None) -> dict:
        return {
            "verdict": self.verdict,
            "text": self.text,
            "p0": self.p0,
            "q0": self.q0,
            "r0": self.r0,
            "selection": _jsonable(self.selection),
            "dominance": None if self.dominance is None else self.dominance.to_dict(digits),
        }

    def to_json(self, digits: int | None = None) -> str:
        return json.dumps(self.to_dict(digits), indent=2, ensure_ascii=False)


def independence_report(P: ADEPoly, params: AsymParams, cfg: WitnessConfig = WitnessConfig(),
                        prec: PrecisionConfig = DEFAULT_PRECISION, workers: int = 1,
                        blowup: bool = True) -> IndependenceReport:
    """'P ≡ 0' for the structurally zero polynomial; otherwise witnesses and a dominance report."""
    if P.is_zero():
        return IndependenceReport(VERDICT_ZERO)
    p0, _, table, (q0, r0) = leading_indices(P, params.ell)
    traj = sample_curve(cfg.x, cfg.y_range, cfg.step, P.m, None, workers, cfg.stop_inclusive)
    sel = select_witnesses(traj, table, cfg)
    info = {"witnesses": [format_decimal(y) for y in sel.ys], "kernel": fastzeta.BACKEND, **sel.diagnostics}
    if not sel.ys:
        return IndependenceReport(VERDICT_INCONCLUSIVE, p0, q0, r0, None, info)
    zeta = _ZetaCache(_frac(cfg.x), P.m, prec)
    dom = dominance_check(P, params, sel.ys, prec, cfg.x, sel.scale, cfg.slack, _zeta=zeta)
    if blowup:
        series = blowup_check(P, params, sel.ys, prec, cfg.x, sel.scale, _zeta=zeta)
        dom.blowup_series = series.values
        dom.blowup_bounds = series.bounds
        dom.blowup_mode = series.mode
        dom.diagnostics["blowup_increasing"] = series.increasing
        dom.diagnostics["blowup_extra_bits"] = series.extra_bits[-1]
    return IndependenceReport(dom.verdict, p0, q0, r0, dom, info)
