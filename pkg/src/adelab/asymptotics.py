"""The ratio functions F, G, H and the correction terms eps_n.

With f = Gamma'/Gamma and t = f'/f^2:

    F   = Gamma^(n)/Gamma = f^n [1 + t (c_n + eps_n)]
    Gamma^(ell n)/Gamma   = F^ell (1 + t G)
    H   = t G

``epsilon_eval`` inverts the first line numerically; ``G_direct`` uses the
closed ratio of Gamma derivatives and ``G_series`` the binomial series in
(c_n + eps_n) t.  Large-|z| laws are exposed as relative deviations so the
verification suites can compare them against fixed tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .diffpoly import eval_diffpoly, extract_cn, gamma_ratio_poly
from .numkernel import (
    DEFAULT_PRECISION,
    DivergenceError,
    DomainError,
    PrecisionConfig,
    SectorError,
    SingularityError,
    complex_log,
    gen_binom,
)
from .indexcalc import check_regime
from .specfun import EvalPoint, digamma_jet

__all__ = [
    "AsymParams",
    "RatioBundle",
    "EPSILON_LAWS",
    "epsilon_eval",
    "G_direct",
    "G_series",
    "H_eval",
    "F_eval",
    "bundle",
    "check_2_13",
    "epsilon_asym_check",
    "epsilon_scaled",
    "G_limit",
    "cancellation_bits",
]

# candidate constants K in eps_n ~ -K / (z log z)
EPSILON_LAWS = {
    "ladder": lambda n: Fraction(n * (n - 1) * (n - 2), 6),
    "closed": lambda n: Fraction(n * (n * n - 1), 6),
}


@dataclass(frozen=True)
class AsymParams:
    ell: int
    n: int
    series_terms: int = 8
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        check_regime(self.ell, self.n)
        if self.series_terms < 0:
            raise DomainError("series_terms must be nonnegative")


@dataclass(frozen=True)
class RatioBundle:
    z: object
    F: object
    G_direct: object
    G_series: object
    H: object
    eps: dict
    residual: object


def _pt(pt, prec) -> EvalPoint:
    return pt if isinstance(pt, EvalPoint) else EvalPoint.at(pt, prec)


def cancellation_bits(z) -> int:
    """Extra bits lost when differences of size 1/(z log^2 z) are formed."""
    mod = float(abs(z)) + 2.0
    return math.ceil(math.log2(mod) + 2 * math.log2(math.log(mod) + 2)) + 16


def _guard(value, prec: PrecisionConfig, what: str) -> None:
    if abs(value) < prec.ctx.ldexp(1, -(prec.bits // 2)):
        raise SingularityError(f"{what} is below the guard threshold 2^-{prec.bits // 2}")


class _Jet:
    """Digamma jet at a point, computed once at raised precision."""

    def __init__(self, pt: EvalPoint, order: int, prec: PrecisionConfig):
        self.prec = prec
        self.hp = prec.raised(cancellation_bits(pt.z))
        self.z = self.hp.mpc(pt.z)
        self.jet = digamma_jet(self.z, max(order, 2), self.hp)
        self.f = self.jet.base
        self.fp = self.jet.derivs[0]

    def ratio(self, j: int):
        return eval_diffpoly(gamma_ratio_poly(j), self.jet, self.hp)

    def eps(self, n: int):
        f, fp = self.f, self.fp
        _guard(f, self.prec, "|f|")
        _guard(fp, self.prec, "|f'|")
        F = self.ratio(n)
        return (F / f ** n - 1) * f * f / fp - self.hp.mpf(extract_cn(n))


def epsilon_eval(pt, n: int, prec: PrecisionConfig = DEFAULT_PRECISION):
    """eps_n(z) = ((Gamma^(n)/Gamma) f^-n - 1) f^2/f' - c_n."""
    if n < 1:
        raise DomainError("eps_n needs n >= 1")
    pt = _pt(pt, prec)
    return prec.mpc(_Jet(pt, n, prec).eps(n))


def F_eval(pt, params: AsymParams, prec: PrecisionConfig = DEFAULT_PRECISION):
    pt = _pt(pt, prec)
    return prec.mpc(_Jet(pt, params.n, prec).ratio(params.n))


def _G_direct(J: _Jet, params: AsymParams):
    ell, n = params.ell, params.n
    r1 = J.ratio(1)
    r2 = J.ratio(2)
    Fn = J.ratio(n)
    Fln = J.ratio(ell * n)
    _guard(Fn, J.prec, "|Gamma^(n)/Gamma|")
    den = r2 - r1 * r1  # (Gamma Gamma'' - Gamma'^2) / Gamma^2
    _guard(den, J.prec, "|Gamma Gamma'' - (Gamma')^2| / Gamma^2")
    return (Fln / Fn ** ell - 1) * r1 * r1 / den


def G_direct(pt, params: AsymParams, prec: PrecisionConfig = DEFAULT_PRECISION):
    """[(Gamma^(ell n)/Gamma)(Gamma/Gamma^(n))^ell - 1] (Gamma')^2 / (Gamma Gamma'' - (Gamma')^2)."""
    pt = _pt(pt, prec)
    J = _Jet(pt, params.ell * params.n, prec)
    return prec.mpc(_G_direct(J, params))


def _G_series(J: _Jet, params: AsymParams):
    ell, n = params.ell, params.n
    ctx = J.hp.ctx
    B = J.hp.mpf(extract_cn(n)) + J.eps(n)
    A = J.hp.mpf(extract_cn(ell * n)) + J.eps(ell * n)
    x = B * J.fp / (J.f * J.f)
    if not abs(x) < 1:
        raise DivergenceError(f"|(c_n + eps_n) f'/f^2| = {float(abs(x)):.3g} >= 1; series does not converge")
    acc = ctx.mpc(0)
    xj = ctx.mpc(1)
    for j in range(params.series_terms + 1):
        c0 = gen_binom(-ell, j)
        c1 = gen_binom(-ell, j + 1)
        coeff = A * (ctx.mpf(c0.numerator) / c0.denominator) + B * (ctx.mpf(c1.numerator) / c1.denominator)
        acc += coeff * xj
        xj *= x
    return acc


def G_series(pt, params: AsymParams, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Partial sum j = 0..J of the binomial series for G."""
    pt = _pt(pt, prec)
    J = _Jet(pt, params.ell * params.n, prec)
    return prec.mpc(_G_series(J, params))


def H_eval(pt, params: AsymParams, prec: PrecisionConfig = DEFAULT_PRECISION):
    pt = _pt(pt, prec)
    J = _Jet(pt, params.ell * params.n, prec)
    return prec.mpc(J.fp / (J.f * J.f) * _G_direct(J, params))


def bundle(pt, params: AsymParams, prec: PrecisionConfig = DEFAULT_PRECISION,
           eps_orders=None) -> RatioBundle:
    pt = _pt(pt, prec)
    ell, n = params.ell, params.n
    orders = sorted(set(eps_orders or ()) | {n, ell * n})
    J = _Jet(pt, max(ell * n, max(orders)), prec)
    F = J.ratio(n)
    Gd = _G_direct(J, params)
    try:
        Gs = _G_series(J, params)
    except DivergenceError:
        Gs = None
    H = J.fp / (J.f * J.f) * Gd
    lhs = J.ratio(ell * n)
    rhs = F ** ell * (1 + H)
    residual = abs(lhs - rhs) / abs(lhs)
    down = prec.mpc
    return RatioBundle(
        z=down(pt.z),
        F=down(F),
        G_direct=down(Gd),
        G_series=None if Gs is None else down(Gs),
        H=down(H),
        eps={k: down(J.eps(k)) for k in orders},
        residual=prec.mpf(residual),
    )


def check_2_13(pt, prec: PrecisionConfig = DEFAULT_PRECISION) -> tuple[float, float]:
    """Relative deviations of f'/f^2 from 1/(z log^2 z) and of f''/(f f') from -1/(z log z)."""
    pt = _pt(pt, prec)
    if not pt.in_sector_D:
        raise SectorError("point lies outside the sector |arg z| <= 5 pi/6")
    jet = digamma_jet(pt.z, 2, prec)
    f, fp, fpp = jet.base, jet.derivs[0], jet.derivs[1]
    z = pt.z
    L = complex_log(z, prec)
    dev_a = abs(fp / (f * f) * z * L * L - 1)
    dev_b = abs(fpp / (f * fp) * (-z * L) - 1)
    return float(dev_a), float(dev_b)


def epsilon_scaled(pt, n: int, prec: PrecisionConfig = DEFAULT_PRECISION):
    """eps_n(z) * z * log z: tends to the constant -K_n if eps_n ~ -K_n/(z log z)."""
    pt = _pt(pt, prec)
    return prec.mpc(epsilon_eval(pt, n, prec) * pt.z * complex_log(pt.z, prec))


def epsilon_asym_check(pt, n: int, prec: PrecisionConfig = DEFAULT_PRECISION, law: str = "closed") -> float:
    """|eps_n(z) / (-K_n / (z log z)) - 1| with K_n from ``law`` (default n(n^2-1)/6)."""
    if n < 3:
        raise DomainError("eps_1 = eps_2 = 0, so the asymptotic ratio needs n >= 3")
    try:
        K = EPSILON_LAWS[law](n)
    except KeyError:
        raise DomainError(f"unknown law {law!r}; choose from {sorted(EPSILON_LAWS)}") from None
    pt = _pt(pt, prec)
    if not pt.in_sector_D:
        raise SectorError("point lies outside the sector |arg z| <= 5 pi/6")
    scaled = epsilon_scaled(pt, n, prec)
    return float(abs(scaled / (-prec.mpf(K)) - 1))


def G_limit(params: AsymParams) -> Fraction:
    """ell (ell - 1) n^2 / 2."""
    return Fraction(params.ell * (params.ell - 1) * params.n ** 2, 2)
