"""High-precision Gamma, digamma jets and zeta.

* ``log_gamma`` / ``digamma_jet``: Stirling-type asymptotic series with exact
  Bernoulli coefficients, after shifting the argument to the right by the
  recurrence Gamma(z+1) = z Gamma(z).
* ``zeta_eval``: Euler-Maclaurin summation; the Dirichlet head is built
  multiplicatively (only primes need an exponential).
* ``zeta_jet``: trapezoidal rule on a circle around ``s`` (Cauchy's formula).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from mpmath import libmp

from .numkernel import (
    DEFAULT_PRECISION,
    DomainError,
    PoleError,
    PrecisionConfig,
    bernoulli,
    bernoulli_list,
    complex_log,
)

__all__ = [
    "EvalPoint",
    "FunctionJet",
    "in_sector_D",
    "log_gamma",
    "gamma",
    "digamma_jet",
    "zeta_eval",
    "zeta_jet",
    "gamma_ratio_eval",
    "default_contour_nodes",
    "POLE_GUARD",
]

POLE_GUARD = 1e-6
SECTOR_HALF_ANGLE = 5 * math.pi / 6
_MAX_SHIFT = 200_000


def in_sector_D(z) -> bool:
    """True iff -5pi/6 <= arg z <= 5pi/6."""
    return abs(math.atan2(float(z.imag), float(z.real))) <= SECTOR_HALF_ANGLE + 1e-15


@dataclass(frozen=True)
class EvalPoint:
    z: object
    in_sector_D: bool

    @classmethod
    def at(cls, z, prec: PrecisionConfig = DEFAULT_PRECISION) -> "EvalPoint":
        w = prec.mpc(z)
        return cls(w, in_sector_D(w))


@dataclass(frozen=True)
class FunctionJet:
    """Value and derivatives f(z), f'(z), ..., f^(k)(z)."""

    base: object
    derivs: tuple = ()

    def __post_init__(self):
        for v in (self.base, *self.derivs):
            if not _finite(v):
                raise DomainError("non-finite entry in function jet")

    @property
    def order(self) -> int:
        return len(self.derivs)

    def __getitem__(self, j: int):
        return self.base if j == 0 else self.derivs[j - 1]

    def values(self) -> list:
        return [self.base, *self.derivs]


def _finite(v) -> bool:
    if hasattr(v, "_mpc_"):
        parts = v._mpc_
    elif hasattr(v, "_mpf_"):
        parts = (v._mpf_,)
    else:
        return math.isfinite(abs(complex(v)))
    return all(x not in (libmp.finf, libmp.fninf, libmp.fnan) for x in parts)


def _point(pt, prec):
    return pt.z if isinstance(pt, EvalPoint) else prec.mpc(pt)


def _check_gamma_pole(z) -> None:
    x, y = float(z.real), float(z.imag)
    if abs(y) < POLE_GUARD and x < 0.5:
        k = round(x)
        if k <= 0 and abs(z - k) < POLE_GUARD:
            raise PoleError(f"Gamma has a pole at z = {k}")


def _shift_count(z, bits: int) -> tuple[int, float]:
    """Shift N so that the asymptotic series at z+N is accurate to ``bits``."""
    radius = max(10.0, 0.25 * bits)
    x, y = float(z.real), float(z.imag)
    mod = math.hypot(x, y)
    arg = math.atan2(y, x)
    # effective radius of the sector-weighted remainder bound
    if abs(arg) <= SECTOR_HALF_ANGLE and mod * math.cos(arg / 2) ** 2 >= radius:
        return 0, radius
    n = max(0, math.ceil(radius - x))
    if n > _MAX_SHIFT:
        raise DomainError("argument too far into the left half-plane for the shift recurrence")
    return n, radius


def _chunk(k: int) -> int:
    return max(16, 1 << (k - 1).bit_length())


@lru_cache(maxsize=64)
def _stirling_coeffs(prec_bits: int, count: int):
    """B_2k / (2k (2k-1)) as mpf at ``prec_bits``, k = 1..count."""
    ctx = PrecisionConfig(max(64, prec_bits), 0).ctx
    bern = bernoulli_list(2 * count)
    return [ctx.mpf(bern[2 * k].numerator) / (bern[2 * k].denominator * 2 * k * (2 * k - 1))
            for k in range(1, count + 1)]


def log_gamma(pt, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Principal branch of log Gamma(z) (continuous off the negative real axis)."""
    z = _point(pt, prec)
    _check_gamma_pole(z)
    wp = prec.working_bits + 10
    p = PrecisionConfig(wp, 0)
    ctx = p.ctx
    z = p.mpc(z)
    n, _ = _shift_count(z, wp)
    w = z + n
    logw = complex_log(w, p)
    acc = (w - ctx.mpf(0.5)) * logw - w + ctx.log(2 * ctx.pi) / 2
    tol = ctx.ldexp(abs(acc) + 1, -wp)
    inv_w2 = 1 / (w * w)
    power = 1 / w
    prev = None
    k = 1
    while True:
        coeffs = _stirling_coeffs(wp, _chunk(k))
        term = coeffs[k - 1] * power
        acc += term
        size = abs(term)
        if size < tol:
            break
        if k > 8 and size > prev:
            raise DomainError("Stirling series diverged before reaching the target precision")
        prev = size
        power *= inv_w2
        k += 1
    for j in range(n):
        acc -= complex_log(z + j, p)
    return prec.mpc(acc)


def gamma(pt, prec: PrecisionConfig = DEFAULT_PRECISION):
    return prec.ctx.exp(log_gamma(pt, prec))


@lru_cache(maxsize=64)
def _bern_mpf(prec_bits: int, count: int):
    """B_0..B_count as mpf."""
    ctx = PrecisionConfig(max(64, prec_bits), 0).ctx
    return [ctx.mpf(b.numerator) / b.denominator for b in bernoulli_list(count)]


def digamma_jet(pt, k: int, prec: PrecisionConfig = DEFAULT_PRECISION) -> FunctionJet:
    """psi(z), psi'(z), ..., psi^(k)(z)."""
    if k < 0:
        raise DomainError("jet order must be nonnegative")
    z = _point(pt, prec)
    _check_gamma_pole(z)
    wp = prec.working_bits + 10 + 2 * k
    p = PrecisionConfig(wp, 0)
    ctx = p.ctx
    z = p.mpc(z)
    shift, _ = _shift_count(z, wp + 4 * k)
    w = z + shift
    inv_w = 1 / w
    inv_w2 = inv_w * inv_w
    inv_shift = [1 / (z + i) for i in range(shift)]
    pow_shift = list(inv_shift)
    out = []
    for j in range(k + 1):
        # psi(w) ~ log w - 1/(2w) - sum B_2i / (2i w^2i)
        # psi^(j)(w) ~ (-1)^(j+1) [(j-1)!/w^j + j!/(2 w^(j+1)) + sum B_2i (2i+j-1)!/((2i)! w^(2i+j))]
        if j == 0:
            acc = complex_log(w, p) - inv_w / 2
        else:
            acc = math.factorial(j - 1) * inv_w ** j + math.factorial(j) * inv_w ** (j + 1) / 2
        sign = -1 if j == 0 else 1
        tol = ctx.ldexp(abs(acc), -wp)
        power = inv_w ** (j + 2)
        prev = None
        i = 1
        while True:
            bern = _bern_mpf(wp, _chunk(2 * i))
            if j == 0:
                term = bern[2 * i] / (2 * i) * power
            else:
                term = bern[2 * i] * (math.factorial(2 * i + j - 1) // math.factorial(2 * i)) * power
            acc += sign * term
            size = abs(term)
            if size < tol:
                break
            if i > 8 and size > prev:
                raise DomainError("polygamma series diverged before reaching the target precision")
            prev = size
            power *= inv_w2
            i += 1
        if j % 2 == 0 and j > 0:
            acc = -acc
        if shift:
            # psi^(j)(z) = psi^(j)(z+N) - (-1)^j j! sum_{i<N} (z+i)^-(j+1)
            tail = ctx.fsum(pow_shift)
            acc -= (-1) ** j * math.factorial(j) * tail
            pow_shift = [a * b for a, b in zip(pow_shift, inv_shift)]
        out.append(prec.mpc(acc))
    return FunctionJet(out[0], tuple(out[1:]))


@lru_cache(maxsize=16)
def _spf(limit: int) -> list[int]:
    """Smallest-prime-factor table for 0..limit."""
    spf = list(range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _dirichlet_head(s, count: int, p: PrecisionConfig):
    """sum_{n=1}^{count} n^-s and the list of n^-s values."""
    ctx = p.ctx
    spf = _spf(max(count, 2))
    vals = [ctx.mpc(0), ctx.mpc(1)]
    for n in range(2, count + 1):
        q = spf[n]
        if q == n:
            vals.append(ctx.exp(-s * ctx.log(n)))
        else:
            vals.append(vals[q] * vals[n // q])
    return ctx.fsum(vals[1:]), vals


def zeta_eval(s, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Riemann zeta by Euler-Maclaurin summation, valid for every s != 1."""
    s0 = prec.mpc(s)
    if abs(s0 - 1) < POLE_GUARD:
        raise PoleError("zeta has a pole at s = 1")
    base_wp = prec.working_bits
    smod = float(abs(s0))
    sigma = float(s0.real)
    n_cut = max(8, math.ceil(1.5 * (smod + base_wp / 2) / math.pi))
    # the head sum loses bits when sigma < 1 (terms grow like n^(1-sigma))
    loss = max(0.0, 1.0 - sigma) * math.log2(n_cut) + math.log2(smod + 2)
    wp = base_wp + 12 + math.ceil(loss)
    p = PrecisionConfig(wp, 0)
    ctx = p.ctx
    s = p.mpc(s0)
    head, vals = _dirichlet_head(s, n_cut - 1, p)
    nn = ctx.mpf(n_cut)
    n_pow = ctx.exp(-s * ctx.log(nn))  # N^-s
    acc = head + n_pow * nn / (s - 1) + n_pow / 2
    tol = ctx.ldexp(abs(acc) + abs(n_pow), -wp)
    rising = s  # s (s+1) ... (s+2k-2)
    inv_n2 = 1 / (nn * nn)
    power = n_pow / nn  # N^(-s-2k+1) at k = 1
    fact = 2  # (2k)!
    k = 1
    while True:
        b = bernoulli(2 * k)
        term = (ctx.mpf(b.numerator) / (b.denominator * fact)) * rising * power
        acc += term
        if abs(term) < tol:
            break
        if k >= wp:
            raise DomainError("Euler-Maclaurin tail failed to converge")
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power *= inv_n2
        k += 1
        fact *= (2 * k - 1) * (2 * k)
    return prec.mpc(acc)


def default_contour_nodes(bits: int) -> int:
    """4 * bits / 10 rounded up to a power of two."""
    need = max(8, math.ceil(4 * bits / 10))
    return 1 << (need - 1).bit_length()


def zeta_jet(s, m: int, prec: PrecisionConfig = DEFAULT_PRECISION, rho: float | Fraction = Fraction(1, 4),
             nodes: int | None = None) -> FunctionJet:
    """zeta(s), zeta'(s), ..., zeta^(m)(s); derivatives from a trapezoidal Cauchy integral."""
    if m < 0:
        raise DomainError("jet order must be nonnegative")
    s0 = prec.mpc(s)
    base = zeta_eval(s0, prec)
    if m == 0:
        return FunctionJet(base, ())
    r = prec.mpf(Fraction(rho) if not isinstance(rho, float) else rho)
    dist = float(abs(s0 - 1))
    if dist <= float(r):
        raise PoleError(f"contour of radius {float(r)} around s encloses the pole at 1")
    if nodes is None:
        nodes = default_contour_nodes(prec.bits)
        # aliasing error decays like (rho / |s-1|)^nodes
        need = (prec.working_bits + 16) / math.log2(dist / float(r))
        while nodes < need:
            nodes *= 2
    if nodes <= m:
        raise DomainError("contour needs more nodes than the derivative order")
    # k!/rho^k amplifies evaluation error
    amp = math.log2(math.factorial(m)) + m * math.log2(1 / float(r))
    p = prec.raised(math.ceil(amp) + 8)
    ctx = p.ctx
    sp = p.mpc(s0)
    rr = p.mpf(r)
    roots = [ctx.expjpi(ctx.mpf(2 * j) / nodes) for j in range(nodes)]
    samples = [zeta_eval(sp + rr * w, p) for w in roots]
    derivs = []
    for k in range(1, m + 1):
        acc = ctx.fsum(samples[j] * roots[(-j * k) % nodes] for j in range(nodes))
        derivs.append(prec.mpc(acc * math.factorial(k) / (nodes * rr ** k)))
    return FunctionJet(base, tuple(derivs))


def gamma_ratio_eval(pt, orders: Sequence[int], prec: PrecisionConfig = DEFAULT_PRECISION) -> list:
    """Gamma^(j)(z)/Gamma(z) for each j, via the exact differential polynomial R_j."""
    from .diffpoly import eval_diffpoly, gamma_ratio_poly

    orders = list(orders)
    if any(j < 0 for j in orders):
        raise DomainError("orders must be nonnegative")
    top = max(orders, default=0)
    z = _point(pt, prec)
    if top == 0:
        _check_gamma_pole(z)
        return [prec.mpc(1) for _ in orders]
    jet = digamma_jet(z, top - 1, prec)
    return [eval_diffpoly(gamma_ratio_poly(j), jet, prec) for j in orders]
