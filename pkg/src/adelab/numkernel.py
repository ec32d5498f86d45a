"""Precision contexts, exact combinatorics and the error hierarchy.

Every evaluator in the package takes a :class:`PrecisionConfig` explicitly.
Each config owns a private :class:`mpmath.MPContext`, so two configs never
interfere through mpmath's global ``mp`` state.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "AdeError",
    "DomainError",
    "PoleError",
    "SingularityError",
    "InsufficientJetError",
    "DivergenceError",
    "SectorError",
    "UnsupportedRegimeError",
    "PrecisionConfig",
    "DEFAULT_PRECISION",
    "complex_log",
    "parse_complex",
    "binom",
    "gen_binom",
    "bernoulli",
    "bernoulli_list",
    "to_fraction",
]


class AdeError(ValueError):
    """Base class for every guard tripped inside the package."""

    guard = "generic"


class DomainError(AdeError):
    guard = "domain"


class PoleError(AdeError):
    guard = "pole"


class SingularityError(AdeError):
    guard = "singularity"


class InsufficientJetError(AdeError):
    guard = "insufficient-jet"


class DivergenceError(AdeError):
    guard = "divergence"


class SectorError(AdeError):
    guard = "sector"


class UnsupportedRegimeError(AdeError):
    """Raised for ell < 2 or n < 1, which the machinery does not cover."""

    guard = "unsupported-regime"

    REDUCTION_NOTE = (
        "the cases n = 0 and ell = 1 reduce to P(zeta, ...; Gamma) and "
        "P(zeta, ...; Gamma, Gamma^(n)), the known single-derivative corollary "
        "(no second Gamma derivative); this tool assumes ell >= 2 and n >= 1"
    )


@lru_cache(maxsize=64)
def _context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision: ``bits`` fractional bits plus ``guard_bits``.

    Values are computed in a context of ``bits + guard_bits`` bits and are
    meant to be trusted to about ``bits``.
    """

    bits: int = 128
    guard_bits: int = 16

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise DomainError(f"precision must be >= 64 bits, got {self.bits!r}")
        if self.guard_bits < 0 or self.guard_bits > self.bits:
            raise DomainError(f"guard_bits must lie in [0, bits], got {self.guard_bits}")

    @property
    def working_bits(self) -> int:
        return self.bits + self.guard_bits

    @property
    def ctx(self) -> mpmath.MPContext:
        return _context(self.working_bits)

    @property
    def eps(self):
        """Relative tolerance matching ``bits``."""
        return self.ctx.ldexp(1, -self.bits)

    def raised(self, extra: int) -> "PrecisionConfig":
        """A config with ``extra`` more bits (guard bits unchanged)."""
        return PrecisionConfig(self.bits + max(0, int(extra)), self.guard_bits)

    def mpc(self, z):
        """Convert anything numeric (including strings like ``'3+4i'``) to ``ctx.mpc``."""
        ctx = self.ctx
        if isinstance(z, str):
            return parse_complex(z, self)
        if isinstance(z, Fraction):
            return ctx.mpc(ctx.mpf(z.numerator) / z.denominator)
        if hasattr(z, "_mpc_"):
            return ctx.mpc(ctx.make_mpf(z._mpc_[0]), ctx.make_mpf(z._mpc_[1]))
        if hasattr(z, "_mpf_"):
            return ctx.mpc(ctx.make_mpf(z._mpf_))
        return ctx.mpc(z)

    def mpf(self, x):
        ctx = self.ctx
        if isinstance(x, Fraction):
            return ctx.mpf(x.numerator) / x.denominator
        if hasattr(x, "_mpf_"):
            return ctx.make_mpf(x._mpf_)
        return ctx.mpf(x)


DEFAULT_PRECISION = PrecisionConfig()


def parse_complex(text: str, prec: PrecisionConfig):
    """Parse ``'5+3i'``, ``'-2.5e3-1i'``, ``'0.75'``, ``'40i'`` exactly at ``prec``."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise DomainError("empty complex literal")
    ctx = prec.ctx
    if not s.endswith("i"):
        try:
            return ctx.mpc(ctx.mpf(s))
        except ValueError as exc:
            raise DomainError(f"cannot parse complex literal {text!r}") from exc
    body = s[:-1]
    # split at the last sign that is not an exponent sign
    cut = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    if cut < 0:
        re_txt, im_txt = "0", body
    else:
        re_txt, im_txt = body[:cut], body[cut:]
    if im_txt in ("", "+"):
        im_txt = "1"
    elif im_txt == "-":
        im_txt = "-1"
    try:
        return ctx.mpc(ctx.mpf(re_txt), ctx.mpf(im_txt))
    except ValueError as exc:
        raise DomainError(f"cannot parse complex literal {text!r}") from exc


def complex_log(z, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Principal logarithm, imaginary part in (-pi, pi]."""
    ctx = prec.ctx
    w = prec.mpc(z)
    if w == 0:
        raise DomainError("log of zero")
    re = ctx.log(abs(w))
    if w.imag == 0 and w.real < 0:
        return ctx.mpc(re, +ctx.pi)
    return ctx.mpc(re, ctx.atan2(w.imag, w.real))


def binom(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError("binom takes nonnegative integers")
    return math.comb(n, k)


def gen_binom(a: int, j: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-j+1)/j! for any integer ``a``."""
    if j < 0:
        raise DomainError("gen_binom needs j >= 0")
    num = 1
    for i in range(j):
        num *= a - i
    return Fraction(num, math.factorial(j))


_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def _ensure_bernoulli(upto: int) -> None:
    if len(_bern) <= upto:
        with _bern_lock:
            # B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k; odd m >= 3 vanish
            for m in range(len(_bern), upto + 1):
                if m > 1 and m % 2 == 1:
                    _bern.append(Fraction(0))
                    continue
                acc = Fraction(0)
                c = 1  # C(m+1, k)
                for k in range(m):
                    if _bern[k]:
                        acc += c * _bern[k]
                    c = c * (m + 1 - k) // (k + 1)
                _bern.append(-acc / (m + 1))


def bernoulli_list(upto: int) -> list[Fraction]:
    """Exact B_0..B_upto (convention B_1 = -1/2)."""
    _ensure_bernoulli(upto)
    return _bern[: upto + 1]


def bernoulli(m: int) -> Fraction:
    _ensure_bernoulli(m)
    return _bern[m]


def to_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise DomainError(f"not an exact rational: {x!r}")
