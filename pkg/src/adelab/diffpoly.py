"""Exact differential polynomials in the jet f, f', f'', ...

A monomial is stored as a sorted tuple of ``(order, exponent)`` pairs, so
``f^2 f''`` is ``((0, 2), (2, 1))``.  Coefficients are :class:`Fraction`.

``gamma_ratio_poly(n)`` returns R_n with Gamma^(n)/Gamma = R_n(f, f', ...),
built from R_{n+1} = R_n' + f R_n.  R_n is the n-th complete Bell
polynomial in the jet.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .numkernel import DEFAULT_PRECISION, DomainError, InsufficientJetError, PrecisionConfig

__all__ = [
    "DiffMonomial",
    "DiffPolynomial",
    "jet_var",
    "formal_derive",
    "gamma_ratio_poly",
    "extract_cn",
    "eval_diffpoly",
]

Key = tuple  # tuple[tuple[int, int], ...]


def _key_from_map(exponents: Mapping[int, int]) -> Key:
    return tuple(sorted((j, e) for j, e in exponents.items() if e))


def _key_mul(a: Key, b: Key) -> Key:
    out = dict(a)
    for j, e in b:
        out[j] = out.get(j, 0) + e
    return tuple(sorted(out.items()))


def weight(key: Key) -> int:
    """sum (j+1) e_j: the number of derivatives carried by a monomial."""
    return sum((j + 1) * e for j, e in key)


def degree(key: Key) -> int:
    return sum(e for _, e in key)


def _order_key(key: Key):
    # weight, then fewer factors first, then higher derivative orders first;
    # reproduces the ordering f''' + 4ff'' + 3(f')^2 + 6f^2f' + f^4
    w = weight(key)
    dense = dict(key)
    return (w, degree(key), tuple(-dense.get(j, 0) for j in range(w - 1, -1, -1)))


@dataclass(frozen=True)
class DiffMonomial:
    exponents: Mapping[int, int]
    coefficient: Fraction

    @property
    def weight(self) -> int:
        return weight(_key_from_map(self.exponents))


class DiffPolynomial:
    """Immutable polynomial over Q in f, f', f'', ..."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(k)] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: _order_key(kv[0])))
        self._hash = None

    @classmethod
    def constant(cls, c) -> "DiffPolynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def from_monomials(cls, monos: Iterable[DiffMonomial]) -> "DiffPolynomial":
        acc: dict = {}
        for mono in monos:
            k = _key_from_map(mono.exponents)
            acc[k] = acc.get(k, 0) + Fraction(mono.coefficient)
        return cls(acc)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def monomials(self) -> Iterator[DiffMonomial]:
        for k, c in self._terms.items():
            yield DiffMonomial(dict(k), c)

    def coefficient(self, exponents: Mapping[int, int]) -> Fraction:
        return self._terms.get(_key_from_map(exponents), Fraction(0))

    def max_order(self) -> int:
        """Highest derivative order present, -1 for constants."""
        return max((j for k in self._terms for j, _ in k), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = DiffPolynomial.constant(other)
        if not isinstance(other, DiffPolynomial):
            return NotImplemented
        return list(self._terms.items()) == list(other._terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "DiffPolynomial":
        if isinstance(x, DiffPolynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return DiffPolynomial.constant(x)
        raise TypeError(f"cannot combine DiffPolynomial with {type(x).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return DiffPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = _key_mul(ka, kb)
                acc[k] = acc.get(k, 0) + ca * cb
        return DiffPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers are not polynomials")
        out = DiffPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"DiffPolynomial({render(self)!r})"


def jet_var(order: int) -> DiffPolynomial:
    """The jet variable f^(order)."""
    if order < 0:
        raise DomainError("derivative order must be nonnegative")
    return DiffPolynomial({((order, 1),): Fraction(1)})


def _var_name(j: int) -> str:
    return "f" + "'" * j if j <= 3 else f"f^({j})"


def _factor(j: int, e: int) -> str:
    name = _var_name(j)
    if e == 1:
        return name
    if j == 0:
        return f"{name}^{e}"
    return f"({name})^{e}"


def render(p: DiffPolynomial) -> str:
    """Text form such as ``f'' + 3*f*f' + f^3``."""
    if p.is_zero():
        return "0"
    pieces = []
    for k, c in p._terms.items():
        factors = [_factor(j, e) for j, e in k]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def formal_derive(p: DiffPolynomial) -> DiffPolynomial:
    """Total derivative with d f^(j) = f^(j+1) (Leibniz rule)."""
    acc: dict = {}
    for key, c in p._terms.items():
        for j, e in key:
            rest = dict(key)
            rest[j] = e - 1
            rest[j + 1] = rest.get(j + 1, 0) + 1
            k = _key_from_map(rest)
            acc[k] = acc.get(k, 0) + c * e
    return DiffPolynomial(acc)


_R_cache: list[DiffPolynomial] = [DiffPolynomial.constant(1)]
_R_lock = threading.Lock()
_F = jet_var(0)


def gamma_ratio_poly(n: int) -> DiffPolynomial:
    """R_n with Gamma^(n)/Gamma = R_n(f, f', ..., f^(n-1)); R_0 = 1."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n >= len(_R_cache):
        with _R_lock:
            while len(_R_cache) <= n:
                prev = _R_cache[-1]
                _R_cache.append(formal_derive(prev) + _F * prev)
    return _R_cache[n]


def extract_cn(n: int) -> Fraction:
    """Coefficient of f^(n-2) f' in R_n (0 for n = 1)."""
    if n < 1:
        raise DomainError("c_n is defined for n >= 1")
    if n == 1:
        return Fraction(0)
    exps = {1: 1}
    if n > 2:
        exps[0] = n - 2
    return gamma_ratio_poly(n).coefficient(exps)


def eval_diffpoly(p: DiffPolynomial, jet, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Numeric value of p with f^(j) taken from ``jet`` (a FunctionJet or sequence)."""
    values = jet.values() if hasattr(jet, "values") else list(jet)
    need = p.max_order()
    if need >= len(values):
        raise InsufficientJetError(
            f"polynomial needs derivatives up to order {need}, jet has order {len(values) - 1}"
        )
    ctx = prec.ctx
    vals = [prec.mpc(v) for v in values[: need + 1]]
    powers: dict = {}

    def power(j, e):
        key = (j, e)
        if key not in powers:
            powers[key] = vals[j] ** e
        return powers[key]

    parts = []
    for key, c in p._terms.items():
        term = ctx.mpf(c.numerator) / c.denominator
        for j, e in key:
            term = term * power(j, e)
        parts.append(ctx.mpc(term))
    return ctx.fsum(parts) if parts else ctx.mpc(0)
