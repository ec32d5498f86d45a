"""Multi-index bookkeeping for P(u_0..u_m; v_0, v_1, v_2).

P is a map from an exponent triple lambda = (l0, l1, l2) on (v0, v1, v2) to a
coefficient polynomial a_lambda(u).  For a homogeneous part of degree p and a
star parameter ell, every lambda is pinned down by

    q = l1 + ell * l2      (star weight)
    r = l2

so the part becomes a (q, r) grid of u-polynomials a_{q,r}.  Expanding
(1 + H)^r turns it into the grid b_{q,r} = sum_{s >= r} C(s, r) a_{q,s}.

All coefficients are exact Gaussian rationals; zero-ness is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .numkernel import DEFAULT_PRECISION, DomainError, PrecisionConfig, UnsupportedRegimeError, binom

__all__ = [
    "QComplex",
    "UPoly",
    "LambdaIndex",
    "ADEPoly",
    "CoeffTable",
    "homogeneous_parts",
    "star_weight",
    "lambda_from_qr",
    "a_table",
    "b_from_a",
    "a_from_b",
    "first_nonzero_b",
    "upoly_eval",
    "reassemble",
    "check_regime",
]


@dataclass(frozen=True)
class QComplex:
    """Exact complex number re + i*im with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "QComplex":
        if isinstance(x, QComplex):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        if isinstance(x, float):
            return cls(Fraction(x))
        if isinstance(x, str):
            return cls(Fraction(x))
        raise TypeError(f"cannot make an exact complex from {x!r}")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, o):
        o = QComplex.coerce(o)
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QComplex.coerce(o))

    def __rsub__(self, o):
        return QComplex.coerce(o) - self

    def __mul__(self, o):
        o = QComplex.coerce(o)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QComplex.coerce(o)
        den = o.re * o.re + o.im * o.im
        if not den:
            raise ZeroDivisionError("division by exact zero")
        return QComplex((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def __eq__(self, o):
        try:
            o = QComplex.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"Q({self.re})"
        return f"Q({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def to_mpc(self, prec: PrecisionConfig):
        return prec.ctx.mpc(prec.mpf(self.re), prec.mpf(self.im))


class UPoly:
    """Polynomial in u_0..u_m with exact complex coefficients."""

    __slots__ = ("m", "_terms")

    def __init__(self, m: int, terms: Mapping[Sequence[int], object] | None = None):
        if m < 0:
            raise DomainError("m must be nonnegative")
        self.m = m
        clean: dict = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != m + 1 or any(e < 0 for e in exps):
                raise DomainError(f"exponent vector {exps} does not fit m = {m}")
            c = QComplex.coerce(c)
            acc = clean.get(exps, QComplex()) + c
            if acc:
                clean[exps] = acc
            else:
                clean.pop(exps, None)
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, m: int, c) -> "UPoly":
        return cls(m, {(0,) * (m + 1): c})

    @classmethod
    def zero(cls, m: int) -> "UPoly":
        return cls(m)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    def __hash__(self):
        return hash((self.m, tuple(self._terms.items())))

    def __add__(self, other: "UPoly") -> "UPoly":
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, QComplex()) + c
        return UPoly(self.m, acc)

    def __neg__(self):
        return UPoly(self.m, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UPoly":
        c = QComplex.coerce(c)
        return UPoly(self.m, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                acc[k] = acc.get(k, QComplex()) + ca * cb
        return UPoly(self.m, acc)

    __rmul__ = __mul__

    def _check(self, other):
        if self.m != other.m:
            raise DomainError(f"UPoly dimension mismatch: m = {self.m} vs {other.m}")

    def __repr__(self):
        return f"UPoly(m={self.m}, {self._terms!r})"


@dataclass(frozen=True, order=True)
class LambdaIndex:
    l0: int
    l1: int
    l2: int

    def __post_init__(self):
        if min(self.l0, self.l1, self.l2) < 0:
            raise DomainError(f"lambda components must be nonnegative: {self.astuple()}")

    def astuple(self) -> tuple:
        return (self.l0, self.l1, self.l2)

    @property
    def size(self) -> int:
        """|lambda| = l0 + l1 + l2."""
        return self.l0 + self.l1 + self.l2


class ADEPoly:
    """P(u; v0, v1, v2) = sum_lambda a_lambda(u) v0^l0 v1^l1 v2^l2 (canonical: no zero a_lambda)."""

    __slots__ = ("m", "_coeffs")

    def __init__(self, m: int, coeffs: Mapping[LambdaIndex, UPoly] | Iterable | None = None):
        self.m = m
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or [])
        acc: dict = {}
        for lam, a in items:
            lam = lam if isinstance(lam, LambdaIndex) else LambdaIndex(*lam)
            if a.m != m:
                raise DomainError(f"coefficient polynomial has m = {a.m}, expected {m}")
            acc[lam] = acc[lam] + a if lam in acc else a
        self._coeffs = {k: v for k, v in sorted(acc.items()) if not v.is_zero()}

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    @property
    def L(self) -> int:
        """Largest |lambda| present; -1 for the zero polynomial."""
        return max((lam.size for lam in self._coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, ADEPoly):
            return NotImplemented
        return self.m == other.m and self._coeffs == other._coeffs

    def __add__(self, other: "ADEPoly") -> "ADEPoly":
        return ADEPoly(self.m, list(self._coeffs.items()) + list(other._coeffs.items()))

    def __repr__(self):
        return f"ADEPoly(m={self.m}, terms={len(self._coeffs)})"

    def evaluate(self, u: Sequence, v: Sequence, prec: PrecisionConfig = DEFAULT_PRECISION):
        """Plain term-by-term evaluation at u (length m+1) and v = (v0, v1, v2)."""
        ctx = prec.ctx
        v = [prec.mpc(x) for x in v]
        parts = []
        for lam, a in self._coeffs.items():
            mono = v[0] ** lam.l0 * v[1] ** lam.l1 * v[2] ** lam.l2
            parts.append(upoly_eval(a, u, prec) * mono)
        return ctx.fsum(parts) if parts else ctx.mpc(0)


@dataclass
class CoeffTable:
    """(q, r) grid of u-polynomials for one homogeneous part; absent entries are zero."""

    p: int
    ell: int
    M: int
    N: int
    m: int
    kind: str
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise DomainError("table kind must be 'A' or 'B'")
        self.entries = {k: v for k, v in sorted(self.entries.items()) if not v.is_zero()}

    def get(self, q: int, r: int) -> UPoly:
        return self.entries.get((q, r), UPoly.zero(self.m))

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, CoeffTable):
            return NotImplemented
        return (self.p, self.ell, self.M, self.N, self.m, self.kind, self.entries) == (
            other.p, other.ell, other.M, other.N, other.m, other.kind, other.entries)


def check_regime(ell: int, n: int | None = None) -> None:
    if ell < 2 or (n is not None and n < 1):
        raise UnsupportedRegimeError(
            f"unsupported (ell, n) = ({ell}, {n}): {UnsupportedRegimeError.REDUCTION_NOTE}"
        )


def homogeneous_parts(P: ADEPoly) -> list[tuple[int, ADEPoly]]:
    """[(p, P_p)] for every p with a nonzero part, p ascending."""
    buckets: dict[int, list] = {}
    for lam, a in P.coeffs.items():
        buckets.setdefault(lam.size, []).append((lam, a))
    return [(p, ADEPoly(P.m, items)) for p, items in sorted(buckets.items())]


def star_weight(lam: LambdaIndex, ell: int) -> int:
    if ell < 1:
        raise DomainError("ell must be positive")
    return lam.l1 + ell * lam.l2


def lambda_from_qr(p: int, q: int, r: int, ell: int) -> LambdaIndex | None:
    """The lambda with |lambda| = p, star weight q and l2 = r; None when infeasible."""
    check_regime(ell)
    l0 = p - q + (ell - 1) * r
    l1 = q - ell * r
    if l0 < 0 or l1 < 0 or r < 0:
        return None
    return LambdaIndex(l0, l1, r)


def a_table(Pp: ADEPoly, ell: int, p: int | None = None) -> CoeffTable:
    check_regime(ell)
    sizes = {lam.size for lam in Pp.coeffs}
    if len(sizes) > 1:
        raise DomainError(f"polynomial is not homogeneous (degrees {sorted(sizes)})")
    if p is None:
        p = sizes.pop() if sizes else 0
    elif sizes and sizes != {p}:
        raise DomainError(f"part has degree {sizes.pop()}, expected {p}")
    entries = {}
    M = N = 0
    for lam, a in Pp.coeffs.items():
        q = star_weight(lam, ell)
        r = lam.l2
        assert lambda_from_qr(p, q, r, ell) == lam
        entries[(q, r)] = a
        M, N = max(M, q), max(N, r)
    return CoeffTable(p, ell, M, N, Pp.m, "A", entries)


def b_from_a(t: CoeffTable) -> CoeffTable:
    """b_{q,r} = sum_{s >= r} C(s, r) a_{q,s}."""
    if t.kind != "A":
        raise DomainError("b_from_a expects an A table")
    out = {}
    for q in range(t.M + 1):
        for r in range(t.N + 1):
            acc = UPoly.zero(t.m)
            for s in range(r, t.N + 1):
                a = t.entries.get((q, s))
                if a is not None:
                    acc = acc + a.scale(binom(s, r))
            out[(q, r)] = acc
    return CoeffTable(t.p, t.ell, t.M, t.N, t.m, "B", out)


def a_from_b(t: CoeffTable) -> CoeffTable:
    """Inverse transform a_{q,r} = sum_{s >= r} (-1)^(s-r) C(s, r) b_{q,s}."""
    if t.kind != "B":
        raise DomainError("a_from_b expects a B table")
    out = {}
    for q in range(t.M + 1):
        for r in range(t.N + 1):
            acc = UPoly.zero(t.m)
            for s in range(r, t.N + 1):
                b = t.entries.get((q, s))
                if b is not None:
                    acc = acc + b.scale((-1) ** (s - r) * binom(s, r))
            out[(q, r)] = acc
    return CoeffTable(t.p, t.ell, t.M, t.N, t.m, "A", out)


def first_nonzero_b(t: CoeffTable) -> tuple[int, int] | None:
    """First structurally nonzero b_{q,r}: r ascending, then q from M down to 0; None if all vanish."""
    if t.kind != "B":
        raise DomainError("first_nonzero_b expects a B table")
    for r in range(t.N + 1):
        for q in range(t.M, -1, -1):
            if (q, r) in t.entries:
                return (q, r)
    return None


def reassemble(tables: Iterable[CoeffTable], m: int) -> ADEPoly:
    """Inverse of the decomposition: sum of a_{q,r} v0^l0 v1^l1 v2^l2 over all tables."""
    items = []
    for t in tables:
        if t.kind == "B":
            t = a_from_b(t)
        for (q, r), a in t.entries.items():
            lam = lambda_from_qr(t.p, q, r, t.ell)
            if lam is None:
                raise DomainError(f"table entry ({q}, {r}) is infeasible for p = {t.p}")
            items.append((lam, a))
    return ADEPoly(m, items)


def upoly_eval(a: UPoly, point: Sequence, prec: PrecisionConfig = DEFAULT_PRECISION):
    if len(point) != a.m + 1:
        raise DomainError(f"point has {len(point)} coordinates, expected {a.m + 1}")
    ctx = prec.ctx
    u = [prec.mpc(x) for x in point]
    parts = []
    for exps, c in a.terms.items():
        term = c.to_mpc(prec)
        for x, e in zip(u, exps):
            if e:
                term *= x ** e
        parts.append(term)
    return ctx.fsum(parts) if parts else ctx.mpc(0)
