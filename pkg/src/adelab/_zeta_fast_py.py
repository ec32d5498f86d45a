"""Pure-Python double-precision zeta jets; fallback for the compiled ``_zeta_fast``.

Same algorithm and constants as the Cython kernel so both backends agree to
rounding.  Used only for scanning (witness search); verdicts are recomputed
with the multiprecision evaluators.
"""

import cmath
import math

from ._fastconst import BERN_OVER_FACT, MAX_TERMS

__all__ = ["zeta_double", "zeta_line_jets"]


def zeta_double(s: complex) -> complex:
    s = complex(s)
    if abs(s - 1.0) < 1e-6:
        raise ValueError("zeta has a pole at s = 1")
    mod = abs(s)
    n_cut = max(8, int(math.ceil(1.5 * (mod + 27.0) / math.pi)))
    acc = 0j
    for n in range(1, n_cut):
        acc += cmath.exp(-s * math.log(n))
    ln_n = math.log(n_cut)
    n_pow = cmath.exp(-s * ln_n)
    acc += n_pow * n_cut / (s - 1.0) + 0.5 * n_pow
    rising = s
    power = n_pow / n_cut
    inv_n2 = 1.0 / (n_cut * n_cut)
    for k in range(1, MAX_TERMS + 1):
        term = BERN_OVER_FACT[k] * rising * power
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power *= inv_n2
    return acc


def zeta_line_jets(x: float, ys, m: int, rho: float = 0.25, nodes: int = 32) -> list:
    """[(zeta, zeta', ..., zeta^(m)) at x + iy for y in ys]."""
    if nodes <= m:
        raise ValueError("need more contour nodes than the derivative order")
    roots = [cmath.exp(2j * math.pi * j / nodes) for j in range(nodes)]
    out = []
    for y in ys:
        s = complex(x, y)
        row = [zeta_double(s)]
        if m:
            if abs(s - 1.0) <= rho:
                raise ValueError("contour encloses the pole at s = 1")
            samples = [zeta_double(s + rho * w) for w in roots]
            scale = 1.0
            for k in range(1, m + 1):
                scale *= k / rho
                acc = 0j
                for j in range(nodes):
                    acc += samples[j] * roots[(-j * k) % nodes]
                row.append(acc * scale / nodes)
        out.append(tuple(row))
    return out
