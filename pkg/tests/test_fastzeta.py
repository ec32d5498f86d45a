import os
import subprocess
import sys

import mpmath
import pytest

from adelab import _zeta_fast_py, fastzeta

try:
    from adelab import _zeta_fast
except ImportError:  # extension not built
    _zeta_fast = None

BACKENDS = [_zeta_fast_py] + ([_zeta_fast] if _zeta_fast else [])


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("s", [2, 0.75 + 30j, 0.75 + 200j, -2 + 5j, 0.5 + 14.134725j, 3 - 40j])
def test_zeta_double_against_mpmath(mod, s):
    ref = complex(mpmath.zeta(s))
    assert abs(mod.zeta_double(s) - ref) < 1e-12 * max(1, abs(ref))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_line_jets_against_mpmath(mod):
    ys = [30.0, 55.5, 120.25]
    for y, row in zip(ys, mod.zeta_line_jets(0.75, ys, 3)):
        for k, v in enumerate(row):
            ref = complex(mpmath.zeta(complex(0.75, y), derivative=k))
            assert abs(v - ref) < 1e-10 * max(1, abs(ref)), k


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_pole_guards(mod):
    with pytest.raises(ValueError):
        mod.zeta_double(1)
    with pytest.raises(ValueError):
        mod.zeta_line_jets(0.9, [0.1], 1)
    with pytest.raises(ValueError):
        mod.zeta_line_jets(0.75, [30.0], 5, nodes=4)


@pytest.mark.skipif(_zeta_fast is None, reason="compiled kernel not built")
def test_backends_agree():
    ys = [0.5 + 0.37 * k for k in range(400)]
    a = _zeta_fast_py.zeta_line_jets(0.75, ys, 2)
    b = _zeta_fast.zeta_line_jets(0.75, ys, 2)
    worst = max(abs(u - v) / max(1, abs(v)) for ra, rb in zip(a, b) for u, v in zip(ra, rb))
    assert worst < 1e-13


def test_selected_backend():
    expected = "cython" if _zeta_fast else "python"
    if os.environ.get("ADELAB_PURE_PYTHON") == "1":
        expected = "python"
    assert fastzeta.BACKEND == expected


def test_pure_python_override():
    out = subprocess.run(
        [sys.executable, "-c", "from adelab import fastzeta; print(fastzeta.BACKEND)"],
        env={**os.environ, "ADELAB_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
