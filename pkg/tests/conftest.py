import random
import sys

import pytest
from hypothesis import settings

from adelab.indexcalc import ADEPoly, QComplex, UPoly
from adelab.numkernel import PrecisionConfig

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

P128 = PrecisionConfig(128)
P256 = PrecisionConfig(256)


def poly(m, terms):
    """ADEPoly from [(lambda, [(exps, coeff), ...]), ...]."""
    return ADEPoly(m, [(lam, UPoly(m, dict(mono))) for lam, mono in terms])


def random_upoly(rng: random.Random, m: int, max_terms=3, max_exp=2, gaussian=True) -> UPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_exp) for _ in range(m + 1))
        im = rng.randint(-3, 3) if gaussian else 0
        terms[exps] = QComplex(rng.randint(-5, 5), im)
    return UPoly(m, terms)


def random_poly(rng: random.Random, m: int, max_p: int, max_terms=5) -> ADEPoly:
    items = []
    for _ in range(rng.randint(1, max_terms)):
        p = rng.randint(0, max_p)
        l2 = rng.randint(0, p)
        l1 = rng.randint(0, p - l2)
        items.append(((p - l1 - l2, l1, l2), random_upoly(rng, m)))
    return ADEPoly(m, items)


@pytest.fixture
def p128():
    return P128


@pytest.fixture
def p256():
    return P256


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
