from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from adelab.diffpoly import (
    DiffPolynomial,
    eval_diffpoly,
    extract_cn,
    formal_derive,
    gamma_ratio_poly,
    jet_var,
)
from adelab.diffpoly import render
from adelab.numkernel import DomainError, InsufficientJetError
from adelab.specfun import digamma_jet, gamma_ratio_eval

from conftest import P128
from oracles import bell_triangle, partitions

f0, f1, f2, f3 = (jet_var(j) for j in range(4))

GOLDEN = {
    0: DiffPolynomial.constant(1),
    1: f0,
    2: f1 + f0 ** 2,
    3: f2 + 3 * f0 * f1 + f0 ** 3,
    4: f3 + 4 * f0 * f2 + 3 * f1 ** 2 + 6 * f0 ** 2 * f1 + f0 ** 4,
    5: (jet_var(4) + 5 * f0 * f3 + 10 * f1 * f2 + 10 * f0 ** 2 * f2 + 15 * f0 * f1 ** 2
        + 10 * f0 ** 3 * f1 + f0 ** 5),
}


@pytest.mark.parametrize("n", sorted(GOLDEN))
def test_golden_ratio_polys(n):
    assert gamma_ratio_poly(n) == GOLDEN[n]


def test_render_order():
    assert render(gamma_ratio_poly(4)) == "f''' + 4*f*f'' + 3*(f')^2 + 6*f^2*f' + f^4"
    assert render(DiffPolynomial()) == "0"
    assert "1/2" in render(-2 * f1 + Fraction(1, 2))


@pytest.mark.parametrize("n", range(1, 31))
def test_cn_is_triangular(n):
    assert extract_cn(n) == Fraction(n * (n - 1), 2)


def test_cn_domain():
    with pytest.raises(DomainError):
        extract_cn(0)
    with pytest.raises(DomainError):
        gamma_ratio_poly(-1)


@pytest.mark.parametrize("n", range(0, 26))
def test_weight_homogeneous(n):
    assert {m.weight for m in gamma_ratio_poly(n).monomials()} == ({n} if n else {0})


def test_term_count_is_partition_number():
    for n in range(0, 21):
        assert len(gamma_ratio_poly(n)) == partitions(n)


def test_bell_sums():
    bell = bell_triangle(15)
    for n in range(0, 16):
        assert sum(gamma_ratio_poly(n).terms.values()) == bell[n]
        assert all(c > 0 for c in gamma_ratio_poly(n).terms.values())


def test_recurrence():
    for n in range(0, 12):
        assert gamma_ratio_poly(n + 1) == formal_derive(gamma_ratio_poly(n)) + f0 * gamma_ratio_poly(n)


_small = st.builds(
    lambda cs: sum((Fraction(c) * jet_var(j) ** e for c, j, e in cs), DiffPolynomial()),
    st.lists(st.tuples(st.integers(-5, 5), st.integers(0, 3), st.integers(0, 3)), max_size=4),
)


@given(_small, _small)
def test_derivation_leibniz(a, b):
    assert formal_derive(a * b) == formal_derive(a) * b + a * formal_derive(b)
    assert formal_derive(a + b) == formal_derive(a) + formal_derive(b)


def test_derive_constant_is_zero():
    assert formal_derive(DiffPolynomial.constant(7)).is_zero()


def test_eval_all_ones_gives_bell():
    assert eval_diffpoly(gamma_ratio_poly(5), [1] * 5, P128) == 52


def test_eval_matches_gamma_ratio():
    z = P128.mpc("2+7i")
    jet = digamma_jet(z, 5, P128)
    (ref,) = gamma_ratio_eval(z, [6], P128)
    assert abs(eval_diffpoly(gamma_ratio_poly(6), jet, P128) - ref) < 1e-30 * abs(ref)


def test_insufficient_jet():
    with pytest.raises(InsufficientJetError):
        eval_diffpoly(gamma_ratio_poly(4), [1, 1, 1], P128)


def test_jet_var_domain():
    with pytest.raises(DomainError):
        jet_var(-1)
