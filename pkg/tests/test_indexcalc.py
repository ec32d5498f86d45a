import random

import pytest
from hypothesis import given, strategies as st

from adelab.indexcalc import (
    ADEPoly,
    CoeffTable,
    LambdaIndex,
    QComplex,
    UPoly,
    a_from_b,
    a_table,
    b_from_a,
    first_nonzero_b,
    homogeneous_parts,
    lambda_from_qr,
    reassemble,
    star_weight,
    upoly_eval,
)
from adelab.numkernel import DomainError, UnsupportedRegimeError

from conftest import P256, poly, random_poly, random_upoly

ONE = [((0,), 1)]


def const(m, c=1):
    return UPoly.constant(m, c)


def detdet():
    # v1^2 - v0 v2
    return poly(0, [((0, 2, 0), ONE), ((1, 0, 1), [((0,), -1)])])


# --- homogeneous parts --------------------------------------------------------

def test_parts_single_degree():
    P = poly(0, [((1, 1, 0), ONE), ((0, 0, 2), ONE)])
    assert [p for p, _ in homogeneous_parts(P)] == [2]


def test_parts_pure_u_term_has_degree_zero():
    P = poly(0, [((0, 0, 0), [((1,), 1)]), ((1, 0, 0), ONE)])
    parts = homogeneous_parts(P)
    assert [p for p, _ in parts] == [0, 1]


@pytest.mark.parametrize("seed", range(10))
def test_parts_reconstruct(seed):
    rng = random.Random(seed)
    P = random_poly(rng, 2, 6, max_terms=20)
    total = ADEPoly(2)
    for p, part in homogeneous_parts(P):
        assert all(lam.size == p for lam in part.coeffs)
        total = total + part
    assert total == P


def test_zero_polynomial():
    P = ADEPoly(1)
    assert P.is_zero() and P.L == -1
    assert homogeneous_parts(P) == []


# --- star weight and the (q, r) bijection ------------------------------------

@pytest.mark.parametrize("lam,ell,want", [((3, 0, 0), 2, 0), ((3, 0, 0), 5, 0), ((0, 2, 0), 2, 2), ((1, 0, 1), 2, 2)])
def test_star_weight(lam, ell, want):
    assert star_weight(LambdaIndex(*lam), ell) == want


def test_lambda_from_qr_examples():
    assert lambda_from_qr(2, 2, 1, 2) == LambdaIndex(1, 0, 1)
    assert lambda_from_qr(2, 2, 0, 2) == LambdaIndex(0, 2, 0)
    assert lambda_from_qr(1, 2, 0, 2) is None


def test_lambda_from_qr_rejects_ell_one():
    with pytest.raises(UnsupportedRegimeError):
        lambda_from_qr(2, 2, 0, 1)


@given(st.integers(0, 8), st.integers(0, 30), st.integers(0, 8), st.integers(2, 5))
def test_bijection(p, q, r, ell):
    lam = lambda_from_qr(p, q, r, ell)
    if lam is None:
        return
    assert lam.size == p
    assert star_weight(lam, ell) == q
    assert lam.l2 == r


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(2, 4))
def test_bijection_inverse(l0, l1, l2, ell):
    lam = LambdaIndex(l0, l1, l2)
    assert lambda_from_qr(lam.size, star_weight(lam, ell), l2, ell) == lam


def test_negative_lambda_rejected():
    with pytest.raises(DomainError):
        LambdaIndex(-1, 0, 0)


# --- tables -------------------------------------------------------------------

def test_a_table_determinant_example():
    t = a_table(detdet(), 2)
    assert (t.M, t.N) == (2, 1)
    assert t.get(2, 0) == const(0, 1)
    assert t.get(2, 1) == const(0, -1)
    assert set(t.entries) == {(2, 0), (2, 1)}


@pytest.mark.parametrize("p", [0, 1, 4])
def test_a_table_pure_power(p):
    t = a_table(poly(0, [((p, 0, 0), ONE)]), 3)
    assert t.entries == {(0, 0): const(0)}


def test_a_table_zero():
    assert a_table(ADEPoly(0), 2).is_zero()


def test_a_table_rejects_inhomogeneous():
    with pytest.raises(DomainError):
        a_table(poly(0, [((1, 0, 0), ONE), ((2, 0, 0), ONE)]), 2)


def _row_table(m, N, q=1):
    # a_{q,s} = distinct symbolic-looking constants so the binomials are visible
    rng = random.Random(N)
    return CoeffTable(N, 2, q, N, m, "A", {(q, s): random_upoly(rng, m) for s in range(N + 1)})


def test_b_transform_one_step():
    t = _row_table(1, 1)
    b = b_from_a(t)
    assert b.get(1, 0) == t.get(1, 0) + t.get(1, 1)
    assert b.get(1, 1) == t.get(1, 1)


def test_b_transform_two_steps():
    t = _row_table(1, 2)
    b = b_from_a(t)
    a0, a1, a2 = (t.get(1, s) for s in range(3))
    assert b.get(1, 0) == a0 + a1 + a2
    assert b.get(1, 1) == a1 + a2.scale(2)
    assert b.get(1, 2) == a2


def test_identity_table_unchanged():
    t = CoeffTable(0, 2, 0, 0, 0, "A", {(0, 0): const(0)})
    assert b_from_a(t).entries == t.entries


def test_transform_kind_checks():
    t = CoeffTable(0, 2, 0, 0, 0, "A", {(0, 0): const(0)})
    with pytest.raises(DomainError):
        a_from_b(t)
    with pytest.raises(DomainError):
        b_from_a(b_from_a(t))
    with pytest.raises(DomainError):
        first_nonzero_b(t)
    with pytest.raises(DomainError):
        CoeffTable(0, 2, 0, 0, 0, "C")


@pytest.mark.parametrize("seed", range(20))
def test_transform_round_trip(seed):
    rng = random.Random(seed)
    m, N, M = rng.randint(0, 2), rng.randint(0, 4), rng.randint(0, 5)
    entries = {(q, r): random_upoly(rng, m) for q in range(M + 1) for r in range(N + 1) if rng.random() < 0.6}
    t = CoeffTable(6, 3, M, N, m, "A", entries)
    assert a_from_b(b_from_a(t)) == t


def test_first_nonzero_b_examples():
    assert first_nonzero_b(b_from_a(a_table(detdet(), 2))) == (2, 1)
    assert first_nonzero_b(b_from_a(a_table(poly(0, [((2, 0, 0), ONE)]), 2))) == (0, 0)
    assert first_nonzero_b(b_from_a(a_table(ADEPoly(0), 2))) is None


def test_first_nonzero_b_prefers_high_q():
    P = poly(0, [((2, 0, 0), ONE), ((1, 1, 0), ONE), ((0, 2, 0), ONE)])
    assert first_nonzero_b(b_from_a(a_table(P, 2))) == (2, 0)


@pytest.mark.parametrize("seed", range(10))
def test_all_zero_iff_part_zero(seed):
    rng = random.Random(seed)
    P = random_poly(rng, 1, 4, max_terms=6)
    for p, part in homogeneous_parts(P):
        for ell in (2, 3):
            assert first_nonzero_b(b_from_a(a_table(part, ell, p))) is not None
    # cancelling a part against its negative leaves nothing
    neg = ADEPoly(1, [(lam, a.scale(-1)) for lam, a in P.coeffs.items()])
    assert (P + neg).is_zero()


@pytest.mark.parametrize("seed", range(12))
def test_reassemble(seed):
    rng = random.Random(100 + seed)
    m, ell = rng.randint(0, 2), rng.choice([2, 3])
    P = random_poly(rng, m, 6, max_terms=10)
    tables = [a_table(part, ell, p) for p, part in homogeneous_parts(P)]
    assert reassemble(tables, m) == P
    assert reassemble([b_from_a(t) for t in tables], m) == P


# --- evaluation ---------------------------------------------------------------

def test_upoly_eval_examples():
    ctx = P256.ctx
    assert upoly_eval(const(2, 7), [ctx.mpc(3, 1)] * 3, P256) == 7
    uu = UPoly(1, {(1, 1): 1})
    assert upoly_eval(uu, [2, ctx.mpc(3, 1)], P256) == ctx.mpc(6, 2)


def test_upoly_eval_arity():
    with pytest.raises(DomainError):
        upoly_eval(const(1), [1], P256)


@pytest.mark.parametrize("seed", range(10))
def test_upoly_eval_brute_force(seed):
    rng = random.Random(seed)
    ctx = P256.ctx
    a = random_upoly(rng, 2, max_terms=6, max_exp=4)
    pt = [ctx.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(3)]
    brute = ctx.mpc(0)
    for exps, c in a.terms.items():
        mono = ctx.mpc(1)
        for x, e in zip(pt, exps):
            for _ in range(e):
                mono = mono * x
        brute += ctx.mpc(P256.mpf(c.re), P256.mpf(c.im)) * mono
    assert abs(upoly_eval(a, pt, P256) - brute) < 1e-25


def test_qcomplex_exact():
    a = QComplex(1, 2)
    assert a * a == QComplex(-3, 4)
    assert (a / a) == QComplex(1)
    assert not QComplex()


def test_upoly_no_zero_terms():
    u = UPoly(0, {(1,): 1}) + UPoly(0, {(1,): -1})
    assert u.is_zero() and u.terms == {}
