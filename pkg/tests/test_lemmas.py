from fractions import Fraction
from math import comb

import pytest

from filiform.errors import DegenerateDenominator, IndexGuard, IndexOutOfRange
from filiform.exactmath import Polynomial
from filiform.family import enumerate_triples
from filiform.lemmas import (
    abc,
    alpha1_closed_form,
    alpha1_coefficient,
    alpha1_extracted,
    context,
    guarded_pairs,
    identity_guard,
    jacobi_coefficient_identity,
    max_step,
    proof_coeffs,
    vandermonde_alpha1,
    vandermonde_gamma1,
)
from filiform.series import Triple

T = Triple(4, 6, 10)
a1 = Polynomial.var("a_1")


def c(a, k):
    return comb(a, k) if 0 <= k <= a else 0


def ballot_sums(q, r):
    R = sum((c(r, k) - c(r, k - 1)) * c(q, k) for k in range(r // 2 + 1))
    S = sum((c(r, k) - c(r, k - 1)) * c(q, k - 1) for k in range(r // 2 + 1))
    return R, S


def test_context_values():
    ctx = context(T)
    assert (ctx.p, ctx.q, ctx.r) == (1, 2, 5)
    assert (ctx.sumR, ctx.sumS) == (14, 14)
    for n in range(6, 16):
        for t in enumerate_triples(n):
            if t.z2 == n - 1:
                with pytest.raises(IndexGuard):
                    context(t)
                continue
            ctx = context(t)
            assert ctx.p == 2 * n - t.z1 - 2 * t.z2 - 3
            assert (ctx.sumR, ctx.sumS) == ballot_sums(n - t.z2 - 2, n - t.z1 - 1)


def test_abc_at_m0():
    # with m = 0 the forms reduce to a0 = C(q-1,0)C(p,q) - C(p,q-1) - R, b0 = C(q-1,0)C(p,q+1) - C(p,q) - S
    for n in range(10, 15):
        for t in enumerate_triples(n):
            if t.z2 > n - 3:
                continue
            ctx = context(t)
            p, q = ctx.p, ctx.q
            if p < 0:
                continue
            a, b, cc = abc(ctx, 0)
            assert a == c(p, q) - c(p, q - 1) - ctx.sumR
            assert b == c(p, q + 1) - c(p, q) - ctx.sumS
            assert cc == 0


def test_abc_range():
    with pytest.raises(IndexOutOfRange):
        abc(context(T), 5)


def test_proof_coefficients_at_4_6_10():
    pc = proof_coeffs(context(T))
    assert (pc.a0, pc.b0, pc.a1, pc.b1, pc.c1) == (-15, -14, -32, -48, -15)
    assert pc.a_prime == 2 * pc.a0 - pc.a1 == 2
    assert pc.b_prime == 2 * pc.b0 - pc.b1 == 20
    # p - q + 1 = 0 here, so two simplified forms are undefined
    assert pc.degenerate == ["a0", "c1"]
    assert pc.agree
    with pytest.raises(DegenerateDenominator):
        proof_coeffs(context(T), strict=True)


def test_simplified_forms_agree_across_region():
    from filiform.family import enumerate_empty_region

    for n in range(10, 30):
        for t in enumerate_empty_region(n):
            pc = proof_coeffs(context(t))
            assert pc.agree, t
            assert pc.a_prime == (context(t).p + 1) * pc.a0 - pc.a1


def test_alpha1_closed_form_versus_extraction():
    assert alpha1_extracted(T) == -30 * a1 ** 2
    assert alpha1_closed_form(T) == -37 * a1 ** 2
    assert not alpha1_coefficient(T).ok
    assert alpha1_coefficient(T, corrected=True).ok


def test_corrected_alpha1_matches_extraction():
    checked = 0
    for n in range(8, 17):
        for t in enumerate_triples(n):
            if t.z2 > n - 3 or context(t).p < 0 or context(t).p + 4 > n:
                continue
            v = alpha1_coefficient(t, corrected=True)
            assert v.ok, (t, v)
            assert v.actual != 0
            checked += 1
    assert checked == 57


def test_alpha1_guard():
    with pytest.raises(IndexGuard):
        alpha1_closed_form(Triple(4, 8, 10))


def test_identity_guard():
    assert identity_guard(T, 0, 1) is None
    assert identity_guard(T, 9, 1) is not None
    assert identity_guard(T, 0, 3) is not None
    assert identity_guard(Triple(4, 8, 10), 0, 1) is not None
    assert max_step(T) == 2
    assert guarded_pairs(T) == [(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2)]
    with pytest.raises(IndexGuard):
        jacobi_coefficient_identity(T, 9, 1)


def test_coefficient_identity_first_step():
    g1, a2 = Polynomial.var("g_1"), Polynomial.var("a_2")
    v = jacobi_coefficient_identity(T, 0, 1)
    assert v.ok
    assert v.actual == -15 * g1 ** 2 - 14 * g1 * a2


def test_coefficient_identity_departures_are_recorded():
    # the predicted middle coefficient at m = 1 is -48; expansion gives -46
    g1, a2 = Polynomial.var("g_1"), Polynomial.var("a_2")
    v = jacobi_coefficient_identity(T, 1, 1)
    assert not v.ok
    assert v.actual == -32 * g1 ** 2 - 46 * g1 * a2 - 15 * a2 ** 2
    assert v.expected == -32 * g1 ** 2 - 48 * g1 * a2 - 15 * a2 ** 2
    assert v.as_dict()["pass"] is False


def test_narrow_and_full_fag_agree_on_identities():
    for m, k in guarded_pairs(T):
        assert (
            jacobi_coefficient_identity(T, m, k, full_range=True).actual
            == jacobi_coefficient_identity(T, m, k, full_range=False).actual
        )


@pytest.mark.parametrize("t", [(4, 6, 10), (5, 7, 12), (4, 7, 12), (5, 8, 13)])
def test_vandermonde(t):
    t = Triple(*t)
    for k in range(1, max_step(t) + 1):
        assert vandermonde_alpha1(t, k).ok
        assert vandermonde_gamma1(t, k).ok
