#!/usr/bin/env python3
"""
Test tautological integrals on symmetric products and the Lagrange-Burmann sums
"""
from sympy import QQ

from invariants import InsertionPoly, a_sympl_poly_lb
from isoquot_errors import EllExceedsGenus, HomogeneityMismatch, TruncationTooShallow
from series import SeriesRing
from symprod import (
    LBInput, TautMonomial, Y_SYMBOLS, brute_force_g0, brute_force_theta, compositions, integrate_monomial,
    lb_theta_sum, make_R, phi_binomial_identity, phi_reduce, theta_reduce,
)


def test_reduction_rules():
    print("🧪 theta / phi reduction")
    assert theta_reduce(0, 0) == 1
    assert theta_reduce(2, 3) == 6
    assert theta_reduce(4, 3) == 0
    assert phi_reduce(2, 1) == -2
    assert phi_reduce(2, 2) == -1
    try:
        phi_reduce(4, 1)
        assert False, "phi^4 vanishes in genus 1"
    except EllExceedsGenus:
        pass
    for g in range(5):
        for ell in range(g + 1):
            left, right = phi_binomial_identity(ell, g)
            assert left == right, f"ell={ell} g={g}: {left} != {right}"
    print("✅ reduction rules ok")


def test_integrate_monomial():
    print("🧪 Tautological monomials")
    mono = TautMonomial(1, x=(1, 0), theta=(0, 1))
    assert integrate_monomial(mono, 2, (1, 1)) == 2
    assert integrate_monomial(mono, 2, (2, 1)) == 0
    assert integrate_monomial(TautMonomial(3, phi=1), 2, (1, 1)) == 0
    # phi^2 -> theta1 theta2 with factor -2 in genus 1
    assert integrate_monomial(TautMonomial(1, phi=2), 1, (1, 1)) == -2
    print("✅ integrals ok")


def test_compositions():
    assert compositions(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert compositions(3, 1) == [(3,)]
    assert len(compositions(4, 2)) == 5


def test_lb_matches_brute_force_rank1():
    print("🧪 Lagrange-Burmann vs direct expansion")
    y1 = Y_SYMBOLS[0]
    for d, degree, expected in ((0, 3, QQ(1, 4)), (1, 7, QQ(1, 4))):
        inp = LBInput(N=4, g=0, d=d, r=1, a=4, b=0, R=make_R(y1 ** degree, 1), w=(1,))
        assert inp.required_degree() == degree
        closed = lb_theta_sum(inp)
        direct = brute_force_theta(inp)
        status = "✅" if closed == direct == expected else "❌"
        print(f"{status} d={d}: {closed!r} / {direct!r}")
        assert closed == direct
        assert closed == expected


def test_lb_degree_check():
    y1 = Y_SYMBOLS[0]
    inp = LBInput(N=4, g=0, d=1, r=1, a=4, b=0, R=make_R(y1 ** 2, 1), w=(1,))
    try:
        lb_theta_sum(inp)
        assert False, "R of the wrong degree"
    except HomogeneityMismatch as e:
        assert e.details["required"] == 7


def test_pair_sum_route():
    print("🧪 Pair-sum route for a1^3 on N=4, g=0, d=0")
    assert a_sympl_poly_lb(4, 0, 0, InsertionPoly.monomial(3, 0)) == 2


def test_truncation_guard():
    ring = SeriesRing(("x1", "x2"), (1, 1))
    integrand = ring.one + ring.gen("x1")
    assert brute_force_g0(1, 0, integrand) == 1
    try:
        brute_force_g0(2, 0, integrand)
        assert False, "needs order 2 in x1"
    except TruncationTooShallow:
        pass


if __name__ == "__main__":
    print("🧮 symprod tests")
    print("=" * 60)
    test_reduction_rules()
    test_integrate_monomial()
    test_compositions()
    test_lb_matches_brute_force_rank1()
    test_lb_degree_check()
    test_pair_sum_route()
    test_truncation_guard()
    print("=" * 60)
    print("✅ All symprod tests passed")
