#!/usr/bin/env python3
"""
Test the f-class series engine and its m=1 closed form
"""
from fclass import PairContext, _context, apply_delta_u, build_B, build_T, f2_closed_m1, f2_intersect
from invariants import InsertionPoly, a_sympl_poly
from isoquot_errors import DegreeMismatch, NonUnitDenominator


def test_pair_context():
    print("🧪 Pair context")
    ctx = _context(4, 1, 0, 1)
    q1 = ctx.ring.gen("q1")
    assert ctx.y_power(0, 4) == ctx.ring.one + q1
    assert build_T(ctx, 0) == ctx.ring.one
    try:
        _context(4, 1, 0, 2)
        assert False, "w1 = -w2 must be rejected"
    except NonUnitDenominator:
        pass
    print("✅ context ok")


def test_delta_identity_and_t_degree():
    e = build_B(4, 0, 0, InsertionPoly.monomial(3, 0), 0, 1)
    assert apply_delta_u(e, 0) is e
    e.check_t_degree()
    assert isinstance(e.ctx, PairContext)


def test_m0_reduces_to_pair_form():
    print("🧪 f2^0 agrees with the pair-sum closed form")
    for Q in (InsertionPoly.monomial(3, 0), InsertionPoly.monomial(1, 1)):
        value = f2_intersect(4, 0, 0, 0, Q)
        expected = a_sympl_poly(4, 0, 0, Q)
        status = "✅" if value == expected else "❌"
        print(f"{status} Q={Q}: {value} / {expected}")
        assert value == expected


def test_f2_vanishes_in_degree_zero():
    Q = InsertionPoly.monomial(2, 0)
    assert f2_intersect(4, 0, 0, 1, Q) == 0
    assert f2_closed_m1(4, 0, 0, Q) == 0


def test_degree_mismatch():
    try:
        f2_intersect(4, 0, 0, 1, InsertionPoly.monomial(3, 0))
        assert False, "f2 a1^3 has degree 4 but vd = 3"
    except DegreeMismatch:
        pass


if __name__ == "__main__":
    print("🧮 fclass tests")
    print("=" * 60)
    test_pair_context()
    test_delta_identity_and_t_degree()
    test_m0_reduces_to_pair_form()
    test_f2_vanishes_in_degree_zero()
    test_degree_mismatch()
    print("=" * 60)
    print("✅ All fclass tests passed")
