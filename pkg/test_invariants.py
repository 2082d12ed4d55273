#!/usr/bin/env python3
"""
Test isotropic Quot invariants: symplectic closed forms, symmetric family, rank one
"""
from sympy import QQ

from exactnum import signed_power
from invariants import (
    SYMPLECTIC, InsertionPoly, QuotFamily, a_rank1_symm, a_symm_r2, a_symm_r2_monomial, a_sympl, a_sympl_poly,
    duality_check, g1_generating_check, i2_closed, i2_second_kind, nonstandard_virtual_integral, symmetric_flags,
    t_dg, virtual_dim,
)
from isoquot_errors import DegreeMismatch, HypothesisViolated, InvalidQuery, UnsupportedFamily


def test_insertion_grammar():
    print("🧪 Insertion polynomials")
    Q = InsertionPoly.parse("2:3:0; -1/2:1:1")
    assert Q.terms == ((QQ(2), 3, 0), (QQ(-1, 2), 1, 1))
    assert Q.weighted_degree() == 3
    assert Q.at_one_zero() == 2
    assert str(Q) == "2:3:0;-1/2:1:1"
    for bad in ("", "2:3", "a:1:1"):
        try:
            InsertionPoly.parse(bad)
            assert False, f"{bad!r} should be rejected"
        except InvalidQuery:
            pass
    try:
        InsertionPoly.parse("1:2:0;1:1:0").weighted_degree()
        assert False, "mixed degrees"
    except DegreeMismatch:
        pass
    print("✅ grammar ok")


def test_family_validation():
    try:
        QuotFamily(SYMPLECTIC, 4, 1, 0, 0)
        assert False, "rank-1 symplectic is not a family here"
    except UnsupportedFamily:
        pass
    try:
        QuotFamily("hermitian", 4, 2, 0, 0)
        assert False
    except InvalidQuery:
        pass
    assert virtual_dim(QuotFamily(SYMPLECTIC, 4, 2, 1, 1)) == 3
    assert virtual_dim(QuotFamily(SYMPLECTIC, 6, 2, 0, 1)) == 12


def test_t_dg():
    assert t_dg(4, 0, 3) == 1
    assert t_dg(4, 2, 1) == QQ(1, 2)
    assert t_dg(4, 2, 5) == QQ(9, 16)


def test_n4_closed_form():
    print("🧪 N=4 closed form")
    for g in range(3):
        gbar = g - 1
        for d in range(3):
            vd = 3 * d - 3 * gbar
            for m2 in range(vd // 2 + 1):
                m1 = vd - 2 * m2
                if vd > 0:
                    expected = signed_power(2, 2 * d - m2 - gbar) * 3 ** g
                else:
                    expected = signed_power(2, gbar) * (3 ** g + (-1) ** (gbar % 2))
                value = a_sympl(4, g, d, m1, m2)
                status = "✅" if value == expected else "❌"
                print(f"{status} g={g} d={d} a1^{m1} a2^{m2}: {value} (expected {expected})")
                assert value == expected


def test_symplectic_examples():
    assert a_sympl(4, 0, 0, 3, 0) == 2
    assert a_sympl(4, 0, 0, 1, 1) == 1
    assert a_sympl(4, 1, 1, 3, 0) == 12
    Q = InsertionPoly.parse("1:3:0;3:1:1")
    assert a_sympl_poly(4, 0, 0, Q) == 5
    try:
        a_sympl(4, 0, 0, 2, 0)
        assert False, "a1^2 has the wrong degree"
    except DegreeMismatch as e:
        assert e.details["vd"] == 3


def test_g1_generating_function():
    assert g1_generating_check(4, 0) == 4
    assert a_sympl(4, 1, 0, 0, 0) == 4
    for d in range(3):
        assert g1_generating_check(4, d) == a_sympl(4, 1, d, 3 * d, 0)


def test_duality_example():
    left, right = duality_check(4, 0, 0, 3, 0)
    assert left == right == 8
    try:
        duality_check(4, 2, 0, 1, 0)
    except (HypothesisViolated, DegreeMismatch):
        pass
    else:
        assert False


def test_symmetric_family():
    print("🧪 Symmetric rank 2")
    a1_5 = InsertionPoly.monomial(5, 0)
    assert a_symm_r2(6, 0, 0, a1_5) == 20
    assert a_symm_r2_monomial(6, 0, 0, 5, 0) == 20
    assert a_symm_r2(6, 0, 0, InsertionPoly.monomial(3, 1)) == 8
    assert a_symm_r2_monomial(6, 0, 0, 3, 1) == 8
    assert i2_closed(6, 0, 0, a1_5) == 4
    assert i2_second_kind(6, 0, 0, a1_5) == 4
    assert symmetric_flags(6, 1, 0) == ["small_n_unasserted", "unverified_regime"]
    assert symmetric_flags(10, 1, 2) == []
    print("✅ symmetric ok")


def test_rank1_symmetric():
    assert a_rank1_symm(4, 0, 0) == 2
    assert a_rank1_symm(6, 1, 1) == 16
    for N in (4, 6, 8):
        for g in range(3):
            for d in range(g, g + 3):
                assert a_rank1_symm(N, g, d) == QQ(N - 2) ** g * signed_power(2, 2 * d - g + 1)


def test_nonstandard_virtual_integral():
    assert nonstandard_virtual_integral(0, 1) == 4
    assert nonstandard_virtual_integral(2, 1) == -4
    assert nonstandard_virtual_integral(1, 0) == 1


if __name__ == "__main__":
    print("🧮 invariants tests")
    print("=" * 60)
    test_insertion_grammar()
    test_family_validation()
    test_t_dg()
    test_n4_closed_form()
    test_symplectic_examples()
    test_g1_generating_function()
    test_duality_example()
    test_symmetric_family()
    test_rank1_symmetric()
    test_nonstandard_virtual_integral()
    print("=" * 60)
    print("✅ All invariants tests passed")
