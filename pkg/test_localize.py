#!/usr/bin/env python3
"""
Test genus-0 localization: fixed loci, the intersection oracle and Euler characteristics
"""
from sympy import QQ

from invariants import SYMMETRIC, SYMPLECTIC, InsertionPoly, a_symm_r2, a_sympl
from isoquot_errors import DegreeMismatch, InvalidQuery
from localize import (
    WeightAssignment, enumerate_fixed_loci, etop_series, evir_series, intersect_oracle_g0, inverse_euler_g0,
    locus_count, moving_factors, virtual_dim_g0, weight_independence_check,
)


def test_fixed_loci():
    print("🧪 Fixed loci")
    for (N, r, d), expected in (((4, 2, 0), 4), ((4, 2, 1), 8), ((6, 2, 0), 12), ((4, 1, 3), 4)):
        loci = enumerate_fixed_loci(N, r, d)
        assert len(loci) == locus_count(N, r, d) == expected
        assert all(lc.d == d and lc.r == r for lc in loci)
    try:
        enumerate_fixed_loci(4, 3, 0)
        assert False, "r > n"
    except InvalidQuery:
        pass
    print("✅ loci ok")


def test_weights():
    assert WeightAssignment.default(4).w == (1, 2, -1, -2)
    assert WeightAssignment.shifted(6).w == (2, 3, 4, -2, -3, -4)
    for bad in ((1, 2, 3), (1, 1, -1, -1), (1, 2, -1, 2)):
        try:
            WeightAssignment(bad)
            assert False, f"{bad} should be rejected"
        except InvalidQuery:
            pass


def test_virtual_dimension():
    assert virtual_dim_g0(4, 2, 0, SYMPLECTIC) == 3
    assert virtual_dim_g0(4, 2, 1, SYMPLECTIC) == 6
    assert virtual_dim_g0(6, 2, 0, SYMMETRIC) == 5
    assert virtual_dim_g0(4, 1, 0, SYMMETRIC) == 2


def test_inverse_euler_constant():
    weights = WeightAssignment.default(4)
    locus = enumerate_fixed_loci(4, 2, 0)[0]
    assert locus.positions == (0, 1)
    assert len(moving_factors(locus, SYMPLECTIC, weights, QQ(1))) == 9
    inv = inverse_euler_g0(locus, SYMPLECTIC, weights, QQ(1))
    assert inv.coefficient((0, 0)) == QQ(1, 24)


def test_oracle_matches_closed_forms():
    print("🧪 Localization oracle")
    cases = [
        (dict(N=4, d=0, Q=InsertionPoly.monomial(3, 0)), 2),
        (dict(N=4, d=0, Q=InsertionPoly.monomial(1, 1)), 1),
        (dict(N=4, d=1, Q=InsertionPoly.monomial(6, 0)), a_sympl(4, 0, 1, 6, 0)),
        (dict(N=4, d=0, Q=InsertionPoly.monomial(2, 0), family=SYMMETRIC, r=1), 2),
        (dict(N=6, d=0, Q=InsertionPoly.monomial(5, 0), family=SYMMETRIC), 20),
        (dict(N=6, d=0, Q=InsertionPoly.monomial(3, 1), family=SYMMETRIC), 8),
    ]
    for kwargs, expected in cases:
        value = intersect_oracle_g0(**kwargs)
        status = "✅" if value == expected else "❌"
        print(f"{status} {kwargs}: {value} (expected {expected})")
        assert value == expected
    try:
        intersect_oracle_g0(4, 0, InsertionPoly.monomial(2, 0))
        assert False
    except DegreeMismatch as e:
        assert e.details["vd"] == 3


def test_symmetric_oracle_positive_degree():
    print("🧪 Symmetric rank 2 at d=1")
    for Q in (InsertionPoly.monomial(8, 0), InsertionPoly.monomial(4, 2)):
        value = intersect_oracle_g0(6, 1, Q, SYMMETRIC, 2)
        expected = a_symm_r2(6, 0, 1, Q)
        status = "✅" if value == expected else "❌"
        print(f"{status} Q={Q}: {value} / {expected}")
        assert value == expected


def test_locus_data_is_shared():
    weights = WeightAssignment.default(6)
    locus = enumerate_fixed_loci(6, 2, 1)[0]
    assert enumerate_fixed_loci(6, 2, 1) == enumerate_fixed_loci(6, 2, 1)
    first = inverse_euler_g0(locus, SYMMETRIC, weights, QQ(1, 7))
    assert inverse_euler_g0(locus, SYMMETRIC, weights, QQ(1, 7)) is first
    assert moving_factors(locus, SYMMETRIC, weights, QQ(1, 7)) is moving_factors(locus, SYMMETRIC, weights, QQ(1, 7))


def test_euler_series():
    print("🧪 Euler characteristics")
    assert evir_series(4, 2, 1) == [4, 16]
    assert etop_series(4, 2, 0, 3) == [4, 16, 40, 80]
    left, right = weight_independence_check(4, 2, 0)
    assert left == right == 4
    try:
        evir_series(4, 2, -1)
        assert False
    except InvalidQuery:
        pass
    print("✅ Euler ok")


if __name__ == "__main__":
    print("🧮 localize tests")
    print("=" * 60)
    test_fixed_loci()
    test_weights()
    test_virtual_dimension()
    test_inverse_euler_constant()
    test_oracle_matches_closed_forms()
    test_symmetric_oracle_positive_degree()
    test_locus_data_is_shared()
    test_euler_series()
    print("=" * 60)
    print("✅ All localize tests passed")
