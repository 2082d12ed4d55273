#!/usr/bin/env python3
"""
Test GRW invariants of SG(2, 2n) and OG(2, 2n+2) and the Jacobian identity
"""
from grw import (
    OG, SG, GrassmannianTarget, RingRelationData, grw_equals_quot, grw_og, grw_sg, jacobian_identity_check,
    jacobian_identity_check_og,
)
from isoquot_errors import DegreeMismatch, InvalidQuery, UnreachableRegime, UnsupportedRegime


def test_target_validation():
    print("🧪 Targets")
    assert GrassmannianTarget(SG, 2, 1, 1).expected_dimension() == 3
    assert GrassmannianTarget(SG, 2, 1, 1).N == 4
    assert GrassmannianTarget(OG, 3, 1, 0).N == 8
    try:
        GrassmannianTarget(OG, 2, 0, 0)
        assert False, "OG(2, 6) is out of range"
    except UnsupportedRegime:
        pass
    try:
        GrassmannianTarget("lg", 2, 0, 0)
        assert False
    except InvalidQuery:
        pass
    print("✅ targets ok")


def test_grw_sg_values():
    print("🧪 SG(2, 2n) invariants")
    cases = [
        ((2, 1, 0, 0, 0), 4),
        ((3, 1, 0, 0, 0), 12),
        ((2, 2, 1, 0, 0), 16),
        ((2, 1, 1, 3, 0), 12),
    ]
    for args, expected in cases:
        value = grw_sg(*args)
        status = "✅" if value == expected else "❌"
        print(f"{status} grw_sg{args} = {value} (expected {expected})")
        assert value == expected
    assert grw_equals_quot(SG, 2, 1, 1, 3, 0) == (12, 12)


def test_grw_regimes():
    try:
        grw_sg(3, 2, 0, 0, 0)
        assert False, "d < g with n = 3 is unreachable"
    except UnreachableRegime as e:
        assert e.details == {"n": 3, "g": 2, "d": 0}
    try:
        grw_sg(2, 1, 1, 1, 0)
        assert False
    except DegreeMismatch as e:
        assert e.details["ed"] == 3
    try:
        grw_og(3, 1, 0, 0, 0)
        assert False, "OG closed form needs d >= g"
    except UnsupportedRegime:
        pass


def test_ring_relations():
    data = RingRelationData.build(3)
    assert [str(v) for v in data.variables] == ["a1", "a2", "b1"]
    assert len(data.relations) == 3
    try:
        RingRelationData.build(1)
        assert False
    except InvalidQuery:
        pass


def test_jacobian_identity():
    print("🧪 Jacobian identity at the reduced points")
    assert jacobian_identity_check(2) is True
    assert jacobian_identity_check_og(2) is True
    print("✅ Jacobian ok")


if __name__ == "__main__":
    print("🧮 grw tests")
    print("=" * 60)
    test_target_validation()
    test_grw_sg_values()
    test_grw_regimes()
    test_ring_relations()
    test_jacobian_identity()
    print("=" * 60)
    print("✅ All grw tests passed")
