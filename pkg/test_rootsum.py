#!/usr/bin/env python3
"""
Test sums over roots of unity: trace engine, enumeration engine, pair sums
"""
import os

from sympy import QQ

from isoquot_errors import DenominatorVanishesAtPair, DenominatorVanishesAtRoot
from rootsum import (
    Z, Z1, Z2, RootExclusionSet, admissible_pairs, power_sum, sum_over_pairs, sum_over_roots_enumerated,
    sum_rational_over_roots,
)


def test_root_set_and_power_sums():
    print("🧪 Root set and power sums")
    assert RootExclusionSet(4).exponents() == [1, 3]
    assert RootExclusionSet(6).count == 4
    assert [power_sum(4, k) for k in range(5)] == [2, 0, -2, 0, 2]
    assert power_sum(6, 3) == 0
    assert power_sum(6, 6) == 4
    print("✅ power sums ok")


def test_engines_agree():
    print("🧪 Trace engine vs enumeration")
    cases = [
        (4, Z ** 2, QQ(-2)),
        (4, 1 / (Z - 2), QQ(-4, 5)),
        (6, Z ** 3, QQ(0)),
    ]
    for N, F, expected in cases:
        trace_value = sum_rational_over_roots(N, F)
        enum_value = sum_over_roots_enumerated(N, F)
        status = "✅" if trace_value == enum_value == expected else "❌"
        print(f"{status} N={N} F={F}: {trace_value} / {enum_value}")
        assert trace_value == enum_value == expected
    for N in (6, 8, 10):
        F = (3 * Z ** 2 - Z + 5) / (Z ** 3 + 4)
        assert sum_rational_over_roots(N, F) == sum_over_roots_enumerated(N, F)


def test_pole_at_root():
    print("🧪 Poles")
    try:
        sum_rational_over_roots(4, 1 / (Z ** 2 + 1))
        assert False, "z^2 + 1 vanishes at i"
    except DenominatorVanishesAtRoot as e:
        assert e.details["N"] == 4
    try:
        sum_over_pairs(6, 1 / (Z1 - Z2 ** 2))
        assert False, "z1 = z2^2 happens for some admissible pair"
    except DenominatorVanishesAtPair:
        pass
    print("✅ poles reported")


def test_pair_sums():
    print("🧪 Pair sums")
    assert admissible_pairs(4) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    for N in (4, 6, 8):
        assert sum_over_pairs(N, 1) == N * (N - 2) // 2
    assert sum_over_pairs(4, (Z1 * Z2) ** 2) == -4
    print("✅ pair sums ok")


def test_pair_sums_with_workers():
    print("🧪 Pair sums through worker processes")
    previous = os.environ.get("ISOQUOT_THREADS")
    os.environ["ISOQUOT_THREADS"] = "2"
    try:
        assert sum_over_pairs(8, (Z1 + Z2) ** 2 * Z1 * Z2) == sum_over_pairs(8, (Z1 + Z2) ** 2 * Z1 * Z2, threads=1)
    finally:
        if previous is None:
            os.environ.pop("ISOQUOT_THREADS", None)
        else:
            os.environ["ISOQUOT_THREADS"] = previous
    print("✅ parallel sum ok")


if __name__ == "__main__":
    print("🧮 rootsum tests")
    print("=" * 60)
    test_root_set_and_power_sums()
    test_engines_agree()
    test_pole_at_root()
    test_pair_sums()
    test_pair_sums_with_workers()
    print("=" * 60)
    print("✅ All rootsum tests passed")
