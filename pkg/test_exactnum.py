#!/usr/bin/env python3
"""
Test exact rationals, dense polynomials, residue rings and cyclotomic fields
"""
from sympy import QQ, symbols

from exactnum import (
    Polynomial, RationalFunction, ResidueRing, binomial_rational, cyclotomic_field, cyclotomic_poly,
    format_rational, invert_mod, is_integral, parse_rational, pow_mod, signed_power,
)
from isoquot_errors import InvalidQuery, NotInvertible


def test_rational_text_format():
    print("🧪 Rational formatting")
    assert format_rational(QQ(3, 6)) == "1/2"
    assert format_rational(QQ(-4, 2)) == "-2"
    assert format_rational(7) == "7"
    assert parse_rational("-3/9") == QQ(-1, 3)
    assert parse_rational(" 12 ") == QQ(12)
    assert is_integral(QQ(6, 3))
    assert not is_integral(QQ(1, 3))
    for bad in ("1/0", "x", "1.5"):
        try:
            parse_rational(bad)
            assert False, f"{bad!r} should not parse"
        except InvalidQuery:
            pass
    print("✅ format/parse ok")


def test_polynomial_arithmetic():
    print("🧪 Dense polynomials")
    p = Polynomial([1, 1])
    assert (p ** 2).coeffs == [1, 2, 1]
    assert (p ** 2)(2) == 9
    assert (p * p - Polynomial([1, 2])).coeffs == [0, 0, 1]
    q, r = divmod(Polynomial([2, 3, 1]), p)
    assert q.coeffs == [2, 1] and r.is_zero()
    assert Polynomial.monomial(3, 5).degree == 3
    print("✅ polynomial ring ok")


def test_cyclotomic_polynomials():
    print("🧪 Cyclotomic polynomials")
    assert cyclotomic_poly(1).coeffs == [-1, 1]
    assert cyclotomic_poly(4).coeffs == [1, 0, 1]
    assert cyclotomic_poly(6).coeffs == [1, -1, 1]
    assert cyclotomic_poly(12).coeffs == [1, 0, -1, 0, 1]
    assert cyclotomic_poly(8).degree == 4
    print("✅ Phi_N ok")


def test_cyclotomic_field():
    print("🧪 Q(zeta_4)")
    fld = cyclotomic_field(4)
    i = fld.root(1)
    assert i * i == -1
    assert fld.root(1) * fld.root(3) == 1
    assert fld.root(5) == i
    assert (i * i).is_rational() and (i * i).to_rational() == QQ(-1)
    assert not i.is_rational()
    assert invert_mod(fld.one + i) == (fld.one - i) / 2
    assert pow_mod(i, -1) == fld.root(3)
    assert fld.from_exponents({0: 1, 2: 1}) == 0
    print("✅ field arithmetic ok")


def test_zero_divisor_raises():
    print("🧪 Zero divisors")
    ring = ResidueRing(Polynomial([-1, 0, 1]))
    try:
        invert_mod(ring.gen - 1)
        assert False, "z - 1 is a zero divisor modulo z^2 - 1"
    except NotInvertible as e:
        assert e.code == "not_invertible"
    assert invert_mod(ring.gen) == ring.gen
    print("✅ NotInvertible raised")


def test_rational_function_at_roots():
    print("🧪 Rational functions at roots of unity")
    z1, z2 = symbols("z1 z2")
    G = RationalFunction.from_expr(z1 * z2 / (z1 + z2), [z1, z2])
    assert G.is_homogeneous() and G.degree() == 1
    fld = cyclotomic_field(4)
    assert G.evaluate_at_roots(fld, (0, 1)) == (fld.one + fld.root(1)) / 2
    try:
        G.evaluate_at_roots(fld, (0, 2))
        assert False, "z1 + z2 vanishes at (1, -1)"
    except NotInvertible:
        pass
    assert G.evaluate([QQ(1), QQ(3)], QQ.one) == QQ(3, 4)
    print("✅ evaluation ok")


def test_binomials_and_powers():
    print("🧪 Generalized binomials")
    assert binomial_rational(QQ(1, 2), 2) == QQ(-1, 8)
    assert binomial_rational(-1, 3) == -1
    assert binomial_rational(5, 0) == 1
    assert signed_power(2, -3) == QQ(1, 8)
    assert signed_power(-3, 3) == -27
    print("✅ binomials ok")


if __name__ == "__main__":
    print("🧮 exactnum tests")
    print("=" * 60)
    test_rational_text_format()
    test_polynomial_arithmetic()
    test_cyclotomic_polynomials()
    test_cyclotomic_field()
    test_zero_divisor_raises()
    test_rational_function_at_roots()
    test_binomials_and_powers()
    print("=" * 60)
    print("✅ All exactnum tests passed")
