"""
Exact scalar arithmetic for the isoquot engines.

Rationals are sympy ``QQ`` elements (gmpy2-backed when gmpy2 is installed).
Univariate polynomials are dense; residue rings Q[z]/(m) and the cyclotomic
fields Q(zeta_N) = Q[z]/(Phi_N) are built on sympy's dense routines, so every
value here is exact and immutable.
"""
import logging
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from sympy import QQ, Poly, Rational, divisors, fraction, sympify, together
from sympy.polys.densearith import (
    dup_add, dup_sub, dup_mul, dup_neg, dup_rem, dup_mul_ground, dup_quo_ground, dup_div, dup_exquo,
)
from sympy.polys.densebasic import dup_strip
from sympy.polys.euclidtools import dup_invert
from sympy.polys.polyerrors import NotInvertible as SympyNotInvertible

from isoquot_errors import InvalidQuery, NotInvertible

logger = logging.getLogger(__name__)


# =========================
# Rationals
# =========================
def to_rational(value: Any):
    """Coerce ints, "p/q" strings, sympy Rationals and QQ elements to QQ."""
    if isinstance(value, bool):
        raise InvalidQuery(f"not a rational: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, ResidueElement):
        return value.to_rational()
    try:
        return QQ.convert(value)
    except Exception:
        try:
            return QQ.from_sympy(Rational(value))
        except Exception as e:
            raise InvalidQuery(f"not a rational: {value!r}") from e


def format_rational(value: Any) -> str:
    """'p/q' in lowest terms with the sign on p, or 'p' when integral."""
    x = to_rational(value)
    p, q = int(QQ.numer(x)), int(QQ.denom(x))
    return str(p) if q == 1 else f"{p}/{q}"


def parse_rational(text: str):
    raw = text.strip()
    try:
        if "/" in raw:
            p, q = raw.split("/", 1)
            if int(q) == 0:
                raise ValueError("zero denominator")
            return QQ(int(p), int(q))
        return QQ(int(raw))
    except ValueError as e:
        raise InvalidQuery(f"cannot parse rational {text!r}: {e}") from e


def is_integral(value: Any) -> bool:
    return QQ.denom(to_rational(value)) == 1


# =========================
# Dense univariate polynomials
# =========================
class Polynomial:
    """Dense polynomial over QQ. ``coeffs`` are lowest degree first."""

    __slots__ = ("rep",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        # sympy's dup layout is highest degree first
        self.rep = dup_strip([to_rational(c) for c in reversed(list(coeffs))])

    @classmethod
    def from_dup(cls, rep: Sequence[Any]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.rep = dup_strip(list(rep))
        return obj

    @classmethod
    def monomial(cls, k: int, c: Any = 1) -> "Polynomial":
        return cls.from_dup([to_rational(c)] + [QQ.zero] * k)

    @property
    def coeffs(self) -> List[Any]:
        return list(reversed(self.rep))

    @property
    def degree(self) -> int:
        return len(self.rep) - 1

    def is_zero(self) -> bool:
        return not self.rep

    def _other(self, other) -> List[Any]:
        if isinstance(other, Polynomial):
            return other.rep
        return dup_strip([to_rational(other)])

    def __add__(self, other):
        return Polynomial.from_dup(dup_add(self.rep, self._other(other), QQ))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial.from_dup(dup_sub(self.rep, self._other(other), QQ))

    def __rsub__(self, other):
        return Polynomial.from_dup(dup_sub(self._other(other), self.rep, QQ))

    def __mul__(self, other):
        return Polynomial.from_dup(dup_mul(self.rep, self._other(other), QQ))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial.from_dup(dup_neg(self.rep, QQ))

    def __pow__(self, e: int):
        result = Polynomial([1])
        for _ in range(e):
            result = result * self
        return result

    def __divmod__(self, other: "Polynomial"):
        q, r = dup_div(self.rep, other.rep, QQ)
        return Polynomial.from_dup(q), Polynomial.from_dup(r)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.rep == other.rep
        try:
            return self.rep == self._other(other)
        except InvalidQuery:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self.rep))

    def __call__(self, x):
        """Horner evaluation at any ring element supporting + and *."""
        acc = x * 0
        for c in self.rep:
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({[format_rational(c) for c in self.coeffs]})"


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> Polynomial:
    """Phi_N, obtained by dividing z^N - 1 by Phi_d for every proper divisor d."""
    if N < 1:
        raise ValueError(f"cyclotomic_poly needs N >= 1, got {N}")
    rep = [QQ.one] + [QQ.zero] * (N - 1) + [-QQ.one]
    for d in divisors(N):
        if d < N:
            rep = dup_exquo(rep, cyclotomic_poly(d).rep, QQ)
    return Polynomial.from_dup(rep)


# =========================
# Residue rings
# =========================
class ResidueRing:
    """Q[z]/(modulus)."""

    def __init__(self, modulus: Polynomial):
        if modulus.degree < 1:
            raise ValueError("modulus must have positive degree")
        self.modulus = modulus
        self.mod = modulus.rep

    def reduce(self, rep: List[Any]) -> List[Any]:
        if len(rep) < len(self.mod):
            return dup_strip(rep)
        return dup_rem(rep, self.mod, QQ)

    def _element(self, rep: List[Any]) -> "ResidueElement":
        return ResidueElement(rep, self)

    def __call__(self, value: Any) -> "ResidueElement":
        if isinstance(value, ResidueElement):
            if value.ring != self:
                raise ValueError("element belongs to a different residue ring")
            return value
        if isinstance(value, Polynomial):
            return self._element(self.reduce(value.rep))
        return self._element(dup_strip([to_rational(value)]))

    convert = __call__

    @property
    def zero(self) -> "ResidueElement":
        return self._element([])

    @property
    def one(self) -> "ResidueElement":
        return self._element([QQ.one])

    @property
    def gen(self) -> "ResidueElement":
        return self._element(self.reduce([QQ.one, QQ.zero]))

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and self.mod == other.mod

    def __hash__(self):
        return hash(tuple(self.mod))

    def __repr__(self):
        return f"ResidueRing({self.modulus!r})"


class ResidueElement:
    """Fully reduced residue of a polynomial modulo the ring's modulus."""

    __slots__ = ("rep", "ring")

    def __init__(self, rep: List[Any], ring: ResidueRing):
        self.rep = rep
        self.ring = ring

    def _new(self, rep):
        return self.ring._element(rep)

    def _other(self, other) -> List[Any]:
        if isinstance(other, ResidueElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("mixing elements of different residue rings")
            return other.rep
        return dup_strip([to_rational(other)])

    @property
    def representative(self) -> Polynomial:
        return Polynomial.from_dup(self.rep)

    def __add__(self, other):
        return self._new(dup_add(self.rep, self._other(other), QQ))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(dup_sub(self.rep, self._other(other), QQ))

    def __rsub__(self, other):
        return self._new(dup_sub(self._other(other), self.rep, QQ))

    def __neg__(self):
        return self._new(dup_neg(self.rep, QQ))

    def __mul__(self, other):
        if not isinstance(other, ResidueElement):
            return self._new(dup_mul_ground(self.rep, to_rational(other), QQ))
        return self._new(self.ring.reduce(dup_mul(self.rep, self._other(other), QQ)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ResidueElement):
            c = to_rational(other)
            if not c:
                raise NotInvertible("division by zero scalar")
            return self._new(dup_quo_ground(self.rep, c, QQ))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * to_rational(other)

    def inverse(self) -> "ResidueElement":
        return invert_mod(self)

    def __pow__(self, e: int):
        return pow_mod(self, e)

    def __bool__(self):
        return bool(self.rep)

    def __eq__(self, other):
        try:
            return self.rep == self._other(other)
        except (InvalidQuery, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self.rep))

    def is_rational(self) -> bool:
        return len(self.rep) <= 1

    def to_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.rep[0] if self.rep else QQ.zero

    def __repr__(self):
        return f"{type(self).__name__}({[format_rational(c) for c in reversed(self.rep)]})"


def invert_mod(f: ResidueElement) -> ResidueElement:
    """Inverse via the extended Euclidean algorithm; zero divisors raise NotInvertible."""
    if not f.rep:
        raise NotInvertible("zero has no inverse", {"modulus": [format_rational(c) for c in f.ring.modulus.coeffs]})
    try:
        return f._new(dup_invert(f.rep, f.ring.mod, QQ))
    except SympyNotInvertible as e:
        raise NotInvertible(
            f"{f!r} is a zero divisor modulo {f.ring.modulus!r}",
            {"modulus": [format_rational(c) for c in f.ring.modulus.coeffs]},
        ) from e


def pow_mod(f: ResidueElement, e: int) -> ResidueElement:
    if e < 0:
        f, e = invert_mod(f), -e
    result = f.ring.one
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


# =========================
# Cyclotomic fields
# =========================
class CycloElement(ResidueElement):
    """Element of Q(zeta_N), stored modulo Phi_N."""

    __slots__ = ()

    @property
    def N(self) -> int:
        return self.ring.N


class CyclotomicField(ResidueRing):
    """Q(zeta_N) with a fixed primitive root zeta = z mod Phi_N."""

    def __init__(self, N: int):
        super().__init__(cyclotomic_poly(N))
        self.N = N
        self._powers = [self.reduce([QQ.one] + [QQ.zero] * k) for k in range(N)]

    def _element(self, rep):
        return CycloElement(rep, self)

    def root(self, k: int) -> CycloElement:
        """zeta^k."""
        return self._element(self._powers[k % self.N])

    def from_exponents(self, coeffs: Dict[int, Any]) -> CycloElement:
        """Sum of c * zeta^k, exponents taken mod N."""
        dense = [QQ.zero] * self.N
        for k, c in coeffs.items():
            dense[k % self.N] += to_rational(c)
        rep = dup_strip(list(reversed(dense)))
        return self._element(self.reduce(rep))

    def __repr__(self):
        return f"CyclotomicField({self.N})"


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


# =========================
# Multivariate rational functions
# =========================
class RationalFunction:
    """Numerator/denominator pair of sympy Polys over QQ in fixed generators."""

    def __init__(self, numer: Poly, denom: Poly):
        if denom.is_zero:
            raise NotInvertible("rational function with zero denominator")
        self.numer = numer
        self.denom = denom
        self.gens = numer.gens

    @classmethod
    def from_expr(cls, expr: Any, gens: Sequence[Any]) -> "RationalFunction":
        n, d = fraction(together(sympify(expr)))
        return cls(Poly(n, *gens, domain=QQ), Poly(d, *gens, domain=QQ))

    @property
    def expr(self):
        return self.numer.as_expr() / self.denom.as_expr()

    def is_homogeneous(self) -> bool:
        num_ok = self.numer.is_zero or self.numer.is_homogeneous
        return bool(num_ok and self.denom.is_homogeneous)

    def degree(self) -> int:
        """Homogeneous degree; only meaningful when is_homogeneous()."""
        if self.numer.is_zero:
            return 0
        return self.numer.total_degree() - self.denom.total_degree()

    @staticmethod
    def _eval_poly(poly: Poly, values: Sequence[Any], one: Any):
        powers: List[Dict[int, Any]] = [{0: one} for _ in values]
        total = None
        for monom, coeff in poly.terms():
            term = one * coeff
            for i, e in enumerate(monom):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = values[i] ** e
                    term = term * cache[e]
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def evaluate(self, values: Sequence[Any], one: Any):
        """Evaluate in any ring; ``one`` fixes the ring of the result."""
        num = self._eval_poly(self.numer, values, one)
        den = self._eval_poly(self.denom, values, one)
        return num / den

    @staticmethod
    def _eval_poly_at_roots(poly: Poly, field: CyclotomicField, exponents: Sequence[int]) -> CycloElement:
        acc: Dict[int, Any] = {}
        for monom, coeff in poly.terms():
            k = sum(e * a for e, a in zip(monom, exponents)) % field.N
            acc[k] = acc.get(k, QQ.zero) + coeff
        return field.from_exponents(acc)

    def evaluate_at_roots(self, field: CyclotomicField, exponents: Sequence[int]) -> CycloElement:
        """Value at (zeta^a_1, ..., zeta^a_r); raises NotInvertible on a pole."""
        num = self._eval_poly_at_roots(self.numer, field, exponents)
        den = self._eval_poly_at_roots(self.denom, field, exponents)
        return num * invert_mod(den)

    def __repr__(self):
        return f"RationalFunction({self.expr})"


def binomial_rational(alpha: Any, k: int):
    """Generalized binomial coefficient C(alpha, k) for rational alpha."""
    a = to_rational(alpha)
    result = QQ.one
    for i in range(k):
        result = result * (a - i) / (i + 1)
    return result


def signed_power(base: Any, e: int):
    """base**e over QQ with negative exponents allowed."""
    b = to_rational(base)
    return b ** e if e >= 0 else QQ.one / b ** (-e)
