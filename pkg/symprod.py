"""
Intersection calculus on products of symmetric powers of a curve.

theta_reduce / phi_reduce are the integration rules for theta and phi classes;
lb_theta_sum and pair_sum_r2 are the closed forms obtained by summing over all
degree splittings at once; brute_force_g0 / brute_force_theta expand the
integrand directly and serve as their oracles.
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Symbol

from exactnum import CycloElement, RationalFunction, cyclotomic_field, format_rational, to_rational
from isoquot_errors import EllExceedsGenus, HomogeneityMismatch, NonRationalResult, TruncationTooShallow
from series import MultiSeries, SeriesRing, linear_product_coefficient

logger = logging.getLogger(__name__)

Y_SYMBOLS = (Symbol("Y1"), Symbol("Y2"))


def make_R(expr: Any, r: int = 2) -> RationalFunction:
    """R as a rational function in Y1 (and Y2 when r = 2)."""
    return RationalFunction.from_expr(expr, Y_SYMBOLS[:r])


@dataclass(frozen=True)
class LBInput:
    N: int
    g: int
    d: int
    r: int
    a: Any
    b: Any
    R: RationalFunction
    w: Tuple[int, ...]
    p: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.r not in (1, 2):
            raise ValueError(f"rank must be 1 or 2, got {self.r}")
        if self.N < 2 or self.g < 0 or self.d < 0:
            raise ValueError(f"invalid parameters N={self.N} g={self.g} d={self.d}")
        if not self.p:
            object.__setattr__(self, "p", (0,) * self.r)
        if len(self.p) != self.r or len(self.w) != self.r:
            raise ValueError("p and w need one entry per factor")
        if any(x < 0 for x in self.p):
            raise ValueError("theta exponents must be non-negative")
        object.__setattr__(self, "a", to_rational(self.a))
        object.__setattr__(self, "b", to_rational(self.b))

    @property
    def gbar(self) -> int:
        return self.g - 1

    @property
    def p_total(self) -> int:
        return sum(self.p)

    def required_degree(self) -> int:
        return self.N * self.d - self.r * self.gbar * (self.N - 1) - self.p_total


@dataclass
class TautMonomial:
    """coefficient * prod x_i^x[i] theta_i^theta[i] * phi12^phi on C^[d1] x C^[d2]."""
    coefficient: Any = 1
    x: Tuple[int, int] = (0, 0)
    theta: Tuple[int, int] = (0, 0)
    phi: int = 0
    meta: Dict[str, Any] = field(default_factory=dict)


# =========================
# Reduction rules
# =========================
def theta_reduce(ell: int, g: int):
    """Multiplier turning theta^ell into x^ell under integration: g!/(g-ell)!, or 0."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell > g:
        return QQ.zero
    return QQ(factorial(g) // factorial(g - ell))


def phi_reduce(two_ell: int, g: int):
    """Multiplier turning phi12^(2l) into theta1^l theta2^l: (-1)^l C(2l,l)/C(g,l)."""
    if two_ell < 0 or two_ell % 2:
        raise ValueError(f"phi exponent must be even and non-negative, got {two_ell}")
    ell = two_ell // 2
    if ell > g:
        raise EllExceedsGenus(f"phi^{two_ell} vanishes for g={g}", {"ell": ell, "g": g})
    return QQ((-1) ** ell * comb(2 * ell, ell), comb(g, ell))


def phi_binomial_identity(ell: int, g: int) -> Tuple[Any, Any]:
    """Both sides of the binomial identity behind phi_reduce."""
    left = QQ((-2) ** ell * comb(g, ell) * factorial(2 * ell), 2 ** ell) \
        * QQ(factorial(g - ell) ** 2, factorial(g) ** 2)
    return left, phi_reduce(2 * ell, g)


def integrate_monomial(mono: TautMonomial, g: int, degrees: Sequence[int]):
    """Integral of a tautological monomial over C^[d1] x C^[d2]."""
    if mono.phi % 2:
        return QQ.zero
    try:
        value = to_rational(mono.coefficient) * phi_reduce(mono.phi, g)
    except EllExceedsGenus:
        return QQ.zero
    ell = mono.phi // 2
    for i, d_i in enumerate(degrees):
        k = mono.theta[i] + ell
        if k + mono.x[i] != d_i:
            return QQ.zero
        value *= theta_reduce(k, g)
    return value


# =========================
# Closed forms
# =========================
def _check_degree(inp: LBInput, required: int) -> None:
    R = inp.R
    if R.numer.is_zero:
        return
    if not R.is_homogeneous() or R.degree() != required:
        raise HomogeneityMismatch(
            f"R must be homogeneous of degree {required}",
            {"required": required, "actual": R.degree() if R.is_homogeneous() else None},
        )


def _coefficient(d: int, factors: Sequence[Tuple[Any, Any, int]], shift: int = 0):
    """[q^(d-shift)] of prod (c0 + c1 q)^e."""
    return linear_product_coefficient(d - shift, factors)


def _weight_prefactor(inp: LBInput, extra: Sequence[int]) -> CycloElement:
    """N^-r R(w) prod w_i^(extra_i)."""
    fld = cyclotomic_field(inp.N)
    value = inp.R.evaluate_at_roots(fld, inp.w)
    shift = sum(wi * e for wi, e in zip(inp.w, extra))
    return value * fld.root(shift) * QQ(1, inp.N ** inp.r)


def lb_theta_sum(inp: LBInput) -> CycloElement:
    """Sum over all splittings of d of the theta-weighted integrals, in closed form."""
    _check_degree(inp, inp.required_degree())
    fld = cyclotomic_field(inp.N)
    if any(p_i > inp.g for p_i in inp.p):
        return fld.zero
    rg, p = inp.r * inp.g, inp.p_total
    coeff = _coefficient(inp.d, [(inp.a + inp.b, inp.a, rg - p), (1, 1, inp.d - rg)], shift=p)
    for p_i in inp.p:
        coeff *= comb(inp.g, p_i)
    if not coeff:
        return fld.zero
    return _weight_prefactor(inp, [p_i - inp.gbar for p_i in inp.p]) * coeff


def pair_sum_r2(inp: LBInput) -> CycloElement:
    """(1/N^2) R(w)/(w1 w2)^gbar [q^d](1+q)^d (qT/(1+q))^2g (1-1/T)^g with T = (a+b+aq)/q."""
    if inp.r != 2:
        raise ValueError("pair_sum_r2 needs r = 2")
    _check_degree(inp, inp.N * inp.d - 2 * inp.gbar * (inp.N - 1))
    a, b, g = inp.a, inp.b, inp.g
    # (1+q)^d (qT)^2g (1+q)^-2g (qT - q)^g (qT)^-g
    coeff = _coefficient(inp.d, [(1, 1, inp.d - 2 * g), (a + b, a, g), (a + b, a - 1, g)])
    return _weight_prefactor(inp, [-inp.gbar, -inp.gbar]) * coeff


# =========================
# Direct expansion
# =========================
def compositions(d: int, parts: int) -> List[Tuple[int, ...]]:
    return [c for c in product(range(d + 1), repeat=parts) if sum(c) == d]


def brute_force_g0(d1: int, d2: int, integrand: MultiSeries, t_power: Optional[int] = None):
    """Coefficient of x1^d1 x2^d2 (x1^d1 for one-variable integrands)."""
    orders = integrand.ring.orders
    exps = (d1, d2)[: len(orders)]
    if len(orders) == 1 and d2:
        raise ValueError("one-variable integrand with d2 != 0")
    if any(e > o for e, o in zip(exps, orders)):
        raise TruncationTooShallow(f"integrand truncated at {orders}, need {exps}",
                                   {"orders": list(orders), "needed": list(exps)})
    return integrand.coefficient(exps, t_power)


def lb_integrand(inp: LBInput, degrees: Sequence[int]) -> MultiSeries:
    """R(w+x) prod_i [sum_l theta_reduce(p_i+l, g)/(p_i! l!) x_i^p_i u_i^l] h_i^(d_i-gbar).

    h_i = x_i/(Y_i^N - w_i^N), u_i = B(Y_i) h_i - 1 and B(Y) = (aY^N + b)/Y, Y_i = w_i + x_i.
    """
    fld = cyclotomic_field(inp.N)
    names = ("x1", "x2")[: inp.r]
    ring = SeriesRing(names, degrees, fld)
    ys = []
    factor = ring.one
    for i, name in enumerate(names):
        wi = fld.root(inp.w[i])
        x = ring.gen(name)
        y = ring(wi) + x
        ys.append(y)
        # (Y^N - w^N)/x
        quotient = ring.from_terms({
            tuple(k - 1 if j == i else 0 for j in range(inp.r)): fld.root(inp.w[i] * (inp.N - k)) * comb(inp.N, k)
            for k in range(1, inp.N + 1)
        })
        h = quotient.invert()
        bee = (y ** inp.N).scale(inp.a) + ring(inp.b)
        u = bee * y.invert() * h - ring.one
        p_i = inp.p[i]
        theta_part = ring.zero
        u_power = ring.one
        for ell in range(0, max(inp.g - p_i, -1) + 1):
            c = theta_reduce(p_i + ell, inp.g) * QQ(1, factorial(p_i) * factorial(ell))
            theta_part = theta_part + u_power.scale(c)
            u_power = u_power * u
        theta_part = theta_part * x ** p_i
        factor = factor * theta_part * h ** (degrees[i] - inp.gbar)
    return factor * inp.R.evaluate(ys, ring.one)


def brute_force_theta(inp: LBInput) -> CycloElement:
    """Left side of the Lagrange-Burmann identity, summed over all splittings of d."""
    fld = cyclotomic_field(inp.N)
    total = fld.zero
    for degrees in compositions(inp.d, inp.r):
        integrand = lb_integrand(inp, degrees)
        value = brute_force_g0(degrees[0], degrees[1] if inp.r == 2 else 0, integrand)
        logger.debug(f"splitting {degrees}: {value!r}")
        total = total + value
    return total


def cyclo_to_rational(value: CycloElement, params: Optional[Dict[str, Any]] = None):
    if not value.is_rational():
        raise NonRationalResult(f"expected a rational value, got {value!r}", params or {})
    return value.to_rational()


def describe(inp: LBInput) -> Dict[str, Any]:
    return {
        "N": inp.N, "g": inp.g, "d": inp.d, "r": inp.r,
        "a": format_rational(inp.a), "b": format_rational(inp.b),
        "p": list(inp.p), "w": list(inp.w), "R": str(inp.R.expr),
    }
