"""
f-class intersection numbers.

Per pair of roots (w1, w2) the engine builds B(Y1, Y2) and T_g(t, Y1, Y2) as
series in (q1, q2) with Y_i = w_i (1 + q_i)^(1/N), applies
(Delta + d_t)^m = sum_u C(m, u) Delta^u d_t^(m-u), sets t = 1, restricts to
q1 = q2 = q and reads off [q^d]. The pair sum is rational.
"""
import logging
from dataclasses import dataclass, replace
from math import comb
from typing import Any, Dict, Tuple

from sympy import QQ, diff, together

from exactnum import CycloElement, RationalFunction, cyclotomic_field, format_rational, pow_mod, signed_power
from invariants import (
    SYMPLECTIC, InsertionPoly, QuotFamily, as_insertion, check_degree, require_even_rank, parity_sign, t_dg_or_zero,
)
from isoquot_errors import NonUnitDenominator
from rootsum import PairSummand, Z1, Z2, sum_over_pairs
from series import MultiSeries, SeriesRing, linear_product_coefficient

logger = logging.getLogger(__name__)


class PairContext:
    """Series ring and the powers of Y1, Y2 for one pair of roots."""

    def __init__(self, N: int, d: int, w1: CycloElement, w2: CycloElement):
        if not (w1 - w2) or not (w1 + w2):
            raise NonUnitDenominator("w1 = +-w2 leaves Y1 -+ Y2 without a unit constant term",
                                     {"N": N, "w1": repr(w1), "w2": repr(w2)})
        self.N, self.d = N, d
        self.field = cyclotomic_field(N)
        self.ring = SeriesRing(("q1", "q2"), (d, d), self.field)
        self.w = (w1, w2)
        self._powers: Dict[Tuple[int, int], MultiSeries] = {}

    def y_power(self, i: int, k: int) -> MultiSeries:
        """Y_i^k = w_i^k (1 + q_i)^(k/N), any integer k."""
        key = (i, k)
        if key not in self._powers:
            name = ("q1", "q2")[i]
            self._powers[key] = self.ring.binomial(QQ(k, self.N), name).scale(pow_mod(self.w[i], k))
        return self._powers[key]

    @property
    def sigma(self) -> MultiSeries:
        return self.y_power(0, 1) + self.y_power(1, 1)


@dataclass(frozen=True)
class FExpr:
    value: MultiSeries
    ctx: PairContext
    g: int
    dt_applied: int = 0

    def check_t_degree(self) -> None:
        bound = 2 * self.g - self.dt_applied
        assert self.value.t_degree() <= bound, \
            f"t-degree {self.value.t_degree()} exceeds {bound} after {self.dt_applied} d_t steps"


def _context(N: int, d: int, w1: int, w2: int) -> PairContext:
    fld = cyclotomic_field(N)
    return PairContext(N, d, fld.root(w1), fld.root(w2))


def _build_B(ctx: PairContext, g: int, d: int, Q: InsertionPoly) -> MultiSeries:
    gbar = g - 1
    y1, y2 = ctx.y_power(0, 1), ctx.y_power(1, 1)
    sigma, pi = y1 + y2, y1 * y2
    S = Q.evaluate(sigma, pi, ctx.ring.zero)
    value = S * sigma ** (d - gbar) * (y1 - y2) ** (-2 * gbar)
    value = value * ctx.y_power(0, (ctx.N - 1) * gbar) * ctx.y_power(1, (ctx.N - 1) * gbar)
    return value.scale(parity_sign(gbar + d) * signed_power(ctx.N, 2 * gbar))


def build_B(N: int, g: int, d: int, Q: Any, w1: int, w2: int) -> FExpr:
    """B(Y1, Y2) = u Q(Y1+Y2, Y1Y2) (Y1+Y2)^(d-gbar) (Y1-Y2)^(-2gbar) (P'(Y1)P'(Y2))^gbar."""
    ctx = _context(N, d, w1, w2)
    return FExpr(_build_B(ctx, g, d, as_insertion(Q)), ctx, g)


def build_T(ctx: PairContext, g: int) -> MultiSeries:
    """T_g = ((1-eta1)(1-eta2) - t^2 eta1 eta2)^g, eta_i = q_i Y_i^(1-N) / (N (Y1+Y2))."""
    ring = ctx.ring
    inv_sigma = ctx.sigma.invert().scale(QQ(1, ctx.N))
    etas = []
    for i, name in enumerate(("q1", "q2")):
        etas.append(ring.gen(name) * ctx.y_power(i, 1 - ctx.N) * inv_sigma)
    eta1, eta2 = etas
    t = ring.t
    base = (ring.one - eta1) * (ring.one - eta2) - t * t * eta1 * eta2
    return base ** g


def apply_delta_u(e: FExpr, u: int) -> FExpr:
    """sum_i C(u,i) (q1 d/dq1)^i (q2 d/dq2)^(u-i) [Y2^i Y1^(u-i) G]."""
    if u < 0:
        raise ValueError("u must be non-negative")
    if u == 0:
        return e
    ctx = e.ctx
    total = ctx.ring.zero
    for i in range(u + 1):
        term = e.value * ctx.y_power(1, i) * ctx.y_power(0, u - i)
        for _ in range(i):
            term = term.euler("q1")
        for _ in range(u - i):
            term = term.euler("q2")
        total = total + term.scale(comb(u, i))
    out = replace(e, value=total)
    out.check_t_degree()
    return out


def apply_dt(e: FExpr) -> FExpr:
    """d_t = -(Y1 + Y2) d/dt."""
    out = replace(e, value=-(e.ctx.sigma * e.value.derive_t()), dt_applied=e.dt_applied + 1)
    out.check_t_degree()
    return out


def _pair_value(ctx: PairContext, g: int, d: int, m: int, Q: InsertionPoly) -> CycloElement:
    start = FExpr(_build_B(ctx, g, d, Q) * build_T(ctx, g), ctx, g)
    start.check_t_degree()
    total = ctx.ring.zero
    dt_stage = start
    # dt_stage holds d_t^k (B T_g); Delta^u is applied on top with u = m - k
    for k in range(m + 1):
        u = m - k
        total = total + apply_delta_u(dt_stage, u).value.scale(comb(m, u))
        if k < m:
            dt_stage = apply_dt(dt_stage)
    diag = total.at_t(1).diagonal("q1", "q2")
    return diag.coefficient((d,))


class FClassSummand(PairSummand):
    def __init__(self, N: int, g: int, d: int, m: int, Q: InsertionPoly):
        self.N, self.g, self.d, self.m, self.Q = N, g, d, m, Q

    def __call__(self, w1: CycloElement, w2: CycloElement) -> CycloElement:
        ctx = PairContext(self.N, self.d, w1, w2)
        return _pair_value(ctx, self.g, self.d, self.m, self.Q)


def f2_intersect(N: int, g: int, d: int, m: int, Q: Any):
    """Integral of f2^m Q(a1, a2) over the virtual class, via the series engine."""
    require_even_rank(N)
    if m < 0:
        raise ValueError("m must be non-negative")
    Q = as_insertion(Q)
    check_degree(QuotFamily(SYMPLECTIC, N, 2, g, d), m + Q.weighted_degree(), "f2^m Q")
    value = sum_over_pairs(N, FClassSummand(N, g, d, m, Q))
    logger.debug(f"f2_intersect N={N} g={g} d={d} m={m} Q={Q} -> {format_rational(value)}")
    return value


def b_expr(N: int, g: int, d: int, Q: InsertionPoly):
    """B(z1, z2) as a sympy expression."""
    gbar = g - 1
    u = (-1) ** ((gbar + d) % 2)
    return u * Q.s_expr(Z1, Z2) * (Z1 + Z2) ** (d - gbar) * (Z1 - Z2) ** (-2 * gbar) \
        * (N * Z1 ** (N - 1)) ** gbar * (N * Z2 ** (N - 1)) ** gbar


def _hat_t(N: int, g: int, d: int):
    """[q^(d-1)] (1+q)^(d-1-g) (1+(N-1)q/N)^(g-1)."""
    if d < 1:
        return QQ.zero
    return linear_product_coefficient(d - 1, [(1, 1, d - 1 - g), (1, QQ(N - 1, N), g - 1)])


def f2_closed_m1(N: int, g: int, d: int, Q: Any):
    """Closed form of the f2 Q integral with a single f2."""
    require_even_rank(N)
    Q = as_insertion(Q)
    check_degree(QuotFamily(SYMPLECTIC, N, 2, g, d), 1 + Q.weighted_degree(), "f2 Q")
    B = b_expr(N, g, d, Q)
    d_of_b = Z1 * Z2 / 2 * (diff(B, Z1) + diff(B, Z2))
    c_d = QQ(2, N) * t_dg_or_zero(N, g, d - 1)
    c_pi = QQ.zero
    if g > 0:
        c_pi = QQ(2 * g, N * N) * t_dg_or_zero(N, g - 1, d - 2) - QQ(2 * g, N) * _hat_t(N, g, d)
    expr = QQ.to_sympy(c_d) * d_of_b + QQ.to_sympy(c_pi) * Z1 * Z2 * B / (Z1 + Z2)
    G = RationalFunction.from_expr(together(expr), [Z1, Z2])
    return sum_over_pairs(N, G)
