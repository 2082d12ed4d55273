"""
Closed-form evaluators for a-class virtual intersection numbers on isotropic
Quot schemes, and the identities tying them together.

Symplectic rank 2 goes through three independent routes: the single-root
trace engine (a_sympl), the pair enumeration (a_sympl_poly) and the
Lagrange-Burmann pair sum (a_sympl_poly_lb). The symmetric family has the
pair form I1 + I2 and its single-root monomial specialization.
"""
import logging
import re
from dataclasses import dataclass
from math import comb
from typing import Any, List, Tuple

from sympy import QQ, Symbol

from exactnum import CycloElement, binomial_rational, format_rational, pow_mod, signed_power, to_rational
from isoquot_errors import DegreeMismatch, HypothesisViolated, InvalidQuery, UnsupportedFamily
from rootsum import PairSummand, admissible_pairs, exclusion_ring, sum_over_pairs, sum_residue_over_roots
from series import SeriesRing, linear_product_coefficient
from symprod import LBInput, cyclo_to_rational, make_R, pair_sum_r2, Y_SYMBOLS

logger = logging.getLogger(__name__)

SYMPLECTIC = "symplectic"
SYMMETRIC = "symmetric"
FORMS = (SYMPLECTIC, SYMMETRIC)

A1, A2 = Symbol("a1"), Symbol("a2")

SMALL_N_UNASSERTED = "small_n_unasserted"
UNVERIFIED_REGIME = "unverified_regime"


# =========================
# Families and insertions
# =========================
@dataclass(frozen=True)
class QuotFamily:
    form: str
    N: int
    r: int
    g: int
    d: int

    def __post_init__(self):
        if self.form not in FORMS:
            raise InvalidQuery(f"unknown family {self.form!r}", {"allowed": list(FORMS)})
        if self.g < 0 or self.d < 0:
            raise InvalidQuery("genus and degree must be non-negative", {"g": self.g, "d": self.d})
        if self.form == SYMPLECTIC:
            if self.N % 2:
                raise UnsupportedFamily("symplectic bundles have even rank", {"N": self.N})
            if self.r == 1:
                raise UnsupportedFamily("rank-1 subsheaves of a symplectic bundle are all isotropic",
                                        {"N": self.N, "r": self.r})
            if self.r != 2:
                raise UnsupportedFamily(f"no closed form for r={self.r}", {"r": self.r})
        elif self.r not in (1, 2):
            raise UnsupportedFamily(f"no closed form for r={self.r}", {"r": self.r})

    @property
    def gbar(self) -> int:
        return self.g - 1


@dataclass(frozen=True)
class InsertionPoly:
    """sum of c * a1^m1 * a2^m2."""
    terms: Tuple[Tuple[Any, int, int], ...]

    def __post_init__(self):
        clean = []
        for c, m1, m2 in self.terms:
            if m1 < 0 or m2 < 0:
                raise InvalidQuery("insertion exponents must be non-negative", {"m1": m1, "m2": m2})
            clean.append((to_rational(c), int(m1), int(m2)))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def monomial(cls, m1: int, m2: int, c: Any = 1) -> "InsertionPoly":
        return cls(((c, m1, m2),))

    @classmethod
    def parse(cls, text: str) -> "InsertionPoly":
        """'c:m1:m2;c:m1:m2' with c an integer or p/q."""
        terms = []
        for chunk in (text or "").split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not re.fullmatch(r"-?\d+(/\d+)?:\d+:\d+", chunk):
                raise InvalidQuery(f"bad insertion term {chunk!r}, expected c:m1:m2")
            c, m1, m2 = chunk.split(":")
            terms.append((c, int(m1), int(m2)))
        if not terms:
            raise InvalidQuery("empty insertion polynomial")
        return cls(tuple(terms))

    def weighted_degree(self) -> int:
        degrees = {m1 + 2 * m2 for c, m1, m2 in self.terms if c}
        if len(degrees) > 1:
            raise DegreeMismatch("insertion is not weighted-homogeneous", {"degrees": sorted(degrees)})
        return degrees.pop() if degrees else 0

    def evaluate(self, x1: Any, x2: Any, zero: Any):
        total = zero
        for c, m1, m2 in self.terms:
            if c:
                total = total + (x1 ** m1) * (x2 ** m2) * c
        return total

    def at_one_zero(self):
        """Q(1, 0)."""
        return sum((c for c, m1, m2 in self.terms if m2 == 0), QQ.zero)

    def to_expr(self):
        return sum(_sym(c) * A1 ** m1 * A2 ** m2 for c, m1, m2 in self.terms)

    def s_expr(self, y1: Any = Y_SYMBOLS[0], y2: Any = Y_SYMBOLS[1]):
        """S(Y1, Y2) = Q(Y1 + Y2, Y1 Y2)."""
        return sum(_sym(c) * (y1 + y2) ** m1 * (y1 * y2) ** m2 for c, m1, m2 in self.terms)

    def scaled(self, c: Any) -> "InsertionPoly":
        k = to_rational(c)
        return InsertionPoly(tuple((k * x, m1, m2) for x, m1, m2 in self.terms))

    def shifted(self, dm1: int, dm2: int) -> "InsertionPoly":
        return InsertionPoly(tuple((c, m1 + dm1, m2 + dm2) for c, m1, m2 in self.terms))

    def __str__(self):
        return ";".join(f"{format_rational(c)}:{m1}:{m2}" for c, m1, m2 in self.terms)


def _sym(c: Any):
    return QQ.to_sympy(to_rational(c))


def as_insertion(Q: Any) -> InsertionPoly:
    if isinstance(Q, InsertionPoly):
        return Q
    if isinstance(Q, str):
        return InsertionPoly.parse(Q)
    if isinstance(Q, (tuple, list)) and len(Q) == 2:
        return InsertionPoly.monomial(*Q)
    raise InvalidQuery(f"cannot read insertion {Q!r}")


# =========================
# Dimensions and prefactors
# =========================
def virtual_dim(family: QuotFamily) -> int:
    N, d, gbar = family.N, family.d, family.gbar
    if family.form == SYMPLECTIC:
        return (N - 1) * d - (2 * N - 5) * gbar
    if family.r == 2:
        return (N - 3) * d - gbar * (2 * N - 7)
    return (N - 2) * (d - gbar)


def parity_sign(e: int):
    return QQ(-1) if e % 2 else QQ(1)


def t_dg(N: int, g: int, d: int):
    """T_{d,g}(N): the binomial sum and its series form, asserted equal."""
    if N < 2 or g < 0 or d < 0:
        raise ValueError(f"t_dg needs N >= 2, g, d >= 0 (got N={N}, g={g}, d={d})")
    direct = sum((QQ(comb(g, i)) * signed_power(-N, -i) for i in range(min(d, g) + 1)), QQ.zero)
    series = linear_product_coefficient(d, [(1, 1, d - g), (1, QQ(N - 1, N), g)])
    assert direct == series, f"T_(d,g) mismatch at N={N} g={g} d={d}: {direct} != {series}"
    return direct


def t_dg_or_zero(N: int, g: int, d: int):
    return QQ.zero if d < 0 or g < 0 else t_dg(N, g, d)


def check_degree(family: QuotFamily, degree: int, what: str = "insertion") -> int:
    vd = virtual_dim(family)
    if degree != vd:
        raise DegreeMismatch(f"{what} has weighted degree {degree}, virtual dimension is {vd}",
                             {"degree": degree, "vd": vd, "N": family.N, "g": family.g, "d": family.d})
    return vd


def require_even_rank(N: int, minimum: int = 4) -> None:
    if N < minimum or N % 2:
        raise UnsupportedFamily(f"need an even rank >= {minimum}, got {N}", {"N": N})


# =========================
# Symplectic rank 2
# =========================
def a_sympl(N: int, g: int, d: int, m1: int, m2: int):
    """u (N/2) T_{d,g}(N) sum_zeta (1+zeta)^(m1+d) zeta^m2 J(1,zeta)^gbar via the trace engine."""
    require_even_rank(N)
    family = QuotFamily(SYMPLECTIC, N, 2, g, d)
    check_degree(family, m1 + 2 * m2)
    gbar = g - 1
    ring = exclusion_ring(N)
    z = ring.gen
    summand = pow_mod(1 + z, m1 + d - gbar) * pow_mod(z, m2 - gbar) * pow_mod(1 - z, -2 * gbar)
    total = sum_residue_over_roots(N, summand) * signed_power(N, 2 * gbar)
    value = parity_sign(gbar + d) * QQ(N, 2) * t_dg(N, g, d) * total
    logger.debug(f"a_sympl N={N} g={g} d={d} m=({m1},{m2}) -> {format_rational(value)}")
    return value


class SymplecticSummand(PairSummand):
    """S(w1,w2) J(w1,w2)^gbar (w1+w2)^d, J = N^2 (w1 w2)^-1 (w1-w2)^-2 (w1+w2)^-1."""

    def __init__(self, N: int, g: int, d: int, Q: InsertionPoly):
        self.N, self.g, self.d, self.Q = N, g, d, Q

    def __call__(self, w1: CycloElement, w2: CycloElement) -> CycloElement:
        gbar = self.g - 1
        sigma, pi = w1 + w2, w1 * w2
        S = self.Q.evaluate(sigma, pi, w1 * 0)
        return S * pow_mod(pi, -gbar) * pow_mod(w1 - w2, -2 * gbar) * pow_mod(sigma, self.d - gbar) \
            * signed_power(self.N, 2 * gbar)


def a_sympl_poly(N: int, g: int, d: int, Q: Any):
    """Pair-sum form: u T_{d,g}(N) sum_{w1 != +-w2} S J^gbar (w1+w2)^d."""
    require_even_rank(N)
    Q = as_insertion(Q)
    family = QuotFamily(SYMPLECTIC, N, 2, g, d)
    check_degree(family, Q.weighted_degree())
    total = sum_over_pairs(N, SymplecticSummand(N, g, d, Q))
    return parity_sign(g - 1 + d) * t_dg(N, g, d) * total


def a_sympl_poly_lb(N: int, g: int, d: int, Q: Any):
    """Pair-sum form through pair_sum_r2 with B(Y) = N Y^(N-1)."""
    require_even_rank(N)
    Q = as_insertion(Q)
    family = QuotFamily(SYMPLECTIC, N, 2, g, d)
    check_degree(family, Q.weighted_degree())
    gbar = g - 1
    y1, y2 = Y_SYMBOLS
    R = make_R((-1) ** ((gbar + d) % 2) * Q.s_expr() * (y1 + y2) ** (d - gbar) * (y1 - y2) ** (-2 * gbar))
    total = None
    for a, b in admissible_pairs(N):
        term = pair_sum_r2(LBInput(N=N, g=g, d=d, r=2, a=N, b=0, R=R, w=(a, b)))
        total = term if total is None else total + term
    if total is None:
        return QQ.zero
    return cyclo_to_rational(total, {"N": N, "g": g, "d": d})


def g1_generating_check(N: int, d: int):
    """(-1)^d ((N-1)/2) [q^(Nd)] (N(1-q)^(N-1)/((1-q)^N - q^N) - 1/(1+2q)); N(N-2)/2 at d=0."""
    require_even_rank(N)
    if d < 0:
        raise ValueError("d must be non-negative")
    if d == 0:
        return QQ(N * (N - 2), 2)
    k = N * d
    ring = SeriesRing(("q",), (k,))
    q = ring.gen("q")
    one_minus = ring.one - q
    gen = (one_minus ** (N - 1)).scale(N) / (one_minus ** N - q ** N) - (ring.one + q.scale(2)).invert()
    return parity_sign(d) * QQ(N - 1, 2) * gen.coefficient((k,))


def compatibility_check(N: int, g: int, d: int, m1: int, m2: int) -> Tuple[Any, Any]:
    """(a1^2 a1^m1 a2^m2 at degree d, a2^N a1^m1 a2^m2 at degree d+2)."""
    if d < g:
        raise HypothesisViolated("compatibility needs d >= g", {"g": g, "d": d})
    check_degree(QuotFamily(SYMPLECTIC, N, 2, g, d), m1 + 2 + 2 * m2)
    return a_sympl(N, g, d, m1 + 2, m2), a_sympl(N, g, d + 2, m1, m2 + N)


def duality_check(N: int, g: int, d: int, m1: int, m2: int) -> Tuple[Any, Any]:
    """(a_symm_r2 on N+2 with a1^m1 a2^(m2-gbar), 4^(d-gbar) a_sympl on N)."""
    gbar = g - 1
    check_degree(QuotFamily(SYMPLECTIC, N, 2, g, d), m1 + 2 * m2)
    if m2 - gbar <= 0:
        raise HypothesisViolated("duality needs m2 - gbar > 0", {"m2": m2, "gbar": gbar})
    left = a_symm_r2(N + 2, g, d, InsertionPoly.monomial(m1, m2 - gbar))
    right = signed_power(4, d - gbar) * a_sympl(N, g, d, m1, m2)
    return left, right


# =========================
# Symmetric family
# =========================
class SymmetricSummand(PairSummand):
    """S(w1,w2) J(w1,w2)^gbar (w1+w2)^d, J = ((N-2)^2/4) (w1+w2)^-1 (w1-w2)^-2."""

    def __init__(self, N: int, g: int, d: int, Q: InsertionPoly):
        self.N, self.g, self.d, self.Q = N, g, d, Q

    def __call__(self, w1: CycloElement, w2: CycloElement) -> CycloElement:
        gbar = self.g - 1
        sigma, pi = w1 + w2, w1 * w2
        S = self.Q.evaluate(sigma, pi, w1 * 0)
        return S * pow_mod(w1 - w2, -2 * gbar) * pow_mod(sigma, self.d - gbar) \
            * signed_power(QQ((self.N - 2) ** 2, 4), gbar)


def symmetric_flags(N: int, g: int, d: int) -> List[str]:
    flags = []
    if N <= 6:
        flags.append(SMALL_N_UNASSERTED)
    if d < g:
        flags.append(UNVERIFIED_REGIME)
    return flags


def i2_closed(N: int, g: int, d: int, Q: InsertionPoly):
    """(-1)^d 2^(2d+2-g) (N-2)^g T_{d,g}(N-2) Q(1,0)."""
    q10 = Q.at_one_zero()
    if not q10:
        return QQ.zero
    return parity_sign(d) * signed_power(2, 2 * d + 2 - g) * QQ(N - 2) ** g * t_dg(N - 2, g, d) * q10


def a_symm_r2(N: int, g: int, d: int, Q: Any):
    """I1 + I2 for the symmetric family of rank 2."""
    require_even_rank(N)
    Q = as_insertion(Q)
    family = QuotFamily(SYMMETRIC, N, 2, g, d)
    check_degree(family, Q.weighted_degree())
    if N - 2 >= 4:
        pair_total = sum_over_pairs(N - 2, SymmetricSummand(N, g, d, Q))
    else:
        pair_total = QQ.zero
    i1 = parity_sign(g - 1 + d) * QQ(4) ** d * t_dg(N - 2, g, d) * pair_total
    value = i1 + i2_closed(N, g, d, Q)
    flags = symmetric_flags(N, g, d)
    if flags:
        logger.debug(f"a_symm_r2 N={N} g={g} d={d}: {flags}")
    return value


def a_symm_r2_monomial(N: int, g: int, d: int, m1: int, m2: int):
    """c sum_zeta (1+zeta)^(m1+d) zeta^m2 J(1,zeta)^gbar (+ 4(-n)^gbar when m2 = 0), c = u 4^d n T_{d,g}(2n)."""
    require_even_rank(N)
    check_degree(QuotFamily(SYMMETRIC, N, 2, g, d), m1 + 2 * m2)
    n, gbar = (N - 2) // 2, g - 1
    if 2 * n >= 4:
        ring = exclusion_ring(2 * n)
        z = ring.gen
        summand = pow_mod(1 + z, m1 + d - gbar) * pow_mod(z, m2) * pow_mod(1 - z, -2 * gbar)
        inner = sum_residue_over_roots(2 * n, summand) * signed_power(n * n, gbar)
    else:
        inner = QQ.zero
    if m2 == 0:
        inner += 4 * signed_power(-n, gbar)
    c = parity_sign(gbar + d) * QQ(4) ** d * n * t_dg(2 * n, g, d)
    return c * inner


def symmetric_compatibility_check(N: int, g: int, d: int, m1: int, m2: int) -> Tuple[Any, Any]:
    """(16 a1^(m1+2) a2^(m2+2) at degree d, a1^m1 a2^(m2+N) at degree d+2)."""
    if d < g:
        raise HypothesisViolated("compatibility needs d >= g", {"g": g, "d": d})
    left = a_symm_r2(N, g, d, InsertionPoly.monomial(m1 + 2, m2 + 2, 16))
    right = a_symm_r2(N, g, d + 2, InsertionPoly.monomial(m1, m2 + N))
    return left, right


def _rank1_even(N: int, g: int, d: int):
    t_tilde = linear_product_coefficient(d, [(1, QQ(N - 2, N), g), (1, 1, d - g)])
    return QQ(N) ** g * t_tilde * signed_power(2, 2 * d - g + 1)


def a_rank1_symm(N: int, g: int, d: int):
    """Rank-1 isotropic subsheaves of a symmetric bundle."""
    if N < 3:
        raise UnsupportedFamily("rank-1 symmetric family needs N >= 3", {"N": N})
    family = QuotFamily(SYMMETRIC, N, 1, g, d)
    vd = virtual_dim(family)
    if vd < 0:
        raise HypothesisViolated(f"negative virtual dimension {vd}", {"N": N, "g": g, "d": d})
    if N % 2 == 0:
        return _rank1_even(N, g, d)
    return QQ(N - 1) ** g * signed_power(2, 2 * d - g + 1) * t_dg(N - 1, g, d)


def nonstandard_virtual_integral(g: int, d: int):
    """Degree of the nonstandard virtual class on C^[d]: 2^(2d) [q^d](1+q)^(d-g)."""
    if g < 0 or d < 0:
        raise ValueError("g and d must be non-negative")
    value = QQ(4) ** d * binomial_rational(d - g, d)
    assert value == QQ(4) ** d * parity_sign(d) * binomial_rational(g - 1, d)
    return value


def i2_second_kind(N: int, g: int, d: int, Q: Any):
    """I2 assembled from the second-kind loci, one degree splitting at a time."""
    require_even_rank(N)
    Q = as_insertion(Q)
    q10 = Q.at_one_zero()
    if not q10:
        return QQ.zero
    gbar = g - 1
    u = parity_sign(gbar + d)
    total = QQ.zero
    for d1 in range(d + 1):
        d2 = d - d1
        virtual = nonstandard_virtual_integral(g, d2)
        if not virtual:
            continue
        local = signed_power(N - 2, gbar) * linear_product_coefficient(
            d1, [(1, 1, d - gbar - g), (1, QQ(N - 3, N - 2), g)])
        total += u * signed_power(2, 2 * d1 - gbar) * parity_sign(gbar - d2) * virtual * local
    # N - 2 positions, two signs each
    return 2 * (N - 2) * total * q10
