"""
Genus-0 torus localization on isotropic Quot schemes.

Fixed loci are products of projective spaces P^d1 x ... x P^dr indexed by
isotropic positions and a composition of d. The virtual normal bundle is a
signed sum of line-bundle push-forwards; at g = 0 each contributes a factor
with constant Chern root c = (weight combination) * t0, linear part l in the
hyperplane classes x_i and multiplicity rho (negative for obstructions).

Both the intersection oracle and the virtual Euler characteristic run the
same exp/log expansion and are evaluated at two values of t0, which must
agree.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Poly, Symbol, expand

from exactnum import binomial_rational, format_rational, is_integral
from invariants import A1, A2, SYMMETRIC, SYMPLECTIC, InsertionPoly, as_insertion
from isoquot_config import get_t0_sequence, get_threads
from isoquot_errors import DegenerateParameter, DegreeMismatch, InvalidQuery, TIndependenceFailure
from series import MultiSeries, SeriesRing, linear_product_coefficient
from symprod import compositions

logger = logging.getLogger(__name__)

X_SYMBOLS = (Symbol("x1"), Symbol("x2"))


# =========================
# Torus data
# =========================
@dataclass(frozen=True)
class WeightAssignment:
    w: Tuple[int, ...]

    def __post_init__(self):
        N = len(self.w)
        if N < 2 or N % 2:
            raise InvalidQuery("weights need an even count", {"N": N})
        n = N // 2
        if len(set(self.w)) != N:
            raise InvalidQuery("weights must be pairwise distinct", {"w": list(self.w)})
        if any(self.w[i] != -self.w[i + n] for i in range(n)):
            raise InvalidQuery("weights must satisfy w_i = -w_(i+n)", {"w": list(self.w)})

    @classmethod
    def default(cls, N: int) -> "WeightAssignment":
        n = N // 2
        return cls(tuple(range(1, n + 1)) + tuple(-i for i in range(1, n + 1)))

    @classmethod
    def shifted(cls, N: int) -> "WeightAssignment":
        n = N // 2
        return cls(tuple(range(2, n + 2)) + tuple(-i for i in range(2, n + 2)))

    @property
    def N(self) -> int:
        return len(self.w)


@dataclass(frozen=True)
class FixedLocus:
    positions: Tuple[int, ...]
    degrees: Tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.positions)

    @property
    def d(self) -> int:
        return sum(self.degrees)


@dataclass(frozen=True)
class KFactor:
    """rho copies of a line with Chern root c + sum_i coeffs[i] x_i."""
    kind: str
    c: Any
    coeffs: Tuple[int, ...]
    rho: int


def locus_count(N: int, r: int, d: int) -> int:
    return 2 ** r * comb(N // 2, r) * comb(d + r - 1, r - 1)


def enumerate_fixed_loci(N: int, r: int, d: int) -> List[FixedLocus]:
    """Isotropic position sets (pairwise distinct mod n) times compositions of d."""
    return list(_fixed_loci(N, r, d))


@lru_cache(maxsize=None)
def _fixed_loci(N: int, r: int, d: int) -> Tuple[FixedLocus, ...]:
    if N % 2 or N < 2:
        raise InvalidQuery("localization needs an even N", {"N": N})
    n = N // 2
    if r < 1 or r > n:
        raise InvalidQuery(f"need 1 <= r <= n, got r={r}", {"r": r, "n": n})
    position_sets = [ks for ks in combinations(range(N), r)
                     if len({k % n for k in ks}) == r]
    loci = [FixedLocus(ks, ds) for ks in position_sets for ds in compositions(d, r)]
    assert len(loci) == locus_count(N, r, d)
    return tuple(loci)


def virtual_dim_g0(N: int, r: int, d: int, family: str) -> int:
    if family == SYMPLECTIC:
        if r != 2:
            raise InvalidQuery("symplectic localization is implemented for r = 2", {"r": r})
        return (N - 1) * d + (2 * N - 5)
    if r == 2:
        return (N - 3) * d + (2 * N - 7)
    return (N - 2) * (d + 1)


@lru_cache(maxsize=4096)
def moving_factors(locus: FixedLocus, family: str, weights: WeightAssignment, t0: Any) -> Tuple[KFactor, ...]:
    """Moving part of T^vir at a genus-0 fixed locus as signed line-bundle factors."""
    r, ds = locus.r, locus.degrees
    omega = [weights.w[k] for k in locus.positions]
    unit = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    factors: List[KFactor] = []
    for i in range(r):
        for k, wk in enumerate(weights.w):
            if k != locus.positions[i]:
                factors.append(KFactor("Li^ (x) O_wk", (omega[i] - wk) * t0, unit[i], ds[i] + 1))
        for j in range(r):
            if j != i:
                coeffs = tuple(unit[i][m] - unit[j][m] for m in range(r))
                factors.append(KFactor("Li^ (x) Lj", (omega[i] - omega[j]) * t0, coeffs, -(ds[i] - ds[j] + 1)))
    if r == 2:
        factors.append(KFactor("L1^ (x) L2^", (omega[0] + omega[1]) * t0, (1, 1), -(locus.d + 1)))
    if family == SYMMETRIC:
        for i in range(r):
            factors.append(KFactor("Li^2", 2 * omega[i] * t0, tuple(2 * u for u in unit[i]), -(2 * ds[i] + 1)))
    for f in factors:
        if not f.c:
            raise DegenerateParameter(f"factor {f.kind} has zero constant term at t0={format_rational(t0)}",
                                      {"positions": list(locus.positions), "degrees": list(ds)})
    return tuple(factors)


# =========================
# Expansion
# =========================
def _linear_power(coeffs: Sequence[int], j: int, box: Sequence[int]) -> Dict[Tuple[int, ...], int]:
    """[x^alpha] (sum coeffs_i x_i)^j for alpha inside the box."""
    out = {}
    r = len(coeffs)
    for alpha in product(*(range(o + 1) for o in box)):
        if sum(alpha) != j:
            continue
        if any(a and not coeffs[i] for i, a in enumerate(alpha)):
            continue
        multinom = factorial(j)
        value = 1
        for i in range(r):
            multinom //= factorial(alpha[i])
            value *= coeffs[i] ** alpha[i]
        out[alpha] = multinom * value
    return out


def _log_series(ring: SeriesRing, factors: Sequence[KFactor], s_weight: bool,
                tangent: Optional[Sequence[int]] = None) -> MultiSeries:
    """The x-dependent log of prod ((1 + s(c+l))/(c+l))^rho [times prod (1+s x_i)^(d_i+1)].

    Without s_weight only the 1/e part is expanded: sum rho log(1 + l/c) with a minus sign.
    """
    box = ring.orders
    top = sum(box)
    t_len = (ring.t_order or 0) + 1
    terms: Dict[Tuple[int, ...], List[Any]] = {}

    def add(alpha, k, value):
        row = terms.setdefault(alpha, [QQ.zero] * t_len)
        row[k] += value

    for f in factors:
        c = f.c
        for j in range(1, top + 1):
            sign = QQ(1, j) if j % 2 else QQ(-1, j)
            powers = _linear_power(f.coeffs, j, box)
            if not powers:
                continue
            inv_c = c ** (-j)
            for alpha, mult in powers.items():
                base = sign * f.rho * mult
                add(alpha, 0, -base * inv_c)
                if s_weight:
                    # (s/(1+sc))^j = sum_k C(-j, k) c^k s^(j+k)
                    for k in range(0, t_len - j):
                        add(alpha, j + k, base * binomial_rational(-j, k) * c ** k)
    if tangent is not None and s_weight:
        for i, dim in enumerate(tangent):
            for j in range(1, min(box[i], t_len - 1) + 1):
                sign = QQ(1, j) if j % 2 else QQ(-1, j)
                alpha = tuple(j if m == i else 0 for m in range(len(box)))
                add(alpha, j, sign * (dim + 1))
    return ring.from_terms({alpha: tuple(row) for alpha, row in terms.items()})


def _constant_part(factors: Sequence[KFactor], t_order: int) -> List[Any]:
    """Coefficients in s of prod c^-rho (1 + s c)^rho, up to s^t_order."""
    ring = SeriesRing(("s",), (t_order,))
    s = ring.gen("s")
    acc = ring.one
    const = QQ.one
    for f in factors:
        acc = acc * (ring.one + s.scale(f.c)) ** f.rho
        const *= f.c ** (-f.rho)
    return [const * acc.coefficient((k,)) for k in range(t_order + 1)]


def locus_evir(locus: FixedLocus, family: str, weights: WeightAssignment, t0: Any) -> Any:
    """[x^d s^vd] of prod (1+s x_i)^(d_i+1) prod ((1+s y)/y)^rho."""
    vd = virtual_dim_g0(weights.N, locus.r, locus.d, family)
    factors = moving_factors(locus, family, weights, t0)
    names = ("x1", "x2")[: locus.r]
    ring = SeriesRing(names, locus.degrees, QQ, t_order=vd)
    F = _log_series(ring, factors, True, locus.degrees).exp()
    top = F.terms.get(tuple(locus.degrees), ())
    C = _constant_part(factors, vd)
    total = QQ.zero
    for k, ck in enumerate(C):
        if ck and vd - k < len(top):
            total += ck * top[vd - k]
    return total


@lru_cache(maxsize=1024)
def inverse_euler_g0(locus: FixedLocus, family: str, weights: WeightAssignment, t0: Any) -> MultiSeries:
    """1/e(N^vir) at the numeric parameter t0, expanded in the hyperplane classes."""
    factors = moving_factors(locus, family, weights, t0)
    names = ("x1", "x2")[: locus.r]
    ring = SeriesRing(names, locus.degrees, QQ)
    series = _log_series(ring, factors, False).exp()
    const = QQ.one
    for f in factors:
        const *= f.c ** (-f.rho)
    return series.scale(const)


def restricted_insertion(locus: FixedLocus, weights: WeightAssignment, t0: Any, Q: InsertionPoly,
                         f2_power: int, ring: SeriesRing) -> MultiSeries:
    """Q(a1, a2) f2^m with a1 = Y1 + Y2, a2 = Y1 Y2, f2 = d1 Y2 + d2 Y1, Y_i = x_i + w_i t0."""
    ys = [X_SYMBOLS[i] + QQ.to_sympy(weights.w[k] * t0) for i, k in enumerate(locus.positions)]
    if locus.r == 2:
        a1, a2 = ys[0] + ys[1], ys[0] * ys[1]
        f2 = locus.degrees[0] * ys[1] + locus.degrees[1] * ys[0]
    else:
        if f2_power:
            raise InvalidQuery("f2 needs r = 2")
        a1, a2, f2 = ys[0], 0, 1
    expr = expand(Q.to_expr().subs({A1: a1, A2: a2}, simultaneous=True) * f2 ** f2_power)
    gens = X_SYMBOLS[: locus.r]
    terms = {monom: QQ.convert(coeff) for monom, coeff in Poly(expr, *gens, domain=QQ).terms()}
    return ring.from_terms(terms)


def locus_intersection(locus: FixedLocus, family: str, weights: WeightAssignment, t0: Any,
                       Q: InsertionPoly, f2_power: int) -> Any:
    inv_e = inverse_euler_g0(locus, family, weights, t0)
    integrand = restricted_insertion(locus, weights, t0, Q, f2_power, inv_e.ring) * inv_e
    return integrand.coefficient(tuple(locus.degrees))


# =========================
# Sums over loci
# =========================
def _evir_chunk(loci, family, weights, t0):
    return sum((locus_evir(lc, family, weights, t0) for lc in loci), QQ.zero)


def _oracle_chunk(loci, family, weights, t0, Q, f2_power):
    return sum((locus_intersection(lc, family, weights, t0, Q, f2_power) for lc in loci), QQ.zero)


def _sum_over_loci(fn, loci: List[FixedLocus], *args) -> Any:
    threads = get_threads()
    if threads > 1 and len(loci) > threads:
        chunks = [loci[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fn, chunk, *args) for chunk in chunks]
            return sum((f.result() for f in futures), QQ.zero)
    return fn(loci, *args)


def _at_two_t0(label: str, evaluate) -> Any:
    """Evaluate at the first two usable t0 values and insist they agree."""
    values = []
    used = []
    for t0 in get_t0_sequence():
        try:
            values.append(evaluate(t0))
            used.append(t0)
        except DegenerateParameter as e:
            logger.warning(f"{label}: skipping t0={format_rational(t0)} ({e.message})")
            continue
        if len(values) == 2:
            break
    if len(values) < 2:
        raise DegenerateParameter(f"{label}: fewer than two usable t0 values")
    if values[0] != values[1]:
        raise TIndependenceFailure(
            f"{label} depends on t0",
            {"t0": [format_rational(t) for t in used], "values": [format_rational(v) for v in values]},
        )
    return values[0]


def intersect_oracle_g0(N: int, d: int, Q: Any, family: str = SYMPLECTIC, r: int = 2, f2_power: int = 0,
                        weights: Optional[WeightAssignment] = None) -> Any:
    """Genus-0 intersection number of Q(a1, a2) f2^m by localization."""
    Q = as_insertion(Q)
    weights = weights or WeightAssignment.default(N)
    vd = virtual_dim_g0(N, r, d, family)
    if r == 1:
        # a2 restricts to zero on rank-one loci
        Q = InsertionPoly(tuple(t for t in Q.terms if t[2] == 0) or ((0, 0, 0),))
    degree = Q.weighted_degree() + f2_power
    if degree != vd:
        raise DegreeMismatch(f"insertion degree {degree} != virtual dimension {vd}",
                             {"N": N, "d": d, "r": r, "family": family, "vd": vd})
    loci = enumerate_fixed_loci(N, r, d)
    value = _at_two_t0(
        f"oracle N={N} d={d} {family} r={r}",
        lambda t0: _sum_over_loci(_oracle_chunk, loci, family, weights, t0, Q, f2_power),
    )
    logger.debug(f"oracle N={N} d={d} Q={Q} f2^{f2_power}: {format_rational(value)}")
    return value


def evir_g0(N: int, r: int, d: int, family: str = SYMPLECTIC,
            weights: Optional[WeightAssignment] = None) -> Any:
    """Virtual Euler characteristic of the genus-0 isotropic Quot scheme."""
    weights = weights or WeightAssignment.default(N)
    loci = enumerate_fixed_loci(N, r, d)
    value = _at_two_t0(
        f"evir N={N} r={r} d={d} {family}",
        lambda t0: _sum_over_loci(_evir_chunk, loci, family, weights, t0),
    )
    if family == SYMPLECTIC:
        assert is_integral(value), f"evir N={N} r={r} d={d} is not an integer: {format_rational(value)}"
    return value


def evir_series(N: int, r: int, dmax: int, family: str = SYMPLECTIC) -> List[Any]:
    if dmax < 0:
        raise InvalidQuery("dmax must be non-negative")
    return [evir_g0(N, r, d, family) for d in range(dmax + 1)]


def etop_series(N: int, r: int, g: int, dmax: int) -> List[Any]:
    """Coefficients of 2^r C(n, r) (1 - q)^(r(2g - 2))."""
    if dmax < 0:
        raise InvalidQuery("dmax must be non-negative")
    prefactor = 2 ** r * comb(N // 2, r)
    return [prefactor * linear_product_coefficient(d, [(1, -1, r * (2 * g - 2))]) for d in range(dmax + 1)]


def weight_independence_check(N: int, r: int, d: int, family: str = SYMPLECTIC) -> Tuple[Any, Any]:
    """evir with the default weights and with (2, ..., n+1, negatives)."""
    return (evir_g0(N, r, d, family, WeightAssignment.default(N)),
            evir_g0(N, r, d, family, WeightAssignment.shifted(N)))
