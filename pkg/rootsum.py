"""
Exact sums over N-th roots of unity other than +-1.

Two engines:
  - trace engine: reduce F modulo P(z) = (z^N - 1)/(z^2 - 1) and take the
    trace through power sums (rational in, rational out);
  - enumeration engine: evaluate in Q(zeta_N) root by root or pair by pair.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, List, Sequence, Tuple, Union

from sympy import QQ, Basic, Symbol, gcd as poly_gcd

from exactnum import (
    CycloElement, CyclotomicField, Polynomial, RationalFunction, ResidueElement, ResidueRing,
    cyclotomic_field, format_rational, invert_mod,
)
from isoquot_config import get_threads
from isoquot_errors import DenominatorVanishesAtPair, DenominatorVanishesAtRoot, NonRationalResult, NotInvertible

logger = logging.getLogger(__name__)

Z = Symbol("z")
Z1, Z2 = Symbol("z1"), Symbol("z2")


@dataclass(frozen=True)
class RootExclusionSet:
    """The N-th roots of unity with +-1 removed."""
    N: int

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError(f"root set needs an even order >= 2, got {self.N}")

    @property
    def excluded(self) -> Tuple[int, int]:
        return (1, -1)

    @property
    def count(self) -> int:
        return self.N - 2

    def exponents(self) -> List[int]:
        """k with zeta^k != +-1."""
        return [k for k in range(1, self.N) if k != self.N // 2]


@dataclass(frozen=True)
class RationalFunctionUni:
    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise NotInvertible("rational function with zero denominator")

    @classmethod
    def from_expr(cls, expr: Any, var: Symbol = Z) -> "RationalFunctionUni":
        rf = RationalFunction.from_expr(expr, [var])
        g = poly_gcd(rf.numer, rf.denom)
        num, den = rf.numer.exquo(g), rf.denom.exquo(g)
        return cls(Polynomial(reversed(num.all_coeffs())), Polynomial(reversed(den.all_coeffs())))

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)


def power_sum(N: int, k: int):
    """sum over zeta^N = 1, zeta != +-1 of zeta^k = N[N|k] - 1 - (-1)^k."""
    if N < 4 or N % 2:
        raise ValueError(f"power_sum needs an even N >= 4, got {N}")
    return QQ(N * (k % N == 0) - 1 - (-1) ** (k % 2))


@lru_cache(maxsize=None)
def exclusion_ring(N: int) -> ResidueRing:
    """Q[z]/P with P = (z^N - 1)/(z^2 - 1) = 1 + z^2 + ... + z^(N-2)."""
    coeffs = [1 if k % 2 == 0 else 0 for k in range(N - 1)]
    return ResidueRing(Polynomial(coeffs))


def trace(element: ResidueElement, N: int):
    """Sum of the values of ``element`` over the root set, via power sums."""
    total = QQ.zero
    for k, c in enumerate(reversed(element.rep)):
        if c:
            total += c * power_sum(N, k)
    return total


def sum_residue_over_roots(N: int, element: ResidueElement):
    if N == 2:
        return QQ.zero
    return trace(element, N)


def sum_rational_over_roots(N: int, F: Union[RationalFunctionUni, Any]):
    """Trace engine: exact sum of F(zeta) over zeta^N = 1, zeta != +-1."""
    RootExclusionSet(N)
    if N == 2:
        return QQ.zero
    if not isinstance(F, RationalFunctionUni):
        F = RationalFunctionUni.from_expr(F)
    ring = exclusion_ring(N)
    try:
        inv = invert_mod(ring(F.denominator))
    except NotInvertible as e:
        raise DenominatorVanishesAtRoot(
            f"denominator of F vanishes at an N={N} root other than +-1",
            {"N": N, "denominator": [format_rational(c) for c in F.denominator.coeffs]},
        ) from e
    return trace(ring(F.numerator) * inv, N)


def sum_over_roots_enumerated(N: int, F: Union[RationalFunctionUni, Any]):
    """Enumeration engine for single roots, evaluated in Q(zeta_N)."""
    roots = RootExclusionSet(N)
    if not isinstance(F, RationalFunctionUni):
        F = RationalFunctionUni.from_expr(F)
    field = cyclotomic_field(N)
    total = field.zero
    for k in roots.exponents():
        z = field.root(k)
        try:
            total = total + F.numerator(z) * invert_mod(F.denominator(z))
        except NotInvertible as e:
            raise DenominatorVanishesAtRoot(f"pole at zeta^{k} (N={N})", {"N": N, "k": k}) from e
    return _rational_or_raise(total, {"N": N})


class PairSummand:
    """Picklable pair summand G(w1, w2) on cyclotomic elements; safe to fan out to worker processes."""

    def __call__(self, w1: CycloElement, w2: CycloElement) -> CycloElement:
        raise NotImplementedError


def admissible_pairs(N: int) -> List[Tuple[int, int]]:
    """Exponent pairs (a, b), a < b, with zeta^b != +-zeta^a; each unordered pair once."""
    RootExclusionSet(N)
    half = N // 2
    return [(a, b) for a in range(N) for b in range(a + 1, N) if (b - a) % N != half]


def _rational_or_raise(value: CycloElement, params: dict):
    if not value.is_rational():
        raise NonRationalResult(f"sum is not rational: {value!r}", params)
    return value.to_rational()


def _evaluate_pair(N: int, G: Any, field: CyclotomicField, a: int, b: int) -> CycloElement:
    try:
        if isinstance(G, RationalFunction):
            return G.evaluate_at_roots(field, (a, b))
        return field.convert(G(field.root(a), field.root(b)))
    except NotInvertible as e:
        raise DenominatorVanishesAtPair(f"pole at (zeta^{a}, zeta^{b}) for N={N}",
                                        {"N": N, "pair": [a, b]}) from e


def _pair_chunk(N: int, G: Any, pairs: Sequence[Tuple[int, int]]) -> CycloElement:
    field = cyclotomic_field(N)
    total = field.zero
    for a, b in pairs:
        total = total + _evaluate_pair(N, G, field, a, b)
    return total


def sum_over_pairs_cyclo(N: int, G: Union[RationalFunction, Callable, Any], threads: int = 0) -> CycloElement:
    """Pair sum left in Q(zeta_N); rationality is the caller's business."""
    if not isinstance(G, (RationalFunction, PairSummand)) and (isinstance(G, (Basic, int)) or not callable(G)):
        G = RationalFunction.from_expr(G, [Z1, Z2])
    pairs = admissible_pairs(N)
    field = cyclotomic_field(N)
    threads = threads or get_threads()
    if threads > 1 and isinstance(G, (RationalFunction, PairSummand)) and len(pairs) > threads:
        chunks = [pairs[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_pair_chunk, [N] * threads, [G] * threads, chunks))
        # results come back pickled; rebuild them in this process's field
        total = field.zero
        for part in parts:
            total = total + field._element(list(part.rep))
        return total
    return _pair_chunk(N, G, pairs)


def sum_over_pairs(N: int, G: Union[RationalFunction, Callable, Any], threads: int = 0):
    """Sum of a symmetric G over unordered pairs {w1, w2} of N-th roots with w1 != +-w2."""
    total = sum_over_pairs_cyclo(N, G, threads)
    result = _rational_or_raise(total, {"N": N})
    logger.debug(f"pair sum N={N}: {format_rational(result)}")
    return result
