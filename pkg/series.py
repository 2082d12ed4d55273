"""
Truncated multivariate power series in q-variables with an auxiliary t.

A series is a map from q-exponent tuples to t-polynomials (tuples of
coefficients, lowest t-degree first). Each q-variable carries its own
truncation order; t is exact unless the ring fixes ``t_order``.
"""
import logging
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from sympy import QQ

from exactnum import binomial_rational, to_rational
from isoquot_errors import NonUnitConstantTerm

logger = logging.getLogger(__name__)

Exps = Tuple[int, ...]
TPoly = Tuple[Any, ...]


def _strip(coeffs: Iterable[Any]) -> TPoly:
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _tadd(a: TPoly, b: TPoly) -> TPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _strip(out)


def _tneg(a: TPoly) -> TPoly:
    return tuple(-c for c in a)


def _tscale(a: TPoly, c: Any) -> TPoly:
    return _strip(x * c for x in a)


def _tmul(a: TPoly, b: TPoly, t_order: Optional[int]) -> TPoly:
    n = len(a) + len(b) - 1
    if t_order is not None:
        n = min(n, t_order + 1)
    if n <= 0:
        return ()
    out = [None] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j, y in enumerate(b):
            k = i + j
            if k >= n:
                break
            out[k] = x * y if out[k] is None else out[k] + x * y
    return _strip(c if c is not None else a[0] * 0 for c in out)


class SeriesRing:
    """Factory for MultiSeries sharing variables, orders, domain and t truncation."""

    def __init__(self, names: Sequence[str], orders: Sequence[int], domain: Any = QQ,
                 t_order: Optional[int] = None):
        if len(names) != len(orders):
            raise ValueError("names and orders must have the same length")
        if any(o < 0 for o in orders):
            raise ValueError("truncation orders must be non-negative")
        self.names = tuple(names)
        self.orders = tuple(orders)
        self.domain = domain
        self.t_order = t_order
        self.nvars = len(self.names)

    # -- domain helpers
    def convert(self, value: Any):
        if self.domain is QQ:
            return to_rational(value)
        return self.domain.convert(value)

    @property
    def one_c(self):
        return QQ.one if self.domain is QQ else self.domain.one

    @property
    def zero_c(self):
        return QQ.zero if self.domain is QQ else self.domain.zero

    # -- constructors
    def index(self, name: str) -> int:
        return self.names.index(name)

    def from_terms(self, terms: Dict[Exps, Any]) -> "MultiSeries":
        """Build from exponent -> scalar or t-coefficient tuple; drops out-of-range terms."""
        clean: Dict[Exps, TPoly] = {}
        for exps, value in terms.items():
            if any(e > o for e, o in zip(exps, self.orders)):
                continue
            if isinstance(value, tuple):
                tp = _strip(self.convert(c) for c in value)
            else:
                tp = _strip([self.convert(value)])
            if self.t_order is not None:
                tp = _strip(tp[: self.t_order + 1])
            if tp:
                clean[tuple(exps)] = tp
        return MultiSeries(self, clean)

    def __call__(self, value: Any) -> "MultiSeries":
        if isinstance(value, MultiSeries):
            if value.ring != self:
                raise ValueError("series belongs to a different ring")
            return value
        return self.from_terms({(0,) * self.nvars: value})

    @property
    def zero(self) -> "MultiSeries":
        return MultiSeries(self, {})

    @property
    def one(self) -> "MultiSeries":
        return self(1)

    def gen(self, name: str) -> "MultiSeries":
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return self.from_terms({tuple(exps): 1})

    @property
    def gens(self) -> Tuple["MultiSeries", ...]:
        return tuple(self.gen(n) for n in self.names)

    @property
    def t(self) -> "MultiSeries":
        return self.from_terms({(0,) * self.nvars: (0, 1)})

    def binomial(self, alpha: Any, name: str) -> "MultiSeries":
        """(1 + q_name)^alpha for rational alpha."""
        i = self.index(name)
        terms = {}
        for k in range(self.orders[i] + 1):
            exps = [0] * self.nvars
            exps[i] = k
            terms[tuple(exps)] = binomial_rational(alpha, k)
        return self.from_terms(terms)

    def with_order(self, name: str, order: int) -> "SeriesRing":
        orders = list(self.orders)
        orders[self.index(name)] = order
        return SeriesRing(self.names, orders, self.domain, self.t_order)

    def with_domain(self, domain: Any) -> "SeriesRing":
        return SeriesRing(self.names, self.orders, domain, self.t_order)

    def __eq__(self, other):
        return (isinstance(other, SeriesRing) and self.names == other.names and self.orders == other.orders
                and self.domain == other.domain and self.t_order == other.t_order)

    def __hash__(self):
        return hash((self.names, self.orders, self.t_order))

    def __repr__(self):
        return f"SeriesRing({self.names}, orders={self.orders}, domain={self.domain}, t_order={self.t_order})"


class MultiSeries:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: Dict[Exps, TPoly]):
        self.ring = ring
        self.terms = terms

    def _new(self, terms: Dict[Exps, TPoly], ring: Optional[SeriesRing] = None) -> "MultiSeries":
        return MultiSeries(ring or self.ring, {e: c for e, c in terms.items() if c})

    def _coerce(self, other) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = _tadd(out[e], c) if e in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: _tneg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: Any) -> "MultiSeries":
        c = self.ring.convert(c)
        if not c:
            return self.ring.zero
        return self._new({e: _tscale(v, c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        other = self._coerce(other)
        orders, t_order = self.ring.orders, self.ring.t_order
        out: Dict[Exps, TPoly] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if any(x > o for x, o in zip(e, orders)):
                    continue
                prod = _tmul(ca, cb, t_order)
                if not prod:
                    continue
                out[e] = _tadd(out[e], prod) if e in out else prod
        return self._new(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiSeries):
            return self * other.invert()
        c = self.ring.convert(other)
        return self.scale(self.ring.one_c / c)

    def __rtruediv__(self, other):
        return self.invert().scale(other)

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    # -- graded helpers
    def _box(self) -> Iterable[Exps]:
        """All exponent vectors within the truncation box, by total degree."""
        boxes = [()]
        for o in self.ring.orders:
            boxes = [b + (k,) for b in boxes for k in range(o + 1)]
        return sorted(boxes, key=lambda e: (sum(e), e))

    def _tinv(self, c: TPoly) -> TPoly:
        t_order = self.ring.t_order
        if not c or not c[0]:
            raise NonUnitConstantTerm("constant term is not a unit")
        if t_order is None:
            if len(c) != 1:
                raise NonUnitConstantTerm("constant term depends on t and t is untruncated")
            return (self.ring.one_c / c[0],)
        inv0 = self.ring.one_c / c[0]
        out = [inv0]
        for k in range(1, t_order + 1):
            acc = None
            for j in range(1, min(k, len(c) - 1) + 1):
                term = c[j] * out[k - j]
                acc = term if acc is None else acc + term
            out.append(self.ring.zero_c if acc is None else -(acc * inv0))
        return _strip(out)

    def invert(self) -> "MultiSeries":
        zero = (0,) * self.ring.nvars
        c0 = self.terms.get(zero, ())
        inv0 = self._tinv(c0)
        t_order = self.ring.t_order
        items = [(e, c) for e, c in self.terms.items() if e != zero]
        out: Dict[Exps, TPoly] = {zero: inv0}
        for alpha in self._box():
            if alpha == zero:
                continue
            acc: TPoly = ()
            for beta, cb in items:
                if all(b <= a for b, a in zip(beta, alpha)):
                    rest = tuple(a - b for a, b in zip(alpha, beta))
                    if rest in out:
                        acc = _tadd(acc, _tmul(cb, out[rest], t_order))
            if acc:
                out[alpha] = _tneg(_tmul(acc, inv0, t_order))
        return self._new(out)

    def exp(self) -> "MultiSeries":
        """exp of a series without constant term: |a| F_a = sum |b| X_b F_(a-b)."""
        zero = (0,) * self.ring.nvars
        if self.terms.get(zero):
            raise NonUnitConstantTerm("exp needs a series with zero constant term")
        t_order = self.ring.t_order
        items = [(e, sum(e), c) for e, c in self.terms.items()]
        out: Dict[Exps, TPoly] = {zero: (self.ring.one_c,)}
        for alpha in self._box():
            n = sum(alpha)
            if n == 0:
                continue
            acc: TPoly = ()
            for beta, weight, cb in items:
                if all(b <= a for b, a in zip(beta, alpha)):
                    rest = tuple(a - b for a, b in zip(alpha, beta))
                    if rest in out:
                        acc = _tadd(acc, _tscale(_tmul(cb, out[rest], t_order), weight))
            if acc:
                out[alpha] = _tscale(acc, QQ(1, n))
        return self._new(out)

    # -- calculus
    def derive(self, name: str) -> "MultiSeries":
        """d/dq_name; the result is exact one order lower."""
        i = self.ring.index(name)
        ring = self.ring.with_order(name, max(self.ring.orders[i] - 1, 0))
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0 or e[i] - 1 > ring.orders[i]:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[ne] = _tscale(c, e[i])
        return self._new(out, ring)

    def integrate(self, name: str) -> "MultiSeries":
        i = self.ring.index(name)
        ring = self.ring.with_order(name, self.ring.orders[i] + 1)
        out = {}
        for e, c in self.terms.items():
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            out[ne] = _tscale(c, QQ(1, e[i] + 1))
        return self._new(out, ring)

    def euler(self, name: str) -> "MultiSeries":
        """q_name * d/dq_name."""
        i = self.ring.index(name)
        return self._new({e: _tscale(c, e[i]) for e, c in self.terms.items() if e[i]})

    def derive_t(self) -> "MultiSeries":
        return self._new({e: _strip(c[k] * k for k in range(1, len(c))) for e, c in self.terms.items()})

    def at_t(self, value: Any) -> "MultiSeries":
        v = self.ring.convert(value)
        out = {}
        for e, c in self.terms.items():
            acc = c[-1]
            for x in reversed(c[:-1]):
                acc = acc * v + x
            out[e] = _strip([acc])
        return self._new(out)

    def t_degree(self) -> int:
        return max((len(c) - 1 for c in self.terms.values()), default=-1)

    # -- substitutions and extraction
    def diagonal(self, first: str, second: str, name: str = "q") -> "MultiSeries":
        """Substitute first = second = name; truncated at the smaller order."""
        i, j = self.ring.index(first), self.ring.index(second)
        keep = [k for k in range(self.ring.nvars) if k not in (i, j)]
        order = min(self.ring.orders[i], self.ring.orders[j])
        ring = SeriesRing([name] + [self.ring.names[k] for k in keep],
                          [order] + [self.ring.orders[k] for k in keep],
                          self.ring.domain, self.ring.t_order)
        out: Dict[Exps, TPoly] = {}
        for e, c in self.terms.items():
            s = e[i] + e[j]
            if s > order:
                continue
            ne = (s,) + tuple(e[k] for k in keep)
            out[ne] = _tadd(out[ne], c) if ne in out else c
        return self._new(out, ring)

    def coefficient(self, exps: Sequence[int], t_power: Optional[int] = None):
        """Scalar coefficient of q^exps (and t^t_power when given)."""
        exps = tuple(exps)
        if any(e > o for e, o in zip(exps, self.ring.orders)):
            raise ValueError(f"exponent {exps} beyond truncation {self.ring.orders}")
        c = self.terms.get(exps, ())
        if t_power is None:
            if len(c) > 1:
                raise ValueError("coefficient depends on t; pass t_power")
            t_power = 0
        return c[t_power] if t_power < len(c) else self.ring.zero_c

    def change_domain(self, domain: Any) -> "MultiSeries":
        ring = self.ring.with_domain(domain)
        return ring.from_terms(dict(self.terms))

    def __repr__(self):
        return f"MultiSeries({len(self.terms)} terms over {self.ring.names}, orders={self.ring.orders})"


def binomial_series(alpha: Any, order: int) -> MultiSeries:
    """sum_{k<=order} C(alpha, k) q^k."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return SeriesRing(("q",), (order,)).binomial(alpha, "q")


def linear_product_coefficient(k: int, factors: Sequence[Tuple[Any, Any, int]]):
    """[q^k] of prod (c0 + c1 q)^e; negative e needs c0 != 0."""
    if k < 0:
        return QQ.zero
    ring = SeriesRing(("q",), (k,))
    q = ring.gen("q")
    acc = ring.one
    for c0, c1, e in factors:
        acc = acc * (ring(c0) + q.scale(c1)) ** e
    return acc.coefficient((k,))
