"""
Query dispatch shared by the command line and the HTTP service.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from exactnum import format_rational
from fclass import f2_closed_m1, f2_intersect
from grw import OG, SG, grw_og, grw_sg
from invariants import (
    SYMMETRIC, SYMPLECTIC, InsertionPoly, a_rank1_symm, a_symm_r2, a_sympl, a_sympl_poly, symmetric_flags,
)
from isoquot_errors import InvalidQuery
from localize import evir_series, etop_series, intersect_oracle_g0

logger = logging.getLogger(__name__)

CLOSED_FORM = "closed_form"
LOCALIZATION = "localization"

UNVALIDATED = "unvalidated"


@dataclass
class InvariantQuery:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "InvariantQuery":
        if not isinstance(payload, dict) or "kind" not in payload:
            raise InvalidQuery("query needs a 'kind'", {"kinds": sorted(HANDLERS)})
        params = {k: v for k, v in payload.items() if k != "kind"}
        return cls(str(payload["kind"]).replace("_", "-"), params)

    def int_param(self, name: str, default: Optional[int] = None) -> int:
        value = self.params.get(name, default)
        if value is None:
            raise InvalidQuery(f"missing parameter {name!r}", {"kind": self.kind})
        try:
            return int(value)
        except (TypeError, ValueError):
            raise InvalidQuery(f"parameter {name!r} must be an integer", {"value": value})

    def insertion(self) -> InsertionPoly:
        text = self.params.get("Q")
        if text is None:
            return InsertionPoly.monomial(self.int_param("m1", 0), self.int_param("m2", 0))
        return InsertionPoly.parse(str(text))


@dataclass
class InvariantResult:
    value: Any
    params: Dict[str, Any]
    method: str
    flags: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        if isinstance(self.value, list):
            value = [format_rational(v) for v in self.value]
        else:
            value = format_rational(self.value)
        return {"value": value, "params": self.params, "method": self.method, "flags": self.flags}


def _a_sympl(q: InvariantQuery) -> Tuple[Any, str, List[str]]:
    value = a_sympl(q.int_param("N"), q.int_param("g"), q.int_param("d"), q.int_param("m1"), q.int_param("m2"))
    return value, CLOSED_FORM, []


def _a_sympl_poly(q: InvariantQuery):
    return a_sympl_poly(q.int_param("N"), q.int_param("g"), q.int_param("d"), q.insertion()), CLOSED_FORM, []


def _a_symm(q: InvariantQuery):
    N, g, d = q.int_param("N"), q.int_param("g"), q.int_param("d")
    return a_symm_r2(N, g, d, q.insertion()), CLOSED_FORM, symmetric_flags(N, g, d)


def _a_rank1(q: InvariantQuery):
    return a_rank1_symm(q.int_param("N"), q.int_param("g"), q.int_param("d")), CLOSED_FORM, []


def _f_class(q: InvariantQuery):
    N, g, d, m = q.int_param("N"), q.int_param("g"), q.int_param("d"), q.int_param("m")
    if q.params.get("closed_form"):
        if m != 1:
            raise InvalidQuery("the f-class closed form covers m = 1 only", {"m": m})
        return f2_closed_m1(N, g, d, q.insertion()), CLOSED_FORM, []
    return f2_intersect(N, g, d, m, q.insertion()), CLOSED_FORM, []


def _grw(q: InvariantQuery):
    space = str(q.params.get("space", SG)).lower()
    args = (q.int_param("n"), q.int_param("g"), q.int_param("d"), q.int_param("m1", 0), q.int_param("m2", 0))
    if space == SG:
        return grw_sg(*args), CLOSED_FORM, []
    if space == OG:
        return grw_og(*args), CLOSED_FORM, []
    raise InvalidQuery(f"unknown space {space!r}", {"allowed": [SG, OG]})


def _family(q: InvariantQuery) -> str:
    family = str(q.params.get("family", SYMPLECTIC)).lower()
    if family not in (SYMPLECTIC, SYMMETRIC):
        raise InvalidQuery(f"unknown family {family!r}", {"allowed": [SYMPLECTIC, SYMMETRIC]})
    return family


def _oracle(q: InvariantQuery):
    family = _family(q)
    value = intersect_oracle_g0(q.int_param("N"), q.int_param("d"), q.insertion(), family,
                                q.int_param("r", 2), q.int_param("f2", 0))
    return value, LOCALIZATION, []


def _euler(q: InvariantQuery):
    N, r, dmax = q.int_param("N"), q.int_param("r", 2), q.int_param("dmax")
    if q.params.get("topological"):
        return etop_series(N, r, q.int_param("g", 0), dmax), CLOSED_FORM, []
    family = _family(q)
    flags = [UNVALIDATED] if family == SYMMETRIC else []
    return evir_series(N, r, dmax, family), LOCALIZATION, flags


HANDLERS: Dict[str, Callable[[InvariantQuery], Tuple[Any, str, List[str]]]] = {
    "a-sympl": _a_sympl,
    "a-sympl-poly": _a_sympl_poly,
    "a-symm": _a_symm,
    "a-rank1": _a_rank1,
    "f-class": _f_class,
    "grw": _grw,
    "oracle": _oracle,
    "euler": _euler,
}


def evaluate_query(query: InvariantQuery) -> InvariantResult:
    handler = HANDLERS.get(query.kind)
    if handler is None:
        raise InvalidQuery(f"unknown query kind {query.kind!r}", {"kinds": sorted(HANDLERS)})
    started = time.monotonic()
    value, method, flags = handler(query)
    logger.info(f"{query.kind} {query.params} done in {time.monotonic() - started:.2f}s")
    return InvariantResult(value, dict(query.params), method, flags)
