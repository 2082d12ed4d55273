"""
Cross-check suites. Each suite returns check records
{name, params, left, right, passed}; grids come from the verify config.
"""
import logging
import random
import time
from typing import Any, Callable, Dict, List, Optional

from sympy import QQ, Integer

from exactnum import format_rational, signed_power
from fclass import f2_closed_m1, f2_intersect
from grw import grw_equals_quot, grw_sg, jacobian_identity_check, jacobian_identity_check_og
from invariants import (
    SYMMETRIC, SYMPLECTIC, InsertionPoly, QuotFamily, a_rank1_symm, a_symm_r2, a_sympl, a_sympl_poly,
    a_sympl_poly_lb, compatibility_check, duality_check, g1_generating_check, i2_closed, i2_second_kind,
    symmetric_compatibility_check, virtual_dim,
)
from isoquot_config import load_verify_config
from isoquot_errors import InvalidQuery
from localize import evir_series, intersect_oracle_g0, weight_independence_check
from rootsum import Z, sum_over_pairs, sum_over_roots_enumerated, sum_rational_over_roots
from symprod import LBInput, Y_SYMBOLS, brute_force_theta, lb_theta_sum, make_R

logger = logging.getLogger(__name__)

EXPECTED_EVIR = {
    (4, 2): [4, 16, 32, 112, -396, 6800, -85856],
    (6, 2): [12, 48, 96, 228, -3246],
    (8, 2): [24, 96, 192, 464],
}


def _record(name: str, params: Dict[str, Any], left: Any, right: Any) -> Dict[str, Any]:
    if isinstance(left, bool) or isinstance(right, bool):
        shown_left, shown_right = left, right
    else:
        shown_left, shown_right = format_rational(left), format_rational(right)
    passed = left == right
    if not passed:
        logger.warning(f"{name} {params}: {shown_left} != {shown_right}")
    return {"name": name, "params": params, "left": shown_left, "right": shown_right, "passed": passed}


def _monomials(degree: int) -> List[tuple]:
    """(m1, m2) with m1 + 2 m2 = degree."""
    if degree < 0:
        return []
    return [(degree - 2 * m2, m2) for m2 in range(degree // 2 + 1)]


def _sympl_vd(N: int, g: int, d: int) -> int:
    return virtual_dim(QuotFamily(SYMPLECTIC, N, 2, g, d))


# =========================
# Suites
# =========================
def suite_engines(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    rng = random.Random(cfg.get("seed", 0))
    records = []
    count = cfg.get("random_functions", 50)
    for N in cfg.get("N_values", [4, 6, 8]):
        for i in range(count):
            numer = sum(Integer(rng.randint(-5, 5)) * Z ** k for k in range(rng.randint(1, 6)))
            # z^k + c with |c| >= 2 has no roots on the unit circle
            c = rng.choice([-1, 1]) * rng.randint(2, 6)
            F = numer / (Z ** rng.randint(1, 4) + c)
            records.append(_record("trace_vs_enumeration", {"N": N, "index": i},
                                   sum_rational_over_roots(N, F), sum_over_roots_enumerated(N, F)))
        records.append(_record("pair_count", {"N": N}, sum_over_pairs(N, 1), QQ(N * (N - 2), 2)))
    return records


def suite_n4_closed_form(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for g in range(cfg.get("g_max", 4) + 1):
        gbar = g - 1
        for d in range(cfg.get("d_max", 5) + 1):
            vd = 3 * d - 3 * gbar
            for m1, m2 in _monomials(vd):
                if vd > 0:
                    expected = signed_power(2, 2 * d - m2 - gbar) * 3 ** g
                else:
                    expected = signed_power(2, gbar) * (3 ** g + (-1) ** (gbar % 2))
                records.append(_record("n4_closed_form", {"g": g, "d": d, "m1": m1, "m2": m2},
                                       a_sympl(4, g, d, m1, m2), expected))
    return records


def suite_g1(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N in cfg.get("N_values", [4, 6]):
        for d in range(cfg.get("d_max", 4) + 1):
            records.append(_record("g1_generating", {"N": N, "d": d},
                                   g1_generating_check(N, d), a_sympl(N, 1, d, (N - 1) * d, 0)))
    return records


def suite_rank1(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N in cfg.get("N_values", [4, 6, 8]):
        for g in range(cfg.get("g_max", 3) + 1):
            for d in range(g, g + cfg.get("d_span", 3) + 1):
                expected = QQ(N - 2) ** g * signed_power(2, 2 * d - g + 1)
                records.append(_record("rank1_symmetric", {"N": N, "g": g, "d": d}, a_rank1_symm(N, g, d), expected))
    return records


def suite_grw(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for n in cfg.get("sg_n_values", [2, 3, 4]):
        N = 2 * n
        for g in range(cfg.get("sg_g_max", 3) + 1):
            for d in range(g, g + cfg.get("sg_d_span", 3) + 1):
                for m1, m2 in _monomials(_sympl_vd(N, g, d)):
                    left, right = grw_equals_quot("sg", n, g, d, m1, m2)
                    records.append(_record("grw_sg", {"n": n, "g": g, "d": d, "m1": m1, "m2": m2}, left, right))
        records.append(_record("grw_sg_g1_d0", {"n": n}, grw_sg(n, 1, 0, 0, 0), QQ(2 * n * (n - 1))))
    for g in range(1, cfg.get("sg_g_max", 3) + 1):
        gbar = g - 1
        expected = signed_power(2, gbar) * 3 ** g + (-1) ** (gbar % 2) * 2 ** gbar
        records.append(_record("grw_sg_n2_d_gbar", {"g": g}, grw_sg(2, g, gbar, 0, 0), expected))
    for n in cfg.get("og_n_values", [3]):
        N = 2 * n + 2
        for g in range(cfg.get("og_g_max", 2) + 1):
            for d in range(g, g + cfg.get("og_d_span", 2) + 1):
                vd = virtual_dim(QuotFamily(SYMMETRIC, N, 2, g, d))
                for m1, m2 in _monomials(vd):
                    left, right = grw_equals_quot("og", n, g, d, m1, m2)
                    records.append(_record("grw_og", {"n": n, "g": g, "d": d, "m1": m1, "m2": m2}, left, right))
    return records


def _tuple_suite(name: str, check: Callable, cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N, g, d, m1, m2 in cfg.get("cases", []):
        left, right = check(N, g, d, m1, m2)
        records.append(_record(name, {"N": N, "g": g, "d": d, "m1": m1, "m2": m2}, left, right))
    return records


def suite_duality(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    return _tuple_suite("duality", duality_check, cfg)


def suite_compatibility(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = _tuple_suite("compatibility", compatibility_check, cfg)
    return records + _tuple_suite("symmetric_compatibility", symmetric_compatibility_check,
                                  {"cases": cfg.get("symmetric_cases", [])})


def suite_oracle(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N in cfg.get("N_values", [4, 6]):
        for d in range(cfg.get("d_max", 3) + 1):
            for m1, m2 in _monomials(_sympl_vd(N, 0, d)):
                params = {"N": N, "d": d, "m1": m1, "m2": m2}
                Q = InsertionPoly.monomial(m1, m2)
                oracle = intersect_oracle_g0(N, d, Q)
                records.append(_record("oracle_vs_a_sympl", params, oracle, a_sympl(N, 0, d, m1, m2)))
                records.append(_record("oracle_vs_a_sympl_poly", params, oracle, a_sympl_poly(N, 0, d, Q)))
    for N in cfg.get("rank1_N_values", [4, 6]):
        for d in range(cfg.get("rank1_d_max", 2) + 1):
            Q = InsertionPoly.monomial((N - 2) * (d + 1), 0)
            records.append(_record("oracle_vs_rank1", {"N": N, "d": d},
                                   intersect_oracle_g0(N, d, Q, SYMMETRIC, 1), a_rank1_symm(N, 0, d)))
    for N in cfg.get("symmetric_N_values", [6, 8]):
        for d in range(cfg.get("symmetric_d_max", 2) + 1):
            for m1, m2 in _monomials((N - 3) * d + 2 * N - 7):
                Q = InsertionPoly.monomial(m1, m2)
                records.append(_record("oracle_vs_a_symm", {"N": N, "d": d, "m1": m1, "m2": m2},
                                       intersect_oracle_g0(N, d, Q, SYMMETRIC, 2), a_symm_r2(N, 0, d, Q)))
    return records


def suite_lagrange_burmann(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    y1, y2 = Y_SYMBOLS
    for N in cfg.get("N_values", [4, 6]):
        for d in range(cfg.get("d_max", 3) + 1):
            degree = N * d + 2 * (N - 1)
            inp = LBInput(N=N, g=0, d=d, r=2, a=N, b=0, R=make_R((y1 + y2) ** degree), w=(0, 1))
            records.append(_record("lb_vs_brute_force", {"N": N, "d": d},
                                   lb_theta_sum(inp), brute_force_theta(inp)))
        for d in range(cfg.get("d_max", 3) + 1):
            vd = _sympl_vd(N, 0, d)
            Q = InsertionPoly.monomial(vd, 0)
            records.append(_record("lb_pair_sum_vs_trace", {"N": N, "d": d},
                                   a_sympl_poly_lb(N, 0, d, Q), a_sympl(N, 0, d, vd, 0)))
    return records


def suite_fclass(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N in cfg.get("N_values", [4, 6]):
        for g in range(cfg.get("g_max", 2) + 1):
            for d in range(cfg.get("d_max", 3) + 1):
                vd = _sympl_vd(N, g, d)
                for m1, m2 in _monomials(vd):
                    Q = InsertionPoly.monomial(m1, m2)
                    records.append(_record("f_class_m0", {"N": N, "g": g, "d": d, "m1": m1, "m2": m2},
                                           f2_intersect(N, g, d, 0, Q), a_sympl_poly(N, g, d, Q)))
                for m1, m2 in _monomials(vd - 1):
                    Q = InsertionPoly.monomial(m1, m2)
                    records.append(_record("f_class_m1_closed", {"N": N, "g": g, "d": d, "m1": m1, "m2": m2},
                                           f2_intersect(N, g, d, 1, Q), f2_closed_m1(N, g, d, Q)))
    N = cfg.get("oracle_N", 4)
    for d in range(cfg.get("d_max", 3) + 1):
        for m1, m2 in _monomials(_sympl_vd(N, 0, d) - 1):
            Q = InsertionPoly.monomial(m1, m2)
            records.append(_record("f_class_vs_oracle", {"N": N, "d": d, "m1": m1, "m2": m2},
                                   f2_intersect(N, 0, d, 1, Q), intersect_oracle_g0(N, d, Q, f2_power=1)))
    return records


def suite_jacobian(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for n in cfg.get("n_values", [2, 3, 4]):
        records.append(_record("jacobian_sg", {"n": n}, jacobian_identity_check(n), True))
    for n in cfg.get("og_n_values", []):
        records.append(_record("jacobian_og", {"n": n}, jacobian_identity_check_og(n), True))
    return records


def suite_euler(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N, r, dmax in cfg.get("series", []):
        expected = EXPECTED_EVIR.get((N, r))
        values = evir_series(N, r, dmax)
        for d, value in enumerate(values):
            if expected is None or d >= len(expected):
                continue
            records.append(_record("evir", {"N": N, "r": r, "d": d}, value, QQ(expected[d])))
    for N, r, d in cfg.get("weight_checks", []):
        left, right = weight_independence_check(N, r, d)
        records.append(_record("evir_weight_independence", {"N": N, "r": r, "d": d}, left, right))
    return records


def suite_second_kind(cfg: Dict[str, Any]) -> List[Dict[str, Any]]:
    records = []
    for N in cfg.get("N_values", [6, 8]):
        for g in range(cfg.get("g_max", 3) + 1):
            for d in range(cfg.get("d_max", 4) + 1):
                vd = virtual_dim(QuotFamily(SYMMETRIC, N, 2, g, d))
                if vd < 0:
                    continue
                Q = InsertionPoly.monomial(vd, 0)
                records.append(_record("i2_second_kind", {"N": N, "g": g, "d": d},
                                       i2_second_kind(N, g, d, Q), i2_closed(N, g, d, Q)))
    return records


SUITES: Dict[str, Callable[[Dict[str, Any]], List[Dict[str, Any]]]] = {
    "engines": suite_engines,
    "n4_closed_form": suite_n4_closed_form,
    "g1": suite_g1,
    "rank1": suite_rank1,
    "grw": suite_grw,
    "duality": suite_duality,
    "compatibility": suite_compatibility,
    "oracle": suite_oracle,
    "lagrange_burmann": suite_lagrange_burmann,
    "fclass": suite_fclass,
    "jacobian": suite_jacobian,
    "euler": suite_euler,
    "second_kind": suite_second_kind,
}


def run_suites(name: str = "all", config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Run one suite or all of them; the report carries every record and an overall flag."""
    config = config or load_verify_config()
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise InvalidQuery(f"unknown suite {name!r}", {"suites": ["all"] + sorted(SUITES)})
    report: Dict[str, Any] = {"suites": {}, "passed": True}
    for suite in names:
        started = time.monotonic()
        records = SUITES[suite](config.get(suite, {}))
        passed = all(r["passed"] for r in records)
        elapsed = time.monotonic() - started
        logger.info(f"suite {suite}: {sum(r['passed'] for r in records)}/{len(records)} passed in {elapsed:.1f}s")
        report["suites"][suite] = {"passed": passed, "checks": records}
        report["passed"] = report["passed"] and passed
    return report
