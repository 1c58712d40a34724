"""From a variety to a JSON-ready report: counts, zeta function, Weil checks."""

from __future__ import annotations

import json
from fractions import Fraction

from .counting import (CountTable, VarietySpec, closed_point_census, count_table,
                       variety_to_dict)
from .errors import ConsistencyError, InsufficientDepth, IntegralityViolation, NoRationalFit, NotACurveZeta
from .ffield import ENUMERATION_BUDGET
from .weil import (FAIL, NA, PASS, WeilReport, complete_intersection_bound, curve_analysis,
                   curve_counts_from_numerator, functional_equation_check, hasse_weil_bound, rh_roots,
                   to_jsonable, weight_separation)
from .zeta import RationalFn, hankel_rationality, hankel_sweep, reconstruct_rational, zeta_series

SCHEMA = "weilv-report/1"


def dumps(report: dict) -> str:
    """The canonical serialisation: fixed key order, two-space indent, trailing newline."""
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"


def _series_coeffs(S):
    return [int(c) if c.denominator == 1 else str(c) for c in S.coeffs]


def counts_section(V: VarietySpec, m: int, *, budget: int = ENUMERATION_BUDGET, threads: int = 1):
    T = count_table(V, m, budget=budget, threads=threads)
    try:
        C = closed_point_census(T)
        census = {"verdict": PASS, "counts": list(C.counts)}
    except ConsistencyError as exc:
        C = None
        census = {"verdict": FAIL, "reason": str(exc)}
    return T, C, census


def rational_section(T: CountTable, num_degree: int | None = None, den_degree: int | None = None):
    """Rationality and integrality verdicts plus the reconstructed zeta (or None)."""
    S = zeta_series(T)
    if num_degree is not None and den_degree is not None:
        if S.order >= num_degree + 2 * den_degree + 1:
            hv = hankel_rationality(S, num_degree, den_degree)
            method = "hankel-window"
        else:
            if S.order < num_degree + den_degree + 1:
                raise InsufficientDepth(num_degree + den_degree + 1, S.order,
                                        f"fit with degrees ({num_degree},{den_degree}) and one check equation")
            hv = None
            method = "fixed-degrees"
        degs = (hv.deg_num, hv.deg_den) if hv is not None and hv.rational else (num_degree, den_degree)
        if hv is not None and not hv.rational:
            degs = None
    else:
        hv = hankel_sweep(S)
        method = "hankel-sweep"
        degs = (hv.deg_num, hv.deg_den) if hv.rational else None
    rationality = {"method": method, "order": S.order}
    if hv is not None:
        rationality["window"] = list(hv.window)
        rationality["hankel_determinants"] = [str(Fraction(x)) for x in hv.determinants]
    Z = None
    integrality = {"verdict": NA, "reason": "no rational function"}
    if degs is None:
        rationality.update(verdict=FAIL, label="no-rational-fit",
                           reason="no rational function fits the series within the window at this depth")
    else:
        try:
            Z = reconstruct_rational(S, *degs)
        except NoRationalFit as exc:
            rationality.update(verdict=FAIL, label="no-rational-fit", reason=str(exc))
        except IntegralityViolation as exc:
            rationality.update(verdict=PASS, label=f"rational-within-window({degs[0]},{degs[1]})")
            integrality = {"verdict": FAIL, "reason": str(exc)}
        else:
            rationality.update(verdict=PASS, label=f"rational-within-window({degs[0]},{degs[1]})",
                               degrees=list(Z.degrees), surplus_equations=S.order - sum(degs))
            integrality = {"verdict": PASS}
    return S, Z, rationality, integrality


def _zeta_dict(Z: RationalFn | None):
    return None if Z is None else Z.to_dict()


def weil_sections(V: VarietySpec, T: CountTable, Z: RationalFn | None, tol: float):
    """Functional equation, weights, curve checks and bounds for a smooth projective V."""
    q = V.q
    d = V.dimension
    smooth = V.smooth is True
    projective = V.ambient == "projective"
    assumptions = {
        "projective": projective,
        "smoothness_asserted": smooth,
        "smoothness_verified": False,
        "betti_numbers": "inferred",
    }
    if not (smooth and projective):
        assumptions["note"] = "hypothesis not verified: the Weil checks need a smooth projective variety"
    if Z is None or not (smooth and projective):
        na = {"verdict": NA}
        return dict(functional_equation=na, rh=na, betti=na, curve=None, bounds=[], assumptions=assumptions)

    fe = functional_equation_check(Z, q, d)
    ws = weight_separation(Z, q, tol)
    rh = {
        "verdict": ws.verdict,
        "tol": tol,
        "numerator_roots": [_root_entry(r) for r in ws.numerator_roots],
        "denominator_roots": [_root_entry(r) for r in ws.denominator_roots],
    }
    betti = {"verdict": ws.verdict, "label": "inferred",
             "betti": {str(k): v for k, v in ws.betti.items()},
             "euler_characteristic": sum((-1) ** j * b for j, b in ws.betti.items())}
    curve = None
    bounds = []
    if d == 1:
        try:
            ca = curve_analysis(Z, q)
        except NotACurveZeta as exc:
            curve = {"verdict": FAIL, "reason": str(exc)}
        else:
            rr = rh_roots(ca.P1, q, 1, tol)
            predicted = curve_counts_from_numerator(ca.P1, q, T.m)
            formula_ok = predicted == list(T.counts)
            curve = {
                "verdict": PASS if rr.verdict == PASS and formula_ok else FAIL,
                "genus": ca.genus,
                "P1": list(ca.P1.coeffs),
                "rh_verdict": rr.verdict,
                "root_product_check": rr.product_check,
                "max_relative_deviation": max((r.deviation for r in rr.roots), default=0.0),
                "counts_from_roots": predicted,
                "counts_from_roots_verdict": PASS if formula_ok else FAIL,
            }
            bounds += [to_jsonable(b) for b in hasse_weil_bound(T, ca.genus, q)]
    if projective and len(V.equations) == 1 and V.dimension == V.dim - 1:
        ci = complete_intersection_bound(T[1], q, d, V.degrees)
        bounds.append({"name": "complete-intersection", **to_jsonable(ci)})
    return dict(functional_equation=to_jsonable(fe), rh=rh, betti=betti, curve=curve, bounds=bounds,
                assumptions=assumptions)


def _root_entry(r):
    return {"root": [r.root.real, r.root.imag], "modulus": r.modulus, "weight": r.weight,
            "deviation": r.deviation}


def build_weil_report(V: VarietySpec, m: int, *, num_degree=None, den_degree=None, tol: float = 1e-9,
                      budget: int = ENUMERATION_BUDGET, threads: int = 1) -> WeilReport:
    T, C, census = counts_section(V, m, budget=budget, threads=threads)
    S, Z, rationality, integrality = rational_section(T, num_degree, den_degree)
    if census["verdict"] == FAIL:
        integrality = {"verdict": FAIL, "reason": census["reason"]}
    w = weil_sections(V, T, Z, tol)
    return WeilReport(
        label=V.label, q=V.q, dimension=V.dimension, counts=list(T.counts),
        census=census.get("counts", []), rationality=rationality, integrality=integrality,
        zeta=_zeta_dict(Z), functional_equation=w["functional_equation"], rh=w["rh"], betti=w["betti"],
        curve=w["curve"], bounds=w["bounds"], assumptions=w["assumptions"],
        config={"depth": m, "num_degree": num_degree, "den_degree": den_degree, "tol": tol, "budget": budget},
    )


def envelope(command: str, config: dict, body: dict, variety: VarietySpec | None = None) -> dict:
    out = {"schema": SCHEMA, "command": command, "config": config}
    if variety is not None:
        out["variety"] = variety_to_dict(variety)
    out.update(body)
    return out


def verdicts_of(obj) -> list[str]:
    """Every ``verdict`` value in a nested report, in document order."""
    found = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k == "verdict" and isinstance(v, str):
                found.append(v)
            else:
                found += verdicts_of(v)
    elif isinstance(obj, list):
        for v in obj:
            found += verdicts_of(v)
    return found


def first_failure(obj, path="$"):
    """Path of the first verdict that is neither pass nor not-applicable."""
    if isinstance(obj, dict):
        v = obj.get("verdict")
        if isinstance(v, str) and v not in (PASS, NA):
            return path, v
        for k, val in obj.items():
            hit = first_failure(val, f"{path}.{k}")
            if hit:
                return hit
    elif isinstance(obj, list):
        for i, val in enumerate(obj):
            hit = first_failure(val, f"{path}[{i}]")
            if hit:
                return hit
    return None
