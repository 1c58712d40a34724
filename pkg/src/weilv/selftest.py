"""A quick end-to-end run over the fixture catalog, used by ``weilv selftest``."""

from __future__ import annotations

import random

from .algebra import IntPoly, charpoly_series_oracle
from .catalog import catalog, get_fixture, projective_space_count
from .charsum import exponential_sum, expsum_fixtures, kloosterman, ramanujan_tau
from .counting import closed_point_census, count_table, feasible_depth
from .ffield import field, is_prime
from .report import build_weil_report
from .weil import FAIL, PASS, complete_intersection_bound
from .zeta import euler_product_series, reconstruct_rational, zeta_series


def _entry(name, ok, **detail):
    return {"name": name, "verdict": PASS if ok else FAIL, **detail}


def run_selftest(budget: int = 1 << 22, tol: float = 1e-9) -> list[dict]:
    out = []
    for fx in catalog():
        if fx.kind != "projective_space":
            continue
        V = fx.variety
        q, d = V.q, V.dim
        T = count_table(V, 2 * d + 3, budget=budget)
        Z = reconstruct_rational(zeta_series(T), 0, d + 1)
        expected = IntPoly((1,))
        for i in range(d + 1):
            expected = expected * IntPoly((1, -(q**i)))
        ok = list(T.counts) == [projective_space_count(q, d, n) for n in range(1, T.m + 1)]
        out.append(_entry(f"closed-form {fx.name}", ok and Z.denominator == expected and Z.numerator == IntPoly((1,))))

    for fx in catalog():
        m = min(4, feasible_depth(fx.variety, 4, budget))
        if m < 1:
            continue
        T = count_table(fx.variety, m, budget=budget)
        C = closed_point_census(T)
        ok = zeta_series(T) == euler_product_series(C) and all(c >= 0 for c in C.counts)
        if fx.oracle is not None:
            ok &= all(fx.oracle(n) in (None, T[n]) for n in range(1, m + 1))
        out.append(_entry(f"series {fx.name}", ok, depth=m))

    for name in ("E5_0_0_0_1_1", "E7_0_0_0_2_3", "E2_0_0_1_0_0", "E4_g"):
        R = build_weil_report(get_fixture(name).variety, 5, num_degree=2, den_degree=2, tol=tol, budget=budget)
        out.append(_entry(f"weil-report {name}", R.ok))

    N1 = count_table(get_fixture("cubic_surface_F7").variety, 1, budget=budget)[1]
    ci = complete_intersection_bound(N1, 7, 2, (3,))
    out.append(_entry("complete-intersection cubic_surface_F7", ci.verdict == PASS, N1=N1, b=ci.b))

    rng = random.Random(20240601)
    ok = True
    for _ in range(5):
        size = rng.randint(1, 4)
        M = [[rng.randint(-3, 3) for _ in range(size)] for _ in range(size)]
        lhs, rhs = charpoly_series_oracle(M, 8)
        ok &= lhs == rhs
    out.append(_entry("charpoly series oracle", ok))

    worst = min(kloosterman(field(p), 1, a).margin + kloosterman(field(p), 1, a).eps_num
                for p in range(3, 32) if is_prime(p) for a in range(1, p))
    out.append(_entry("kloosterman p <= 31", worst >= 0, worst_margin=worst))
    out.append(_entry("exponential sums", all(exponential_sum(Q, budget=budget).verdict != FAIL
                                              for _, Q in expsum_fixtures())))
    out.append(_entry("tau bound p <= 100", ramanujan_tau(100).verdict == PASS))
    return out
