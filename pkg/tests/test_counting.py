import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from weilv.algebra import MultiPoly, mp_eval
from weilv.catalog import (catalog, conic_count, diagonal_hypersurface, echelon_count, elliptic_curve,
                           gaussian_binomial, get_fixture, grassmannian_count, plucker_quadric,
                           projective_space, projective_space_count)
from weilv.counting import (CountPlan, CountTable, VarietySpec, closed_point_census, count_points, count_table,
                            divisors, feasible_depth, hypersurface, load_variety, mobius, variety_from_dict,
                            variety_to_dict)
from weilv.errors import BudgetExceeded, ConsistencyError, InputFormatError
from weilv.ffield import elements, embed, field

# #E(F_{p^n}) for y^2 = x^3 + a4 x + a6, from 1 + sum_x (1 + chi(f(x))) with
# chi evaluated by Euler's criterion in plain element arithmetic.
EULER_CRITERION_COUNTS = {
    "E5_0_0_0_1_1": [9, 27, 108, 675, 3069],
    "E7_0_0_0_2_3": [6, 60, 378, 2400],
    "E13_0_0_0_0_7": [7, 147, 2128],
    "E3_0_0_0_-1_1": [7, 7, 28, 91, 217, 784],
}


def naive_projective_count(V: VarietySpec, n: int) -> int:
    """Reference count: every normalised projective point, evaluated with mp_eval."""
    tgt = V.base if n == 1 else field(V.base.p, V.base.k * n)
    emb = embed(V.base, tgt)
    els = list(elements(tgt))
    nv = V.nvars
    total = 0
    for lead in range(nv):
        for rest in itertools.product(els, repeat=nv - lead - 1):
            pt = [tgt.zero()] * lead + [tgt.one()] + list(rest)
            if all(mp_eval(eq, pt, emb).is_zero() for eq in V.equations):
                total += 1
    return total


def _small_varieties():
    F3, F4, F5 = field(3), field(2, 2), field(5)
    x = lambda F, n, i: MultiPoly.var(F, n, i)  # noqa: E731
    out = [
        elliptic_curve(F5, 0, 0, 0, 1, 1),
        elliptic_curve(F4, 0, 0, 1, F4.gen(), 0),
        diagonal_hypersurface(F3, 2, 2),
        diagonal_hypersurface(F5, 2, 3),
    ]
    # two equations: a twisted-cubic style intersection in P^3
    a, b, c, d = (x(F3, 4, i) for i in range(4))
    out.append(VarietySpec(F3, "projective", 3, [a * c - b * b, b * d - c * c], label="two quadrics"))
    # a cubic with no variable of degree <= 2: forces full enumeration
    a, b, c = (x(F5, 3, i) for i in range(3))
    out.append(VarietySpec(F5, "projective", 2, [a ** 3 + b ** 3 + c ** 3 + a * b * c], label="cubic"))
    return out


@pytest.mark.parametrize("V", _small_varieties(), ids=lambda V: V.label)
@pytest.mark.parametrize("n", [1, 2])
def test_counts_match_naive_oracle(V, n):
    expected = naive_projective_count(V, n)
    assert count_points(V, n) == expected
    assert count_points(V, n, strategy="exhaustive") == expected


@pytest.mark.parametrize("name", sorted(EULER_CRITERION_COUNTS))
def test_frozen_elliptic_counts(name):
    frozen = EULER_CRITERION_COUNTS[name]
    assert list(count_table(get_fixture(name).variety, len(frozen)).counts) == frozen


def test_cubic_surface_n1():
    # plain modular arithmetic over all normalised points of P^3(F_7)
    total = 0
    for lead in range(4):
        for rest in itertools.product(range(7), repeat=3 - lead):
            pt = [0] * lead + [1] + list(rest)
            total += sum(v ** 3 for v in pt) % 7 == 0
    assert total == 99
    assert count_points(get_fixture("cubic_surface_F7").variety, 1) == 99


def test_projective_space_closed_form():
    for p, k in [(2, 1), (3, 1), (2, 2), (5, 1)]:
        F = field(p, k)
        for d in (0, 1, 2, 3):
            T = count_table(projective_space(F, d), 4)
            assert list(T.counts) == [projective_space_count(F.q, d, n) for n in range(1, 5)]


def test_affine_line_and_affine_curve():
    F = field(7)
    line = VarietySpec(F, "affine", 1, [], label="A^1")
    assert count_points(line, 2) == 49
    y2 = hypersurface(F, "affine", 2, [((0, 2), 1), ((3, 0), -1), ((0, 0), -1)])
    affine = sum(1 for x in range(7) for y in range(7) if (y * y - x ** 3 - 1) % 7 == 0)
    assert count_points(y2, 1) == affine


def test_grassmannian_oracles():
    assert echelon_count(2) == gaussian_binomial(4, 2, 2) == 35
    assert echelon_count(3) == gaussian_binomial(4, 2, 3) == 130
    for p in (2, 3):
        V = plucker_quadric(field(p))
        for n in (1, 2):
            assert count_points(V, n) == grassmannian_count(p, n)


def test_catalog_matches_oracles():
    for fx in catalog():
        if fx.oracle is None:
            continue
        m = min(3, feasible_depth(fx.variety, 3))
        T = count_table(fx.variety, m)
        for n in range(1, m + 1):
            expect = fx.oracle(n)
            if expect is not None:
                assert T[n] == expect, (fx.name, n)


def test_conic_is_a_line():
    T = count_table(get_fixture("conic_F3").variety, 5)
    assert list(T.counts) == [conic_count(3, n) for n in range(1, 6)]


# --- partitioning and threads -------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(1, 400), st.sampled_from(["auto", "exhaustive"]))
def test_partition_invariance(chunk, strategy):
    V = get_fixture("E7_0_0_0_2_3").variety
    plan = CountPlan(V, 1, strategy)
    assert plan.run(chunk=chunk) == 6


@pytest.mark.parametrize("name,n", [("fermat_cubic_F5", 3), ("Gr13_F2", 3), ("E13_1_-1_1_0_0", 3)])
def test_thread_invariance(name, n):
    V = get_fixture(name).variety
    seq = count_points(V, n, threads=1, chunk=997)
    assert count_points(V, n, threads=4, chunk=997) == seq
    assert count_points(V, n, threads=3, chunk=1 << 20) == seq


def test_env_thread_default(monkeypatch):
    monkeypatch.setenv("WEILV_THREADS", "3")
    V = get_fixture("fermat_cubic_F5").variety
    assert count_points(V, 2) == count_points(V, 2, threads=1)


def test_power_fiber_plan():
    # every variable of x^3 + y^3 + z^3 has degree 3: the pure-power fiber applies
    plan = CountPlan(get_fixture("fermat_cubic_F7").variety, 2)
    assert plan.patterns[0]["kind"] == "power" and plan.patterns[0]["exponent"] == 3
    assert plan.cost < CountPlan(get_fixture("fermat_cubic_F7").variety, 2, "exhaustive").cost
    surface = get_fixture("cubic_surface_F7").variety
    assert CountPlan(surface, 1).patterns[0]["kind"] == "power"
    # x^3 + y^3 + z^3 + xyz has no pure-power variable
    F = field(5)
    a, b, c = (MultiPoly.var(F, 3, i) for i in range(3))
    V = VarietySpec(F, "projective", 2, [a ** 3 + b ** 3 + c ** 3 + a * b * c])
    assert CountPlan(V, 1).patterns[0]["kind"] == "exhaustive"


@pytest.mark.parametrize("name", ["E5_0_0_0_1_1", "E2_0_0_1_0_0", "E4_g", "fermat_cubic_F7", "Gr13_F3",
                                  "fermat_quartic_F5", "cubic_surface_F7"])
def test_fiber_path_matches_exhaustive(name):
    V = get_fixture(name).variety
    for n in (1, 2):
        if CountPlan(V, n, "exhaustive").cost > 1 << 22:
            break
        assert count_points(V, n) == count_points(V, n, strategy="exhaustive")


# --- budget -----------------------------------------------------------------------

def test_budget_exceeded_before_work():
    V = get_fixture("cubic_surface_F7").variety
    with pytest.raises(BudgetExceeded) as err:
        count_table(V, 6)
    assert err.value.n == 5
    assert err.value.required > err.value.budget
    with pytest.raises(BudgetExceeded):
        count_points(V, 1, budget=10)


def test_feasible_depth():
    assert feasible_depth(get_fixture("cubic_surface_F7").variety, 8) == 4
    assert feasible_depth(get_fixture("fermat_quartic_F5").variety, 12) == 10
    assert feasible_depth(get_fixture("P3_F5").variety, 8) == 8


# --- closed points -------------------------------------------------------------------

def test_mobius_and_divisors():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValueError):
        mobius(0)


def test_census_of_projective_line():
    # closed points of P^1 over F_2 are 3 rational points plus the monic irreducibles of each degree
    C = closed_point_census(count_table(get_fixture("P1_F2").variety, 6))
    assert list(C.counts) == [3, 1, 2, 3, 6, 9]


def test_census_rejects_impossible_table():
    with pytest.raises(ConsistencyError):
        closed_point_census(CountTable(2, (3, 4)))
    with pytest.raises(ConsistencyError):
        closed_point_census(CountTable(2, (2, 3)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=6))
def test_census_inverts_necklace_sum(a):
    # any census a_d gives N_n = sum_{d | n} d a_d and back
    N = tuple(sum(d * a[d - 1] for d in divisors(n)) for n in range(1, len(a) + 1))
    assert list(closed_point_census(CountTable(2, N)).counts) == a


# --- JSON input ---------------------------------------------------------------------------

def test_json_roundtrip(tmp_path):
    V = get_fixture("E4_g").variety
    path = tmp_path / "e.json"
    path.write_text(json.dumps(variety_to_dict(V)))
    W = load_variety(path)
    assert W.equations == V.equations and W.dimension == 1 and W.smooth
    assert count_points(W, 2) == count_points(V, 2)


@pytest.mark.parametrize("patch,where", [
    ({"p": 6}, "$.p"),
    ({"p": "5"}, "$.p"),
    ({"ambient": {"kind": "torus", "dim": 2}}, "$.ambient.kind"),
    ({"ambient": {"kind": "projective", "dim": -1}}, "$.ambient.dim"),
    ({"equations": {}}, "$.equations"),
    ({"equations": [[[[1, 1], 1]]]}, "$.equations[0][0][0]"),
    ({"equations": [[[[3, 0, 0], 1], [[0, 0, 3], "x"]]]}, "$.equations[0][1][1]"),
    ({"equations": [[[[3, 0, 0], 1], [[0, 0, 1], 1]]]}, "$.equations"),
])
def test_json_errors_name_the_position(patch, where):
    base = {"p": 5, "ambient": {"kind": "projective", "dim": 2}, "equations": [[[[3, 0, 0], 1]]]}
    with pytest.raises(InputFormatError) as err:
        variety_from_dict({**base, **patch})
    assert str(err.value).startswith(where)


def test_json_missing_field_and_bad_syntax(tmp_path):
    with pytest.raises(InputFormatError, match="missing field 'equations'"):
        variety_from_dict({"p": 5, "ambient": {"kind": "affine", "dim": 1}})
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"p\": 5,\n")
    with pytest.raises(InputFormatError, match="line"):
        load_variety(bad)


def test_extension_field_coefficients():
    d = {"p": 2, "a": 2, "ambient": {"kind": "projective", "dim": 2},
         "equations": [[[[0, 2, 1], [1, 0]], [[0, 1, 2], [1, 0]], [[3, 0, 0], [1, 0]], [[1, 0, 2], [0, 1]]]]}
    V = variety_from_dict(d)
    assert count_points(V, 1) == count_points(get_fixture("E4_g").variety, 1)
