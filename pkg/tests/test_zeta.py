from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weilv.algebra import IntPoly, TruncatedSeries
from weilv.catalog import catalog, get_fixture
from weilv.counting import CountTable, closed_point_census, count_table, feasible_depth
from weilv.errors import InsufficientDepth, IntegralityViolation, NoRationalFit
from weilv.zeta import (RationalFn, discover_rational, euler_product_series, hankel_determinants,
                        hankel_rationality, hankel_sweep, reconstruct_rational, zeta_series)


def test_zeta_of_p1_over_f2():
    S = zeta_series(count_table(get_fixture("P1_F2").variety, 5))
    # 1/((1-t)(1-2t)) = sum (2^(n+1) - 1) t^n
    assert list(S.coeffs) == [2 ** (n + 1) - 1 for n in range(6)]


def test_euler_product_equals_series_on_catalog():
    for fx in catalog():
        m = min(5, feasible_depth(fx.variety, 5))
        T = count_table(fx.variety, m)
        assert zeta_series(T) == euler_product_series(closed_point_census(T)), fx.name


def test_insufficient_depth():
    T = CountTable(2, (3, 5))
    with pytest.raises(InsufficientDepth):
        zeta_series(T, 3)
    with pytest.raises(InsufficientDepth):
        hankel_rationality(zeta_series(T), 1, 1)
    with pytest.raises(InsufficientDepth):
        reconstruct_rational(zeta_series(T), 2, 2)


@pytest.mark.parametrize("name,num,den", [
    ("P1_F2", (1,), (1, -3, 2)),
    ("P2_F3", (1,), (1, -13, 39, -27)),
    ("E5_0_0_0_1_1", (1, 3, 5), (1, -6, 5)),
    ("E7_0_0_0_2_3", (1, -2, 7), (1, -8, 7)),  # N_1 = 6 = 1 + 7 - 2
    ("E2_0_0_1_0_0", (1, 0, 2), (1, -3, 2)),
])
def test_reconstruction(name, num, den):
    T = count_table(get_fixture(name).variety, 8 if name.startswith("P") else 6)
    Z = reconstruct_rational(zeta_series(T), len(num) - 1, len(den) - 1)
    assert Z.numerator == IntPoly(num) and Z.denominator == IntPoly(den)
    assert Z.series(T.m) == zeta_series(T)


def test_sweep_finds_smallest_fit():
    T = count_table(get_fixture("E5_0_0_0_1_1").variety, 8)
    hv, Z = discover_rational(zeta_series(T))
    assert hv.rational and (hv.deg_num, hv.deg_den) == (2, 2)
    assert hv.label == "rational-within-window(2,2)"
    assert all(d == 0 for d in hv.determinants)
    assert Z.numerator == IntPoly((1, 3, 5))


def test_window_can_be_too_small():
    S = zeta_series(count_table(get_fixture("P2_F3").variety, 8))
    hv = hankel_rationality(S, 1, 2)
    assert not hv.rational and hv.label == "no-rational-fit"
    assert any(d != 0 for d in hv.determinants)


def test_hankel_determinants_vanish_for_rational_series():
    S = TruncatedSeries([1, 1, 2, 3, 5, 8, 13, 21, 34], 8)  # 1/(1 - t - t^2)
    assert all(d == 0 for d in hankel_determinants(S, 0, 2))
    assert any(d != 0 for d in hankel_determinants(S, 0, 1))


def test_non_rational_series():
    # exp(t) is not rational; nothing fits inside the window
    from weilv.algebra import series_exp
    S = series_exp(TruncatedSeries([0, 1], 9))
    assert not hankel_sweep(S).rational
    with pytest.raises(NoRationalFit):
        reconstruct_rational(S, 1, 1)


def test_integrality_violation():
    # (1 + t/2) / (1 - t) fits exactly but has a non-integer coefficient
    S = TruncatedSeries([1] + [Fraction(3, 2)] * 6, 6)
    with pytest.raises(IntegralityViolation):
        reconstruct_rational(S, 1, 1)


def test_rational_fn_validation():
    with pytest.raises(ValueError):
        RationalFn(IntPoly((2,)), IntPoly((1, -1)))
    with pytest.raises(ValueError):
        RationalFn(IntPoly((1, -1)), IntPoly((1, -3, 2)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=0, max_size=2), st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_reconstruction_recovers_random_fractions(num_tail, alphas):
    # denominator prod (1 - a t) with a >= 1, numerator 1 + ..., then check the round trip
    P = IntPoly(tuple([1] + num_tail))
    Q = IntPoly((1,))
    for a in alphas:
        Q = Q * IntPoly((1, -a))
    try:
        Z0 = RationalFn(P, Q)
    except ValueError:
        return  # common factor; not a reduced input
    m = P.degree + 2 * Q.degree + 2
    S = Z0.series(m)
    Z = reconstruct_rational(S, max(P.degree, 0), Q.degree)
    assert Z == Z0
