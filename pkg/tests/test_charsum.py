import cmath
import itertools
import math

import pytest

from weilv.algebra import MultiPoly, mp_eval
from weilv.charsum import (EPS_PER_TERM, additive_character, character_total, euler_product_coeffs,
                           exponential_sum, expsum_fixtures, kloosterman, leading_form_singular_search,
                           polynomial_from_dict, ramanujan_tau, series_power)
from weilv.errors import BudgetExceeded, InputFormatError
from weilv.ffield import elements, field, is_prime


def direct_sum(Q: MultiPoly) -> complex:
    """Reference: sum psi(Q(x)) term by term in element arithmetic."""
    F = Q.ctx
    psi = additive_character(F)
    return sum(psi(mp_eval(Q, list(pt))) for pt in itertools.product(list(elements(F)), repeat=Q.nvars))


def direct_kloosterman(F, n, a):
    psi = additive_character(F)
    units = [x for x in elements(F) if not x.is_zero()]
    total = 0j
    for xs in itertools.product(units, repeat=n):
        prod = F.one()
        for x in xs:
            prod = prod * x
        total += psi(sum(xs, F.zero()) + a / prod)
    return total


# --- additive character -------------------------------------------------------------

def test_character_values():
    assert additive_character(field(5))(0) == 1
    assert cmath.isclose(additive_character(field(5))(1), cmath.exp(2j * math.pi / 5))
    F4 = field(2, 2)
    assert cmath.isclose(additive_character(F4)(F4.gen()), -1)


@pytest.mark.parametrize("p,k", [(p, k) for p in (2, 3, 5, 7) for k in (1, 2, 3) if p**k <= 64])
def test_character_is_nontrivial_and_orthogonal(p, k):
    F = field(p, k)
    assert abs(character_total(F)) <= F.q * EPS_PER_TERM
    psi = additive_character(F)
    assert any(abs(psi(x) - 1) > 0.5 for x in elements(F))


# --- exponential sums ----------------------------------------------------------------

def test_linear_sum_vanishes():
    F = field(7)
    x, y = MultiPoly.var(F, 2, 0), MultiPoly.var(F, 2, 1)
    r = exponential_sum(x + 2 * y)
    assert r.bound == 0 and r.magnitude <= r.eps_num and r.verdict == "pass"
    r = exponential_sum(MultiPoly.var(F, 1, 0))
    assert r.magnitude <= r.eps_num


def test_cubic_over_f5():
    F = field(5)
    x = MultiPoly.var(F, 1, 0)
    r = exponential_sum(x ** 3)
    # cubing permutes F_5, so the sum is a full character sum
    assert abs(r.value - direct_sum(x ** 3)) <= 1e-12
    assert r.bound == pytest.approx(2 * math.sqrt(5)) and r.verdict == "pass"


def test_two_squares_over_f3_is_a_gauss_sum_square():
    F = field(3)
    x, y = MultiPoly.var(F, 2, 0), MultiPoly.var(F, 2, 1)
    r = exponential_sum(x * x + y * y)
    zeta = cmath.exp(2j * math.pi / 3)
    gauss = 1 + 2 * zeta  # x = 0 gives 1, x = +-1 give psi(1)
    assert abs(r.value - gauss**2) <= 1e-12
    assert r.bound == pytest.approx(3) and r.verdict == "pass"


@pytest.mark.parametrize("name,Q", expsum_fixtures(), ids=[n for n, _ in expsum_fixtures()])
def test_fixture_sums_match_direct_summation(name, Q):
    if Q.ctx.q ** Q.nvars > 4000:
        pytest.skip("direct summation too slow")
    r = exponential_sum(Q)
    assert abs(r.value - direct_sum(Q)) <= 1e-9 * max(1, r.terms)
    assert abs(r.magnitude ** 2 - abs(r.value) ** 2) <= 1e-12 * max(1.0, r.magnitude ** 2)


def test_gcd_condition():
    F = field(3)
    x = MultiPoly.var(F, 1, 0)
    r = exponential_sum(x ** 3 + x)
    assert r.verdict == "not-applicable" and not r.notes["gcd_condition"]


def test_singular_leading_form_is_detected():
    F = field(5)
    x, y = MultiPoly.var(F, 2, 0), MultiPoly.var(F, 2, 1)
    assert leading_form_singular_search(x * x * y) == "singular-point-found"
    assert leading_form_singular_search(x ** 3 + y ** 3) == "none-found"
    assert exponential_sum(x * x * y + x).verdict == "not-applicable"


def test_expsum_budget():
    F = field(5)
    x = [MultiPoly.var(F, 4, i) for i in range(4)]
    with pytest.raises(BudgetExceeded):
        exponential_sum(x[0] ** 2 + x[1] ** 2 + x[2] ** 2 + x[3] ** 2, budget=100)


def test_polynomial_input_errors():
    with pytest.raises(InputFormatError, match=r"\$.terms\[0\]\[0\]"):
        polynomial_from_dict({"p": 5, "nvars": 2, "terms": [[[1], 1]]})
    with pytest.raises(InputFormatError, match="missing field"):
        polynomial_from_dict({"p": 5, "terms": []})
    Q = polynomial_from_dict({"p": 2, "a": 2, "nvars": 1, "terms": [[[3], [1, 0]], [[1], [0, 1]]]})
    assert Q.total_degree() == 3


# --- Kloosterman sums --------------------------------------------------------------------

def test_kloosterman_f5():
    r = kloosterman(field(5), 1)
    # x + 1/x over F_5^x takes the values 2, 0, 0, 3
    assert abs(r.value - (2 + 2 * math.cos(4 * math.pi / 5))) <= 1e-12
    assert r.value.real == pytest.approx(0.381966, abs=1e-6)
    assert r.bound == pytest.approx(2 * math.sqrt(5))


def test_kloosterman_f2_single_term():
    r = kloosterman(field(2), 1)
    assert r.terms == 1 and r.value == 1 and r.bound == pytest.approx(2 * math.sqrt(2))


def test_kloosterman_two_variables_f3():
    F = field(3)
    r = kloosterman(F, 2)
    assert r.terms == 4 and r.bound == pytest.approx(9)
    assert abs(r.value - direct_kloosterman(F, 2, F.one())) <= 1e-12


@pytest.mark.parametrize("p,k,n", [(5, 1, 2), (2, 2, 2), (3, 2, 2), (7, 1, 1), (2, 3, 1), (5, 1, 3)])
def test_kloosterman_matches_direct(p, k, n):
    F = field(p, k)
    for a in list(elements(F))[1:4]:
        assert abs(kloosterman(F, n, a).value - direct_kloosterman(F, n, a)) <= 1e-10


@pytest.mark.parametrize("p", [p for p in range(3, 102) if is_prime(p)])
def test_kloosterman_real_and_bounded(p):
    F = field(p)
    for a in range(1, p):
        r = kloosterman(F, 1, a)
        assert abs(r.value.imag) <= r.eps_num
        assert r.margin >= -r.eps_num


def test_kloosterman_errors():
    with pytest.raises(ValueError):
        kloosterman(field(5), 1, 0)
    with pytest.raises(ValueError):
        kloosterman(field(5), 0)
    with pytest.raises(BudgetExceeded):
        kloosterman(field(101), 3, budget=1000)


# --- Ramanujan tau --------------------------------------------------------------------------

def tau_by_binary_powering(limit):
    """Independent route: square-and-multiply of the truncated product prod (1 - q^n)."""
    m = limit - 1

    def mul(a, b):
        out = [0] * (m + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(m + 1 - i):
                    out[i + j] += x * b[j]
        return out

    base = [1] + [0] * m
    for n in range(1, m + 1):
        factor = [0] * (m + 1)
        factor[0], factor[n] = 1, -1
        base = mul(base, factor)
    result, e = [1] + [0] * m, 24
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def test_tau_small_values():
    # (1 - q)^24 (1 - q^2)^24 to order q^1 gives -24
    t = ramanujan_tau(2)
    assert t.tau(1) == 1 and t.tau(2) == -24
    assert ramanujan_tau(1).values == (1,)


def test_tau_against_binary_powering():
    assert list(ramanujan_tau(120).values) == tau_by_binary_powering(120)


def test_tau_multiplicativity():
    t = ramanujan_tau(200)
    assert t.tau(6) == t.tau(2) * t.tau(3)
    assert t.tau(4) == t.tau(2) ** 2 - 2 ** 11
    assert t.tau(35) == t.tau(5) * t.tau(7)


def test_tau_bound_for_primes():
    t = ramanujan_tau(100)
    assert t.verdict == "pass"
    assert [c["p"] for c in t.checks] == [p for p in range(2, 101) if is_prime(p)]
    assert all(c["tau_squared"] <= c["bound_squared"] for c in t.checks)


def test_pentagonal_and_power():
    assert euler_product_coeffs(12) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
    h = [1, 2, 0, 1]
    assert series_power(h, 3) == [1, 6, 12, 11]  # (1 + 2x + x^3)^3 mod x^4
