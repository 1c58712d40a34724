"""Walk an elliptic curve over F_7 from point counts to its zeta function.

    python3 demos/elliptic_curve.py
"""
from weilv.catalog import get_fixture
from weilv.counting import closed_point_census, count_table
from weilv.weil import curve_counts_from_numerator, functional_equation_check, hasse_weil_bound, rh_roots
from weilv.zeta import euler_product_series, reconstruct_rational, zeta_series

V = get_fixture("E7_0_0_0_2_3").variety  # y^2 = x^3 + 2x + 3
q = V.base.q
T = count_table(V, 6)
print(f"{V.label}: N_1..N_6 = {list(T.counts)}")

C = closed_point_census(T)
print(f"closed points of each degree: {list(C.counts)}")

S = zeta_series(T)
assert S == euler_product_series(C)
print(f"Z(t) = {[int(c) for c in S.coeffs]} + O(t^7), same from counts and from closed points")

Z = reconstruct_rational(S, 2, 2)
print(f"Z(t) = {Z.numerator.coeffs} / {Z.denominator.coeffs}")

fe = functional_equation_check(Z, q, 1)
print(f"functional equation: {fe.verdict}, chi = {fe.chi}, sign = {fe.sign}")

rh = rh_roots(Z.numerator, q, 1)
for r in rh.roots:
    print(f"  alpha = {r.root:.12f}   |alpha| / sqrt(q) - 1 = {r.deviation:.1e}")

# the two roots determine every later count
print(f"counts rebuilt from P_1: {curve_counts_from_numerator(Z.numerator, q, 8)}")
for b in hasse_weil_bound(T, 1, q):
    print(f"  n={b.n}: |N_n - q^n - 1| = {abs(b.deviation)} <= {b.bound:.3f}")
