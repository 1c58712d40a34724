"""The diagonal cubic surface over F_7 sits exactly on its point-count bound.

    python3 demos/cubic_surface.py
"""
from weilv.catalog import get_fixture
from weilv.counting import count_points
from weilv.weil import complete_intersection_bound, hypersurface_primitive_betti

V = get_fixture("cubic_surface_F7").variety  # x^3 + y^3 + z^3 + w^3 = 0 in P^3
N1 = count_points(V, 1)
r = complete_intersection_bound(N1, 7, 2, (3,))
print(f"N_1 = {N1}, #P^2(F_7) = 57, deviation = {r.deviation}")
print(f"primitive middle Betti number b = {hypersurface_primitive_betti(2, 3)}")
print(f"bound b * 7 = {r.bound:.0f}, margin = {r.margin:.0f}, verdict = {r.verdict}")

# 3 | 7 - 1, so the cube roots of unity lie in F_7 and all 27 lines are rational;
# Frobenius then acts trivially on H^2 and N_1 = 1 + 7q + q^2 = 99, the extreme value.
for d in (1, 2, 3, 4, 5):
    print(f"plane curve of degree {d}: 2g = {hypersurface_primitive_betti(1, d)}")
