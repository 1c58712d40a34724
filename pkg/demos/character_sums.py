"""Kloosterman sums, exponential sums and Ramanujan's tau against their square-root bounds.

    python3 demos/character_sums.py
"""
import math

from weilv.charsum import exponential_sum, expsum_fixtures, kloosterman, ramanujan_tau
from weilv.ffield import field, is_prime

worst = 0.0
for p in (p for p in range(3, 102) if is_prime(p)):
    F = field(p)
    ratio = max(abs(kloosterman(F, 1, a).value) for a in range(1, p)) / (2 * math.sqrt(p))
    worst = max(worst, ratio)
print(f"max |K(a)| / 2 sqrt(p) over p <= 101: {worst:.6f}")

F9 = field(3, 2)
r = kloosterman(F9, 2)
print(f"two-variable Kloosterman over F_9: |K| = {r.magnitude:.6f} <= 3q = {r.bound:.0f}")

print("exponential sums:")
for name, Q in expsum_fixtures()[:6]:
    r = exponential_sum(Q, label=name)
    print(f"  {name:<18} |S| = {r.magnitude:9.5f}  bound = {r.bound:9.5f}  {r.verdict}")

t = ramanujan_tau(30)
print("tau(n), n = 1..12:", list(t.values[:12]))
for c in t.checks[:5]:
    print(f"  p = {c['p']:2d}: tau(p)^2 / 4p^11 = {c['tau_squared'] / c['bound_squared']:.4f}")
