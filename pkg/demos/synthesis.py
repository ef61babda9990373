"""Reaching points of the surplus triangle with direct segmentations.

Walk a lattice over the triangle of one instance, build a direct
segmentation for each point, and check it with the independent verifier.
"""

from collections import Counter
from fractions import Fraction

from segtri import Instance, synthesize_direct, triangle, verify_direct

inst = Instance.from_values((1, 2, 4), (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
tri = triangle(inst)
print(f"pi* = {tri.pi_star}, w* = {tri.w_star}")

routes = Counter()
n = 4
for a in range(n + 1):
    for b in range(n + 1 - a):
        u = Fraction(a, n) * tri.width
        pi = tri.pi_star + Fraction(b, n) * tri.width
        res = synthesize_direct(inst, u, pi)
        assert verify_direct(inst, res.direct, target=(u, pi)).overall
        routes[res.route] += 1
        segs = ", ".join(f"{inst.grid[e.price]}:{e.weight}" for e in res.direct.entries)
        print(f"  ({u}, {pi})  {res.route:13s} price:weight {segs}")

print(dict(routes))
