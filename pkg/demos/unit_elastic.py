"""When the aggregate is the equal-revenue market, the bottom edge thins out.

Only the K single-price points are reachable at the uniform profit; anything
between them is infeasible. A random search backs this up, and a hand-built
candidate shows what the deductive check rejects.
"""

from fractions import Fraction

from segtri import (
    DirectSegmentation,
    Entry,
    Instance,
    Market,
    ValuationGrid,
    extremal_market,
    prop3_point_set,
    synthesize_direct,
)
from segtri.verify import equal_revenue_witness, prop3_search

grid = ValuationGrid((1, 2, 3))
xv = extremal_market(grid, range(3))
inst = Instance(grid, xv)
print(f"x^V = {xv}")
print(f"reachable u at pi = 1: {[str(q) for q in prop3_point_set(inst)]}")

for u in (Fraction(5, 6), Fraction(1, 2), Fraction(1, 3), Fraction(1, 10)):
    res = synthesize_direct(inst, u, 1)
    print(f"  u = {u}: {res.route or res.reason}")

print(prop3_search(inst, 500, seed=1))

# two segments earning 1 at their own price, neither of them equal-revenue
y = Market((Fraction(7, 12), Fraction(1, 12), Fraction(1, 3)))
z = Market((Fraction(5, 12), Fraction(1, 4), Fraction(1, 3)))
d = DirectSegmentation(inst, (Entry(0, y, Fraction(1, 2)), Entry(2, z, Fraction(1, 2))), check=False)
print(equal_revenue_witness(inst, d))
