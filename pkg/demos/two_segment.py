"""The two-segment construction on the bottom edge.

With both the lowest and highest price optimal for the aggregate, blending
pricing rules can collide. Instead the construction shifts mass between two
extremal markets and splits the population into a low-price and a
high-price segment. The surplus is quadratic in the split, so two rational
splits bracket the target and get blended.
"""

from fractions import Fraction

from segtri import Instance, synthesize_direct, verify_direct

inst = Instance.from_values((1, 2, 3), (Fraction(7, 12), Fraction(1, 12), Fraction(1, 3)))
res = synthesize_direct(inst, Fraction(1, 2), 1)
c = res.construction

print(f"shifted subsets S1 = {c.S1}, S2 = {c.S2}, epsilon = {c.epsilon}")
for beta in (c.beta1, c.beta2):
    print(f"  beta = {beta}: u'(beta) = {c.consumer_surplus_at(beta)}")
print(f"lambda = {c.lam}")
for e in res.direct.entries:
    print(f"  price {inst.grid[e.price]}: {e.market}, weight {e.weight}")
print(verify_direct(inst, res.direct, target=(Fraction(1, 2), 1)))
