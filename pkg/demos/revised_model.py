"""Tagging each segment with its price restores the conversion.

A revised segmentation is a distribution over (market, price) pairs. Pooling
by the tag always gives at most one atom per price, and nothing about the
joint distribution or the surplus moves.
"""

from segtri import bbm_convert, joint_distribution, random_instance, random_segmentation, revise, revised_convert, surplus

collided = []
for seed in range(200):
    inst = random_instance(seed, 2 + seed % 4, "tie")
    seg, rule = random_segmentation(seed, inst)
    rho = revised_convert(revise(seg, rule))
    assert rho.joint_distribution() == joint_distribution(seg, rule)
    assert rho.surplus() == surplus(seg, rule)
    if not bbm_convert(seg, rule).success:
        collided.append((seg, rule, rho))

print(f"200 random segmentations, {len(collided)} collide under plain pooling, all fixed by tagging")

seg, rule, rho = collided[0]
inst = seg.instance
print(f"\nfirst collision: aggregate {inst.aggregate} on valuations {tuple(map(str, inst.grid))}")
for c in bbm_convert(seg, rule).collisions:
    print("  " + " = ".join(f"x^{k + 1}" for k in c.prices) + f" = {c.market}")
print("tagged atoms after pooling:")
for a in rho.atoms:
    print(f"  price {inst.grid[a.price]}: market {a.market}, weight {a.weight}")
