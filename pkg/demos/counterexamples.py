"""Pooling segments by posted price can make two prices share one market.

Both fixtures below pool to identical conditional markets, so no direct
segmentation reproduces their joint distribution of valuations and prices.
"""

from segtri import bbm_convert, example1, example2, joint_distribution, surplus
from segtri.market import fmt

for name, build in (("example 1", example1), ("example 2", example2)):
    seg, rule = build()
    pt, total = surplus(seg, rule)
    print(f"{name}: x* = {seg.instance.aggregate}, u = {pt.u}, pi = {pt.pi}, total = {total}")

    joint = joint_distribution(seg, rule)
    for k, mass in enumerate(joint.price_marginal()):
        if mass:
            print(f"  valuations given price {seg.instance.grid[k]}: {fmt(joint.conditional(k))}")

    out = bbm_convert(seg, rule)
    for c in out.collisions:
        labels = " = ".join(f"x^{k + 1}" for k in c.prices)
        print(f"  collision: {labels} = {c.market}")
