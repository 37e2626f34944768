"""
Choosing the number of groups
=============================

Grouping K filters into G sub-banks costs ``G*M`` inner accumulations but
cuts the outer stage from ``2**K * K`` down to roughly ``2**(K/G) * K``.
This script walks the trade-off for K = 8.
"""
###############################################################################
# Expected counts for the running example K=8, M=120.

import fbshare as fb

for G in range(1, 9):
    rep = fb.expected_cost_discrete(8, 120, G, "mac")
    print(f"G={G}: inner={rep.inner_macs:4d} outer={rep.outer_macs:5d} total={rep.total_macs}")

###############################################################################
# The discrete search picks G=2 in both outer-stage styles.

for mode in ("mac", "pyramid"):
    res = fb.optimize_G_discrete(8, 120, mode)
    print(mode, "best G =", res.best_G, "cost =", res.best_cost)

###############################################################################
# The continuous relaxation lands between 2 and 3.

res = fb.optimize_G_continuous(8, 120, "mac")
print(f"real-valued optimum G={res.best_G:.3f}, cost={res.best_cost:.1f}")

###############################################################################
# Sweeping M: longer filters favour fewer groups.  ``breakdown`` splits each
# point into inner and outer work, which is what a stacked plot would show.

for entry in fb.sweep(8, [64, 128, 256, 512], "pyramid"):
    print(f"M={entry.M}: best G={entry.discrete.best_G}")
    for G, inner, outer in entry.breakdown():
        print(f"   G={G}: inner={inner} outer={outer}")

###############################################################################
# Actual counts on a concrete bank only charge subsets that are non-empty,
# so they never exceed the expectation.  Monte-Carlo gives the spread.

bank = fb.random_bank(8, 120, seed=50)
plan = fb.plan_grouping(8, 2)
print(fb.actual_cost(fb.partition_grouped(bank, plan), plan, "mac"))
print(fb.monte_carlo_cost(4, 32, 1, "mac", trials=2000, seed=50))

###############################################################################
# Serialising a stage trades operator count for clock rate.  Inner at 2x and
# outer at 4x on the G=2 design:

rep = fb.expected_cost_grouped(8, 120, 2, "mac")
rep = fb.serialized_cost(fb.serialized_cost(rep, 2, "inner"), 4, "outer")
print(f"inner {rep.inner_macs} @{rep.inner_rate}x, outer {rep.outer_macs} @{rep.outer_rate}x")
