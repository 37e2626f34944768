"""
Dataflow graph and pipeline latency
===================================

The two-stage structure as an explicit graph: delay-line taps, subset
accumulators, and a per-filter combine network.
"""
###############################################################################
# Two filters, one group, adder pyramid.

import fbshare as fb

bank = fb.validate_bank([[+1, -1, +1, -1], [+1, +1, -1, -1]])
graph = fb.build_graph(bank, fb.plan_grouping(2, 1), "pyramid")
print(graph.counts())
print(fb.export_graph(graph)[:400])

###############################################################################
# Each pyramid level is one register stage: 16 subsets per group of four
# filters gives 4 cycles, 8 subsets per group of three gives 3.

for K, M in ((8, 120), (6, 60)):
    g = fb.build_graph(fb.random_bank(K, M, seed=50), fb.plan_grouping(K, 2), "pyramid")
    print(K, M, fb.latency_of(g))

###############################################################################
# Walking the graph reproduces the shared evaluation.

big = fb.random_bank(8, 120, seed=50)
plan = fb.plan_grouping(8, 2)
x = fb.random_signal(300, seed=2)
g = fb.build_graph(big, plan, "mac")
print(fb.evaluate_graph(g, x) == fb.shared_evaluate(big, plan, x))
