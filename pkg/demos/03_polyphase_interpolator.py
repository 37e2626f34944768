"""
Polyphase interpolation with shared phases
==========================================

Upsampling by U and filtering is the same as running U short phase
filters at the input rate and interleaving their outputs.  The phases form
a filter bank, so tap sharing applies to them directly.
"""
###############################################################################
# Split a 90-tap prototype into three 30-tap phases.

import numpy as np

import fbshare as fb

h = fb.random_bank(1, 90, seed=50).coefficients[0]
spec = fb.polyphase_decompose(h, 3)
print(spec.phase_lengths, np.array_equal(spec.reconstruct(), h))

###############################################################################
# Shared polyphase output against upsample-then-filter.

x = fb.random_signal(200, seed=1)
plan = fb.plan_grouping(3, 1)
direct = fb.interpolate_direct(h, 3, x).samples
shared = fb.interpolate_shared(spec, plan, x).samples
print(direct[:9])
print(np.array_equal(direct, shared))

###############################################################################
# When U does not divide M, the short phases carry flagged padding that
# never enters a subset or a cost count.

spec4 = fb.polyphase_decompose(h, 4)
print(spec4.phase_lengths)
plan4 = fb.plan_grouping(4, 4)
print(fb.actual_cost(fb.partition_grouped(spec4.subfilters, plan4), plan4).inner_macs)
