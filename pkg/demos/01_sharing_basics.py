"""
Sharing taps between two PN filters
===================================

Two +/-1 filters see the same input.  Instead of two independent sums we
split the taps by their sign pattern across both filters, sum each subset
once, and rebuild every output from those few partial sums.
"""
###############################################################################
# A two-filter bank.  Bit 0 of a pattern belongs to the first filter, so
# pattern 1 (``0b01``) collects taps where h1 = +1 and h2 = -1.

import numpy as np

import fbshare as fb

bank = fb.validate_bank([[+1, -1, +1, -1],
                         [+1, +1, -1, -1]])
part = fb.build_partition(bank, [1, 2])
for pattern, taps in part.subsets.items():
    print(f"pattern {pattern:02b}: taps {list(taps)}")

###############################################################################
# Each filter output is a signed sum of the four subset sums.  The sign of
# a subset for filter j is just bit j-1 of its pattern.

for j in (1, 2):
    signs = {p: fb.sign_of(j, p) for p in part.subsets}
    print(f"y{j} signs:", signs)

###############################################################################
# Both routes give identical integers.

x = np.array([1, 2, 3, 4])
plan = fb.plan_grouping(bank.K, 1)
print(fb.direct_convolve(bank, x).outputs)
print(fb.shared_evaluate(bank, plan, x).outputs)

###############################################################################
# The streaming evaluator produces the same numbers one sample at a time.

state = fb.EvaluatorState(bank, plan)
print([state.step(v) for v in x])

###############################################################################
# A larger random bank, split into two groups of four filters.

big = fb.random_bank(8, 120, seed=50)
plan = fb.plan_grouping(8, 2)
x = fb.random_signal(480, seed=50)
report = fb.compare_outputs(fb.direct_convolve(big, x), fb.shared_evaluate(big, plan, x))
print(report)
