"""
The even/odd basis of order two
===============================

Split the bit positions into evens and odds, take every integer whose
binary digits all land on one side, and check that sums of two of them
cover everything from 2 on.
"""

import numpy as np

from minbasis import (build_basis_window, coverage_threshold, gaps, h_fold_sumset,
                      nathanson, witness, verify_witness)

spec = nathanson(2)
print(spec.labels(12))   # 1 = even position, 2 = odd position

# elements with binary support inside [0, T]
T = 10
elements, window = build_basis_window(spec, T)
print(len(elements), elements[:12])

# 2A over the whole window
sums = h_fold_sumset(elements, 2, window.N)
print("missing:", gaps(sums, 0, window.N))
print("covered from", coverage_threshold(sums))

# how many ways does each n split as a sum of two elements?
counts = np.zeros(window.N + 1, dtype=int)
arr = np.asarray(elements)
for a in elements:
    b = arr[arr >= a]
    s = a + b
    np.add.at(counts, s[s <= window.N], 1)
print("fewest representations above 1:", counts[2:].min())

# every element a is needed: the witness below is a sum of two elements
# only when a itself is one of them
for a in (1, 2, 5, 10):
    n = witness(spec, a, 8, "THM1")
    rec = verify_witness(spec, a, 2, n, 8)
    print(a, n, rec.verified)
