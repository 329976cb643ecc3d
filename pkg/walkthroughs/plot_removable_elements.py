"""
When an element can be dropped
===============================

With two parts, the basis stays minimal unless the part holding 0 has a
pair of consecutive positions and the other part has none. Here we build
such a partition and watch one E_a die out.
"""

from minbasis import PartitionSpec, e_a_window, removability_scan, thmB_predict

# W_1 = {0, 1, 2} and the even numbers from 4, W_2 = the odd numbers from 3
spec = PartitionSpec(2, (1, 1, 1), 2, (2, 1), name="dichotomy-negative")
print(spec.labels(12))
print(thmB_predict(spec))

report = removability_scan(spec, 2, 14, 32)
print(report.verdict, "tail starts at", report.tail_start)
for r in report.results[:8]:
    print(f"a={r.a:3d}  part={r.part}  |E_a|={r.e_a_size:5d}  in tail={r.e_a_in_tail:5d}  {r.verdict}")

# E_2 is tiny: only 3 needs the element 2
print(e_a_window(spec, 2, 2, 14))

# compare with the even/odd split, where no E_a runs out
even_odd = PartitionSpec.periodic(2, (1, 2))
print(thmB_predict(even_odd), removability_scan(even_odd, 2, 14, 32).verdict)
