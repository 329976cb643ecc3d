"""
Sweeping small periodic partitions
==================================

Enumerate every two-part partition with period at most 5, classify each
one against the known sufficient conditions, and look at what the
windows say.
"""

from collections import Counter

from minbasis import classify_partitions, sweep_specs

specs = sweep_specs(2, range(1, 6), range(0, 2))
rows = classify_partitions(specs, 2, 12, a_max=64)
print(len(rows), "partitions")

tally = Counter((r.thmB_prediction, bool(r.removable)) for r in rows)
for (pred, removable), n in sorted(tally.items()):
    print(f"{pred:12s} removable={removable!s:5s} {n}")

print("anomalies:", [r.key for r in rows if r.anomaly])

# a few partitions where an element drops out
for r in [r for r in rows if r.removable][:5]:
    print(r.key, r.removable[:6])

# three parts, with relabelings collapsed
rows3 = classify_partitions(sweep_specs(3, range(3, 6), [0], quotient_labels=True), 3, 10, a_max=32)
print(len(rows3), "three-part partitions;",
      sum(r.holds_thm1 for r in rows3), "meet the counting condition,",
      sum(bool(r.removable) for r in rows3), "lose an element")
