"""Overlapping neighborhoods can make the information theory index negative.

Three tracts sit on a line: an all-white tract, an all-black tract and an
all-white tract. With a 1-unit radius each tract's ego-centric
neighborhood includes its neighbors, so every neighborhood is more mixed
than the region. Average local entropy then exceeds regional entropy and
H drops below zero. Divergence stays nonnegative.
"""

import numpy as np

from divindex import UnitTable, equivalence_diagnostics, spatially_weighted_table, uniform_kernel

table = UnitTable(("white", "black"), ("west", "middle", "east"),
                  np.array([[60, 0], [0, 40], [60, 0]]), coords=[(0, 0), (1, 0), (2, 0)])

for radius in (0.0, 1.0, 2.0):
    w = uniform_kernel(table, radius)
    smoothed = spatially_weighted_table(table, w)
    d = equivalence_diagnostics(smoothed)
    print(f"radius {radius}: neighbors {w.neighbors()}")
    print(f"  E={d.overall_entropy:.3f}  mean E_i={d.mean_local_entropy:.3f}  "
          f"H={d.info_theory:.3f}  D={d.divergence:.3f}  H=D/E holds: {d.conditions_hold}")
    if d.note:
        print(f"  {d.note}")

print("\nsingle-group region")
mono = UnitTable(("white", "black"), ("a", "b"), np.array([[50, 0], [80, 0]]))
d = equivalence_diagnostics(mono)
print(f"  D={d.divergence}  H={d.info_theory}  ({d.note})")
