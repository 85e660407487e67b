"""Local divergence and local information theory scores in three two-group cities.

Every city has the same question: how does a single tract score as its
white share moves from 0 to 1? Unit divergence is zero only where the
tract matches the city. The unit information theory score is zero at the
city share *and* at its mirror image, and goes negative for tracts more
mixed than the city.
"""

from divindex import sweep_local_indexes

CITIES = {"A (50/50)": (0.5, 0.5), "B (75/25)": (0.75, 0.25), "C (90/10)": (0.9, 0.1)}
MARKS = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)

for name, overall in CITIES.items():
    curve = sweep_local_indexes(overall, steps=101)
    print(f"city {name}")
    print(f"  {'tract p1':>8} {'D_i':>7} {'H_i':>7}")
    for p, d, h in curve.samples:
        if round(p, 2) in MARKS:
            print(f"  {p:>8.2f} {d:>7.3f} {h:>7.3f}")
    lo = curve.info_theory.argmin()
    print(f"  most negative H_i = {curve.info_theory[lo]:.3f} at p1 = {curve.local_p1[lo]:.2f}\n")

# A minority-only tract is three times as divergent in city C as in city A,
# while H_i scores it 1 everywhere.
