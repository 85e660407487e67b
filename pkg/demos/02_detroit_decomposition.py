"""Between/within decomposition of metro Detroit segregation.

Uses the bundled *synthetic* tract table (see ``divindex.datasets``). The
divergence decomposition puts most segregation between the city and its
suburbs; the information theory decomposition puts most of it in the
suburbs, because it scores the diverse suburbs as well as the homogeneous
city relative to their own entropy.
"""

from divindex import (
    decompose_divergence,
    decompose_info_theory,
    divergence_overall,
    info_theory_overall,
    mean_local_entropy,
    overall_entropy,
)
from divindex.datasets import load_detroit_synthetic

region = load_detroit_synthetic()
table, districts = region.table, region.hierarchy

print("overall indexes (base 2)")
city = table.subset([d == "detroit" for d in table.district_ids])
for label, t in (("metro", table), ("city", city)):
    print(f"  {label:<6} E={overall_entropy(t):.2f}  mean E_i={mean_local_entropy(t):.2f}  "
          f"H={info_theory_overall(t):.2f}  D={divergence_overall(t):.2f}")

print("\nshares of the total index")
reports = {"D": decompose_divergence(table, districts), "H": decompose_info_theory(table, districts)}
shares = {k: r.shares() for k, r in reports.items()}
print(f"  {'':<18}{'D':>6}{'H':>6}")
print(f"  {'between':<18}{shares['D']['between']:>6.2f}{shares['H']['between']:>6.2f}")
for d in ("detroit", "suburbs"):
    print(f"  {'  ' + d:<18}{shares['D']['districts'][d]['between']:>6.2f}"
          f"{shares['H']['districts'][d]['between']:>6.2f}")
print(f"  {'within':<18}{shares['D']['within']:>6.2f}{shares['H']['within']:>6.2f}")
for d in ("detroit", "suburbs"):
    print(f"  {'  ' + d:<18}{shares['D']['districts'][d]['within']:>6.2f}"
          f"{shares['H']['districts'][d]['within']:>6.2f}")

print("\nraw district scores (before population weighting)")
for c in reports["D"].per_district:
    print(f"  {c.district_id:<8} share={c.population_share:.2f}  D between={c.raw_between:.3f}  "
          f"D within={c.raw_within:.3f}")
for k, r in reports.items():
    print(f"  {k}: additivity residual {r.additivity_residual:.1e}")
