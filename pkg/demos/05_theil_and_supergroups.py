"""Two identities behind the Divergence Index.

1. The Theil income inequality index is the relative entropy of income
   shares against population shares.
2. Entropy splits into entropy between supergroups plus share-weighted
   entropy within them.
"""

import numpy as np

from divindex import GroupDistribution, decompose_entropy_supergroups, entropy, kl_divergence, theil_income

incomes = np.array([18_000, 32_000, 55_000, 120_000, 400_000])
households = np.array([40, 30, 20, 8, 2])
income_share = households * incomes / np.dot(households, incomes)
pop_share = households / households.sum()
print(f"Theil index          {theil_income(incomes, households, base='e'):.6f} nats")
print(f"KL(income || people) {kl_divergence(income_share, pop_share, base='e'):.6f} nats")

mix = GroupDistribution((0.55, 0.20, 0.15, 0.10), ("white", "black", "hispanic", "asian"))
rep = decompose_entropy_supergroups(mix, {"white": "white", "black": "nonwhite",
                                          "hispanic": "nonwhite", "asian": "nonwhite"})
print(f"\nentropy of the four-group mix {float(entropy(mix)):.4f} bits")
print(f"  between white/nonwhite      {rep.between:.4f}")
for c in rep.per_district:
    print(f"  within {c.district_id:<10} {c.raw_within:.4f} x share {c.population_share:.2f}")
print(f"  between + within            {rep.between + rep.within_total:.4f}")
