"""Diversity, segregation and inequality indexes for grouped population data.

The Divergence Index (population-weighted relative entropy of local
compositions against the regional composition) sits alongside entropy, the
Information Theory Index, the Dissimilarity Index and the Theil index, with
additive between/within decompositions and spatially weighted variants.
"""

from .analysis import (
    CorrelationReport,
    EquivalenceDiagnostics,
    SweepCurve,
    correlate_regions,
    equivalence_diagnostics,
    sweep_local_indexes,
)
from .decomp import (
    DecompositionReport,
    DistrictComponent,
    between_district_scores,
    decompose_divergence,
    decompose_entropy_supergroups,
    decompose_info_theory,
)
from .errors import *  # noqa: F401,F403
from .indexes import (
    IndexValue,
    LocalIndexVector,
    dissimilarity_local,
    dissimilarity_multigroup,
    dissimilarity_two_group,
    divergence_local,
    divergence_overall,
    entropy,
    info_theory_local,
    info_theory_overall,
    kl_divergence,
    local_entropy,
    mean_local_entropy,
    overall_entropy,
    simpson_interaction,
    theil_income,
)
from .popcore import (
    GroupDistribution,
    GroupSet,
    Hierarchy,
    LogBase,
    UnitRecord,
    UnitTable,
    aggregate_by_district,
    overall_distribution,
    proportions,
    recode_groups,
)
from .spatial import WeightMatrix, spatially_weighted_table, uniform_kernel

__version__ = "0.1.0"
