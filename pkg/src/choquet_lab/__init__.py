"""Choquet integration over [0,1] with decomposable product-space measures."""

from .intervals import IntervalSet, random_interval_set, uniform_partition
from .measures import (
    Distortion,
    FilteringFamily,
    FuzzyMeasure,
    check_chain_increments,
    check_measure_properties,
    filtering_family,
)
from .choquet import (
    StepFunction,
    check_choquet_properties,
    choquet,
    choquet_restricted,
    comonotone_pair,
    random_step_function,
    riemann_choquet,
    superlevel_set,
)
from .product import (
    ProductSet,
    ProductStepFunction,
    SectionFamily,
    check_price_commutation,
    fubini_check,
    integrate_product,
    integrate_sectional_over,
    product_measure,
    product_set_from_levels,
    range_realize,
)
from .economy import (
    Economy,
    ExhaustedReport,
    ImprovementWitness,
    Preferences,
    budget_check,
    check_condition_c1,
    check_excess_convexity,
    check_walras,
    check_wealth_dominance,
    condition_c2_witness,
    endowment_is_walrasian,
    find_price,
    improvement_from_excess,
    is_feasible,
    is_maximal_in_budget,
    normalize_price,
    sample_excess_points,
    search_improvement,
    sectionalize,
    verify_improvement,
)

__all__ = [
    "IntervalSet",
    "random_interval_set",
    "uniform_partition",
    "Distortion",
    "FuzzyMeasure",
    "FilteringFamily",
    "filtering_family",
    "check_measure_properties",
    "check_chain_increments",
    "StepFunction",
    "choquet",
    "choquet_restricted",
    "riemann_choquet",
    "superlevel_set",
    "check_choquet_properties",
    "comonotone_pair",
    "random_step_function",
    "SectionFamily",
    "ProductSet",
    "ProductStepFunction",
    "product_measure",
    "integrate_product",
    "integrate_sectional_over",
    "fubini_check",
    "check_price_commutation",
    "product_set_from_levels",
    "range_realize",
    "Economy",
    "Preferences",
    "ImprovementWitness",
    "ExhaustedReport",
    "normalize_price",
    "is_feasible",
    "budget_check",
    "is_maximal_in_budget",
    "check_walras",
    "sample_excess_points",
    "find_price",
    "check_wealth_dominance",
    "search_improvement",
    "verify_improvement",
    "improvement_from_excess",
    "sectionalize",
    "check_excess_convexity",
    "endowment_is_walrasian",
    "check_condition_c1",
    "condition_c2_witness",
]

__version__ = "0.1.0"
