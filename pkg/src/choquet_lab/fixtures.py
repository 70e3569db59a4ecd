"""Reference objects used by the CLI demos and the acceptance suite.

Everything here is built programmatically so the whole suite runs offline.
"""

from __future__ import annotations

import numpy as np

from .choquet import StepFunction
from .economy import Economy, Preferences
from .intervals import IntervalSet
from .measures import Distortion, FuzzyMeasure
from .product import SectionFamily


def square_measure() -> FuzzyMeasure:
    """Distorted Lebesgue with g(s) = s^2 (convex: not subadditive)."""
    return FuzzyMeasure.distorted(Distortion.power(2.0))


def sqrt_measure() -> FuzzyMeasure:
    """Distorted Lebesgue with g(s) = sqrt(s) (concave: submodular)."""
    return FuzzyMeasure.distorted(Distortion.power(0.5))


def linear_profile(ncells: int = 1000) -> StepFunction:
    """f(x) = x sampled at cell midpoints."""
    return StepFunction.from_samples(lambda x: x, ncells)


def square_profile(ncells: int = 1000) -> StepFunction:
    """f(x) = x^2 sampled at cell midpoints."""
    return StepFunction.from_samples(lambda x: x * x, ncells)


def identity_family(K: int = 100) -> SectionFamily:
    return SectionFamily.homothetic(Distortion.identity(), K=K)


def square_family(K: int = 100) -> SectionFamily:
    return SectionFamily.homothetic(Distortion.power(2.0), K=K)


def intro_sectioned_family(K: int = 100) -> SectionFamily:
    """Finite-sections construction: two x-blocks tied to two y-halves."""
    blocks = [IntervalSet([(0.0, 0.5)]), IntervalSet([(0.5, 1.0)])]
    return SectionFamily.from_y_intervals(blocks, [(0.0, 0.5), (0.5, 1.0)], K=K)


def cobb_douglas_economy(K: int = 100):
    """The two-good benchmark: a(y) = (y, 1-y), e = (1,1), Lebesgue sections.

    Returns (economy, equilibrium allocation, equilibrium price): demand at
    p = (1/2, 1/2) is exactly f(y) = (2y, 2(1-y)) and markets clear.
    """
    fam = identity_family(K)
    y = fam.ygrid
    prefs = Preferences("cobb_douglas", 2, exponents=np.column_stack([y, 1.0 - y]))
    eco = Economy(fam, np.ones((K, 2)), prefs)
    allocation = np.column_stack([2.0 * y, 2.0 * (1.0 - y)])
    return eco, allocation, np.array([0.5, 0.5])


def split_dominance_economy(K: int = 100) -> Economy:
    """Coordinate-dominance economy: agents below y = 1/2 track good 1 only,
    the rest track good 2 only; e = (1,1)."""
    fam = identity_family(K)
    jsets = tuple((0,) if yk < 0.5 else (1,) for yk in fam.ygrid)
    prefs = Preferences("coordinate_dominance", 2, jsets=jsets)
    return Economy(fam, np.ones((K, 2)), prefs)


def full_dominance_economy(K: int = 100) -> Economy:
    """Every agent tracks every good; the endowment is Walrasian here."""
    fam = identity_family(K)
    prefs = Preferences("coordinate_dominance", 2, jsets=((0, 1),) * K)
    return Economy(fam, np.ones((K, 2)), prefs)
